// core/harness.cpp

// Copyright 2026 The tlbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tlb {

namespace {

// Per-trial sub-stream indices. Every random draw in a trial is addressed
// by (master seed, trial index, sub-stream), so results are independent of
// execution order and worker count.
constexpr std::uint64_t kSubTargetLabeled = 0;
constexpr std::uint64_t kSubSourceLabeled = 1;
constexpr std::uint64_t kSubSourceUnlabeled = 2;
constexpr std::uint64_t kSubTargetUnlabeled = 3;
constexpr std::uint64_t kSubRademacher = 4;
constexpr std::uint64_t kSubPerSourceLabeled = 16;
constexpr std::uint64_t kSubPerSourceUnlabeled = 2048;

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

Json rng_echo(std::uint64_t master_seed) {
  Json j;
  j["algorithm"] = rng::kAlgorithmId;
  j["master_seed"] = master_seed;
  return j;
}

struct MultiSourcePrep {
  std::vector<long long> counts;
  std::vector<double> alpha;
  std::vector<double> beta;
};

MultiSourcePrep prep_multi_source(const ExperimentConfig& cfg,
                                  std::size_t k) {
  MultiSourcePrep prep;
  prep.alpha = cfg.alpha_vector(k);
  prep.beta = cfg.beta_vector(k);
  prep.counts = apportion_counts(prep.beta, cfg.m());
  return prep;
}

std::vector<LabeledSample> draw_source_samples(
    const Instance& inst, const std::vector<long long>& counts,
    std::uint64_t trial_seed) {
  std::vector<LabeledSample> out;
  out.reserve(inst.sources.size());
  for (std::size_t j = 0; j < inst.sources.size(); ++j)
    out.push_back(sample_labeled(
        inst.sources[j], static_cast<std::size_t>(counts[j]),
        rng::derive_stream(trial_seed, kSubPerSourceLabeled + j)));
  return out;
}

// One coverage trial for theorems 1, 2, 3 or 7. `fixed` carries the
// sample-independent quantities computed once per run.
struct VerifyFixed {
  double lambda = 0.0;                       // thm1/thm2
  double lambda_alpha = 0.0;                 // thm3
  double lambda_alpha_mu = 0.0;              // thm7
  std::optional<DiscreteDomain> alpha_mixture;  // thm3
  MultiSourcePrep multi;                     // thm3/thm7
  long long m_target = 0, m_source = 0;      // thm2 split
};

BoundReport run_verify_trial(const std::string& theorem, const Instance& inst,
                             const ExperimentConfig& cfg,
                             const VerifyFixed& fixed,
                             std::uint64_t trial_seed) {
  if (theorem == "1") {
    const auto m = static_cast<std::size_t>(cfg.m());
    const auto mp = static_cast<std::size_t>(cfg.m_prime());
    const LabeledSample s = sample_labeled(
        inst.sources[0], m, rng::derive_stream(trial_seed, kSubSourceLabeled));
    const UnlabeledSample us = sample_unlabeled(
        inst.sources[0], mp,
        rng::derive_stream(trial_seed, kSubSourceUnlabeled));
    const UnlabeledSample ut = sample_unlabeled(
        inst.target, mp, rng::derive_stream(trial_seed, kSubTargetUnlabeled));
    WeightedRiskSpec spec;
    spec.terms.push_back({1.0, s});
    const ErmResult h = erm(spec, inst.cls);
    BoundReport report = thm1_rhs(inst.cls, h.hypothesis, s, us, ut,
                                  cfg.delta(), fixed.lambda, &inst.target);
    report.inputs_echo["erm_index"] = h.index;
    return report;
  }
  if (theorem == "2") {
    const auto mp = static_cast<std::size_t>(cfg.m_prime());
    MixedSample mixed{
        sample_labeled(inst.target, static_cast<std::size_t>(fixed.m_target),
                       rng::derive_stream(trial_seed, kSubTargetLabeled)),
        sample_labeled(inst.sources[0],
                       static_cast<std::size_t>(fixed.m_source),
                       rng::derive_stream(trial_seed, kSubSourceLabeled))};
    const UnlabeledSample us = sample_unlabeled(
        inst.sources[0], mp,
        rng::derive_stream(trial_seed, kSubSourceUnlabeled));
    const UnlabeledSample ut = sample_unlabeled(
        inst.target, mp, rng::derive_stream(trial_seed, kSubTargetUnlabeled));
    BoundReport report =
        thm2_rhs(inst.cls, mixed, us, ut, cfg.alpha_scalar(), cfg.delta(),
                 inst.target, fixed.lambda);
    report.inputs_echo["beta_configured"] = cfg.beta_scalar();
    report.inputs_echo["rounding"] = "half_even";
    return report;
  }
  if (theorem == "3") {
    const auto samples = draw_source_samples(inst, fixed.multi.counts,
                                             trial_seed);
    return thm3_rhs(inst.cls, samples, fixed.multi.alpha, cfg.delta(),
                    *fixed.alpha_mixture, inst.target, fixed.lambda_alpha);
  }
  if (theorem == "7") {
    const auto mp = static_cast<std::size_t>(cfg.m_prime());
    const auto labeled = draw_source_samples(inst, fixed.multi.counts,
                                             trial_seed);
    std::vector<SourceBundle> bundles;
    std::vector<Hypothesis> hyps;
    bundles.reserve(labeled.size());
    hyps.reserve(labeled.size());
    for (std::size_t j = 0; j < labeled.size(); ++j) {
      UnlabeledSample uj = sample_unlabeled(
          inst.sources[j], mp,
          rng::derive_stream(trial_seed, kSubPerSourceUnlabeled + j));
      WeightedRiskSpec spec;
      spec.terms.push_back({1.0, labeled[j]});
      hyps.push_back(erm(spec, inst.cls).hypothesis);
      bundles.push_back({labeled[j], std::move(uj)});
    }
    const UnlabeledSample ut = sample_unlabeled(
        inst.target, mp, rng::derive_stream(trial_seed, kSubTargetUnlabeled));
    return thm7_rhs(inst.cls, bundles, ut, fixed.multi.alpha, cfg.mu(),
                    cfg.delta(), hyps, fixed.lambda_alpha_mu, &inst.target);
  }
  throw SchemaError("verify supports theorems 1, 2, 3 and 7 only");
}

VerifyFixed prepare_verify(const std::string& theorem, const Instance& inst,
                           const ExperimentConfig& cfg) {
  VerifyFixed fixed;
  if (theorem == "1") {
    if (cfg.scenario != Scenario::single_source)
      throw SchemaError("theorem 1 verification requires scenario single_source");
    fixed.lambda =
        ideal_risk({{1.0, inst.sources[0]}, {1.0, inst.target}}, inst.cls)
            .value;
    (void)cfg.m_prime();
    return fixed;
  }
  if (theorem == "2") {
    if (cfg.scenario != Scenario::alpha_mixed)
      throw SchemaError("theorem 2 verification requires scenario alpha_mixed");
    fixed.lambda =
        ideal_risk({{1.0, inst.sources[0]}, {1.0, inst.target}}, inst.cls)
            .value;
    const long long m = cfg.m();
    fixed.m_target = round_half_even(cfg.beta_scalar() * static_cast<double>(m));
    fixed.m_source = m - fixed.m_target;
    if (fixed.m_target < 1 || fixed.m_source < 1)
      throw SchemaError("beta*m rounds to an empty target or source part");
    (void)cfg.m_prime();
    (void)cfg.alpha_scalar();
    return fixed;
  }
  if (theorem == "3" || theorem == "7") {
    if (cfg.scenario != Scenario::multi_source)
      throw SchemaError("multi-source verification requires scenario multi_source");
    const std::size_t k = inst.sources.size();
    fixed.multi = prep_multi_source(cfg, k);
    if (theorem == "3") {
      fixed.alpha_mixture =
          mixture_domain(inst.sources, fixed.multi.alpha).domain;
      std::vector<std::pair<double, DiscreteDomain>> terms{{1.0, inst.target}};
      for (std::size_t j = 0; j < k; ++j)
        terms.emplace_back(fixed.multi.alpha[j], inst.sources[j]);
      fixed.lambda_alpha = ideal_risk(terms, inst.cls).value;
    } else {
      const auto weights = alpha_mu_source_weights(fixed.multi.alpha, cfg.mu());
      std::vector<std::pair<double, DiscreteDomain>> terms{{1.0, inst.target}};
      for (std::size_t j = 0; j < k; ++j)
        terms.emplace_back(weights[j], inst.sources[j]);
      fixed.lambda_alpha_mu = ideal_risk(terms, inst.cls).value;
      (void)cfg.m_prime();
    }
    return fixed;
  }
  throw SchemaError("verify supports theorems 1, 2, 3 and 7 only");
}

}  // namespace

Command parse_command(const std::string& name) {
  if (name == "divergence") return Command::divergence;
  if (name == "erm") return Command::erm;
  if (name == "bound") return Command::bound;
  if (name == "verify") return Command::verify;
  if (name == "compare") return Command::compare;
  if (name == "htl") return Command::htl;
  throw SchemaError("unknown command '" + name + "'");
}

Json CoverageReport::to_json() const {
  Json j;
  j["command"] = "verify";
  j["theorem_id"] = theorem_id;
  j["rng"] = rng_echo(master_seed);
  j["config"] = config_echo;
  j["trials"] = trials;
  j["violations"] = violations;
  j["violation_rate"] = violation_rate;
  Json rows = Json::array();
  for (const auto& t : per_trial) {
    Json row;
    row["trial"] = t.index;
    row["seed"] = t.seed;
    Json terms = Json::object();
    for (const auto& [name, value] : t.report.terms) terms[name] = value;
    row["terms"] = std::move(terms);
    row["rhs_total"] = t.report.rhs_total;
    if (t.report.lhs_realized) row["lhs_realized"] = *t.report.lhs_realized;
    if (t.report.holds) row["holds"] = *t.report.holds;
    rows.push_back(std::move(row));
  }
  j["per_trial"] = std::move(rows);
  if (!per_trial.empty()) j["inputs"] = per_trial.front().report.inputs_echo;
  return j;
}

std::string CoverageReport::trials_csv() const {
  if (per_trial.empty()) return "trial,seed,rhs_total,lhs_realized,holds\n";
  std::string out = "trial,seed";
  for (const auto& [name, value] : per_trial.front().report.terms)
    out += "," + name;
  out += ",rhs_total,lhs_realized,holds\n";
  for (const auto& t : per_trial) {
    out += std::to_string(t.index) + "," + std::to_string(t.seed);
    for (const auto& [name, value] : t.report.terms)
      out += "," + fmt_double(value);
    out += "," + fmt_double(t.report.rhs_total);
    out += ",";
    if (t.report.lhs_realized) out += fmt_double(*t.report.lhs_realized);
    out += ",";
    if (t.report.holds) out += *t.report.holds ? "true" : "false";
    out += "\n";
  }
  return out;
}

CoverageReport verify_bound(const ExperimentConfig& cfg,
                            const std::string& theorem) {
  const Instance inst = build_instance(cfg);
  const VerifyFixed fixed = prepare_verify(theorem, inst, cfg);

  CoverageReport report;
  report.trials = cfg.trials;
  report.config_echo = cfg.raw;
  report.master_seed = cfg.seed;
  report.per_trial.resize(cfg.trials);
  parallel_for(cfg.trials, cfg.threads(), [&](std::size_t t) {
    const std::uint64_t trial_seed = rng::derive_stream(cfg.seed, t);
    report.per_trial[t] = CoverageReport::Trial{
        t, trial_seed,
        run_verify_trial(theorem, inst, cfg, fixed, trial_seed)};
  });
  report.theorem_id = report.per_trial.front().report.theorem_id;
  for (const auto& t : report.per_trial) {
    if (t.report.holds && !*t.report.holds) ++report.violations;
  }
  report.violation_rate = static_cast<double>(report.violations) /
                          static_cast<double>(report.trials);
  return report;
}

Json CompareReport::to_json() const {
  Json j;
  j["command"] = "compare";
  j["rng"] = rng_echo(master_seed);
  j["config"] = config_echo;
  j["mu"] = mu;
  j["trials"] = per_trial.size();
  j["thm7_tighter"] = thm7_tighter;
  j["thm7_tighter_fraction"] = thm7_tighter_fraction;
  Json rows = Json::array();
  for (const auto& t : per_trial) {
    Json row;
    row["trial"] = t.index;
    row["seed"] = t.seed;
    row["thm3_rhs"] = t.thm3_rhs;
    row["thm7_rhs"] = t.thm7_rhs;
    row["lhs3"] = t.lhs3;
    row["lhs7"] = t.lhs7;
    row["tighter"] = std::string(1, t.tighter);
    rows.push_back(std::move(row));
  }
  j["per_trial"] = std::move(rows);
  if (!sweep.empty()) {
    Json srows = Json::array();
    for (const auto& s : sweep) {
      Json row;
      row["mu"] = s.mu;
      row["thm7_tighter_fraction"] = s.thm7_tighter_fraction;
      row["mean_thm3_rhs"] = s.mean_thm3_rhs;
      row["mean_thm7_rhs"] = s.mean_thm7_rhs;
      srows.push_back(std::move(row));
    }
    j["mu_sweep"] = std::move(srows);
  }
  return j;
}

std::string CompareReport::trials_csv() const {
  std::string out = "trial,seed,thm3_rhs,thm7_rhs,lhs3,lhs7,tighter\n";
  for (const auto& t : per_trial) {
    out += std::to_string(t.index) + "," + std::to_string(t.seed) + "," +
           fmt_double(t.thm3_rhs) + "," + fmt_double(t.thm7_rhs) + "," +
           fmt_double(t.lhs3) + "," + fmt_double(t.lhs7) + "," + t.tighter +
           "\n";
  }
  return out;
}

CompareReport compare_multisource(const ExperimentConfig& cfg) {
  if (cfg.scenario != Scenario::multi_source)
    throw SchemaError("compare requires scenario multi_source");
  const Instance inst = build_instance(cfg);
  const std::size_t k = inst.sources.size();
  if (k < 2) throw SchemaError("compare requires at least two sources");
  const MultiSourcePrep multi = prep_multi_source(cfg, k);
  const double base_mu = cfg.mu();
  const auto grid_opt = cfg.mu_grid();
  const std::vector<double> grid =
      grid_opt ? *grid_opt : std::vector<double>{};

  const DiscreteDomain alpha_mixture =
      mixture_domain(inst.sources, multi.alpha).domain;
  std::vector<std::pair<double, DiscreteDomain>> lambda_terms{{1.0, inst.target}};
  for (std::size_t j = 0; j < k; ++j)
    lambda_terms.emplace_back(multi.alpha[j], inst.sources[j]);
  const double lambda_alpha = ideal_risk(lambda_terms, inst.cls).value;

  auto lambda_for_mu = [&](double mu) {
    const auto weights = alpha_mu_source_weights(multi.alpha, mu);
    std::vector<std::pair<double, DiscreteDomain>> terms{{1.0, inst.target}};
    for (std::size_t j = 0; j < k; ++j)
      terms.emplace_back(weights[j], inst.sources[j]);
    return ideal_risk(terms, inst.cls).value;
  };
  const double lambda_base_mu = lambda_for_mu(base_mu);
  std::vector<double> lambda_grid;
  lambda_grid.reserve(grid.size());
  for (double mu : grid) lambda_grid.push_back(lambda_for_mu(mu));

  CompareReport report;
  report.mu = base_mu;
  report.config_echo = cfg.raw;
  report.master_seed = cfg.seed;
  report.per_trial.resize(cfg.trials);
  std::vector<std::vector<double>> sweep_rhs7(
      grid.size(), std::vector<double>(cfg.trials, 0.0));

  parallel_for(cfg.trials, cfg.threads(), [&](std::size_t t) {
    const std::uint64_t trial_seed = rng::derive_stream(cfg.seed, t);
    const auto mp = static_cast<std::size_t>(cfg.m_prime());
    const auto labeled = draw_source_samples(inst, multi.counts, trial_seed);
    std::vector<SourceBundle> bundles;
    std::vector<Hypothesis> hyps;
    bundles.reserve(k);
    hyps.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      UnlabeledSample uj = sample_unlabeled(
          inst.sources[j], mp,
          rng::derive_stream(trial_seed, kSubPerSourceUnlabeled + j));
      WeightedRiskSpec spec;
      spec.terms.push_back({1.0, labeled[j]});
      hyps.push_back(erm(spec, inst.cls).hypothesis);
      bundles.push_back({labeled[j], std::move(uj)});
    }
    const UnlabeledSample ut = sample_unlabeled(
        inst.target, mp, rng::derive_stream(trial_seed, kSubTargetUnlabeled));

    const BoundReport b3 =
        thm3_rhs(inst.cls, labeled, multi.alpha, cfg.delta(), alpha_mixture,
                 inst.target, lambda_alpha);
    const BoundReport b7 =
        thm7_rhs(inst.cls, bundles, ut, multi.alpha, base_mu, cfg.delta(),
                 hyps, lambda_base_mu, &inst.target);
    CompareReport::Trial row;
    row.index = t;
    row.seed = trial_seed;
    row.thm3_rhs = b3.rhs_total;
    row.thm7_rhs = b7.rhs_total;
    row.lhs3 = *b3.lhs_realized;
    row.lhs7 = *b7.lhs_realized;
    row.tighter = b7.rhs_total < b3.rhs_total
                      ? '7'
                      : (b3.rhs_total < b7.rhs_total ? '3' : '=');
    report.per_trial[t] = row;

    for (std::size_t g = 0; g < grid.size(); ++g) {
      const BoundReport bg =
          thm7_rhs(inst.cls, bundles, ut, multi.alpha, grid[g], cfg.delta(),
                   hyps, lambda_grid[g], nullptr);
      sweep_rhs7[g][t] = bg.rhs_total;
    }
  });

  for (const auto& t : report.per_trial)
    if (t.tighter == '7') ++report.thm7_tighter;
  report.thm7_tighter_fraction = static_cast<double>(report.thm7_tighter) /
                                 static_cast<double>(cfg.trials);

  for (std::size_t g = 0; g < grid.size(); ++g) {
    CompareReport::SweepRow row;
    row.mu = grid[g];
    double sum3 = 0.0, sum7 = 0.0;
    std::size_t tighter = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      sum3 += report.per_trial[t].thm3_rhs;
      sum7 += sweep_rhs7[g][t];
      if (sweep_rhs7[g][t] < report.per_trial[t].thm3_rhs) ++tighter;
    }
    row.mean_thm3_rhs = sum3 / static_cast<double>(cfg.trials);
    row.mean_thm7_rhs = sum7 / static_cast<double>(cfg.trials);
    row.thm7_tighter_fraction =
        static_cast<double>(tighter) / static_cast<double>(cfg.trials);
    report.sweep.push_back(row);
  }
  return report;
}

namespace {

std::string default_theorem(const ExperimentConfig& cfg) {
  if (cfg.params.contains("theorem"))
    return cfg.params.at("theorem").get<std::string>();
  switch (cfg.scenario) {
    case Scenario::single_source: return "1";
    case Scenario::alpha_mixed: return "2";
    case Scenario::multi_source: return "3";
    case Scenario::discrepancy: return "4";
    case Scenario::htl_stability: break;
  }
  throw SchemaError("this scenario has no default theorem; pass --theorem");
}

RunResult bound_result(const ExperimentConfig& cfg,
                       const std::string& theorem) {
  const Instance inst = build_instance(cfg);
  const std::uint64_t trial_seed = rng::derive_stream(cfg.seed, 0);
  std::optional<BoundReport> bound;
  Json extra = Json::object();

  if (theorem == "lemma1" || theorem == "4") {
    if (inst.sources.size() != 1)
      throw SchemaError("theorem " + theorem + " reports need one source");
    const Hypothesis h =
        ideal_risk({{1.0, inst.sources[0]}}, inst.cls).hypothesis;
    bound = theorem == "lemma1"
                ? lemma1_rhs(inst.cls, h, inst.sources[0], inst.target)
                : thm4_rhs(inst.cls, LossSpec::zero_one(), h, inst.sources[0],
                           inst.target);
    bound->inputs_echo["h_choice"] = "expected_source_risk_minimizer";
  } else if (theorem == "5") {
    if (inst.sources.size() != 1)
      throw SchemaError("theorem 5 reports need one source");
    const auto m = static_cast<std::size_t>(cfg.m());
    const auto n = static_cast<std::size_t>(cfg.n());
    const LabeledSample s = sample_labeled(
        inst.sources[0], m, rng::derive_stream(trial_seed, kSubSourceLabeled));
    const UnlabeledSample s_marginal(
        s.ground(), [&s] {
          std::vector<std::uint32_t> idx;
          idx.reserve(s.size());
          for (const auto& e : s.entries()) idx.push_back(e.index);
          return idx;
        }());
    const UnlabeledSample t_sample = sample_unlabeled(
        inst.target, n, rng::derive_stream(trial_seed, kSubTargetUnlabeled));
    WeightedRiskSpec spec;
    spec.terms.push_back({1.0, s});
    const ErmResult h = erm(spec, inst.cls);
    RademacherMode mode;
    mode.exact = m <= kRademacherExactCutoff && n <= kRademacherExactCutoff;
    mode.draws = cfg.rademacher_draws();
    mode.seed = rng::derive_stream(trial_seed, kSubRademacher);
    bound = thm5_rhs(inst.cls, h.hypothesis, inst.sources[0], inst.target,
                     s_marginal, t_sample, cfg.delta(), mode);
    bound->inputs_echo["h_choice"] = "empirical_source_risk_minimizer";
  } else {
    const VerifyFixed fixed = prepare_verify(theorem, inst, cfg);
    bound = run_verify_trial(theorem, inst, cfg, fixed, trial_seed);
    if (theorem == "2") {
      // Trade-off sweep over the mixing weight with this trial's samples.
      std::vector<double> alphas;
      for (int i = 0; i <= 100; ++i) alphas.push_back(i / 100.0);
      MixedSample mixed{
          sample_labeled(inst.target, static_cast<std::size_t>(fixed.m_target),
                         rng::derive_stream(trial_seed, kSubTargetLabeled)),
          sample_labeled(inst.sources[0],
                         static_cast<std::size_t>(fixed.m_source),
                         rng::derive_stream(trial_seed, kSubSourceLabeled))};
      const auto mp = static_cast<std::size_t>(cfg.m_prime());
      const UnlabeledSample us = sample_unlabeled(
          inst.sources[0], mp,
          rng::derive_stream(trial_seed, kSubSourceUnlabeled));
      const UnlabeledSample ut = sample_unlabeled(
          inst.target, mp,
          rng::derive_stream(trial_seed, kSubTargetUnlabeled));
      const auto sweep =
          thm2_alpha_sweep(inst.cls, mixed, us, ut, alphas, cfg.delta(),
                           inst.target, fixed.lambda);
      double best_alpha = 0.0, best_rhs = sweep.front().second;
      Json rows = Json::array();
      for (const auto& [a, rhs] : sweep) {
        Json row;
        row["alpha"] = a;
        row["rhs"] = rhs;
        rows.push_back(std::move(row));
        if (rhs < best_rhs) {
          best_rhs = rhs;
          best_alpha = a;
        }
      }
      extra["alpha_sweep"] = std::move(rows);
      extra["optimal_alpha"] = best_alpha;
      extra["optimal_rhs"] = best_rhs;
    }
  }

  RunResult result;
  result.report["command"] = "bound";
  result.report["theorem_id"] = bound->theorem_id;
  result.report["rng"] = rng_echo(cfg.seed);
  result.report["config"] = cfg.raw;
  result.report["bound"] = bound->to_json();
  for (auto& [key, value] : extra.items()) result.report[key] = value;
  result.trials_csv = bound->csv_header() + "\n" + bound->csv_row() + "\n";
  result.summary = "bound theorem=" + bound->theorem_id +
                   " rhs=" + fmt_double(bound->rhs_total);
  if (bound->lhs_realized)
    result.summary += " lhs=" + fmt_double(*bound->lhs_realized) +
                      " holds=" + (*bound->holds ? "true" : "false");
  return result;
}

RunResult divergence_result(const ExperimentConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const std::uint64_t trial_seed = rng::derive_stream(cfg.seed, 0);
  const Measure target_exact = Measure::exact(inst.target);
  const bool with_empirical = cfg.params.contains("m_prime");
  const LossSpec loss01 = LossSpec::zero_one();

  Json rows = Json::array();
  std::string csv =
      "pair,hdh_exact,discrepancy_01,key_violation,hdh_empirical\n";
  for (std::size_t j = 0; j < inst.sources.size(); ++j) {
    const Measure src = Measure::exact(inst.sources[j]);
    Json row;
    const std::string pair = "source" + std::to_string(j) + "_vs_target";
    row["pair"] = pair;
    const double exact = hdh_divergence(inst.cls, src, target_exact);
    const double disc = discrepancy(inst.cls, loss01, src, target_exact);
    const double key =
        key_inequality_violation(inst.cls, inst.sources[j], inst.target);
    row["hdh_exact"] = exact;
    row["discrepancy_01"] = disc;
    row["key_violation"] = key;
    std::string emp_cell;
    if (with_empirical) {
      const auto mp = static_cast<std::size_t>(cfg.m_prime());
      const UnlabeledSample us = sample_unlabeled(
          inst.sources[j], mp,
          rng::derive_stream(trial_seed, kSubPerSourceUnlabeled + j));
      const UnlabeledSample ut = sample_unlabeled(
          inst.target, mp,
          rng::derive_stream(trial_seed, kSubTargetUnlabeled));
      const double emp = hdh_divergence(inst.cls, Measure::empirical(us),
                                        Measure::empirical(ut));
      row["hdh_empirical"] = emp;
      emp_cell = fmt_double(emp);
    }
    rows.push_back(row);
    csv += pair + "," + fmt_double(exact) + "," + fmt_double(disc) + "," +
           fmt_double(key) + "," + emp_cell + "\n";
  }
  if (cfg.scenario == Scenario::multi_source && inst.sources.size() > 1) {
    const auto alpha = cfg.alpha_vector(inst.sources.size());
    const Mixture mix = mixture_domain(inst.sources, alpha);
    Json row;
    row["pair"] = "alpha_mixture_vs_target";
    const double exact =
        hdh_divergence(inst.cls, Measure::exact(mix.domain), target_exact);
    row["hdh_exact"] = exact;
    row["marginal_only"] = mix.marginal_only;
    rows.push_back(row);
    csv += "alpha_mixture_vs_target," + fmt_double(exact) + ",,,\n";
  }

  RunResult result;
  result.report["command"] = "divergence";
  result.report["rng"] = rng_echo(cfg.seed);
  result.report["config"] = cfg.raw;
  result.report["pairs"] = std::move(rows);
  result.trials_csv = std::move(csv);
  result.summary =
      "divergence pairs=" + std::to_string(result.report["pairs"].size());
  return result;
}

RunResult erm_result(const ExperimentConfig& cfg) {
  const Instance inst = build_instance(cfg);
  const std::uint64_t trial_seed = rng::derive_stream(cfg.seed, 0);
  Json learners = Json::array();
  std::string csv =
      "learner,argmin_index,objective,tie_count,expected_target_risk\n";

  auto add = [&](const std::string& name, const ErmResult& r) {
    Json row;
    row["learner"] = name;
    row["argmin_index"] = r.index;
    row["objective"] = r.objective;
    row["tie_count"] = r.tie_count;
    const double target_risk = expected_risk(inst.target, r.hypothesis);
    row["expected_target_risk"] = target_risk;
    learners.push_back(std::move(row));
    csv += name + "," + std::to_string(r.index) + "," +
           fmt_double(r.objective) + "," + std::to_string(r.tie_count) + "," +
           fmt_double(target_risk) + "\n";
  };

  switch (cfg.scenario) {
    case Scenario::single_source:
    case Scenario::discrepancy: {
      const LabeledSample s =
          sample_labeled(inst.sources[0], static_cast<std::size_t>(cfg.m()),
                         rng::derive_stream(trial_seed, kSubSourceLabeled));
      WeightedRiskSpec spec;
      spec.terms.push_back({1.0, s});
      add("source_erm", erm(spec, inst.cls));
      break;
    }
    case Scenario::alpha_mixed: {
      const long long m = cfg.m();
      const long long mt =
          round_half_even(cfg.beta_scalar() * static_cast<double>(m));
      if (mt < 1 || m - mt < 1)
        throw SchemaError("beta*m rounds to an empty target or source part");
      const LabeledSample target_part =
          sample_labeled(inst.target, static_cast<std::size_t>(mt),
                         rng::derive_stream(trial_seed, kSubTargetLabeled));
      const LabeledSample source_part =
          sample_labeled(inst.sources[0], static_cast<std::size_t>(m - mt),
                         rng::derive_stream(trial_seed, kSubSourceLabeled));
      const double alpha = cfg.alpha_scalar();
      WeightedRiskSpec spec;
      spec.terms.push_back({alpha, target_part});
      spec.terms.push_back({1.0 - alpha, source_part});
      add("alpha_weighted_erm", erm(spec, inst.cls));
      break;
    }
    case Scenario::multi_source: {
      const MultiSourcePrep multi = prep_multi_source(cfg, inst.sources.size());
      const auto labeled = draw_source_samples(inst, multi.counts, trial_seed);
      WeightedRiskSpec pooled;
      std::vector<ErmResult> per_source;
      for (std::size_t j = 0; j < labeled.size(); ++j) {
        pooled.terms.push_back({multi.alpha[j], labeled[j]});
        WeightedRiskSpec single;
        single.terms.push_back({1.0, labeled[j]});
        per_source.push_back(erm(single, inst.cls));
        add("source" + std::to_string(j) + "_erm", per_source.back());
      }
      add("alpha_weighted_erm", erm(pooled, inst.cls));
      const Hypothesis ensemble =
          multisource_ensemble(per_source, multi.alpha);
      Json row;
      row["learner"] = "alpha_ensemble";
      const double target_risk = expected_risk(inst.target, ensemble);
      row["expected_target_risk"] = target_risk;
      learners.push_back(std::move(row));
      csv += "alpha_ensemble,,,," + fmt_double(target_risk) + "\n";
      break;
    }
    case Scenario::htl_stability:
      throw SchemaError("erm is undefined for htl_stability configs");
  }

  RunResult result;
  result.report["command"] = "erm";
  result.report["rng"] = rng_echo(cfg.seed);
  result.report["config"] = cfg.raw;
  result.report["learners"] = std::move(learners);
  result.trials_csv = std::move(csv);
  result.summary =
      "erm learners=" + std::to_string(result.report["learners"].size());
  return result;
}

RunResult htl_result(const ExperimentConfig& cfg) {
  const HtlInstance inst = build_htl_instance(cfg);
  Json cells = Json::array();
  std::string csv = "m,lambda_reg,C,trials,mean_sq_gap,stderr,seed\n";
  for (std::size_t i = 0; i < inst.grid.size(); ++i) {
    const auto& cell = inst.grid[i];
    const std::uint64_t cell_seed = rng::derive_stream(cfg.seed, i);
    htl::StabilityConfig sc{inst.target, inst.source, cell.m, cell.lambda_reg,
                            inst.truncation_c};
    const htl::StabilityEstimate est =
        htl::estimate_stability_gap(sc, cfg.trials, cell_seed);
    Json row;
    row["m"] = cell.m;
    row["lambda_reg"] = cell.lambda_reg;
    row["truncation_c"] = std::isfinite(inst.truncation_c)
                              ? Json(inst.truncation_c)
                              : Json("inf");
    row["trials"] = est.trials;
    row["mean_sq_gap"] = est.mean_sq_gap;
    row["stderr"] = est.std_error;
    row["seed"] = cell_seed;
    if (!est.warnings.empty()) row["warnings"] = est.warnings;
    cells.push_back(std::move(row));
    csv += std::to_string(cell.m) + "," + fmt_double(cell.lambda_reg) + "," +
           (std::isfinite(inst.truncation_c) ? fmt_double(inst.truncation_c)
                                             : "inf") +
           "," + std::to_string(est.trials) + "," +
           fmt_double(est.mean_sq_gap) + "," + fmt_double(est.std_error) +
           "," + std::to_string(cell_seed) + "\n";
  }

  RunResult result;
  result.report["command"] = "htl";
  result.report["rng"] = rng_echo(cfg.seed);
  result.report["config"] = cfg.raw;
  result.report["cells"] = std::move(cells);
  result.trials_csv = std::move(csv);
  result.summary = "htl cells=" + std::to_string(inst.grid.size()) +
                   " trials_per_cell=" + std::to_string(cfg.trials);
  return result;
}

}  // namespace

RunResult run_command(ExperimentConfig cfg, Command command,
                      const RunOverrides& overrides) {
  if (overrides.seed) cfg.override_seed(*overrides.seed);
  if (overrides.trials) cfg.override_trials(*overrides.trials);
  if (overrides.delta) cfg.override_delta(*overrides.delta);

  switch (command) {
    case Command::divergence:
      return divergence_result(cfg);
    case Command::erm:
      return erm_result(cfg);
    case Command::bound: {
      const std::string theorem =
          overrides.theorem ? *overrides.theorem : default_theorem(cfg);
      return bound_result(cfg, theorem);
    }
    case Command::verify: {
      const std::string theorem =
          overrides.theorem ? *overrides.theorem : default_theorem(cfg);
      const CoverageReport coverage = verify_bound(cfg, theorem);
      RunResult result;
      result.report = coverage.to_json();
      result.trials_csv = coverage.trials_csv();
      result.summary = "verify theorem=" + coverage.theorem_id + " trials=" +
                       std::to_string(coverage.trials) + " violations=" +
                       std::to_string(coverage.violations) + " rate=" +
                       fmt_double(coverage.violation_rate);
      return result;
    }
    case Command::compare: {
      const CompareReport cmp = compare_multisource(cfg);
      RunResult result;
      result.report = cmp.to_json();
      result.trials_csv = cmp.trials_csv();
      result.summary =
          "compare trials=" + std::to_string(cmp.per_trial.size()) +
          " thm7_tighter_fraction=" + fmt_double(cmp.thm7_tighter_fraction);
      return result;
    }
    case Command::htl:
      return htl_result(cfg);
  }
  throw SchemaError("unknown command");
}

std::vector<std::string> write_outputs(const RunResult& result,
                                       const std::string& dir,
                                       const std::string& format) {
  if (format != "all" && format != "json" && format != "csv")
    throw SchemaError("format must be 'json', 'csv' or 'all'");
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);

  std::vector<std::string> written;
  auto write_file = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
    written.push_back(path);
  };

  if (format == "all" || format == "json")
    write_file("report.json", result.report.dump(2) + "\n");
  if ((format == "all" || format == "csv") && result.trials_csv)
    write_file("trials.csv", *result.trials_csv);
  return written;
}

RunResult run_config_file(const std::string& path, const std::string& command,
                          const RunOverrides& overrides,
                          const std::string& output_dir,
                          const std::string& format) {
  const ExperimentConfig cfg = parse_config_file(path);
  RunResult result = run_command(cfg, parse_command(command), overrides);
  write_outputs(result, output_dir, format);
  return result;
}

}  // namespace tlb
