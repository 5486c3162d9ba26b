// core/bounds.cpp

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

#include "core/bounds.hpp"

#include <cmath>
#include <numbers>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tlb {

double BoundReport::recomposed() const {
  double total = 0.0;
  for (const auto& [name, value] : terms) total += value;
  return total;
}

void BoundReport::set_lhs(double lhs) {
  lhs_realized = lhs;
  holds = lhs <= rhs_total + kHoldsTolerance;
}

Json BoundReport::to_json() const {
  Json j;
  j["theorem_id"] = theorem_id;
  Json t = Json::object();
  for (const auto& [name, value] : terms) t[name] = value;
  j["terms"] = std::move(t);
  j["rhs_total"] = rhs_total;
  if (lhs_realized) j["lhs_realized"] = *lhs_realized;
  if (holds) j["holds"] = *holds;
  j["inputs"] = inputs_echo;
  return j;
}

std::string BoundReport::csv_header() const {
  std::string out = "theorem_id";
  for (const auto& [name, value] : terms) out += "," + name;
  out += ",rhs_total,lhs_realized,holds,inputs";
  return out;
}

std::string BoundReport::csv_row() const {
  std::string out = theorem_id;
  for (const auto& [name, value] : terms) out += "," + fmt_double(value);
  out += "," + fmt_double(rhs_total);
  out += ",";
  if (lhs_realized) out += fmt_double(*lhs_realized);
  out += ",";
  if (holds) out += *holds ? "true" : "false";
  out += "," + csv_cell(inputs_echo.dump());
  return out;
}

BoundReport make_report(std::string theorem_id,
                        std::vector<std::pair<std::string, double>> terms,
                        Json inputs_echo) {
  BoundReport report;
  report.theorem_id = std::move(theorem_id);
  report.terms = std::move(terms);
  report.inputs_echo = std::move(inputs_echo);
  report.rhs_total = report.recomposed();
  if (!std::isfinite(report.rhs_total))
    throw PreconditionError("bound right-hand side is not finite");
  return report;
}

double complexity_term(ComplexityKind kind, long long m, int d, double delta) {
  if (m < 1) throw PreconditionError("sample size must be >= 1");
  if (d < 1) throw PreconditionError("VC dimension must be >= 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw PreconditionError("delta must lie in (0, 1)");
  const double md = static_cast<double>(m);
  switch (kind) {
    case ComplexityKind::A: {
      const double ratio = 2.0 * std::numbers::e * md / d;
      if (ratio < 1.0)
        throw PreconditionError("complexity term A requires 2em >= d");
      return std::sqrt(4.0 * (d * std::log(ratio) + std::log(4.0 / delta)) /
                       md);
    }
    case ComplexityKind::B:
      return std::sqrt((d * std::log(2.0 * md) - std::log(delta)) /
                       (2.0 * md));
    case ComplexityKind::C:
      return 4.0 * std::sqrt(
                       (2.0 * d * std::log(2.0 * md) + std::log(4.0 / delta)) /
                       md);
  }
  throw PreconditionError("unknown complexity term kind");
}

namespace {

void require_member(const HypothesisClass& cls, const Hypothesis& h,
                    const char* theorem) {
  if (cls.find(h) == HypothesisClass::npos)
    throw PreconditionError(std::string(theorem) +
                            " quantifies over class members only");
}

void validate_alpha(const std::vector<double>& alpha, std::size_t k) {
  if (alpha.size() != k)
    throw StructuralError("one alpha weight per source required");
  double sum = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw PreconditionError("alpha weights must be finite, nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    throw PreconditionError("alpha weights must sum to 1 within 1e-12");
}

}  // namespace

BoundReport lemma1_rhs(const HypothesisClass& cls, const Hypothesis& h,
                       const DiscreteDomain& source,
                       const DiscreteDomain& target) {
  require_member(cls, h, "lemma 1");
  const double half_div =
      0.5 * hdh_divergence(cls, Measure::exact(source), Measure::exact(target));
  const double lambda =
      ideal_risk({{1.0, source}, {1.0, target}}, cls).value;
  Json echo;
  echo["d"] = cls.vc_dim();
  echo["h_index"] = cls.find(h);
  BoundReport report = make_report("lemma1",
                                   {{"source_risk", expected_risk(source, h)},
                                    {"half_divergence", half_div},
                                    {"lambda", lambda}},
                                   std::move(echo));
  report.set_lhs(expected_risk(target, h));
  return report;
}

BoundReport thm1_rhs(const HypothesisClass& cls, const Hypothesis& h,
                     const LabeledSample& source_labeled,
                     const UnlabeledSample& unlabeled_source,
                     const UnlabeledSample& unlabeled_target, double delta,
                     double lambda_value,
                     const DiscreteDomain* target_for_lhs) {
  if (unlabeled_source.size() != unlabeled_target.size())
    throw StructuralError("theorem 1 requires unlabeled samples of equal size");
  const long long m = static_cast<long long>(source_labeled.size());
  const long long m_prime = static_cast<long long>(unlabeled_source.size());
  const double half_emp_div =
      0.5 * hdh_divergence(cls, Measure::empirical(unlabeled_source),
                           Measure::empirical(unlabeled_target));
  Json echo;
  echo["m"] = m;
  echo["m_prime"] = m_prime;
  echo["d"] = cls.vc_dim();
  echo["delta"] = delta;
  // The theorem's closing line attributes the labeled sample to the target
  // distribution; the bound's empirical risk is the source one, so the
  // sample is drawn from the source. Recorded here for auditability.
  echo["labeled_sample_origin"] = "source";
  BoundReport report = make_report(
      "thm1",
      {{"emp_source_risk", empirical_risk(source_labeled, h)},
       {"vc_term_A", complexity_term(ComplexityKind::A, m, cls.vc_dim(), delta)},
       {"half_emp_divergence", half_emp_div},
       {"unlabeled_term_C",
        complexity_term(ComplexityKind::C, m_prime, cls.vc_dim(), delta)},
       {"lambda", lambda_value}},
      std::move(echo));
  if (target_for_lhs) report.set_lhs(expected_risk(*target_for_lhs, h));
  return report;
}

namespace {

struct Thm2Fixed {
  long long m;
  long long m_target;
  long long m_source;
  double beta;
  long long m_prime;
  double half_emp_div;
  double kind_b;
  double kind_c;
  double target_opt;
};

Thm2Fixed thm2_fixed_parts(const HypothesisClass& cls,
                           const MixedSample& sample,
                           const UnlabeledSample& unlabeled_source,
                           const UnlabeledSample& unlabeled_target,
                           double delta, const DiscreteDomain& target) {
  if (unlabeled_source.size() != unlabeled_target.size())
    throw StructuralError("theorem 2 requires unlabeled samples of equal size");
  const long long m_target = static_cast<long long>(sample.target_part.size());
  const long long m_source = static_cast<long long>(sample.source_part.size());
  if (m_target == 0 || m_source == 0)
    throw PreconditionError("theorem 2 requires beta strictly inside (0, 1)");
  const long long m = m_target + m_source;
  Thm2Fixed f;
  f.m = m;
  f.m_target = m_target;
  f.m_source = m_source;
  f.beta = static_cast<double>(m_target) / static_cast<double>(m);
  f.m_prime = static_cast<long long>(unlabeled_source.size());
  f.half_emp_div =
      0.5 * hdh_divergence(cls, Measure::empirical(unlabeled_source),
                           Measure::empirical(unlabeled_target));
  f.kind_b = complexity_term(ComplexityKind::B, m, cls.vc_dim(), delta);
  f.kind_c =
      complexity_term(ComplexityKind::C, f.m_prime, cls.vc_dim(), delta);
  f.target_opt = ideal_risk({{1.0, target}}, cls).value;
  return f;
}

double thm2_alpha_beta_term(double alpha, double beta, double kind_b) {
  return 2.0 *
         std::sqrt(alpha * alpha / beta +
                   (1.0 - alpha) * (1.0 - alpha) / (1.0 - beta)) *
         kind_b;
}

}  // namespace

BoundReport thm2_rhs(const HypothesisClass& cls, const MixedSample& sample,
                     const UnlabeledSample& unlabeled_source,
                     const UnlabeledSample& unlabeled_target, double alpha,
                     double delta, const DiscreteDomain& target,
                     double lambda_value) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw PreconditionError("alpha must lie in [0, 1]");
  const Thm2Fixed f = thm2_fixed_parts(cls, sample, unlabeled_source,
                                       unlabeled_target, delta, target);
  const double adaptation =
      2.0 * (1.0 - alpha) * (f.half_emp_div + f.kind_c + lambda_value);
  Json echo;
  echo["m"] = f.m;
  echo["m_target"] = f.m_target;
  echo["m_source"] = f.m_source;
  echo["beta"] = f.beta;
  echo["m_prime"] = f.m_prime;
  echo["alpha"] = alpha;
  echo["d"] = cls.vc_dim();
  echo["delta"] = delta;
  BoundReport report = make_report(
      "thm2",
      {{"target_opt_risk", f.target_opt},
       {"alpha_beta_term", thm2_alpha_beta_term(alpha, f.beta, f.kind_b)},
       {"adaptation_term", adaptation}},
      std::move(echo));

  WeightedRiskSpec spec;
  spec.terms.push_back({alpha, sample.target_part});
  spec.terms.push_back({1.0 - alpha, sample.source_part});
  const ErmResult h_hat = erm(spec, cls);
  report.inputs_echo["erm_index"] = h_hat.index;
  report.set_lhs(expected_risk(target, h_hat.hypothesis));
  return report;
}

std::vector<std::pair<double, double>> thm2_alpha_sweep(
    const HypothesisClass& cls, const MixedSample& sample,
    const UnlabeledSample& unlabeled_source,
    const UnlabeledSample& unlabeled_target, const std::vector<double>& alphas,
    double delta, const DiscreteDomain& target, double lambda_value) {
  const Thm2Fixed f = thm2_fixed_parts(cls, sample, unlabeled_source,
                                       unlabeled_target, delta, target);
  std::vector<std::pair<double, double>> out;
  out.reserve(alphas.size());
  for (double alpha : alphas) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
      throw PreconditionError("alpha must lie in [0, 1]");
    const double rhs =
        f.target_opt + thm2_alpha_beta_term(alpha, f.beta, f.kind_b) +
        2.0 * (1.0 - alpha) * (f.half_emp_div + f.kind_c + lambda_value);
    out.emplace_back(alpha, rhs);
  }
  return out;
}

BoundReport thm3_rhs(const HypothesisClass& cls,
                     const std::vector<LabeledSample>& sources,
                     const std::vector<double>& alpha, double delta,
                     const DiscreteDomain& alpha_mixture,
                     const DiscreteDomain& target, double lambda_alpha) {
  if (sources.empty())
    throw StructuralError("theorem 3 requires at least one source");
  validate_alpha(alpha, sources.size());
  long long m = 0;
  for (const auto& s : sources) {
    if (s.size() == 0)
      throw PreconditionError("every source sample must be non-empty");
    m += static_cast<long long>(s.size());
  }
  double alpha_sq_over_beta = 0.0;
  Json m_list = Json::array();
  Json beta_list = Json::array();
  for (std::size_t j = 0; j < sources.size(); ++j) {
    const double beta_j =
        static_cast<double>(sources[j].size()) / static_cast<double>(m);
    alpha_sq_over_beta += alpha[j] * alpha[j] / beta_j;
    m_list.push_back(sources[j].size());
    beta_list.push_back(beta_j);
  }
  const double kind_b =
      complexity_term(ComplexityKind::B, m, cls.vc_dim(), delta);
  const double half_div =
      0.5 * hdh_divergence(cls, Measure::exact(alpha_mixture),
                           Measure::exact(target));
  Json echo;
  echo["K"] = sources.size();
  echo["m"] = m;
  echo["m_j"] = std::move(m_list);
  echo["beta_j"] = std::move(beta_list);
  echo["alpha"] = alpha;
  echo["d"] = cls.vc_dim();
  echo["delta"] = delta;
  BoundReport report = make_report(
      "thm3",
      {{"target_opt_risk", ideal_risk({{1.0, target}}, cls).value},
       {"concentration", 2.0 * std::sqrt(alpha_sq_over_beta) * kind_b},
       {"divergence_plus_lambda", 2.0 * (half_div + lambda_alpha)}},
      std::move(echo));

  WeightedRiskSpec spec;
  for (std::size_t j = 0; j < sources.size(); ++j)
    spec.terms.push_back({alpha[j], sources[j]});
  const ErmResult h_hat = erm(spec, cls);
  report.inputs_echo["erm_index"] = h_hat.index;
  report.set_lhs(expected_risk(target, h_hat.hypothesis));
  return report;
}

BoundReport thm4_rhs(const HypothesisClass& cls, const LossSpec& loss,
                     const Hypothesis& h, const DiscreteDomain& source,
                     const DiscreteDomain& target) {
  if (!loss.is_metric())
    throw PreconditionError(
        "theorem 4 requires a symmetric loss obeying the triangle inequality; "
        "the squared loss does not qualify");
  require_member(cls, h, "theorem 4");
  const Measure ps = Measure::exact(source);
  const Measure pt = Measure::exact(target);

  // True minimizers against each domain's labeling function.
  std::size_t s_best = 0, t_best = 0;
  double s_val = pairwise_loss(loss, ps, cls.member(0), source.label_fn());
  double t_val = pairwise_loss(loss, pt, cls.member(0), target.label_fn());
  for (std::size_t i = 1; i < cls.size(); ++i) {
    const double sv = pairwise_loss(loss, ps, cls.member(i), source.label_fn());
    const double tv = pairwise_loss(loss, pt, cls.member(i), target.label_fn());
    if (sv < s_val) {
      s_val = sv;
      s_best = i;
    }
    if (tv < t_val) {
      t_val = tv;
      t_best = i;
    }
  }
  const Hypothesis& h_s = cls.member(s_best);
  const Hypothesis& h_t = cls.member(t_best);

  Json echo;
  echo["d"] = cls.vc_dim();
  echo["loss"] = loss.name();
  echo["h_index"] = cls.find(h);
  echo["source_opt_index"] = s_best;
  echo["target_opt_index"] = t_best;
  BoundReport report = make_report(
      "thm4",
      {{"target_opt", t_val},
       {"source_dist_to_sopt", pairwise_loss(loss, ps, h, h_s)},
       {"discrepancy", discrepancy(cls, loss, ps, pt)},
       {"opt_gap", pairwise_loss(loss, ps, h_s, h_t)}},
      std::move(echo));
  report.set_lhs(pairwise_loss(loss, pt, h, target.label_fn()));
  return report;
}

BoundReport thm5_rhs(const HypothesisClass& cls, const Hypothesis& h,
                     const DiscreteDomain& source, const DiscreteDomain& target,
                     const UnlabeledSample& source_sample,
                     const UnlabeledSample& target_sample, double delta,
                     const RademacherMode& mode) {
  if (!cls.all_binary())
    throw PreconditionError("theorem 5 is stated for {0,1}-valued classes");
  require_member(cls, h, "theorem 5");
  if (!(delta > 0.0 && delta < 1.0))
    throw PreconditionError("delta must lie in (0, 1)");
  const LossSpec loss = LossSpec::zero_one();
  const Measure ps = Measure::exact(source);
  const Measure pt = Measure::exact(target);
  const Measure emp_s = Measure::empirical(source_sample);
  const Measure emp_t = Measure::empirical(target_sample);
  const auto m = static_cast<double>(source_sample.size());
  const auto n = static_cast<double>(target_sample.size());

  std::size_t s_best = 0, t_best = 0;
  double s_val = pairwise_loss(loss, ps, cls.member(0), source.label_fn());
  double t_val = pairwise_loss(loss, pt, cls.member(0), target.label_fn());
  for (std::size_t i = 1; i < cls.size(); ++i) {
    const double sv = pairwise_loss(loss, ps, cls.member(i), source.label_fn());
    const double tv = pairwise_loss(loss, pt, cls.member(i), target.label_fn());
    if (sv < s_val) {
      s_val = sv;
      s_best = i;
    }
    if (tv < t_val) {
      t_val = tv;
      t_best = i;
    }
  }

  const RademacherResult rad_s =
      mode.exact ? rademacher_exact(cls, source_sample)
                 : rademacher_monte_carlo(cls, source_sample, mode.draws,
                                          mode.seed);
  const RademacherResult rad_t =
      mode.exact ? rademacher_exact(cls, target_sample)
                 : rademacher_monte_carlo(cls, target_sample, mode.draws,
                                          rng::derive_stream(mode.seed, 1));

  Json echo;
  echo["m"] = source_sample.size();
  echo["n"] = target_sample.size();
  echo["d"] = cls.vc_dim();
  echo["delta"] = delta;
  echo["rademacher_mode"] = mode.exact ? "exact" : "monte_carlo";
  if (!mode.exact) {
    echo["rademacher_draws"] = mode.draws;
    echo["rademacher_seed"] = mode.seed;
  }
  echo["h_index"] = cls.find(h);
  const double log_term = std::log(8.0 / delta);
  BoundReport report = make_report(
      "thm5",
      {{"target_opt_risk", t_val},
       {"emp_source_dist_to_sopt",
        pairwise_loss(loss, emp_s, h, cls.member(s_best))},
       {"emp_discrepancy", discrepancy(cls, loss, emp_s, emp_t)},
       {"rademacher_source", 4.5 * rad_s.value},
       {"rademacher_target", 4.0 * rad_t.value},
       {"source_conf", 4.0 * std::sqrt(log_term / (2.0 * m))},
       {"target_conf", 3.0 * std::sqrt(log_term / (2.0 * n))},
       {"opt_gap", pairwise_loss(loss, ps, cls.member(s_best),
                                 cls.member(t_best))}},
      std::move(echo));
  report.set_lhs(pairwise_loss(loss, pt, h, target.label_fn()));
  return report;
}

BoundReport thm7_rhs(const HypothesisClass& cls,
                     const std::vector<SourceBundle>& sources,
                     const UnlabeledSample& unlabeled_target,
                     const std::vector<double>& alpha, double mu, double delta,
                     const std::vector<Hypothesis>& per_source_hyps,
                     double lambda_alpha_mu,
                     const DiscreteDomain* target_for_lhs) {
  const std::size_t k = sources.size();
  if (k < 2)
    throw PreconditionError(
        "theorem 7 requires K >= 2 sources (peer weight undefined at K = 1)");
  if (!(mu > 0.0 && mu < 1.0))
    throw PreconditionError("mu must lie in (0, 1)");
  validate_alpha(alpha, k);
  if (per_source_hyps.size() != k)
    throw StructuralError("one hypothesis per source required");
  const std::size_t m_prime = unlabeled_target.size();
  long long m = 0;
  for (const auto& s : sources) {
    if (s.unlabeled.size() != m_prime)
      throw StructuralError("all unlabeled samples must share one size m'");
    if (s.labeled.size() == 0)
      throw PreconditionError("every source sample must be non-empty");
    m += static_cast<long long>(s.labeled.size());
  }

  const Measure emp_target = Measure::empirical(unlabeled_target);
  std::vector<double> half_div(k);
  std::vector<double> emp_risk(k * k);  // [i*k + j] = risk of h_i on source j
  for (std::size_t j = 0; j < k; ++j) {
    half_div[j] = 0.5 * hdh_divergence(
                            cls, Measure::empirical(sources[j].unlabeled),
                            emp_target);
    for (std::size_t i = 0; i < k; ++i)
      emp_risk[i * k + j] =
          empirical_risk(sources[j].labeled, per_source_hyps[i]);
  }

  const double peer_w = (1.0 - mu) / static_cast<double>(k - 1);
  double self_block = 0.0, peer_block = 0.0, concentration = 0.0;
  Json beta_list = Json::array();
  std::vector<double> beta(k);
  for (std::size_t i = 0; i < k; ++i) {
    beta[i] = static_cast<double>(sources[i].labeled.size()) /
              static_cast<double>(m);
    beta_list.push_back(beta[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    self_block += alpha[i] * mu * (emp_risk[i * k + i] + half_div[i]);
    double peer_sum = 0.0, inv_beta_sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      peer_sum += emp_risk[i * k + j] + half_div[j];
      inv_beta_sum += 1.0 / beta[j];
    }
    peer_block += alpha[i] * peer_w * peer_sum;
    concentration += alpha[i] * std::sqrt(mu * mu / beta[i] +
                                          peer_w * peer_w * inv_beta_sum);
  }
  const double kind_b =
      complexity_term(ComplexityKind::B, m, cls.vc_dim(), delta);

  Json echo;
  echo["K"] = k;
  echo["m"] = m;
  echo["beta_i"] = std::move(beta_list);
  echo["m_prime"] = m_prime;
  echo["mu"] = mu;
  echo["alpha"] = alpha;
  echo["d"] = cls.vc_dim();
  echo["delta"] = delta;
  // One target unlabeled sample is shared across the K divergence
  // estimates; each source contributes its own unlabeled sample.
  echo["shared_target_unlabeled"] = true;
  BoundReport report = make_report(
      "thm7",
      {{"self_risk_block", self_block},
       {"peer_risk_block", peer_block},
       {"concentration_block", concentration * kind_b},
       {"unlabeled_term",
        complexity_term(ComplexityKind::C, static_cast<long long>(m_prime),
                        cls.vc_dim(), delta)},
       {"lambda_alpha_mu", lambda_alpha_mu}},
      std::move(echo));
  if (target_for_lhs) {
    const Hypothesis ensemble = multisource_ensemble(per_source_hyps, alpha);
    report.set_lhs(expected_risk(*target_for_lhs, ensemble));
  }
  return report;
}

}  // namespace tlb
