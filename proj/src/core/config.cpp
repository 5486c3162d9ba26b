// core/config.cpp

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

#include "core/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tlb {

namespace {

// Stream index for the domain generator when no explicit generator seed is
// configured; deliberately far above any plausible trial index.
constexpr std::uint64_t kGeneratorStream = (std::uint64_t{1} << 32) + 1;

[[noreturn]] void schema_fail(const std::string& msg) {
  throw SchemaError("config: " + msg);
}

const Json& require_key(const Json& obj, const char* key,
                        const char* context) {
  if (!obj.is_object() || !obj.contains(key))
    schema_fail(std::string(context) + " requires key '" + key + "'");
  return obj.at(key);
}

double as_number(const Json& v, const std::string& what) {
  if (!v.is_number()) schema_fail(what + " must be a number");
  return v.get<double>();
}

long long as_integer(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<long long>(d);
  }
  schema_fail(what + " must be an integer");
}

std::vector<double> as_number_vector(const Json& v, const std::string& what) {
  if (!v.is_array() || v.empty())
    schema_fail(what + " must be a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, what + " entry"));
  return out;
}

std::vector<double> normalized(std::vector<double> w, const std::string& what) {
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v))
      schema_fail(what + " entries must be finite and nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    schema_fail(what + " must sum to 1 within 1e-12");
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::single_source: return "single_source";
    case Scenario::alpha_mixed: return "alpha_mixed";
    case Scenario::multi_source: return "multi_source";
    case Scenario::discrepancy: return "discrepancy";
    case Scenario::htl_stability: return "htl_stability";
  }
  return "unknown";
}

long long ExperimentConfig::m() const {
  const long long v = as_integer(require_key(params, "m", "params"), "params.m");
  if (v < 1) schema_fail("params.m must be >= 1");
  return v;
}

long long ExperimentConfig::m_prime() const {
  const long long v =
      as_integer(require_key(params, "m_prime", "params"), "params.m_prime");
  if (v < 1) schema_fail("params.m_prime must be >= 1");
  return v;
}

long long ExperimentConfig::n() const {
  if (!params.contains("n")) return m();
  const long long v = as_integer(params.at("n"), "params.n");
  if (v < 1) schema_fail("params.n must be >= 1");
  return v;
}

double ExperimentConfig::delta() const {
  if (!params.contains("delta")) return 0.1;
  const double v = as_number(params.at("delta"), "params.delta");
  if (!(v > 0.0 && v < 1.0)) schema_fail("params.delta must lie in (0, 1)");
  return v;
}

double ExperimentConfig::alpha_scalar() const {
  const double v =
      as_number(require_key(params, "alpha", "params"), "params.alpha");
  if (!(v >= 0.0 && v <= 1.0)) schema_fail("params.alpha must lie in [0, 1]");
  return v;
}

double ExperimentConfig::beta_scalar() const {
  const double v =
      as_number(require_key(params, "beta", "params"), "params.beta");
  if (!(v > 0.0 && v < 1.0)) schema_fail("params.beta must lie in (0, 1)");
  return v;
}

double ExperimentConfig::mu() const {
  if (!params.contains("mu")) return 0.5;
  const double v = as_number(params.at("mu"), "params.mu");
  if (!(v > 0.0 && v < 1.0)) schema_fail("params.mu must lie in (0, 1)");
  return v;
}

std::size_t ExperimentConfig::threads() const {
  if (!params.contains("threads")) return 1;
  const long long v = as_integer(params.at("threads"), "params.threads");
  if (v < 1 || v > 256) schema_fail("params.threads must lie in [1, 256]");
  return static_cast<std::size_t>(v);
}

std::size_t ExperimentConfig::rademacher_draws() const {
  if (!params.contains("rademacher_draws")) return 10000;
  const long long v =
      as_integer(params.at("rademacher_draws"), "params.rademacher_draws");
  if (v < 1) schema_fail("params.rademacher_draws must be >= 1");
  return static_cast<std::size_t>(v);
}

std::vector<double> ExperimentConfig::alpha_vector(std::size_t k) const {
  if (!params.contains("alpha"))
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
  const Json& v = params.at("alpha");
  if (v.is_number()) {
    if (k != 1) schema_fail("params.alpha must list one weight per source");
    return {1.0};
  }
  auto alpha = normalized(as_number_vector(v, "params.alpha"), "params.alpha");
  if (alpha.size() != k)
    schema_fail("params.alpha must list one weight per source");
  return alpha;
}

std::vector<double> ExperimentConfig::beta_vector(std::size_t k) const {
  if (!params.contains("beta"))
    return std::vector<double>(k, 1.0 / static_cast<double>(k));
  const Json& v = params.at("beta");
  if (v.is_number()) {
    if (k != 1) schema_fail("params.beta must list one proportion per source");
    return {1.0};
  }
  auto beta = normalized(as_number_vector(v, "params.beta"), "params.beta");
  if (beta.size() != k)
    schema_fail("params.beta must list one proportion per source");
  for (double b : beta)
    if (!(b > 0.0)) schema_fail("params.beta entries must be positive");
  return beta;
}

std::optional<std::vector<double>> ExperimentConfig::mu_grid() const {
  if (!params.contains("mu_grid")) return std::nullopt;
  auto grid = as_number_vector(params.at("mu_grid"), "params.mu_grid");
  for (double v : grid)
    if (!(v > 0.0 && v < 1.0))
      schema_fail("params.mu_grid entries must lie in (0, 1)");
  return grid;
}

void ExperimentConfig::override_seed(std::uint64_t s) {
  seed = s;
  raw["seed"] = s;
}

void ExperimentConfig::override_trials(std::size_t t) {
  if (t < 1) schema_fail("trials must be >= 1");
  trials = t;
  raw["trials"] = t;
}

void ExperimentConfig::override_delta(double d) {
  if (!(d > 0.0 && d < 1.0)) schema_fail("delta must lie in (0, 1)");
  params["delta"] = d;
  raw["params"] = params;
}

ExperimentConfig parse_config_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // The parser message carries byte/line diagnostics; keep it verbatim.
    throw SchemaError(std::string("config: ") + e.what());
  }
  if (!root.is_object()) schema_fail("top level must be a JSON object");

  ExperimentConfig cfg;
  const std::string scenario =
      require_key(root, "scenario", "config").get<std::string>();
  if (scenario == "single_source") cfg.scenario = Scenario::single_source;
  else if (scenario == "alpha_mixed") cfg.scenario = Scenario::alpha_mixed;
  else if (scenario == "multi_source") cfg.scenario = Scenario::multi_source;
  else if (scenario == "discrepancy") cfg.scenario = Scenario::discrepancy;
  else if (scenario == "htl_stability") cfg.scenario = Scenario::htl_stability;
  else schema_fail("unknown scenario '" + scenario + "'");

  if (root.contains("seed"))
    cfg.seed = static_cast<std::uint64_t>(
        as_integer(root.at("seed"), "seed"));
  if (root.contains("trials")) {
    const long long t = as_integer(root.at("trials"), "trials");
    if (t < 1) schema_fail("trials must be >= 1");
    cfg.trials = static_cast<std::size_t>(t);
  }
  cfg.params = root.value("params", Json::object());
  if (!cfg.params.is_object()) schema_fail("params must be an object");

  if (cfg.scenario == Scenario::htl_stability) {
    cfg.htl_spec = require_key(root, "htl", "htl_stability config");
  } else {
    cfg.domains_spec = require_key(root, "domains", "config");
    cfg.class_spec = require_key(root, "class", "config");
  }
  cfg.raw = root;
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

struct ParsedDomain {
  std::vector<std::vector<double>> points;
  std::vector<double> probs;
  std::vector<double> labels;
};

ParsedDomain parse_inline_domain(const Json& spec, const std::string& what) {
  ParsedDomain d;
  const Json& pts = require_key(spec, "points", what.c_str());
  if (!pts.is_array() || pts.empty())
    schema_fail(what + ".points must be a non-empty array");
  for (const auto& p : pts) {
    if (p.is_array())
      d.points.push_back(as_number_vector(p, what + ".points entry"));
    else
      d.points.push_back({as_number(p, what + ".points entry")});
  }
  d.probs = as_number_vector(require_key(spec, "probs", what.c_str()),
                             what + ".probs");
  d.labels = as_number_vector(require_key(spec, "labels", what.c_str()),
                              what + ".labels");
  if (d.probs.size() != d.points.size() || d.labels.size() != d.points.size())
    schema_fail(what + " points, probs and labels must have equal length");
  return d;
}

DiscreteDomain materialize(const ParsedDomain& d, const GroundSet::Ptr& ground,
                           const std::string& what) {
  auto [own_ground, perm] = GroundSet::create_with_permutation(d.points);
  if (ground && !ground->same_points(*own_ground))
    schema_fail(what + " must share the ground points of the target domain");
  const GroundSet::Ptr& g = ground ? ground : own_ground;
  std::vector<double> probs(perm.size()), labels(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    probs[i] = d.probs[perm[i]];
    labels[i] = d.labels[perm[i]];
  }
  try {
    return DiscreteDomain(g, std::move(probs), Hypothesis(g, std::move(labels)));
  } catch (const Error& e) {
    schema_fail(what + ": " + e.what());
  }
}

std::vector<double> expand_per_source(const Json& params_obj, const char* key,
                                      std::size_t k, double fallback) {
  if (!params_obj.contains(key)) return std::vector<double>(k, fallback);
  const Json& v = params_obj.at(key);
  if (v.is_number()) return std::vector<double>(k, v.get<double>());
  auto vec = as_number_vector(v, std::string("generator.") + key);
  if (vec.size() != k)
    schema_fail(std::string("generator.") + key +
                " must be a scalar or one entry per source");
  return vec;
}

struct GeneratedDomains {
  GroundSet::Ptr ground;
  std::vector<DiscreteDomain> all;  // target first, then sources
};

// Synthetic 1-D family: one shared support with per-domain exponential
// tilts of a common base weight vector, a threshold labeling for the
// target, and independent label flips per source.
GeneratedDomains generate_domains(const Json& gen, std::uint64_t master_seed) {
  const long long support =
      as_integer(require_key(gen, "support", "generator"), "generator.support");
  if (support < 1 || support > 4096)
    schema_fail("generator.support must lie in [1, 4096]");
  const long long dim = gen.contains("dim")
                            ? as_integer(gen.at("dim"), "generator.dim")
                            : 1;
  if (dim != 1)
    schema_fail("the domain generator only supports dim = 1");
  const long long k = gen.contains("sources")
                          ? as_integer(gen.at("sources"), "generator.sources")
                          : 1;
  if (k < 1 || k > 64) schema_fail("generator.sources must lie in [1, 64]");
  const std::uint64_t gen_seed =
      gen.contains("seed")
          ? static_cast<std::uint64_t>(as_integer(gen.at("seed"),
                                                  "generator.seed"))
          : rng::derive_stream(master_seed, kGeneratorStream);
  const auto shift = expand_per_source(gen, "shift", static_cast<std::size_t>(k), 0.0);
  const auto disagree = expand_per_source(gen, "label_disagreement",
                                          static_cast<std::size_t>(k), 0.0);
  for (double r : disagree)
    if (!(r >= 0.0 && r <= 1.0))
      schema_fail("generator.label_disagreement must lie in [0, 1]");

  rng::SplitMix64 rng(gen_seed);
  const std::size_t ns = static_cast<std::size_t>(support);

  std::set<double> seen;
  std::vector<double> xs;
  xs.reserve(ns);
  while (xs.size() < ns) {
    const double x = rng.next_unit();
    if (seen.insert(x).second) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());

  std::vector<double> base(ns);
  for (double& b : base) b = 0.05 + rng.next_unit();

  std::vector<std::vector<double>> points(ns);
  for (std::size_t i = 0; i < ns; ++i) points[i] = {xs[i]};
  GroundSet::Ptr ground = GroundSet::create(points);

  // Target labels: threshold at the median support point.
  const double cut = xs[ns / 2];
  std::vector<double> target_labels(ns);
  for (std::size_t i = 0; i < ns; ++i)
    target_labels[i] = xs[i] >= cut ? 1.0 : 0.0;

  auto normalize = [](std::vector<double> w) {
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return w;
  };

  GeneratedDomains out;
  out.ground = ground;
  out.all.emplace_back(ground, normalize(base),
                       Hypothesis(ground, target_labels));
  for (std::size_t s = 0; s < static_cast<std::size_t>(k); ++s) {
    std::vector<double> probs(ns);
    for (std::size_t i = 0; i < ns; ++i)
      probs[i] = base[i] * std::exp(shift[s] * (xs[i] - 0.5));
    std::vector<double> labels = target_labels;
    for (std::size_t i = 0; i < ns; ++i) {
      const double u = rng.next_unit();
      if (u < disagree[s]) labels[i] = 1.0 - labels[i];
    }
    out.all.emplace_back(ground, normalize(std::move(probs)),
                         Hypothesis(ground, std::move(labels)));
  }
  return out;
}

HypothesisClass build_class(const Json& spec, const GroundSet::Ptr& ground) {
  const std::string kind =
      require_key(spec, "kind", "class").get<std::string>();
  if (kind == "threshold") {
    try {
      return make_threshold_class(ground);
    } catch (const Error& e) {
      schema_fail(std::string("class: ") + e.what());
    }
  }
  if (kind == "explicit") {
    const Json& outs = require_key(spec, "outputs", "explicit class");
    if (!outs.is_array() || outs.empty())
      schema_fail("class.outputs must be a non-empty array");
    std::vector<std::vector<double>> vectors;
    for (const auto& v : outs)
      vectors.push_back(as_number_vector(v, "class.outputs entry"));
    const long long vc =
        as_integer(require_key(spec, "vc_dim", "explicit class"),
                   "class.vc_dim");
    if (vc < 1) schema_fail("class.vc_dim must be >= 1");
    try {
      return make_finite_class(ground, vectors, static_cast<int>(vc));
    } catch (const Error& e) {
      schema_fail(std::string("class: ") + e.what());
    }
  }
  schema_fail("class.kind must be 'threshold' or 'explicit'");
}

}  // namespace

Instance build_instance(const ExperimentConfig& cfg) {
  if (cfg.scenario == Scenario::htl_stability)
    schema_fail("htl_stability configs have no classification domains");

  GroundSet::Ptr ground;
  std::vector<DiscreteDomain> all;  // target first
  if (cfg.domains_spec.contains("generator")) {
    GeneratedDomains gen =
        generate_domains(cfg.domains_spec.at("generator"), cfg.seed);
    ground = gen.ground;
    all = std::move(gen.all);
  } else {
    const Json& target_spec =
        require_key(cfg.domains_spec, "target", "domains");
    const ParsedDomain target = parse_inline_domain(target_spec, "target");
    all.push_back(materialize(target, nullptr, "target"));
    ground = all.front().ground();
    const Json& sources = require_key(cfg.domains_spec, "sources", "domains");
    if (!sources.is_array() || sources.empty())
      schema_fail("domains.sources must be a non-empty array");
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const std::string what = "sources[" + std::to_string(i) + "]";
      all.push_back(
          materialize(parse_inline_domain(sources[i], what), ground, what));
    }
  }

  const std::size_t k = all.size() - 1;
  switch (cfg.scenario) {
    case Scenario::single_source:
    case Scenario::alpha_mixed:
    case Scenario::discrepancy:
      if (k != 1)
        schema_fail(std::string(scenario_name(cfg.scenario)) +
                    " requires exactly one source domain");
      break;
    case Scenario::multi_source:
      if (k < 1) schema_fail("multi_source requires at least one source");
      break;
    case Scenario::htl_stability:
      break;
  }

  HypothesisClass cls = build_class(cfg.class_spec, ground);
  DiscreteDomain target = std::move(all.front());
  all.erase(all.begin());
  return Instance{ground, std::move(cls), std::move(target), std::move(all)};
}

namespace {

htl::RegressionDomain parse_regression_domain(const Json& spec,
                                              std::uint64_t master_seed) {
  if (spec.contains("generator")) {
    const Json& gen = spec.at("generator");
    const long long support = as_integer(
        require_key(gen, "support", "htl generator"), "htl.support");
    if (support < 2 || support > 4096)
      schema_fail("htl generator.support must lie in [2, 4096]");
    const long long dim =
        gen.contains("dim") ? as_integer(gen.at("dim"), "htl.dim") : 1;
    if (dim < 1 || dim > 64) schema_fail("htl generator.dim must lie in [1, 64]");
    const double noise =
        gen.contains("noise") ? as_number(gen.at("noise"), "htl.noise") : 0.0;
    if (!(noise >= 0.0)) schema_fail("htl generator.noise must be >= 0");
    const std::uint64_t gen_seed =
        gen.contains("seed")
            ? static_cast<std::uint64_t>(as_integer(gen.at("seed"),
                                                    "htl generator.seed"))
            : rng::derive_stream(master_seed, kGeneratorStream);
    rng::SplitMix64 rng(gen_seed);
    const std::size_t ns = static_cast<std::size_t>(support);
    const Eigen::Index d = static_cast<Eigen::Index>(dim);
    std::vector<Eigen::VectorXd> points(ns, Eigen::VectorXd(d));
    for (auto& p : points)
      for (Eigen::Index j = 0; j < d; ++j) p(j) = 2.0 * rng.next_unit() - 1.0;
    std::vector<double> probs(ns);
    double sum = 0.0;
    for (double& p : probs) {
      p = 0.5 + rng.next_unit();
      sum += p;
    }
    for (double& p : probs) p /= sum;
    Eigen::VectorXd w_true(d);
    for (Eigen::Index j = 0; j < d; ++j) w_true(j) = 2.0 * rng.next_unit() - 1.0;
    std::vector<double> labels(ns);
    for (std::size_t i = 0; i < ns; ++i)
      labels[i] = w_true.dot(points[i]) + noise * (2.0 * rng.next_unit() - 1.0);
    return htl::make_regression_domain(std::move(points), std::move(probs),
                                       std::move(labels));
  }

  const Json& pts = require_key(spec, "points", "htl.target");
  std::vector<Eigen::VectorXd> points;
  for (const auto& p : pts) {
    std::vector<double> entries = p.is_array()
                                      ? as_number_vector(p, "htl point")
                                      : std::vector<double>{as_number(p, "htl point")};
    Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
    for (std::size_t j = 0; j < entries.size(); ++j)
      v(static_cast<Eigen::Index>(j)) = entries[j];
    points.push_back(std::move(v));
  }
  auto probs = as_number_vector(require_key(spec, "probs", "htl.target"),
                                "htl.probs");
  auto labels = as_number_vector(require_key(spec, "labels", "htl.target"),
                                 "htl.labels");
  try {
    return htl::make_regression_domain(std::move(points), std::move(probs),
                                       std::move(labels));
  } catch (const Error& e) {
    schema_fail(std::string("htl.target: ") + e.what());
  }
}

}  // namespace

HtlInstance build_htl_instance(const ExperimentConfig& cfg) {
  if (cfg.scenario != Scenario::htl_stability)
    schema_fail("htl experiments require scenario 'htl_stability'");
  const Json& spec = cfg.htl_spec;
  HtlInstance inst;
  inst.target = parse_regression_domain(require_key(spec, "target", "htl"),
                                        cfg.seed);

  const Json& src = require_key(spec, "source", "htl");
  Eigen::VectorXd w(static_cast<Eigen::Index>(inst.target.dim()));
  double bias = 0.0;
  if (src.contains("generator")) {
    const Json& gen = src.at("generator");
    const double perturbation =
        gen.contains("perturbation")
            ? as_number(gen.at("perturbation"), "htl source perturbation")
            : 0.5;
    const std::uint64_t src_seed =
        gen.contains("seed")
            ? static_cast<std::uint64_t>(as_integer(gen.at("seed"),
                                                    "htl source seed"))
            : rng::derive_stream(cfg.seed, kGeneratorStream + 1);
    // Least-squares fit of the support labels, then a seeded perturbation:
    // an imperfect but related source hypothesis.
    const auto n = static_cast<Eigen::Index>(inst.target.size());
    const auto d = static_cast<Eigen::Index>(inst.target.dim());
    Eigen::MatrixXd x(n, d);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      x.row(i) = inst.target.points[static_cast<std::size_t>(i)].transpose();
      y(i) = inst.target.labels[static_cast<std::size_t>(i)];
    }
    Eigen::MatrixXd normal = x.transpose() * x;
    normal.diagonal().array() += 1e-8;
    w = Eigen::LDLT<Eigen::MatrixXd>(normal).solve(x.transpose() * y);
    rng::SplitMix64 rng(src_seed);
    for (Eigen::Index j = 0; j < d; ++j)
      w(j) += perturbation * (2.0 * rng.next_unit() - 1.0);
  } else {
    const auto weights = as_number_vector(
        require_key(src, "weights", "htl.source"), "htl.source.weights");
    if (weights.size() != inst.target.dim())
      schema_fail("htl.source.weights must match the target dimension");
    for (std::size_t j = 0; j < weights.size(); ++j)
      w(static_cast<Eigen::Index>(j)) = weights[j];
    if (src.contains("bias"))
      bias = as_number(src.at("bias"), "htl.source.bias");
  }
  double sup = 0.0;
  for (const auto& p : inst.target.points)
    sup = std::max(sup, std::abs(w.dot(p) + bias));
  inst.source = std::make_shared<htl::SourcePredictor>(
      htl::SourcePredictor::linear(w, bias, sup));

  const Json& trunc = require_key(spec, "truncation", "htl");
  if (trunc.is_string()) {
    const std::string t = trunc.get<std::string>();
    if (t == "inf")
      inst.truncation_c = htl::kInfiniteTruncation;
    else if (t == "auto")
      inst.truncation_c = inst.target.label_bound + sup;
    else
      schema_fail("htl.truncation must be 'inf', 'auto' or a positive number");
  } else {
    inst.truncation_c = as_number(trunc, "htl.truncation");
    if (!(inst.truncation_c > 0.0))
      schema_fail("htl.truncation must be positive");
  }

  const Json& grid = require_key(spec, "grid", "htl");
  if (!grid.is_array() || grid.empty())
    schema_fail("htl.grid must be a non-empty array of {m, lambda_reg}");
  for (const auto& cell : grid) {
    const long long m = as_integer(require_key(cell, "m", "htl.grid cell"),
                                   "htl.grid m");
    if (m < 2) schema_fail("htl.grid m must be >= 2");
    const double lambda = as_number(
        require_key(cell, "lambda_reg", "htl.grid cell"), "htl.grid lambda_reg");
    if (!(lambda > 0.0)) schema_fail("htl.grid lambda_reg must be positive");
    inst.grid.push_back({static_cast<std::size_t>(m), lambda});
  }
  return inst;
}

long long round_half_even(double x) {
  const double floor_x = std::floor(x);
  const double frac = x - floor_x;
  const long long base = static_cast<long long>(floor_x);
  if (frac > 0.5) return base + 1;
  if (frac < 0.5) return base;
  return (base % 2 == 0) ? base : base + 1;
}

std::vector<long long> apportion_counts(const std::vector<double>& beta,
                                        long long m) {
  const std::size_t k = beta.size();
  std::vector<long long> counts(k);
  long long total = 0;
  for (std::size_t j = 0; j < k; ++j) {
    counts[j] = std::max<long long>(1, round_half_even(beta[j] * static_cast<double>(m)));
    total += counts[j];
  }
  // Fix the sum deterministically: push surplus out of (or deficit into)
  // the cells by residual order, never dropping a cell below one.
  while (total != m) {
    const long long step = total < m ? 1 : -1;
    std::size_t pick = k;
    double pick_res = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double res = beta[j] * static_cast<double>(m) -
                         static_cast<double>(counts[j]);
      const double keyed = step > 0 ? res : -res;
      if ((step < 0 && counts[j] <= 1)) continue;
      if (pick == k || keyed > pick_res) {
        pick = j;
        pick_res = keyed;
      }
    }
    if (pick == k)
      throw PreconditionError("cannot apportion sample counts: m too small");
    counts[pick] += step;
    total += step;
  }
  return counts;
}

}  // namespace tlb
