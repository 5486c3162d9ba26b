#include <doctest.h>

#include <cmath>

#include "core/erm.hpp"
#include "core/errors.hpp"
#include "support/test_util.hpp"

using namespace tlb;
using tlbtest::SplitMix64;

namespace {

// Sample over a two-point ground with a prescribed loss pattern for h == 1.
LabeledSample quarters_sample(const GroundSet::Ptr& g) {
  // Labels 1,1,1,0: the all-ones hypothesis errs on one of four entries.
  return LabeledSample(g, {{0, 1.0}, {0, 1.0}, {1, 1.0}, {1, 0.0}});
}

}  // namespace

TEST_CASE("weighted objective mixes empirical risks") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const Hypothesis h(g, {1.0, 1.0});

  // emp target risk 0.2 over 5 entries, emp source risk 0.4 over 5 entries.
  const LabeledSample target(
      g, {{0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 0.0}});
  const LabeledSample source(
      g, {{0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 0.0}, {0, 0.0}});

  auto objective = [&](double alpha) {
    WeightedRiskSpec spec;
    spec.terms.push_back({alpha, target});
    spec.terms.push_back({1.0 - alpha, source});
    return weighted_objective(spec, h);
  };
  CHECK(objective(0.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(objective(1.0) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(objective(0.5) == doctest::Approx(0.3).epsilon(1e-15));

  WeightedRiskSpec multi;
  const LabeledSample r1(g, {{0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 1.0},
                             {0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 0.0}});
  const LabeledSample r2(g, {{0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 1.0}, {0, 0.0}});
  multi.terms.push_back({0.3, r1});  // risk 0.1
  multi.terms.push_back({0.7, r2});  // risk 0.2
  CHECK(weighted_objective(multi, h) == doctest::Approx(0.17).epsilon(1e-15));

  CHECK_THROWS_AS(weighted_objective(WeightedRiskSpec{}, h), StructuralError);
  WeightedRiskSpec bad;
  bad.terms.push_back({-1.0, target});
  CHECK_THROWS_AS(weighted_objective(bad, h), PreconditionError);
}

TEST_CASE("erm picks the empirical minimizer") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const auto cls = make_finite_class(g, {{0.0, 0.0}, {1.0, 1.0}}, 1);
  WeightedRiskSpec spec;
  spec.terms.push_back({1.0, quarters_sample(g)});
  const ErmResult r = erm(spec, cls);
  CHECK(r.index == 1);
  CHECK(r.objective == 0.25);
  CHECK(r.tie_count == 1);

  // A member with zero risk everywhere wins with objective zero.
  const auto with_perfect =
      make_finite_class(g, {{0.0, 0.0}, {1.0, 1.0}, {1.0, 0.0}}, 1);
  WeightedRiskSpec perfect;
  perfect.terms.push_back(
      {1.0, LabeledSample(g, {{0, 1.0}, {1, 0.0}, {0, 1.0}})});
  const ErmResult p = erm(perfect, with_perfect);
  CHECK(p.index == 2);
  CHECK(p.objective == 0.0);
}

TEST_CASE("erm matches an independent re-enumeration on random configs") {
  SplitMix64 rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = tlbtest::random_ground(rng, 2 + rng.next_u64() % 6);
    const auto cls = tlbtest::random_binary_class(rng, g, 16);
    const DiscreteDomain d = tlbtest::random_domain(rng, g);
    WeightedRiskSpec spec;
    spec.terms.push_back({0.5 + rng.next_unit(), d});
    spec.terms.push_back(
        {rng.next_unit(), sample_labeled(d, 1 + rng.next_u64() % 20, rep)});
    const ErmResult got = erm(spec, cls);
    const tlbtest::OracleErm want = tlbtest::oracle_erm(spec, cls);
    CHECK(got.index == want.index);
    CHECK(got.objective == want.objective);
    CHECK(got.tie_count == want.tie_count);
  }
}

TEST_CASE("ties break to the lowest index, deterministically") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  // Members 0 and 2 share the same loss pattern weight.
  const auto cls =
      make_finite_class(g, {{1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}, 1);
  const DiscreteDomain d(g, {0.5, 0.5}, Hypothesis(g, {0.0, 0.0}));
  WeightedRiskSpec spec;
  spec.terms.push_back({1.0, d});
  const ErmResult r = erm(spec, cls);
  CHECK(r.index == 0);
  CHECK(r.tie_count == 2);  // members 0 and 2 both at risk 0.5
}

TEST_CASE("scaling all weights scales the objective, not the argmin") {
  SplitMix64 rng(42);
  auto g = tlbtest::random_ground(rng, 5);
  const auto cls = tlbtest::random_binary_class(rng, g, 12);
  const DiscreteDomain d1 = tlbtest::random_domain(rng, g);
  const DiscreteDomain d2 = tlbtest::random_domain(rng, g);
  WeightedRiskSpec spec;
  spec.terms.push_back({0.7, d1});
  spec.terms.push_back({0.3, d2});
  const ErmResult base = erm(spec, cls);
  for (double c : {2.0, 8.0, 0.25}) {
    WeightedRiskSpec scaled;
    for (const auto& t : spec.terms) scaled.terms.push_back({c * t.weight, t.source});
    const ErmResult r = erm(scaled, cls);
    CHECK(r.index == base.index);
    CHECK(r.objective == doctest::Approx(c * base.objective).epsilon(1e-12));
  }
}

TEST_CASE("ideal risk: realizable joint task and monotonicity") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0, 2.0});
  const Hypothesis truth(g, {0.0, 1.0, 1.0});
  const DiscreteDomain s(g, {0.5, 0.25, 0.25}, truth);
  const DiscreteDomain t(g, {0.2, 0.3, 0.5}, truth);
  const auto cls = make_threshold_class(g);

  // The labeling function is a threshold, so lambda = 0.
  const IdealRisk lambda = ideal_risk({{1.0, s}, {1.0, t}}, cls);
  CHECK(lambda.value == 0.0);
  CHECK(cls.member(lambda.index).outputs() == truth.outputs());

  SplitMix64 rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    const DiscreteDomain a = tlbtest::random_domain(rng, g);
    const DiscreteDomain b = tlbtest::random_domain(rng, g);
    const double joint = ideal_risk({{1.0, a}, {1.0, b}}, cls).value;
    CHECK(joint >= ideal_risk({{1.0, a}}, cls).value);
    CHECK(joint >= ideal_risk({{1.0, b}}, cls).value);
    // Raising any weight never lowers the value.
    CHECK(ideal_risk({{1.5, a}, {1.0, b}}, cls).value >= joint);
  }
}

// The chain of inequalities relating the mu-concentrated ideal risk to the
// per-source ideal risks.
TEST_CASE("lambda_alpha_mu is dominated by the weighted per-source lambdas") {
  SplitMix64 rng(44);
  for (int rep = 0; rep < 100; ++rep) {
    auto g = tlbtest::random_ground(rng, 3 + rng.next_u64() % 4);
    const auto cls = tlbtest::random_binary_class(rng, g, 12);
    const DiscreteDomain target = tlbtest::random_domain(rng, g);
    const std::size_t k = 2 + rng.next_u64() % 3;
    std::vector<DiscreteDomain> sources;
    for (std::size_t i = 0; i < k; ++i)
      sources.push_back(tlbtest::random_domain(rng, g));
    std::vector<double> alpha(k);
    double sum = 0.0;
    for (double& a : alpha) {
      a = 0.01 + rng.next_unit();
      sum += a;
    }
    for (double& a : alpha) a /= sum;
    const double mu = 0.05 + 0.9 * rng.next_unit();

    const auto weights = alpha_mu_source_weights(alpha, mu);
    std::vector<std::pair<double, DiscreteDomain>> terms{{1.0, target}};
    for (std::size_t i = 0; i < k; ++i)
      terms.emplace_back(weights[i], sources[i]);
    const double lam_mu = ideal_risk(terms, cls).value;

    std::vector<double> lam(k);
    for (std::size_t i = 0; i < k; ++i)
      lam[i] = ideal_risk({{1.0, sources[i]}, {1.0, target}}, cls).value;
    double rhs = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double peers = 0.0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) peers += lam[j];
      rhs += alpha[i] * (mu * lam[i] +
                         (1.0 - mu) / static_cast<double>(k - 1) * peers);
    }
    CHECK(lam_mu <= rhs + 1e-12);
  }
}

TEST_CASE("ensembles are convex combinations") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const Hypothesis h1(g, {1.0, 0.0});
  const Hypothesis h2(g, {0.0, 0.0});

  CHECK(multisource_ensemble({h1}, std::vector<double>{1.0}).outputs() ==
        h1.outputs());
  CHECK(multisource_ensemble({h1, h2}, {0.5, 0.5}).outputs() ==
        std::vector<double>{0.5, 0.0});
  CHECK_THROWS_AS(multisource_ensemble({h1, h2}, {0.7, 0.7}),
                  PreconditionError);
}

TEST_CASE("ensemble target risk is the weighted sum for binary labels") {
  SplitMix64 rng(45);
  for (int rep = 0; rep < 30; ++rep) {
    auto g = tlbtest::random_ground(rng, 2 + rng.next_u64() % 5);
    const DiscreteDomain target = tlbtest::random_domain(rng, g);
    const std::size_t k = 2 + rng.next_u64() % 3;
    std::vector<Hypothesis> hyps;
    std::vector<double> alpha(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      hyps.push_back(tlbtest::random_binary_hypothesis(rng, g));
      alpha[i] = 0.01 + rng.next_unit();
      sum += alpha[i];
    }
    for (double& a : alpha) a /= sum;
    const Hypothesis ens = multisource_ensemble(hyps, alpha);
    double weighted = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      weighted += alpha[i] * expected_risk(target, hyps[i]);
    CHECK(expected_risk(target, ens) ==
          doctest::Approx(weighted).epsilon(1e-12));
  }
}
