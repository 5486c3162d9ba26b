#include <doctest.h>

#include <cmath>
#include <map>

#include "core/domain.hpp"
#include "core/errors.hpp"
#include "support/test_util.hpp"

using namespace tlb;
using tlbtest::SplitMix64;

namespace {

DiscreteDomain two_point_domain(double p0, const std::vector<double>& labels) {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  return DiscreteDomain(g, {p0, 1.0 - p0}, Hypothesis(g, labels));
}

}  // namespace

TEST_CASE("domain constructor validates probabilities") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  CHECK_THROWS_AS(DiscreteDomain(g, {0.7, 0.2}, Hypothesis(g, {0.0, 1.0})),
                  PreconditionError);
  CHECK_THROWS_AS(DiscreteDomain(g, {-0.1, 1.1}, Hypothesis(g, {0.0, 1.0})),
                  PreconditionError);
  CHECK_THROWS_AS(DiscreteDomain(g, {1.0}, Hypothesis(g, {0.0, 1.0})),
                  StructuralError);
  // A sub-tolerance deviation is renormalized, not rejected.
  const DiscreteDomain d(g, {0.5 + 2e-13, 0.5}, Hypothesis(g, {0.0, 1.0}));
  CHECK(d.probs()[0] + d.probs()[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("expected risk basics") {
  const DiscreteDomain d = two_point_domain(0.25, {0.0, 0.0});
  const Hypothesis h(d.ground(), {1.0, 0.0});
  CHECK(expected_risk(d, d.label_fn()) == 0.0);
  CHECK(expected_risk(d, h) == 0.25);
  CHECK(expected_risk(d, h, d.label_fn()) ==
        expected_risk(d, d.label_fn(), h));
}

TEST_CASE("expected risk triangle inequality, exhaustive over small classes") {
  SplitMix64 rng(11);
  for (int rep = 0; rep < 8; ++rep) {
    auto g = tlbtest::random_ground(rng, 3 + rng.next_u64() % 4);
    const auto cls = tlbtest::random_binary_class(rng, g, 16);
    const DiscreteDomain d = tlbtest::random_domain(rng, g);
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = 0; b < cls.size(); ++b)
        for (std::size_t c = 0; c < cls.size(); ++c) {
          CHECK(expected_risk(d, cls.member(a), cls.member(b)) <=
                expected_risk(d, cls.member(a), cls.member(c)) +
                    expected_risk(d, cls.member(c), cls.member(b)) + 1e-12);
        }
  }
}

// Risk is linear in convex combinations of hypotheses when the reference
// labels are binary.
TEST_CASE("expected risk linearity against binary labels") {
  SplitMix64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = tlbtest::random_ground(rng, 2 + rng.next_u64() % 5);
    const DiscreteDomain d = tlbtest::random_domain(rng, g);
    const std::size_t k = 2 + rng.next_u64() % 3;
    std::vector<Hypothesis> hyps;
    std::vector<double> alpha(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<double> out(g->size());
      for (double& v : out) v = rng.next_unit();
      hyps.emplace_back(g, out);
      alpha[i] = 0.01 + rng.next_unit();
      sum += alpha[i];
    }
    for (double& a : alpha) a /= sum;

    std::vector<double> mix(g->size(), 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t p = 0; p < g->size(); ++p) mix[p] += alpha[i] * hyps[i][p];
    const Hypothesis mixed(g, mix);

    double weighted = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      weighted += alpha[i] * expected_risk(d, hyps[i]);
    CHECK(expected_risk(d, mixed) == doctest::Approx(weighted).epsilon(1e-12));
  }
}

TEST_CASE("empirical risk") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const Hypothesis h(g, {1.0, 1.0});

  const LabeledSample match(g, {{0, 1.0}, {1, 1.0}});
  CHECK(empirical_risk(match, h) == 0.0);

  const LabeledSample quarter(g, {{0, 0.0}, {0, 0.0}, {0, 0.0}, {1, 1.0}});
  CHECK(empirical_risk(quarter, h) == 0.75);

  const LabeledSample dup(g, {{0, 0.0}, {0, 0.0}, {1, 1.0}});
  CHECK(empirical_risk(dup, h) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(empirical_risk(LabeledSample(g, {}), h), PreconditionError);
  CHECK_THROWS_AS(LabeledSample(g, {{7, 0.0}}), StructuralError);
}

TEST_CASE("mixtures") {
  const DiscreteDomain a = two_point_domain(1.0, {0.0, 1.0});
  const DiscreteDomain b = two_point_domain(0.0, {0.0, 1.0});

  const Mixture degenerate = mixture_domain({a, b}, {1.0, 0.0});
  CHECK(degenerate.domain.probs() == a.probs());
  CHECK_FALSE(degenerate.marginal_only);

  const Mixture half = mixture_domain({a, b}, {0.5, 0.5});
  CHECK(half.domain.probs() == std::vector<double>{0.5, 0.5});

  const DiscreteDomain c = two_point_domain(0.0, {1.0, 1.0});
  CHECK(mixture_domain({a, c}, {0.5, 0.5}).marginal_only);

  CHECK_THROWS_AS(mixture_domain({a, b}, {0.6, 0.6}), PreconditionError);
}

TEST_CASE("mixture risk is the weighted sum of component risks") {
  SplitMix64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = tlbtest::random_ground(rng, 2 + rng.next_u64() % 4);
    const auto cls = tlbtest::random_binary_class(rng, g, 8);
    const DiscreteDomain d1 = tlbtest::random_domain(rng, g);
    const DiscreteDomain d2(g, tlbtest::random_probs(rng, g->size()),
                            d1.label_fn());
    const double w = rng.next_unit();
    const Mixture mix = mixture_domain({d1, d2}, {w, 1.0 - w});
    for (const auto& h : cls.members()) {
      const double expect =
          w * expected_risk(d1, h) + (1.0 - w) * expected_risk(d2, h);
      CHECK(expected_risk(mix.domain, h) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("samplers are deterministic and honor degenerate distributions") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0, 2.0});
  const DiscreteDomain point_mass(g, {0.0, 1.0, 0.0},
                                  Hypothesis(g, {0.0, 1.0, 0.0}));
  const LabeledSample s = sample_labeled(point_mass, 50, 5);
  for (const auto& e : s.entries()) {
    CHECK(e.index == 1);
    CHECK(e.label == 1.0);
  }

  const DiscreteDomain d = two_point_domain(0.3, {0.0, 1.0});
  const LabeledSample s1 = sample_labeled(d, 100, 17);
  const LabeledSample s2 = sample_labeled(d, 100, 17);
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1.entries()[i].index == s2.entries()[i].index);
    CHECK(s1.entries()[i].label == s2.entries()[i].label);
  }
  const LabeledSample s3 = sample_labeled(d, 100, 18);
  bool differs = false;
  for (std::size_t i = 0; i < s1.size(); ++i)
    differs |= s1.entries()[i].index != s3.entries()[i].index;
  CHECK(differs);

  CHECK_THROWS_AS(sample_labeled(d, 0, 1), PreconditionError);
}

TEST_CASE("law of large numbers: frequencies and risks converge") {
  SplitMix64 rng(14);
  auto g = tlbtest::random_ground(rng, 6);
  const DiscreteDomain d = tlbtest::random_domain(rng, g);
  const std::size_t m = 100000;

  const UnlabeledSample u = sample_unlabeled(d, m, 77);
  std::map<std::uint32_t, std::size_t> counts;
  for (auto i : u.indices()) ++counts[i];
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double freq =
        static_cast<double>(counts[static_cast<std::uint32_t>(i)]) /
        static_cast<double>(m);
    CHECK(std::abs(freq - d.probs()[i]) < 0.01);
  }

  const Hypothesis h = tlbtest::random_binary_hypothesis(rng, g);
  const LabeledSample s = sample_labeled(d, m, 78);
  CHECK(std::abs(empirical_risk(s, h) - expected_risk(d, h)) < 0.01);
}
