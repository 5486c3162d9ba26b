#include <doctest.h>

#include <cmath>

#include "core/divergence.hpp"
#include "core/errors.hpp"
#include "support/test_util.hpp"

using namespace tlb;
using tlbtest::SplitMix64;

TEST_CASE("divergence of a measure with itself is zero") {
  SplitMix64 rng(21);
  auto g = tlbtest::random_ground(rng, 5);
  const auto cls = make_threshold_class(g);
  const DiscreteDomain d = tlbtest::random_domain(rng, g);
  const Measure p = Measure::exact(d);
  CHECK(hdh_divergence(cls, p, p) == 0.0);
  CHECK(discrepancy(cls, LossSpec::zero_one(), p, p) == 0.0);
}

TEST_CASE("separable point masses reach the maximal divergence") {
  auto g = tlbtest::make_ground_1d({0.1, 0.9});
  const auto cls = make_threshold_class(g);
  const DiscreteDomain at_low(g, {1.0, 0.0}, Hypothesis(g, {0.0, 0.0}));
  const DiscreteDomain at_high(g, {0.0, 1.0}, Hypothesis(g, {0.0, 0.0}));
  CHECK(hdh_divergence(cls, Measure::exact(at_low), Measure::exact(at_high)) ==
        2.0);
}

TEST_CASE("divergence is symmetric, bounded, and grows with the class") {
  SplitMix64 rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = tlbtest::random_ground(rng, 3 + rng.next_u64() % 5);
    const auto cls = tlbtest::random_binary_class(rng, g, 12);
    const Measure p = Measure::exact(tlbtest::random_domain(rng, g));
    const Measure q = Measure::exact(tlbtest::random_domain(rng, g));
    const double d_pq = hdh_divergence(cls, p, q);
    CHECK(d_pq >= 0.0);
    CHECK(d_pq <= 2.0);
    CHECK(d_pq == hdh_divergence(cls, q, p));

    // Append one more member; the sup can only grow.
    auto extended = cls.members();
    extended.push_back(tlbtest::random_binary_hypothesis(rng, g));
    const HypothesisClass bigger(g, extended, cls.vc_dim());
    if (bigger.size() > cls.size()) {
      CHECK(hdh_divergence(bigger, p, q) >= d_pq);
      CHECK(discrepancy(bigger, LossSpec::zero_one(), p, q) >=
            discrepancy(cls, LossSpec::zero_one(), p, q));
    }
  }
}

TEST_CASE("divergence requires a binary class") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const auto soft = make_finite_class(g, {{0.5, 1.0}, {0.0, 0.0}}, 1);
  const DiscreteDomain d(g, {0.5, 0.5}, Hypothesis(g, {0.0, 1.0}));
  const Measure p = Measure::exact(d);
  CHECK_THROWS_AS(hdh_divergence(soft, p, p), PreconditionError);
}

TEST_CASE("divergence agrees with the event-set oracle") {
  SplitMix64 rng(23);
  for (int rep = 0; rep < 30; ++rep) {
    auto g = tlbtest::random_ground(rng, 2 + rng.next_u64() % 6);
    const auto cls = tlbtest::random_binary_class(rng, g, 16);
    const DiscreteDomain a = tlbtest::random_domain(rng, g);
    const DiscreteDomain b = tlbtest::random_domain(rng, g);
    const double got =
        hdh_divergence(cls, Measure::exact(a), Measure::exact(b));
    const double want = tlbtest::oracle_hdh(cls, a.probs(), b.probs());
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("key inequality holds with exact quantities") {
  SplitMix64 rng(24);

  // Equal domains: both sides vanish.
  auto g0 = tlbtest::random_ground(rng, 4);
  const auto cls0 = make_threshold_class(g0);
  const DiscreteDomain d0 = tlbtest::random_domain(rng, g0);
  CHECK(key_inequality_violation(cls0, d0, d0) == 0.0);

  for (int rep = 0; rep < 40; ++rep) {
    auto g = tlbtest::random_ground(rng, 8);
    const auto cls = make_threshold_class(g);
    const DiscreteDomain s = tlbtest::random_domain(rng, g);
    const DiscreteDomain t = tlbtest::random_domain(rng, g);
    CHECK(key_inequality_violation(cls, s, t) <= 1e-12);
  }
}

TEST_CASE("the maximizing risk-gap pair attains the divergence sup") {
  SplitMix64 rng(25);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = tlbtest::random_ground(rng, 6);
    const auto cls = make_threshold_class(g);
    const DiscreteDomain s = tlbtest::random_domain(rng, g);
    const DiscreteDomain t = tlbtest::random_domain(rng, g);

    double best_gap = 0.0;
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = 0; b < cls.size(); ++b)
        best_gap = std::max(
            best_gap, std::abs(expected_risk(s, cls.member(a), cls.member(b)) -
                               expected_risk(t, cls.member(a), cls.member(b))));
    const double d =
        hdh_divergence(cls, Measure::exact(s), Measure::exact(t));
    CHECK(best_gap == doctest::Approx(0.5 * d).epsilon(1e-12));
  }
}

TEST_CASE("discrepancy equals half the divergence for binary classes") {
  SplitMix64 rng(26);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = tlbtest::random_ground(rng, 3 + rng.next_u64() % 5);
    const auto cls = tlbtest::random_binary_class(rng, g, 16);
    const Measure p = Measure::exact(tlbtest::random_domain(rng, g));
    const Measure q = Measure::exact(tlbtest::random_domain(rng, g));
    CHECK(discrepancy(cls, LossSpec::zero_one(), p, q) ==
          doctest::Approx(0.5 * hdh_divergence(cls, p, q)).epsilon(1e-12));
  }
}

TEST_CASE("discrepancy is symmetric and satisfies the triangle inequality") {
  SplitMix64 rng(27);
  for (const LossSpec& loss : {LossSpec::zero_one(), LossSpec::squared()}) {
    for (int rep = 0; rep < 15; ++rep) {
      auto g = tlbtest::random_ground(rng, 4);
      const auto cls = tlbtest::random_binary_class(rng, g, 10);
      const Measure p = Measure::exact(tlbtest::random_domain(rng, g));
      const Measure q = Measure::exact(tlbtest::random_domain(rng, g));
      const Measure r = Measure::exact(tlbtest::random_domain(rng, g));
      const double pq = discrepancy(cls, loss, p, q);
      CHECK(pq == discrepancy(cls, loss, q, p));
      CHECK(pq <= discrepancy(cls, loss, p, r) +
                      discrepancy(cls, loss, r, q) + 1e-12);
    }
  }
}

TEST_CASE("discrepancy agrees with the pair-table oracle") {
  SplitMix64 rng(28);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = tlbtest::random_ground(rng, 5);
    const auto cls = tlbtest::random_binary_class(rng, g, 12);
    const DiscreteDomain a = tlbtest::random_domain(rng, g);
    const DiscreteDomain b = tlbtest::random_domain(rng, g);
    for (const LossSpec& loss : {LossSpec::zero_one(), LossSpec::squared()}) {
      CHECK(discrepancy(cls, loss, Measure::exact(a), Measure::exact(b)) ==
            doctest::Approx(tlbtest::oracle_discrepancy(cls, loss, a.probs(),
                                                        b.probs()))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("empirical measures resolve to frequency vectors") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0, 2.0});
  const UnlabeledSample u(g, {0, 0, 2, 2, 2, 1, 2, 2});
  const Measure m = Measure::empirical(u);
  CHECK(m.is_empirical());
  CHECK(m.probs() == std::vector<double>{0.25, 0.125, 0.625});
  CHECK_THROWS_AS(Measure::empirical(UnlabeledSample(g, {})),
                  PreconditionError);
}

TEST_CASE("Rademacher complexity on hand-checked classes") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const auto zeros = make_finite_class(g, {{0.0, 0.0}}, 1);
  const auto ones = make_finite_class(g, {{1.0, 1.0}}, 1);
  const auto both = make_finite_class(g, {{0.0, 0.0}, {1.0, 1.0}}, 1);

  const UnlabeledSample one_point(g, {0});
  const UnlabeledSample two_points(g, {0, 1});

  CHECK(rademacher_exact(zeros, two_points).value == 0.0);
  // Singleton {h == 1} on one point: (2/1) E|sigma| = 2.
  CHECK(rademacher_exact(ones, one_point).value == 2.0);
  // Both constants on two points: patterns (2,0,0,2)/4 = 1.
  CHECK(rademacher_exact(both, two_points).value == 1.0);
}

TEST_CASE("exact Rademacher mode refuses m beyond the cutoff") {
  auto g = tlbtest::make_ground_1d({0.0, 1.0});
  const auto cls = make_threshold_class(g);
  std::vector<std::uint32_t> indices(21, 0);
  CHECK_THROWS_AS(rademacher_exact(cls, UnlabeledSample(g, indices)),
                  ResourceError);
  CHECK_THROWS_AS(
      rademacher_monte_carlo(cls, UnlabeledSample(g, {0}), 0, 1),
      PreconditionError);
}

TEST_CASE("Monte Carlo Rademacher tracks the exact value") {
  SplitMix64 rng(29);
  for (int rep = 0; rep < 5; ++rep) {
    auto g = tlbtest::random_ground(rng, 6);
    const auto cls = tlbtest::random_binary_class(rng, g, 10);
    const DiscreteDomain d = tlbtest::random_domain(rng, g);
    const UnlabeledSample u = sample_unlabeled(d, 10, 31 + rep);
    const RademacherResult exact = rademacher_exact(cls, u);
    const RademacherResult mc = rademacher_monte_carlo(cls, u, 10000, 7 + rep);
    CHECK(std::abs(mc.value - exact.value) <= 3.0 * mc.std_error);
    CHECK(mc.std_error > 0.0);
  }
}
