// core/divergence.cpp

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

#include "core/divergence.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tlb {

Measure Measure::exact(const DiscreteDomain& domain) {
  return Measure(domain.ground(), domain.probs(), /*empirical=*/false);
}

Measure Measure::empirical(const UnlabeledSample& sample) {
  if (sample.size() == 0)
    throw PreconditionError("empirical measure requires a non-empty sample");
  std::vector<double> probs(sample.ground()->size(), 0.0);
  const double w = 1.0 / static_cast<double>(sample.size());
  for (std::uint32_t i : sample.indices()) probs[i] += w;
  return Measure(sample.ground(), std::move(probs), /*empirical=*/true);
}

namespace {

void require_binary(const HypothesisClass& cls, const char* what) {
  if (!cls.all_binary())
    throw PreconditionError(std::string(what) + " requires a binary class");
}

void require_measures_over(const HypothesisClass& cls, const Measure& p,
                           const Measure& q) {
  require_aligned(cls.ground(), p.ground());
  require_aligned(cls.ground(), q.ground());
}

}  // namespace

double hdh_divergence(const HypothesisClass& cls, const Measure& p,
                      const Measure& q) {
  require_binary(cls, "hdh_divergence");
  require_measures_over(cls, p, q);
  const std::size_t n = cls.ground()->size();
  double best = 0.0;  // the pair (h, h) realizes gap 0
  for (std::size_t a = 0; a < cls.size(); ++a) {
    const auto& ha = cls.member(a).outputs();
    for (std::size_t b = a + 1; b < cls.size(); ++b) {
      const auto& hb = cls.member(b).outputs();
      double gap = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ha[i] != hb[i]) gap += p.probs()[i] - q.probs()[i];
      }
      gap = std::abs(gap);
      if (gap > best) best = gap;
    }
  }
  return 2.0 * best;
}

double key_inequality_violation(const HypothesisClass& cls,
                                const DiscreteDomain& source,
                                const DiscreteDomain& target) {
  require_binary(cls, "key_inequality_violation");
  const double half_div =
      0.5 * hdh_divergence(cls, Measure::exact(source), Measure::exact(target));
  double worst = -half_div;  // the pair (h, h) has zero risk gap
  for (std::size_t a = 0; a < cls.size(); ++a) {
    for (std::size_t b = a + 1; b < cls.size(); ++b) {
      const double gap =
          std::abs(expected_risk(source, cls.member(a), cls.member(b)) -
                   expected_risk(target, cls.member(a), cls.member(b)));
      if (gap - half_div > worst) worst = gap - half_div;
    }
  }
  return worst;
}

double pairwise_loss(const LossSpec& loss, const Measure& p,
                     const Hypothesis& h, const Hypothesis& h2) {
  require_aligned(p.ground(), h.ground());
  require_aligned(p.ground(), h2.ground());
  double total = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    total += p.probs()[i] * loss(h[i], h2[i]);
  return total;
}

double discrepancy(const HypothesisClass& cls, const LossSpec& loss,
                   const Measure& p, const Measure& q) {
  require_measures_over(cls, p, q);
  const std::size_t n = cls.ground()->size();
  double best = 0.0;
  for (std::size_t a = 0; a < cls.size(); ++a) {
    const auto& ha = cls.member(a).outputs();
    for (std::size_t b = a + 1; b < cls.size(); ++b) {
      const auto& hb = cls.member(b).outputs();
      double lp = 0.0, lq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double l = loss(ha[i], hb[i]);
        lp += p.probs()[i] * l;
        lq += q.probs()[i] * l;
      }
      const double gap = std::abs(lp - lq);
      if (gap > best) best = gap;
    }
  }
  return best;
}

namespace {

// Member outputs evaluated at the sample's points, one row per member.
std::vector<std::vector<double>> sampled_outputs(const HypothesisClass& cls,
                                                 const UnlabeledSample& s) {
  require_aligned(cls.ground(), s.ground());
  if (s.size() == 0)
    throw PreconditionError("Rademacher complexity requires m >= 1");
  std::vector<std::vector<double>> rows(cls.size());
  for (std::size_t h = 0; h < cls.size(); ++h) {
    rows[h].resize(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
      rows[h][k] = cls.member(h)[s.indices()[k]];
  }
  return rows;
}

double sup_abs(const std::vector<double>& sums) {
  double best = 0.0;
  for (double v : sums) {
    const double a = std::abs(v);
    if (a > best) best = a;
  }
  return best;
}

}  // namespace

RademacherResult rademacher_exact(const HypothesisClass& cls,
                                  const UnlabeledSample& sample) {
  const auto rows = sampled_outputs(cls, sample);
  const std::size_t m = sample.size();
  if (m > kRademacherExactCutoff)
    throw ResourceError("exact Rademacher mode is limited to m <= 20");

  // Gray-code walk over sign patterns: one sign flip per step keeps the
  // per-member running sums O(1) to update.
  std::vector<double> sums(cls.size());
  for (std::size_t h = 0; h < cls.size(); ++h) {
    double s = 0.0;
    for (double v : rows[h]) s += v;
    sums[h] = s;
  }
  const std::uint64_t total = std::uint64_t{1} << m;
  std::uint64_t negmask = 0;  // bit set means sigma_k = -1
  double acc = sup_abs(sums);
  for (std::uint64_t t = 1; t < total; ++t) {
    const unsigned k = static_cast<unsigned>(std::countr_zero(t));
    negmask ^= std::uint64_t{1} << k;
    const double step = (negmask >> k & 1) ? -2.0 : 2.0;
    for (std::size_t h = 0; h < cls.size(); ++h) sums[h] += step * rows[h][k];
    acc += sup_abs(sums);
  }
  const double mean = acc / static_cast<double>(total);
  return {2.0 * mean / static_cast<double>(m), 0.0, total};
}

RademacherResult rademacher_monte_carlo(const HypothesisClass& cls,
                                        const UnlabeledSample& sample,
                                        std::size_t draws,
                                        std::uint64_t seed) {
  if (draws == 0)
    throw PreconditionError("Monte Carlo Rademacher requires draws >= 1");
  const auto rows = sampled_outputs(cls, sample);
  const std::size_t m = sample.size();
  rng::SplitMix64 gen(seed);
  std::vector<int> sigma(m);
  std::vector<double> values;
  values.reserve(draws);
  double mean = 0.0;
  for (std::size_t t = 0; t < draws; ++t) {
    for (std::size_t k = 0; k < m; ++k) sigma[k] = gen.next_sign();
    double sup = 0.0;
    for (std::size_t h = 0; h < cls.size(); ++h) {
      double s = 0.0;
      for (std::size_t k = 0; k < m; ++k) s += sigma[k] * rows[h][k];
      s = std::abs(s);
      if (s > sup) sup = s;
    }
    const double v = 2.0 * sup / static_cast<double>(m);
    values.push_back(v);
    mean += v;
  }
  mean /= static_cast<double>(draws);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  const double sd =
      draws > 1 ? std::sqrt(var / static_cast<double>(draws - 1)) : 0.0;
  return {mean, sd / std::sqrt(static_cast<double>(draws)), draws};
}

}  // namespace tlb
