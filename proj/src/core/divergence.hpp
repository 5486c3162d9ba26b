// core/divergence.hpp

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

#ifndef TLB_CORE_DIVERGENCE_HPP
#define TLB_CORE_DIVERGENCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/hypothesis.hpp"

namespace tlb {

/// A probability vector over a ground set: either the exact marginal of a
/// DiscreteDomain or the empirical marginal of an unlabeled sample.
class Measure {
 public:
  static Measure exact(const DiscreteDomain& domain);
  static Measure empirical(const UnlabeledSample& sample);

  const GroundSet::Ptr& ground() const noexcept { return ground_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  bool is_empirical() const noexcept { return empirical_; }

 private:
  Measure(GroundSet::Ptr ground, std::vector<double> probs, bool empirical)
      : ground_(std::move(ground)),
        probs_(std::move(probs)),
        empirical_(empirical) {}

  GroundSet::Ptr ground_;
  std::vector<double> probs_;
  bool empirical_;
};

enum class LossKind { zero_one_abs, squared };

/// Loss over [0,1] outputs with its range bound M.
struct LossSpec {
  LossKind kind;
  double bound;

  static LossSpec zero_one() { return {LossKind::zero_one_abs, 1.0}; }
  static LossSpec squared() { return {LossKind::squared, 1.0}; }

  double operator()(double a, double b) const noexcept {
    const double d = a - b;
    return kind == LossKind::squared ? d * d : (d < 0 ? -d : d);
  }
  /// True iff the loss is symmetric and obeys the triangle inequality.
  bool is_metric() const noexcept { return kind == LossKind::zero_one_abs; }
  const char* name() const noexcept {
    return kind == LossKind::squared ? "squared" : "zero_one_abs";
  }
};

/// Symmetric-difference divergence: 2 sup_A |P(A) - Q(A)| over supports of
/// h XOR h', exact by enumeration of all member pairs. Range [0, 2].
double hdh_divergence(const HypothesisClass& cls, const Measure& p,
                      const Measure& q);

/// max over pairs of |eps_S(h,h') - eps_T(h,h')| - d/2, where d is the
/// exact divergence between the two marginals. Nonpositive up to roundoff.
double key_inequality_violation(const HypothesisClass& cls,
                                const DiscreteDomain& source,
                                const DiscreteDomain& target);

/// Discrepancy distance: max over member pairs of
/// |L_P(h,h') - L_Q(h,h')|, exact by enumeration.
double discrepancy(const HypothesisClass& cls, const LossSpec& loss,
                   const Measure& p, const Measure& q);

/// Expected pairwise loss L_P(h, h') = sum_i P_i * loss(h_i, h'_i).
double pairwise_loss(const LossSpec& loss, const Measure& p,
                     const Hypothesis& h, const Hypothesis& h2);

// Exact Rademacher enumeration walks all 2^m sign patterns; past this
// cutoff the call is refused rather than left to run for hours.
inline constexpr std::size_t kRademacherExactCutoff = 20;

struct RademacherResult {
  double value;
  /// Standard error of the Monte Carlo mean; 0 for exact mode.
  double std_error;
  std::size_t draws;
};

/// (2/m) E_sigma sup_h |sum_i sigma_i h(x_i)|, the convention with the
/// absolute value kept inside the sup. Exact mode enumerates all sign
/// patterns (m <= kRademacherExactCutoff); the sup is always exact.
RademacherResult rademacher_exact(const HypothesisClass& cls,
                                  const UnlabeledSample& sample);

RademacherResult rademacher_monte_carlo(const HypothesisClass& cls,
                                        const UnlabeledSample& sample,
                                        std::size_t draws, std::uint64_t seed);

}  // namespace tlb

#endif  // TLB_CORE_DIVERGENCE_HPP
