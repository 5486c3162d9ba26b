// core/domain.hpp

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

#ifndef TLB_CORE_DOMAIN_HPP
#define TLB_CORE_DOMAIN_HPP

#include <cstdint>
#include <vector>

#include "core/hypothesis.hpp"

namespace tlb {

// Probability vectors must sum to 1 within this tolerance; smaller
// deviations are renormalized, larger ones rejected.
inline constexpr double kProbSumTolerance = 1e-12;

/// Finite-support distribution over a GroundSet paired with a labeling
/// function. Expected risks against it are exact finite sums.
class DiscreteDomain {
 public:
  DiscreteDomain(GroundSet::Ptr ground, std::vector<double> probs,
                 Hypothesis label_fn);

  const GroundSet::Ptr& ground() const noexcept { return ground_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  const Hypothesis& label_fn() const noexcept { return label_fn_; }
  std::size_t size() const noexcept { return probs_.size(); }

 private:
  GroundSet::Ptr ground_;
  std::vector<double> probs_;
  Hypothesis label_fn_;
};

/// Multiset of (ground index, label) pairs in draw order.
class LabeledSample {
 public:
  struct Entry {
    std::uint32_t index;
    double label;
  };

  LabeledSample(GroundSet::Ptr ground, std::vector<Entry> entries);

  const GroundSet::Ptr& ground() const noexcept { return ground_; }
  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  GroundSet::Ptr ground_;
  std::vector<Entry> entries_;
};

/// Multiset of ground indices in draw order.
class UnlabeledSample {
 public:
  UnlabeledSample(GroundSet::Ptr ground, std::vector<std::uint32_t> indices);

  const GroundSet::Ptr& ground() const noexcept { return ground_; }
  const std::vector<std::uint32_t>& indices() const noexcept {
    return indices_;
  }
  std::size_t size() const noexcept { return indices_.size(); }

 private:
  GroundSet::Ptr ground_;
  std::vector<std::uint32_t> indices_;
};

/// Exact expected 0-1 risk E_{x~D} |h(x) - g(x)|.
double expected_risk(const DiscreteDomain& domain, const Hypothesis& h,
                     const Hypothesis& g);

/// Risk against the domain's own labeling function.
double expected_risk(const DiscreteDomain& domain, const Hypothesis& h);

/// Mean 0-1 loss (1/m) sum |h(x_i) - y_i| over a non-empty sample.
double empirical_risk(const LabeledSample& sample, const Hypothesis& h);

struct Mixture {
  DiscreteDomain domain;
  /// True when component labeling functions disagree, in which case the
  /// mixture is meaningful as a marginal only (its label_fn is copied from
  /// the first component).
  bool marginal_only;
};

/// Convex combination of the component marginals. Weights must be
/// nonnegative and sum to 1 within kProbSumTolerance.
Mixture mixture_domain(const std::vector<DiscreteDomain>& domains,
                       const std::vector<double>& weights);

/// m i.i.d. draws with deterministic labels y = label_fn(x). Identical
/// (domain, m, seed) gives an identical sample.
LabeledSample sample_labeled(const DiscreteDomain& domain, std::size_t m,
                             std::uint64_t seed);

UnlabeledSample sample_unlabeled(const DiscreteDomain& domain, std::size_t m,
                                 std::uint64_t seed);

}  // namespace tlb

#endif  // TLB_CORE_DOMAIN_HPP
