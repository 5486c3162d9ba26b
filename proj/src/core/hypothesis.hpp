// core/hypothesis.hpp

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

#ifndef TLB_CORE_HYPOTHESIS_HPP
#define TLB_CORE_HYPOTHESIS_HPP

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

namespace tlb {

/// Finite input space: an ordered list of distinct real vectors. The order
/// is canonical (lexicographic); constructors sort and reject duplicates.
/// Hypotheses, distributions and samples are all index-aligned with one
/// GroundSet, which makes every expectation in this library a finite sum.
class GroundSet {
 public:
  using Ptr = std::shared_ptr<const GroundSet>;

  /// Sorts `points` into canonical order. Throws StructuralError on an
  /// empty list, ragged dimensions or duplicate points.
  static Ptr create(std::vector<std::vector<double>> points);

  /// Like create(), but also returns the permutation that maps the caller's
  /// original indices to canonical indices, so parallel arrays (probs,
  /// labels) can be reordered consistently: canonical[i] = original[perm[i]].
  static std::pair<Ptr, std::vector<std::size_t>> create_with_permutation(
      std::vector<std::vector<double>> points);

  std::size_t size() const noexcept { return points_.size(); }
  std::size_t dim() const noexcept { return points_.front().size(); }
  const std::vector<double>& point(std::size_t i) const { return points_[i]; }
  const std::vector<std::vector<double>>& points() const noexcept {
    return points_;
  }

  bool same_points(const GroundSet& other) const noexcept {
    return points_ == other.points_;
  }

 private:
  explicit GroundSet(std::vector<std::vector<double>> points)
      : points_(std::move(points)) {}

  std::vector<std::vector<double>> points_;
};

/// Two ground references are aligned if they are the same object or hold
/// identical point lists.
bool aligned(const GroundSet::Ptr& a, const GroundSet::Ptr& b) noexcept;

/// Throws StructuralError unless aligned.
void require_aligned(const GroundSet::Ptr& a, const GroundSet::Ptr& b);

/// A hypothesis (or labeling function) materialized as its output vector
/// over a GroundSet, values in [0,1]. Immutable after construction.
class Hypothesis {
 public:
  Hypothesis(GroundSet::Ptr ground, std::vector<double> outputs);

  double operator[](std::size_t i) const { return outputs_[i]; }
  const std::vector<double>& outputs() const noexcept { return outputs_; }
  const GroundSet::Ptr& ground() const noexcept { return ground_; }
  std::size_t size() const noexcept { return outputs_.size(); }

  /// True iff every output is exactly 0 or 1.
  bool binary() const noexcept { return binary_; }

 private:
  GroundSet::Ptr ground_;
  std::vector<double> outputs_;
  bool binary_;
};

/// Finite enumerable hypothesis class with declared (never inferred) VC
/// dimension. Members are duplicate-free as output vectors; first-seen
/// order is preserved and is the canonical member order used for every
/// argmin tie-break and reduction in the library.
class HypothesisClass {
 public:
  HypothesisClass(GroundSet::Ptr ground, std::vector<Hypothesis> members,
                  int vc_dim);

  std::size_t size() const noexcept { return members_.size(); }
  const Hypothesis& member(std::size_t i) const { return members_[i]; }
  const std::vector<Hypothesis>& members() const noexcept { return members_; }
  const GroundSet::Ptr& ground() const noexcept { return ground_; }
  int vc_dim() const noexcept { return vc_dim_; }

  /// True iff every member is binary.
  bool all_binary() const noexcept { return all_binary_; }

  /// Index of the member with this exact output vector, or npos.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t find(const Hypothesis& h) const noexcept;

 private:
  GroundSet::Ptr ground_;
  std::vector<Hypothesis> members_;
  int vc_dim_;
  bool all_binary_;
};

/// Per-point 0-1 losses |h(x_i) - f(x_i)|. Symmetric in its arguments.
std::vector<double> zero_one_risk_terms(const Hypothesis& h,
                                        const Hypothesis& f);

/// Pointwise XOR of two binary hypotheses. Throws PreconditionError when
/// either input is non-binary.
Hypothesis sym_diff(const Hypothesis& h, const Hypothesis& h2);

/// Canonical finite threshold class over a 1-D ground set: both
/// orientations of 1[s*(x - t) >= 0] with t at midpoints between
/// consecutive points plus one cut below the minimum and one above the
/// maximum. Duplicate output vectors removed; declared VC dimension 2.
HypothesisClass make_threshold_class(const GroundSet::Ptr& ground);

/// Explicit class from output vectors (each entry in [0,1]); duplicates
/// removed, order preserved.
HypothesisClass make_finite_class(const GroundSet::Ptr& ground,
                                  const std::vector<std::vector<double>>& output_vectors,
                                  int vc_dim);

}  // namespace tlb

#endif  // TLB_CORE_HYPOTHESIS_HPP
