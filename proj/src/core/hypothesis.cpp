// core/hypothesis.cpp

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

#include "core/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "core/errors.hpp"

namespace tlb {

namespace {

void validate_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw StructuralError("ground set must be non-empty");
  const std::size_t d = points.front().size();
  if (d == 0) throw StructuralError("ground points must have dimension >= 1");
  for (const auto& p : points) {
    if (p.size() != d)
      throw StructuralError("ground points must share one dimension");
    for (double v : p) {
      if (!std::isfinite(v))
        throw StructuralError("ground points must be finite");
    }
  }
}

}  // namespace

GroundSet::Ptr GroundSet::create(std::vector<std::vector<double>> points) {
  return create_with_permutation(std::move(points)).first;
}

std::pair<GroundSet::Ptr, std::vector<std::size_t>>
GroundSet::create_with_permutation(std::vector<std::vector<double>> points) {
  validate_points(points);
  std::vector<std::size_t> perm(points.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&points](std::size_t a, std::size_t b) {
    return points[a] < points[b];
  });
  std::vector<std::vector<double>> sorted;
  sorted.reserve(points.size());
  for (std::size_t i : perm) sorted.push_back(points[i]);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1] == sorted[i])
      throw StructuralError("ground points must be pairwise distinct");
  }
  return {Ptr(new GroundSet(std::move(sorted))), std::move(perm)};
}

bool aligned(const GroundSet::Ptr& a, const GroundSet::Ptr& b) noexcept {
  if (a == b) return a != nullptr;
  if (!a || !b) return false;
  return a->same_points(*b);
}

void require_aligned(const GroundSet::Ptr& a, const GroundSet::Ptr& b) {
  if (!aligned(a, b))
    throw StructuralError("operands are defined over different ground sets");
}

Hypothesis::Hypothesis(GroundSet::Ptr ground, std::vector<double> outputs)
    : ground_(std::move(ground)), outputs_(std::move(outputs)) {
  if (!ground_) throw StructuralError("hypothesis requires a ground set");
  if (outputs_.size() != ground_->size())
    throw StructuralError("hypothesis outputs must align with the ground set");
  binary_ = true;
  for (double v : outputs_) {
    if (!(v >= 0.0 && v <= 1.0))
      throw StructuralError("hypothesis outputs must lie in [0,1]");
    if (v != 0.0 && v != 1.0) binary_ = false;
  }
}

HypothesisClass::HypothesisClass(GroundSet::Ptr ground,
                                 std::vector<Hypothesis> members, int vc_dim)
    : ground_(std::move(ground)), vc_dim_(vc_dim) {
  if (vc_dim_ < 1) throw PreconditionError("vc_dim must be >= 1");
  if (members.empty())
    throw StructuralError("hypothesis class must be non-empty");
  std::set<std::vector<double>> seen;
  members_.reserve(members.size());
  for (auto& h : members) {
    require_aligned(ground_, h.ground());
    if (seen.insert(h.outputs()).second) members_.push_back(std::move(h));
  }
  all_binary_ = std::all_of(members_.begin(), members_.end(),
                            [](const Hypothesis& h) { return h.binary(); });
}

std::size_t HypothesisClass::find(const Hypothesis& h) const noexcept {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].outputs() == h.outputs()) return i;
  }
  return npos;
}

std::vector<double> zero_one_risk_terms(const Hypothesis& h,
                                        const Hypothesis& f) {
  require_aligned(h.ground(), f.ground());
  std::vector<double> terms(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    terms[i] = std::abs(h[i] - f[i]);
  return terms;
}

Hypothesis sym_diff(const Hypothesis& h, const Hypothesis& h2) {
  require_aligned(h.ground(), h2.ground());
  if (!h.binary() || !h2.binary())
    throw PreconditionError("sym_diff requires binary hypotheses");
  std::vector<double> out(h.size());
  for (std::size_t i = 0; i < h.size(); ++i)
    out[i] = (h[i] != h2[i]) ? 1.0 : 0.0;
  return Hypothesis(h.ground(), std::move(out));
}

HypothesisClass make_threshold_class(const GroundSet::Ptr& ground) {
  if (!ground) throw StructuralError("threshold class requires a ground set");
  if (ground->dim() != 1)
    throw PreconditionError(
        "threshold classes are only supported over 1-D ground sets");
  const std::size_t n = ground->size();
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = ground->point(i)[0];

  // Cut points: one below the minimum, midpoints, one above the maximum.
  std::vector<double> cuts;
  cuts.reserve(n + 1);
  cuts.push_back(xs.front() - 1.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    cuts.push_back(0.5 * (xs[i] + xs[i + 1]));
  cuts.push_back(xs.back() + 1.0);

  std::vector<Hypothesis> members;
  members.reserve(2 * cuts.size());
  for (int s : {+1, -1}) {
    for (double t : cuts) {
      std::vector<double> out(n);
      for (std::size_t i = 0; i < n; ++i) {
        const bool on = s > 0 ? (xs[i] - t >= 0.0) : (t - xs[i] >= 0.0);
        out[i] = on ? 1.0 : 0.0;
      }
      members.emplace_back(ground, std::move(out));
    }
  }
  return HypothesisClass(ground, std::move(members), /*vc_dim=*/2);
}

HypothesisClass make_finite_class(
    const GroundSet::Ptr& ground,
    const std::vector<std::vector<double>>& output_vectors, int vc_dim) {
  if (output_vectors.empty())
    throw StructuralError("finite class requires at least one output vector");
  std::vector<Hypothesis> members;
  members.reserve(output_vectors.size());
  for (const auto& v : output_vectors) members.emplace_back(ground, v);
  return HypothesisClass(ground, std::move(members), vc_dim);
}

}  // namespace tlb
