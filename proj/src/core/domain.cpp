// core/domain.cpp

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

#include "core/domain.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace tlb {

namespace {

std::vector<double> validated_probs(std::vector<double> probs,
                                    std::size_t expected_size) {
  if (probs.size() != expected_size)
    throw StructuralError("probability vector must align with the ground set");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw PreconditionError("probabilities must be finite and nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    throw PreconditionError("probabilities must sum to 1 within 1e-12");
  for (double& p : probs) p /= sum;
  return probs;
}

// Inverse-CDF sampling over the canonical index order.
std::vector<std::uint32_t> draw_indices(const std::vector<double>& probs,
                                        std::size_t m, std::uint64_t seed) {
  if (m == 0) throw PreconditionError("sample size must be >= 1");
  std::vector<double> cdf(probs.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  rng::SplitMix64 gen(seed);
  std::vector<std::uint32_t> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double u = gen.next_unit();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    out[k] = static_cast<std::uint32_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  }
  return out;
}

}  // namespace

DiscreteDomain::DiscreteDomain(GroundSet::Ptr ground,
                               std::vector<double> probs, Hypothesis label_fn)
    : ground_(std::move(ground)),
      probs_(validated_probs(std::move(probs),
                             ground_ ? ground_->size() : 0)),
      label_fn_(std::move(label_fn)) {
  require_aligned(ground_, label_fn_.ground());
}

LabeledSample::LabeledSample(GroundSet::Ptr ground, std::vector<Entry> entries)
    : ground_(std::move(ground)), entries_(std::move(entries)) {
  if (!ground_) throw StructuralError("sample requires a ground set");
  for (const Entry& e : entries_) {
    if (e.index >= ground_->size())
      throw StructuralError("sample index out of range");
    if (!(e.label >= 0.0 && e.label <= 1.0))
      throw StructuralError("sample labels must lie in [0,1]");
  }
}

UnlabeledSample::UnlabeledSample(GroundSet::Ptr ground,
                                 std::vector<std::uint32_t> indices)
    : ground_(std::move(ground)), indices_(std::move(indices)) {
  if (!ground_) throw StructuralError("sample requires a ground set");
  for (std::uint32_t i : indices_) {
    if (i >= ground_->size())
      throw StructuralError("sample index out of range");
  }
}

double expected_risk(const DiscreteDomain& domain, const Hypothesis& h,
                     const Hypothesis& g) {
  require_aligned(domain.ground(), h.ground());
  require_aligned(domain.ground(), g.ground());
  double risk = 0.0;
  for (std::size_t i = 0; i < domain.size(); ++i)
    risk += domain.probs()[i] * std::abs(h[i] - g[i]);
  return risk;
}

double expected_risk(const DiscreteDomain& domain, const Hypothesis& h) {
  return expected_risk(domain, h, domain.label_fn());
}

double empirical_risk(const LabeledSample& sample, const Hypothesis& h) {
  require_aligned(sample.ground(), h.ground());
  if (sample.size() == 0)
    throw PreconditionError("empirical risk requires a non-empty sample");
  double total = 0.0;
  for (const auto& e : sample.entries())
    total += std::abs(h[e.index] - e.label);
  return total / static_cast<double>(sample.size());
}

Mixture mixture_domain(const std::vector<DiscreteDomain>& domains,
                       const std::vector<double>& weights) {
  if (domains.empty())
    throw StructuralError("mixture requires at least one domain");
  if (weights.size() != domains.size())
    throw StructuralError("one weight per domain required");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw PreconditionError("mixture weights must be finite, nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    throw PreconditionError("mixture weights must sum to 1 within 1e-12");

  const auto& ground = domains.front().ground();
  bool labels_identical = true;
  for (std::size_t j = 1; j < domains.size(); ++j) {
    require_aligned(ground, domains[j].ground());
    if (domains[j].label_fn().outputs() !=
        domains.front().label_fn().outputs())
      labels_identical = false;
  }

  std::vector<double> probs(ground->size(), 0.0);
  for (std::size_t j = 0; j < domains.size(); ++j) {
    const double w = weights[j] / sum;
    for (std::size_t i = 0; i < probs.size(); ++i)
      probs[i] += w * domains[j].probs()[i];
  }
  return Mixture{DiscreteDomain(ground, std::move(probs),
                                domains.front().label_fn()),
                 !labels_identical};
}

LabeledSample sample_labeled(const DiscreteDomain& domain, std::size_t m,
                             std::uint64_t seed) {
  const auto indices = draw_indices(domain.probs(), m, seed);
  std::vector<LabeledSample::Entry> entries;
  entries.reserve(m);
  for (std::uint32_t i : indices)
    entries.push_back({i, domain.label_fn()[i]});
  return LabeledSample(domain.ground(), std::move(entries));
}

UnlabeledSample sample_unlabeled(const DiscreteDomain& domain, std::size_t m,
                                 std::uint64_t seed) {
  return UnlabeledSample(domain.ground(), draw_indices(domain.probs(), m, seed));
}

}  // namespace tlb
