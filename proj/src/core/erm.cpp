// core/erm.cpp

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

#include "core/erm.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

#include "core/errors.hpp"

namespace tlb {

double weighted_objective(const WeightedRiskSpec& spec, const Hypothesis& h) {
  if (spec.terms.empty())
    throw StructuralError("weighted risk spec requires at least one term");
  double total = 0.0;
  for (const RiskTerm& term : spec.terms) {
    if (!std::isfinite(term.weight) || term.weight < 0.0)
      throw PreconditionError("risk weights must be finite and nonnegative");
    const double risk = std::visit(
        [&h](const auto& src) -> double {
          using T = std::decay_t<decltype(src)>;
          if constexpr (std::is_same_v<T, LabeledSample>)
            return empirical_risk(src, h);
          else
            return expected_risk(src, h);
        },
        term.source);
    total += term.weight * risk;
  }
  return total;
}

ErmResult erm(const WeightedRiskSpec& spec, const HypothesisClass& cls) {
  std::size_t best = 0;
  double best_value = weighted_objective(spec, cls.member(0));
  std::size_t ties = 1;
  for (std::size_t i = 1; i < cls.size(); ++i) {
    const double value = weighted_objective(spec, cls.member(i));
    if (value < best_value) {
      best = i;
      best_value = value;
      ties = 1;
    } else if (value == best_value) {
      ++ties;
    }
  }
  return {best, cls.member(best), best_value, ties};
}

IdealRisk ideal_risk(
    const std::vector<std::pair<double, DiscreteDomain>>& terms,
    const HypothesisClass& cls) {
  WeightedRiskSpec spec;
  spec.terms.reserve(terms.size());
  for (const auto& [w, domain] : terms)
    spec.terms.push_back({w, domain});
  const ErmResult r = erm(spec, cls);
  return {r.objective, r.index, r.hypothesis};
}

std::vector<double> alpha_mu_source_weights(const std::vector<double>& alpha,
                                            double mu) {
  const std::size_t k = alpha.size();
  if (k < 2)
    throw PreconditionError("alpha-mu weights require K >= 2 sources");
  if (!(mu > 0.0 && mu < 1.0))
    throw PreconditionError("mu must lie in (0, 1)");
  std::vector<double> weights(k);
  for (std::size_t i = 0; i < k; ++i)
    weights[i] = alpha[i] * mu +
                 (1.0 - alpha[i]) * (1.0 - mu) / static_cast<double>(k - 1);
  return weights;
}

namespace {

void validate_convex_weights(const std::vector<double>& alpha,
                             std::size_t expected) {
  if (alpha.size() != expected)
    throw StructuralError("one weight per hypothesis required");
  double sum = 0.0;
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw PreconditionError("ensemble weights must be finite, nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance)
    throw PreconditionError("ensemble weights must sum to 1 within 1e-12");
}

}  // namespace

Hypothesis multisource_ensemble(const std::vector<Hypothesis>& hypotheses,
                                const std::vector<double>& alpha) {
  if (hypotheses.empty())
    throw StructuralError("ensemble requires at least one hypothesis");
  validate_convex_weights(alpha, hypotheses.size());
  const auto& ground = hypotheses.front().ground();
  std::vector<double> out(ground->size(), 0.0);
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    require_aligned(ground, hypotheses[i].ground());
    for (std::size_t p = 0; p < out.size(); ++p)
      out[p] += alpha[i] * hypotheses[i][p];
  }
  // Convex combinations of [0,1] values stay in range up to roundoff.
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return Hypothesis(ground, std::move(out));
}

Hypothesis multisource_ensemble(const std::vector<ErmResult>& per_source,
                                const std::vector<double>& alpha) {
  std::vector<Hypothesis> hyps;
  hyps.reserve(per_source.size());
  for (const auto& r : per_source) hyps.push_back(r.hypothesis);
  return multisource_ensemble(hyps, alpha);
}

}  // namespace tlb
