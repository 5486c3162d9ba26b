// core/erm.hpp

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

#ifndef TLB_CORE_ERM_HPP
#define TLB_CORE_ERM_HPP

#include <variant>
#include <vector>

#include "core/domain.hpp"
#include "core/hypothesis.hpp"

namespace tlb {

/// One weighted risk term: empirical (sample) or expected (domain).
struct RiskTerm {
  double weight;
  std::variant<LabeledSample, DiscreteDomain> source;
};

/// Weighted list of risks; weights are nonnegative and need not sum to 1.
struct WeightedRiskSpec {
  std::vector<RiskTerm> terms;
};

/// sum_j w_j * risk_j(h), where risk_j is empirical or expected per term.
double weighted_objective(const WeightedRiskSpec& spec, const Hypothesis& h);

struct ErmResult {
  std::size_t index;
  Hypothesis hypothesis;
  double objective;
  /// Number of members attaining the minimum; the returned index is the
  /// smallest among them.
  std::size_t tie_count;
};

/// Exact empirical risk minimization by full enumeration of the class.
ErmResult erm(const WeightedRiskSpec& spec, const HypothesisClass& cls);

struct IdealRisk {
  double value;
  std::size_t index;
  Hypothesis hypothesis;
};

/// min over members of sum_j w_j * expected_risk(D_j, h): the lambda family
/// (lambda, lambda_alpha, lambda_{alpha,mu}) for the callers' choice of
/// weighted domains.
IdealRisk ideal_risk(const std::vector<std::pair<double, DiscreteDomain>>& terms,
                     const HypothesisClass& cls);

/// Domain weights for the mu-concentrated multi-source ideal risk: target
/// gets weight 1 and source i gets alpha_i*mu + (1-alpha_i)*(1-mu)/(K-1).
std::vector<double> alpha_mu_source_weights(const std::vector<double>& alpha,
                                            double mu);

/// Pointwise convex combination sum_i alpha_i h_i. Binary in general only
/// when K = 1.
Hypothesis multisource_ensemble(const std::vector<ErmResult>& per_source,
                                const std::vector<double>& alpha);
Hypothesis multisource_ensemble(const std::vector<Hypothesis>& hypotheses,
                                const std::vector<double>& alpha);

}  // namespace tlb

#endif  // TLB_CORE_ERM_HPP
