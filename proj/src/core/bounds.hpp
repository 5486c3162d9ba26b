// core/bounds.hpp

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

#ifndef TLB_CORE_BOUNDS_HPP
#define TLB_CORE_BOUNDS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core/divergence.hpp"
#include "core/domain.hpp"
#include "core/erm.hpp"
#include "core/jsonio.hpp"

namespace tlb {

// Slack used when deciding whether a realized left side satisfies a bound;
// covers floating-point reassociation only, never statistical error.
inline constexpr double kHoldsTolerance = 1e-12;

/// One theorem's right-hand side broken into named additive terms, plus
/// the realized left side when the target domain is available.
struct BoundReport {
  std::string theorem_id;
  std::vector<std::pair<std::string, double>> terms;  // ordered
  double rhs_total = 0.0;
  std::optional<double> lhs_realized;
  std::optional<bool> holds;
  Json inputs_echo = Json::object();

  /// Sum of the term values; must equal rhs_total to 1e-12 relative.
  double recomposed() const;

  void set_lhs(double lhs);

  Json to_json() const;
  /// Stable CSV schema: theorem_id, one column per term, rhs_total,
  /// lhs_realized, holds, inputs (compact JSON).
  std::string csv_header() const;
  std::string csv_row() const;
};

/// Finalizes rhs_total from the terms already pushed.
BoundReport make_report(std::string theorem_id,
                        std::vector<std::pair<std::string, double>> terms,
                        Json inputs_echo);

enum class ComplexityKind { A, B, C };

/// VC complexity penalties, natural logarithms throughout:
///   A: sqrt(4 (d ln(2em/d) + ln(4/delta)) / m)        (labeled, risk)
///   B: sqrt((d ln(2m) - ln delta) / (2m))             (weighted samples)
///   C: 4 sqrt((2d ln(2m') + ln(4/delta)) / m')        (unlabeled, divergence)
double complexity_term(ComplexityKind kind, long long m, int d, double delta);

/// eps_T(h) <= eps_S(h) + d/2 + lambda, all quantities exact. Requires a
/// binary class containing h.
BoundReport lemma1_rhs(const HypothesisClass& cls, const Hypothesis& h,
                       const DiscreteDomain& source,
                       const DiscreteDomain& target);

/// Single-source VC bound with empirical source risk and empirical
/// divergence between equal-size unlabeled samples. lambda is injected.
BoundReport thm1_rhs(const HypothesisClass& cls, const Hypothesis& h,
                     const LabeledSample& source_labeled,
                     const UnlabeledSample& unlabeled_source,
                     const UnlabeledSample& unlabeled_target, double delta,
                     double lambda_value,
                     const DiscreteDomain* target_for_lhs);

/// Mixed labeled sample for the alpha-weighted single-source bound.
struct MixedSample {
  LabeledSample target_part;
  LabeledSample source_part;
};

/// Alpha-weighted ERM bound; computes the empirical minimizer of
/// alpha*emp_target + (1-alpha)*emp_source internally and realizes the lhs
/// against the target domain.
BoundReport thm2_rhs(const HypothesisClass& cls, const MixedSample& sample,
                     const UnlabeledSample& unlabeled_source,
                     const UnlabeledSample& unlabeled_target, double alpha,
                     double delta, const DiscreteDomain& target,
                     double lambda_value);

/// rhs of the alpha-weighted bound as a function of alpha with everything
/// else fixed; used for trade-off sweeps without recomputing samples.
std::vector<std::pair<double, double>> thm2_alpha_sweep(
    const HypothesisClass& cls, const MixedSample& sample,
    const UnlabeledSample& unlabeled_source,
    const UnlabeledSample& unlabeled_target, const std::vector<double>& alphas,
    double delta, const DiscreteDomain& target, double lambda_value);

/// Multi-source weighted-ERM bound; divergence term uses the exact mixture
/// marginal against the target. lambda_alpha is injected.
BoundReport thm3_rhs(const HypothesisClass& cls,
                     const std::vector<LabeledSample>& sources,
                     const std::vector<double>& alpha, double delta,
                     const DiscreteDomain& alpha_mixture,
                     const DiscreteDomain& target, double lambda_alpha);

/// Discrepancy bound for a symmetric triangle-inequality loss; holds
/// deterministically (all quantities exact).
BoundReport thm4_rhs(const HypothesisClass& cls, const LossSpec& loss,
                     const Hypothesis& h, const DiscreteDomain& source,
                     const DiscreteDomain& target);

/// Rademacher mode for the empirical discrepancy bound.
struct RademacherMode {
  bool exact = true;
  std::size_t draws = 10000;
  std::uint64_t seed = 0;
};

/// Empirical discrepancy bound with Rademacher terms; constant (4 + 1/2)
/// implemented as 4.5 exactly as printed.
BoundReport thm5_rhs(const HypothesisClass& cls, const Hypothesis& h,
                     const DiscreteDomain& source, const DiscreteDomain& target,
                     const UnlabeledSample& source_sample,
                     const UnlabeledSample& target_sample, double delta,
                     const RademacherMode& mode);

/// Per-source inputs for the mu-concentrated multi-source bound.
struct SourceBundle {
  LabeledSample labeled;
  UnlabeledSample unlabeled;
};

/// Multi-source bound with peer evaluation: each per-source hypothesis is
/// scored on its own source (weight mu) and on every peer source (weight
/// (1-mu)/(K-1)). lambda_{alpha,mu} is injected. Requires K >= 2 and all
/// unlabeled samples of one size m'.
BoundReport thm7_rhs(const HypothesisClass& cls,
                     const std::vector<SourceBundle>& sources,
                     const UnlabeledSample& unlabeled_target,
                     const std::vector<double>& alpha, double mu, double delta,
                     const std::vector<Hypothesis>& per_source_hyps,
                     double lambda_alpha_mu,
                     const DiscreteDomain* target_for_lhs);

}  // namespace tlb

#endif  // TLB_CORE_BOUNDS_HPP
