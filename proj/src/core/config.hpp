// core/config.hpp

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

#ifndef TLB_CORE_CONFIG_HPP
#define TLB_CORE_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/domain.hpp"
#include "core/htl.hpp"
#include "core/hypothesis.hpp"
#include "core/jsonio.hpp"

namespace tlb {

enum class Scenario {
  single_source,
  alpha_mixed,
  multi_source,
  discrepancy,
  htl_stability,
};

const char* scenario_name(Scenario s);

/// Parsed experiment description. Field accessors validate lazily and
/// throw SchemaError with the offending key in the message.
struct ExperimentConfig {
  Scenario scenario;
  std::uint64_t seed = 0;
  std::size_t trials = 100;
  Json domains_spec;
  Json class_spec;
  Json params;
  Json htl_spec;
  Json raw;  // normalized config echoed into every report

  long long m() const;
  long long m_prime() const;
  long long n() const;  // target sample size for the discrepancy scenario
  double delta() const;
  double alpha_scalar() const;
  double mu() const;
  std::size_t threads() const;
  std::size_t rademacher_draws() const;
  /// Per-source weights; accepts a scalar-free "uniform" default when the
  /// key is absent.
  std::vector<double> alpha_vector(std::size_t k) const;
  std::vector<double> beta_vector(std::size_t k) const;
  double beta_scalar() const;
  std::optional<std::vector<double>> mu_grid() const;

  void override_seed(std::uint64_t s);
  void override_trials(std::size_t t);
  void override_delta(double d);
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Domains and class materialized for the classification scenarios.
struct Instance {
  GroundSet::Ptr ground;
  HypothesisClass cls;
  DiscreteDomain target;
  std::vector<DiscreteDomain> sources;
};

Instance build_instance(const ExperimentConfig& cfg);

/// HTL stability experiment: a target regression domain, a source
/// predictor, and a grid of (m, lambda_reg) cells sharing one truncation
/// level.
struct HtlInstance {
  htl::RegressionDomain target;
  std::shared_ptr<const htl::SourcePredictor> source;
  double truncation_c;
  struct Cell {
    std::size_t m;
    double lambda_reg;
  };
  std::vector<Cell> grid;
};

HtlInstance build_htl_instance(const ExperimentConfig& cfg);

/// Nearest integer with half-to-even tie break (the rounding used to turn
/// beta*m into sample counts).
long long round_half_even(double x);

/// Integer sample counts for proportions beta (sum 1) and total m: each
/// count starts at round_half_even(beta_j*m) and the total is fixed up
/// deterministically by largest residual, keeping every count >= 1.
std::vector<long long> apportion_counts(const std::vector<double>& beta,
                                        long long m);

}  // namespace tlb

#endif  // TLB_CORE_CONFIG_HPP
