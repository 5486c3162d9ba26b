// core/harness.hpp

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

#ifndef TLB_CORE_HARNESS_HPP
#define TLB_CORE_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/config.hpp"

namespace tlb {

enum class Command { divergence, erm, bound, verify, compare, htl };

Command parse_command(const std::string& name);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<double> delta;
  std::optional<std::string> theorem;
};

/// Trial-by-trial record of bound satisfaction for one theorem.
struct CoverageReport {
  std::string theorem_id;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double violation_rate = 0.0;
  struct Trial {
    std::size_t index;
    std::uint64_t seed;
    BoundReport report;
  };
  std::vector<Trial> per_trial;
  Json config_echo;
  std::uint64_t master_seed = 0;

  Json to_json() const;
  std::string trials_csv() const;
};

/// Runs the sample-dependent theorem named by `theorem` ("1", "2", "3" or
/// "7") for cfg.trials seeded trials and aggregates violations.
CoverageReport verify_bound(const ExperimentConfig& cfg,
                            const std::string& theorem);

/// Per-trial comparison of the two multi-source bounds on identical draws.
struct CompareReport {
  struct Trial {
    std::size_t index;
    std::uint64_t seed;
    double thm3_rhs;
    double thm7_rhs;
    double lhs3;
    double lhs7;
    char tighter;  // '3', '7' or '=' on exact ties
  };
  std::vector<Trial> per_trial;
  double mu = 0.5;
  std::size_t thm7_tighter = 0;
  double thm7_tighter_fraction = 0.0;
  /// Optional sweep: one summary row per grid value of mu.
  struct SweepRow {
    double mu;
    double thm7_tighter_fraction;
    double mean_thm3_rhs;
    double mean_thm7_rhs;
  };
  std::vector<SweepRow> sweep;
  Json config_echo;
  std::uint64_t master_seed = 0;

  Json to_json() const;
  std::string trials_csv() const;
};

CompareReport compare_multisource(const ExperimentConfig& cfg);

/// A fully rendered run: the JSON report plus optional per-row CSV.
struct RunResult {
  Json report;
  std::optional<std::string> trials_csv;
  std::string summary;
};

RunResult run_command(ExperimentConfig cfg, Command command,
                      const RunOverrides& overrides);

/// Writes report.json / trials.csv (per `format`: "json", "csv" or "all")
/// into `dir`, creating it if needed. Returns the written paths.
std::vector<std::string> write_outputs(const RunResult& result,
                                       const std::string& dir,
                                       const std::string& format);

/// Load + run + write in one step; the CLI-facing entry point.
RunResult run_config_file(const std::string& path, const std::string& command,
                          const RunOverrides& overrides,
                          const std::string& output_dir,
                          const std::string& format);

}  // namespace tlb

#endif  // TLB_CORE_HARNESS_HPP
