// capi.cpp

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

#include "tlbounds/tlbounds.h"

#include <new>
#include <optional>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/harness.hpp"
#include "core/rng.hpp"

struct tlb_run {
  std::optional<tlb::ExperimentConfig> config;
  tlb::RunOverrides overrides;
  std::optional<tlb::RunResult> result;
  std::string report_text;
  std::string last_error;
};

namespace {

tlb_status classify(const std::exception& e) {
  if (dynamic_cast<const tlb::SchemaError*>(&e)) return TLB_ERR_SCHEMA;
  if (dynamic_cast<const tlb::IoError*>(&e)) return TLB_ERR_IO;
  if (dynamic_cast<const tlb::StructuralError*>(&e) ||
      dynamic_cast<const tlb::PreconditionError*>(&e))
    return TLB_ERR_INVALID_ARGUMENT;
  return TLB_ERR_RUNTIME;
}

template <typename Fn>
tlb_status guarded(tlb_run* run, Fn&& fn) {
  if (!run) return TLB_ERR_INVALID_ARGUMENT;
  try {
    fn();
    run->last_error.clear();
    return TLB_OK;
  } catch (const std::exception& e) {
    run->last_error = e.what();
    return classify(e);
  } catch (...) {
    run->last_error = "unknown error";
    return TLB_ERR_RUNTIME;
  }
}

}  // namespace

extern "C" {

const char* tlb_version(void) { return "0.1.0"; }

const char* tlb_rng_algorithm(void) { return tlb::rng::kAlgorithmId; }

tlb_status tlb_run_new(tlb_run** out) {
  if (!out) return TLB_ERR_INVALID_ARGUMENT;
  *out = new (std::nothrow) tlb_run();
  return *out ? TLB_OK : TLB_ERR_RUNTIME;
}

void tlb_run_free(tlb_run* run) { delete run; }

tlb_status tlb_run_load_config_file(tlb_run* run, const char* path) {
  return guarded(run, [&] {
    if (!path) throw tlb::SchemaError("config path is null");
    run->config = tlb::parse_config_file(path);
    run->result.reset();
  });
}

tlb_status tlb_run_load_config_text(tlb_run* run, const char* json) {
  return guarded(run, [&] {
    if (!json) throw tlb::SchemaError("config text is null");
    run->config = tlb::parse_config_text(json);
    run->result.reset();
  });
}

tlb_status tlb_run_override_seed(tlb_run* run, uint64_t seed) {
  return guarded(run, [&] { run->overrides.seed = seed; });
}

tlb_status tlb_run_override_trials(tlb_run* run, int64_t trials) {
  return guarded(run, [&] {
    if (trials < 1) throw tlb::SchemaError("trials must be >= 1");
    run->overrides.trials = static_cast<std::size_t>(trials);
  });
}

tlb_status tlb_run_override_delta(tlb_run* run, double delta) {
  return guarded(run, [&] {
    if (!(delta > 0.0 && delta < 1.0))
      throw tlb::SchemaError("delta must lie in (0, 1)");
    run->overrides.delta = delta;
  });
}

tlb_status tlb_run_override_theorem(tlb_run* run, const char* theorem) {
  return guarded(run, [&] {
    if (!theorem) throw tlb::SchemaError("theorem is null");
    run->overrides.theorem = std::string(theorem);
  });
}

tlb_status tlb_run_execute(tlb_run* run, const char* command) {
  return guarded(run, [&] {
    if (!command) throw tlb::SchemaError("command is null");
    if (!run->config)
      throw tlb::SchemaError("no config loaded; call tlb_run_load_config_*");
    run->result = tlb::run_command(*run->config, tlb::parse_command(command),
                                   run->overrides);
    run->report_text = run->result->report.dump(2) + "\n";
  });
}

const char* tlb_run_report_json(const tlb_run* run) {
  if (!run || !run->result) return nullptr;
  return run->report_text.c_str();
}

const char* tlb_run_trials_csv(const tlb_run* run) {
  if (!run || !run->result || !run->result->trials_csv) return nullptr;
  return run->result->trials_csv->c_str();
}

const char* tlb_run_summary(const tlb_run* run) {
  if (!run || !run->result) return nullptr;
  return run->result->summary.c_str();
}

tlb_status tlb_run_write_outputs(tlb_run* run, const char* dir,
                                 const char* format) {
  return guarded(run, [&] {
    if (!dir) throw tlb::SchemaError("output directory is null");
    if (!run->result)
      throw tlb::SchemaError("nothing to write; call tlb_run_execute first");
    tlb::write_outputs(*run->result, dir, format ? format : "all");
  });
}

const char* tlb_run_last_error(const tlb_run* run) {
  if (!run) return "null run handle";
  return run->last_error.c_str();
}

}  // extern "C"
