// tools/tlbounds_main.cpp

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

// Command-line front end; all computation happens behind the C API of the
// tlbounds shared library.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlbounds/tlbounds.h"

namespace {

struct Options {
  std::string config_path;
  std::string theorem;
  std::int64_t trials = -1;
  double delta_value = -1.0;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string format = "all";
};

int exit_code_for(tlb_status status) {
  switch (status) {
    case TLB_OK:
      return 0;
    case TLB_ERR_SCHEMA:
      return 2;
    default:
      return 3;
  }
}

int run(const std::string& command, const Options& opt) {
  struct Deleter {
    void operator()(tlb_run* r) const { tlb_run_free(r); }
  };
  tlb_run* raw = nullptr;
  if (tlb_run_new(&raw) != TLB_OK || !raw) {
    std::fprintf(stderr, "error: cannot create run handle\n");
    return 3;
  }
  std::unique_ptr<tlb_run, Deleter> handle(raw);

  auto check = [&](tlb_status status) {
    if (status != TLB_OK) {
      std::fprintf(stderr, "error: %s\n", tlb_run_last_error(handle.get()));
      std::exit(exit_code_for(status));
    }
  };

  check(tlb_run_load_config_file(handle.get(), opt.config_path.c_str()));
  if (opt.has_seed) check(tlb_run_override_seed(handle.get(), opt.seed));
  if (opt.trials > 0) check(tlb_run_override_trials(handle.get(), opt.trials));
  if (opt.delta_value > 0.0)
    check(tlb_run_override_delta(handle.get(), opt.delta_value));
  if (!opt.theorem.empty())
    check(tlb_run_override_theorem(handle.get(), opt.theorem.c_str()));

  check(tlb_run_execute(handle.get(), command.c_str()));
  check(tlb_run_write_outputs(handle.get(), opt.output_dir.c_str(),
                              opt.format.c_str()));

  const char* summary = tlb_run_summary(handle.get());
  if (summary) std::printf("%s\n", summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact transfer-learning bound calculators and Monte Carlo "
               "coverage experiments on finite-support domains"};
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::string> commands = {"divergence", "erm",    "bound",
                                             "verify",     "compare", "htl"};
  const std::vector<std::string> descriptions = {
      "Exact and empirical divergences between the configured domains",
      "Run the scenario's empirical risk minimization once",
      "Compute one bound report for --theorem",
      "Monte Carlo coverage of a sample-dependent bound",
      "Per-trial comparison of the two multi-source bounds",
      "Stability-gap experiment grid for the transfer ridge algorithm"};

  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", opt.config_path, "JSON experiment config")
        ->required();
    sub->add_option("--theorem", opt.theorem,
                    "Theorem id: lemma1, 1, 2, 3, 4, 5 or 7");
    sub->add_option("--trials", opt.trials, "Override the config trial count");
    sub->add_option("--delta", opt.delta_value,
                    "Override the confidence parameter");
    sub->add_option("--seed", opt.seed, "Override the master seed")
        ->each([&opt](const std::string&) { opt.has_seed = true; });
    sub->add_option("--output", opt.output_dir,
                    "Output directory (default: current)");
    sub->add_option("--format", opt.format, "Outputs to write: csv, json, all")
        ->check(CLI::IsMember({"csv", "json", "all"}));
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) return run(commands[i], opt);
  }
  std::fprintf(stderr, "error: no command given\n");
  return 2;
}
