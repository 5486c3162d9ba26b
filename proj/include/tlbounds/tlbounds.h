/* tlbounds/tlbounds.h
 *
 * Copyright 2026 The tlbounds Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the tlbounds shared library.
 *
 * A tlb_run handle carries one experiment configuration and the results of
 * the last executed command. Typical use:
 *
 *   tlb_run* run = NULL;
 *   tlb_run_new(&run);
 *   tlb_run_load_config_file(run, "config.json");
 *   tlb_run_execute(run, "verify");
 *   puts(tlb_run_report_json(run));
 *   tlb_run_write_outputs(run, "out", "all");
 *   tlb_run_free(run);
 *
 * All functions returning tlb_status leave an explanatory message readable
 * via tlb_run_last_error on failure. Strings returned by the library are
 * owned by the handle and valid until the next execute/free call.
 */

#ifndef TLBOUNDS_TLBOUNDS_H
#define TLBOUNDS_TLBOUNDS_H

#include <stdint.h>

#if defined(_WIN32)
#define TLB_API __declspec(dllexport)
#else
#define TLB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tlb_status {
  TLB_OK = 0,
  /* Bad handle, null argument, or parameter outside its domain. */
  TLB_ERR_INVALID_ARGUMENT = 1,
  /* Config failed to parse or validate. */
  TLB_ERR_SCHEMA = 2,
  /* Computation failed after a valid configuration. */
  TLB_ERR_RUNTIME = 3,
  /* Filesystem failure while reading configs or writing outputs. */
  TLB_ERR_IO = 4
} tlb_status;

typedef struct tlb_run tlb_run;

TLB_API const char* tlb_version(void);

/* Identifier of the pseudo-random generator used for all sampling. */
TLB_API const char* tlb_rng_algorithm(void);

TLB_API tlb_status tlb_run_new(tlb_run** out);
TLB_API void tlb_run_free(tlb_run* run);

TLB_API tlb_status tlb_run_load_config_file(tlb_run* run, const char* path);
TLB_API tlb_status tlb_run_load_config_text(tlb_run* run, const char* json);

/* Overrides are applied on top of the loaded config, before execution. */
TLB_API tlb_status tlb_run_override_seed(tlb_run* run, uint64_t seed);
TLB_API tlb_status tlb_run_override_trials(tlb_run* run, int64_t trials);
TLB_API tlb_status tlb_run_override_delta(tlb_run* run, double delta);
TLB_API tlb_status tlb_run_override_theorem(tlb_run* run,
                                            const char* theorem);

/* command: "divergence", "erm", "bound", "verify", "compare" or "htl". */
TLB_API tlb_status tlb_run_execute(tlb_run* run, const char* command);

/* NULL until a successful execute. */
TLB_API const char* tlb_run_report_json(const tlb_run* run);
TLB_API const char* tlb_run_trials_csv(const tlb_run* run);
TLB_API const char* tlb_run_summary(const tlb_run* run);

/* format: "json", "csv" or "all". */
TLB_API tlb_status tlb_run_write_outputs(tlb_run* run, const char* dir,
                                         const char* format);

/* Message describing the last failure on this handle; never NULL. */
TLB_API const char* tlb_run_last_error(const tlb_run* run);

#ifdef __cplusplus
}
#endif

#endif /* TLBOUNDS_TLBOUNDS_H */
