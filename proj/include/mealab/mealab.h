// Copyright 2026 The MEALab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEALAB_MEALAB_H_
#define MEALAB_MEALAB_H_

#include <stddef.h>
#include <stdint.h>

#if defined(MEALAB_BUILDING_LIBRARY)
#define MEALAB_EXPORT __attribute__((visibility("default")))
#else
#define MEALAB_EXPORT
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Status codes returned by every fallible call. On failure a description is
// available from mealab_last_error() on the same thread.
typedef enum mealab_status {
  MEALAB_OK = 0,
  MEALAB_INVALID_ARGUMENT = 1,
  MEALAB_PARSE_ERROR = 2,
  MEALAB_VALIDATION_ERROR = 3,
  MEALAB_CONFIG_ERROR = 4,
  MEALAB_IO_ERROR = 5,
  MEALAB_BUDGET_EXCEEDED = 6,
  MEALAB_PROTOCOL_ERROR = 7,
  MEALAB_ATTACK_ERROR = 8,
  MEALAB_DEGENERATE_DATA = 9,
  MEALAB_UNDEFINED_METRIC = 10,
  MEALAB_TRANSPORT_ERROR = 11,
  MEALAB_INTERNAL_ERROR = 12,
} mealab_status;

typedef struct mealab_dataset mealab_dataset;
typedef struct mealab_model mealab_model;
typedef struct mealab_service mealab_service;

// Library version string, e.g. "1.0.0".
MEALAB_EXPORT const char* mealab_version(void);

// Message for the most recent failure on the calling thread; empty string
// when the last call succeeded. Valid until the next call on this thread.
MEALAB_EXPORT const char* mealab_last_error(void);
MEALAB_EXPORT const char* mealab_status_name(mealab_status status);

// Strings returned through char** out-parameters are owned by the caller.
MEALAB_EXPORT void mealab_string_free(char* s);

// Datasets (JSONL).
MEALAB_EXPORT mealab_status mealab_dataset_load(const char* path,
                                                mealab_dataset** out);
MEALAB_EXPORT mealab_status mealab_dataset_save(const mealab_dataset* ds,
                                                const char* path);
MEALAB_EXPORT size_t mealab_dataset_size(const mealab_dataset* ds);
MEALAB_EXPORT int mealab_dataset_num_classes(const mealab_dataset* ds);
MEALAB_EXPORT void mealab_dataset_free(mealab_dataset* ds);

// Models (binary dump written by experiment runs with save_models).
MEALAB_EXPORT mealab_status mealab_model_load(const char* path,
                                              mealab_model** out);
MEALAB_EXPORT mealab_status mealab_model_save(const mealab_model* m,
                                              const char* path);
MEALAB_EXPORT int mealab_model_num_classes(const mealab_model* m);
// Writes num_classes probabilities into `probs` (capacity `capacity`).
MEALAB_EXPORT mealab_status mealab_model_predict(const mealab_model* m,
                                                 const char* text,
                                                 double* probs,
                                                 size_t capacity);
MEALAB_EXPORT void mealab_model_free(mealab_model* m);

// Experiments. `report` (may be NULL) receives one issue per line.
MEALAB_EXPORT mealab_status mealab_config_validate(const char* config_path,
                                                   char** report);

typedef struct mealab_run_options {
  // Overrides the config's output directory when non-NULL.
  const char* output_dir;
  // Nonzero forces the networked transport.
  int networked;
  // Nonzero prints progress lines to stderr.
  int verbose;
} mealab_run_options;

// Runs the experiment and writes its CSVs. Per-row stage failures are
// recorded in the CSVs and do not fail the call; `failed_rows` (may be
// NULL) receives their count.
MEALAB_EXPORT mealab_status mealab_experiment_run(
    const char* config_path, const mealab_run_options* options,
    size_t* failed_rows);

// Writes every synthetic corpus the config would generate under `out_dir`.
MEALAB_EXPORT mealab_status mealab_synth(const char* config_path,
                                         const char* out_dir);

// Prediction service. `defense` uses the compact syntax "none",
// "soften:TAU" or "perturb:SIGMA[:SEED]".
MEALAB_EXPORT mealab_status mealab_service_create(const mealab_model* m,
                                                  const char* defense,
                                                  mealab_service** out);
MEALAB_EXPORT mealab_status mealab_service_register_client(
    mealab_service* s, const char* client_id, uint64_t budget);
// Unregistered clients receive `budget` queries on first contact.
MEALAB_EXPORT mealab_status mealab_service_set_open_budget(mealab_service* s,
                                                           uint64_t budget);
// Handles one request body; writes the HTTP status and response body.
MEALAB_EXPORT mealab_status mealab_service_handle(mealab_service* s,
                                                  const char* request_body,
                                                  int* http_status,
                                                  char** response_body);
// Starts serving on a background thread; port 0 picks a free port.
MEALAB_EXPORT mealab_status mealab_service_start(mealab_service* s,
                                                 const char* host, int port,
                                                 int* bound_port);
// Serves on the calling thread until mealab_service_stop().
MEALAB_EXPORT mealab_status mealab_service_listen(mealab_service* s,
                                                  const char* host, int port);
MEALAB_EXPORT void mealab_service_stop(mealab_service* s);
MEALAB_EXPORT void mealab_service_free(mealab_service* s);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // MEALAB_MEALAB_H_
