// Copyright 2026 The uavee Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the uavee simulator and trainer.
 *
 * Objects are opaque handles owned by the caller and released with the
 * matching *_destroy function. Every fallible call returns a uavee_status;
 * on failure uavee_last_error() describes the problem (thread-local, valid
 * until the next failing call on the same thread). */

#ifndef UAVEE_UAVEE_H_
#define UAVEE_UAVEE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UAVEE_API __declspec(dllexport)
#else
#define UAVEE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uavee_status {
  UAVEE_OK = 0,
  UAVEE_ERR_INVALID_ARGUMENT = 1,
  UAVEE_ERR_PARSE = 2,
  UAVEE_ERR_OUT_OF_RANGE = 3,
  UAVEE_ERR_DOMAIN = 4,
  UAVEE_ERR_NUMERIC = 5,
  UAVEE_ERR_IO = 6,
  UAVEE_ERR_BUFFER_TOO_SMALL = 7,
  UAVEE_ERR_INTERNAL = 8
} uavee_status;

typedef enum uavee_policy {
  UAVEE_POLICY_MIN_RADIUS = 0,
  UAVEE_POLICY_HOVER = 1,
  UAVEE_POLICY_RANDOM_WALK = 2,
  UAVEE_POLICY_ENERGY_SAVING = 3,
  UAVEE_POLICY_DDQN = 4
} uavee_policy;

typedef struct uavee_config uavee_config;
typedef struct uavee_experiment uavee_experiment;

/* One CSV row: totals of one episode and their ratios to the min-radius
 * baseline flown on the same world. */
typedef struct uavee_metrics_row {
  int32_t fleet_size;
  int32_t episode;
  uavee_policy policy;
  uint64_t seed;
  double total_throughput_bits;
  double total_energy_j;
  double ee_bits_per_j;
  double norm_ee;
  double norm_throughput;
  double norm_energy;
} uavee_metrics_row;

typedef void (*uavee_row_callback)(const uavee_metrics_row* row, void* user_data);
typedef void (*uavee_check_callback)(const char* name, int passed, const char* detail,
                                     void* user_data);

UAVEE_API const char* uavee_version(void);
UAVEE_API const char* uavee_last_error(void);
UAVEE_API const char* uavee_status_name(uavee_status status);

UAVEE_API const char* uavee_policy_name(uavee_policy policy);
UAVEE_API uavee_status uavee_policy_from_name(const char* name, uavee_policy* out);

/* Configuration. A new config holds the default parameter table. */
UAVEE_API uavee_status uavee_config_create(uavee_config** out);
UAVEE_API uavee_status uavee_config_load(const char* path, uavee_config** out);
UAVEE_API uavee_status uavee_config_parse(const char* text, uavee_config** out);
UAVEE_API uavee_status uavee_config_clone(const uavee_config* config, uavee_config** out);
UAVEE_API void uavee_config_destroy(uavee_config* config);
/* Sets one key and re-validates; the config is unchanged on failure. */
UAVEE_API uavee_status uavee_config_set(uavee_config* config, const char* key,
                                        const char* value);
/* String getters copy into `buf` (NUL-terminated) and report the full
 * length, excluding the terminator, in *needed. With a too-small buffer they
 * return UAVEE_ERR_BUFFER_TOO_SMALL and still set *needed. */
UAVEE_API uavee_status uavee_config_get(const uavee_config* config, const char* key,
                                        char* buf, size_t cap, size_t* needed);
UAVEE_API uavee_status uavee_config_serialize(const uavee_config* config, char* buf,
                                              size_t cap, size_t* needed);

/* Experiments accumulate rows over successive run calls. */
UAVEE_API uavee_status uavee_experiment_create(const uavee_config* config,
                                               uavee_experiment** out);
UAVEE_API void uavee_experiment_destroy(uavee_experiment* experiment);
UAVEE_API uavee_status uavee_experiment_set_callback(uavee_experiment* experiment,
                                                     uavee_row_callback callback,
                                                     void* user_data);
/* Runs `episodes` episodes for every (fleet size, seed) pair. */
UAVEE_API uavee_status uavee_experiment_run(uavee_experiment* experiment,
                                            uavee_policy policy,
                                            const int32_t* fleet_sizes, size_t n_fleets,
                                            const uint64_t* seeds, size_t n_seeds,
                                            int32_t episodes);
UAVEE_API size_t uavee_experiment_row_count(const uavee_experiment* experiment);
UAVEE_API uavee_status uavee_experiment_row(const uavee_experiment* experiment,
                                            size_t index, uavee_metrics_row* out);
/* Per-episode CSV, per-fleet aggregate CSV (episodes >= aggregate_skip) and
 * the run manifest. Any path may be NULL to skip that file. */
UAVEE_API uavee_status uavee_experiment_write(const uavee_experiment* experiment,
                                              const char* metrics_path,
                                              const char* aggregate_path,
                                              const char* manifest_path,
                                              const char* output_dir);
/* Saves each trained agent's online network as
 * <dir>/qnet_f<fleet>_s<seed>_a<agent>.bin. Writes nothing when no learning
 * run happened. */
UAVEE_API uavee_status uavee_experiment_save_checkpoints(
    const uavee_experiment* experiment, const char* dir, size_t* files_written);

/* Runs the numeric oracle suite; *failures receives the failing count. */
UAVEE_API uavee_status uavee_verify(uavee_check_callback callback, void* user_data,
                                    int* failures);

#ifdef __cplusplus
}
#endif

#endif /* UAVEE_UAVEE_H_ */
