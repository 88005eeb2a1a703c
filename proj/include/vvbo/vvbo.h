// Copyright 2026 The vvbo Authors.
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

#ifndef VVBO_VVBO_H_
#define VVBO_VVBO_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VVBO_BUILDING_LIBRARY)
#define VVBO_API __declspec(dllexport)
#else
#define VVBO_API __declspec(dllimport)
#endif
#else
#define VVBO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vvbo_status {
  VVBO_OK = 0,
  VVBO_ERR_INVALID_ARGUMENT = 1,
  VVBO_ERR_CONFIG = 2,
  VVBO_ERR_IO = 3,
  VVBO_ERR_RUN_FAILED = 4,
  VVBO_ERR_INTERNAL = 5
} vvbo_status;

typedef struct vvbo_config vvbo_config;
typedef struct vvbo_result vvbo_result;
typedef struct vvbo_posterior vvbo_posterior;

VVBO_API const char* vvbo_version(void);
VVBO_API const char* vvbo_status_name(vvbo_status status);
/* Message of the last failing call on this thread; "" if none. */
VVBO_API const char* vvbo_last_error(void);

/* Experiment configuration (schema version 1 JSON). */
VVBO_API vvbo_status vvbo_config_from_json(const char* json_text, vvbo_config** out);
VVBO_API vvbo_status vvbo_config_from_file(const char* path, vvbo_config** out);
VVBO_API vvbo_status vvbo_config_set_output_dir(vvbo_config* cfg, const char* dir);
VVBO_API vvbo_status vvbo_config_set_workers(vvbo_config* cfg, int workers);
VVBO_API vvbo_status vvbo_config_set_seed(vvbo_config* cfg, uint64_t seed);
/* Resolved configuration as JSON; the string lives until the next call on cfg. */
VVBO_API const char* vvbo_config_to_json(vvbo_config* cfg);
VVBO_API void vvbo_config_free(vvbo_config* cfg);

/* Runs every (method, run) pair. Returns VVBO_ERR_RUN_FAILED (and still
   fills *out) when some runs failed; their results carry .FAILED markers. */
VVBO_API vvbo_status vvbo_run_experiment(const vvbo_config* cfg, vvbo_result** out);
VVBO_API int vvbo_result_runs_ok(const vvbo_result* res);
VVBO_API int vvbo_result_runs_failed(const vvbo_result* res);
VVBO_API const char* vvbo_result_output_dir(const vvbo_result* res);
VVBO_API void vvbo_result_free(vvbo_result* res);

/* Rebuilds aggregate.csv and plotdata.csv in an output directory. */
VVBO_API vvbo_status vvbo_aggregate_dir(const char* dir);

/* Lattice optimum of a published phase objective. x_out receives up to
   x_capacity coordinates; *dim_out is the input dimension. */
VVBO_API vvbo_status vvbo_oracle(const char* benchmark, int phase, double* x_out, size_t x_capacity,
                                 size_t* dim_out, double* value_out);

/* Separable-kernel posterior with an RBF input kernel and the given
   measurement-space eigenvalues. Observations are in the eigenbasis. */
VVBO_API vvbo_status vvbo_posterior_create(int input_dim, double length_scale, const double* eigvals, int rank,
                                           double lambda, vvbo_posterior** out);
VVBO_API vvbo_status vvbo_posterior_set_confidence(vvbo_posterior* p, double gamma, double sigma, double zeta);
VVBO_API vvbo_status vvbo_posterior_update(vvbo_posterior* p, const double* x, const double* ybar);
VVBO_API vvbo_status vvbo_posterior_mean(const vvbo_posterior* p, const double* x, double* mean_out);
VVBO_API vvbo_status vvbo_posterior_opnorm(const vvbo_posterior* p, const double* x, double* out);
VVBO_API vvbo_status vvbo_posterior_logdet(const vvbo_posterior* p, double* out);
VVBO_API vvbo_status vvbo_posterior_beta(const vvbo_posterior* p, double* out);
VVBO_API int vvbo_posterior_size(const vvbo_posterior* p);
VVBO_API void vvbo_posterior_free(vvbo_posterior* p);

#ifdef __cplusplus
}
#endif

#endif  // VVBO_VVBO_H_
