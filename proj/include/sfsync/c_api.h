// Copyright 2026 The sfsync Authors
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


/* C interface to the sfsync library. All handles are opaque. Every function
 * returns an sfs_status; on failure sfs_last_error() describes the problem.
 * Strings returned through char** are owned by the caller and released with
 * sfs_string_free. Indices are 0-based. The error message is per thread, so
 * independent handles may be used from different threads concurrently. */

#ifndef SFSYNC_C_API_H_
#define SFSYNC_C_API_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SFS_BUILDING_LIBRARY)
#define SFS_API __attribute__((visibility("default")))
#else
#define SFS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sfs_status {
  SFS_OK = 0,
  SFS_ERR_INTERNAL = 1,
  SFS_ERR_PARSE = 2,
  SFS_ERR_ASSUMPTION = 3,
  SFS_ERR_DIVERGENCE = 4,
  SFS_ERR_IO = 5,
  SFS_ERR_ARGUMENT = 6,
  SFS_ERR_UNSUPPORTED = 7
} sfs_status;

typedef enum sfs_stepper { SFS_STEPPER_RK4 = 0, SFS_STEPPER_EXPM = 1 } sfs_stepper;

typedef struct sfs_scenario sfs_scenario;
typedef struct sfs_trajectory sfs_trajectory;

SFS_API const char* sfs_version(void);
SFS_API const char* sfs_last_error(void);
SFS_API const char* sfs_status_name(sfs_status status);
SFS_API void sfs_string_free(char* str);

/* Parsing does not run the assumption checks; sfs_scenario_validate,
 * sfs_scenario_check, design and simulate do. */
SFS_API sfs_status sfs_scenario_load(const char* path, sfs_scenario** out);
SFS_API sfs_status sfs_scenario_parse(const char* text, const char* base_dir,
                                      sfs_scenario** out);
SFS_API void sfs_scenario_free(sfs_scenario* scenario);

SFS_API sfs_status sfs_scenario_set_horizon(sfs_scenario* scenario, double T);
SFS_API sfs_status sfs_scenario_set_step(sfs_scenario* scenario, double dt);
SFS_API sfs_status sfs_scenario_set_seed(sfs_scenario* scenario, uint64_t seed);
SFS_API sfs_status sfs_scenario_agent_count(const sfs_scenario* scenario, size_t* out);
SFS_API sfs_status sfs_scenario_name(const sfs_scenario* scenario, char** out);

SFS_API sfs_status sfs_scenario_validate(const sfs_scenario* scenario);
/* Writes the assumption report to *report (always, when non-null) and
 * returns SFS_ERR_ASSUMPTION when violations are listed. */
SFS_API sfs_status sfs_scenario_check(const sfs_scenario* scenario, char** report);

/* Protocol bundle text of one agent. The design is cached in the handle. */
SFS_API sfs_status sfs_scenario_design_bundle(sfs_scenario* scenario, size_t agent,
                                              char** out);
/* Writes out_dir/agent_<i>.bundle for i = 1..N. */
SFS_API sfs_status sfs_scenario_design(sfs_scenario* scenario, const char* out_dir);

SFS_API sfs_status sfs_simulate(sfs_scenario* scenario, sfs_stepper stepper,
                                sfs_trajectory** out);
SFS_API void sfs_trajectory_free(sfs_trajectory* traj);

SFS_API sfs_status sfs_trajectory_samples(const sfs_trajectory* traj, size_t* out);
SFS_API sfs_status sfs_trajectory_outputs(const sfs_trajectory* traj, size_t* out);
SFS_API sfs_status sfs_trajectory_has_reference(const sfs_trajectory* traj, int* out);
SFS_API sfs_status sfs_trajectory_time(const sfs_trajectory* traj, size_t k, double* out);
SFS_API sfs_status sfs_trajectory_output(const sfs_trajectory* traj, size_t k, size_t agent,
                                         double* out);
SFS_API sfs_status sfs_trajectory_reference(const sfs_trajectory* traj, size_t k,
                                            double* out);
/* e_sync in output synchronization, e_reg in regulated mode. */
SFS_API sfs_status sfs_trajectory_error(const sfs_trajectory* traj, size_t k, double* out);
SFS_API sfs_status sfs_trajectory_hash(const sfs_trajectory* traj, uint64_t* out);

SFS_API sfs_status sfs_trajectory_csv(const sfs_trajectory* traj, char** out);
SFS_API sfs_status sfs_trajectory_svg(const sfs_trajectory* traj, char** out);
SFS_API sfs_status sfs_trajectory_write_csv(const sfs_trajectory* traj, const char* path);
SFS_API sfs_status sfs_trajectory_write_svg(const sfs_trajectory* traj, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* SFSYNC_C_API_H_ */
