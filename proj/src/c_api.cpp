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

#include "sfsync/c_api.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "sfsync/errors.hpp"
#include "sfsync/report.hpp"
#include "sfsync/scenario.hpp"
#include "sfsync/sim.hpp"

struct sfs_scenario {
  sfsync::Scenario scenario;
  std::optional<sfsync::NetworkDesign> design;
};

struct sfs_trajectory {
  sfsync::Trajectory traj;
  std::vector<double> error;
};

namespace {

thread_local std::string g_last_error;

sfs_status fail(sfs_status status, const std::string& what) {
  g_last_error = what;
  return status;
}

template <class F>
sfs_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const sfsync::ParseError& e) {
    return fail(SFS_ERR_PARSE, e.what());
  } catch (const sfsync::AssumptionError& e) {
    return fail(SFS_ERR_ASSUMPTION, e.what());
  } catch (const sfsync::DivergenceError& e) {
    return fail(SFS_ERR_DIVERGENCE, e.what());
  } catch (const sfsync::UnsupportedError& e) {
    return fail(SFS_ERR_UNSUPPORTED, e.what());
  } catch (const sfsync::DesignError& e) {
    return fail(SFS_ERR_ASSUMPTION, e.what());
  } catch (const sfsync::DegenerateSystemError& e) {
    return fail(SFS_ERR_ASSUMPTION, e.what());
  } catch (const std::exception& e) {
    return fail(SFS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SFS_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

sfs_status null_argument(const char* name) {
  return fail(SFS_ERR_ARGUMENT, std::string("null argument: ") + name);
}

const sfsync::NetworkDesign& ensure_design(sfs_scenario* h) {
  if (!h->design) {
    sfsync::validate_scenario(h->scenario);
    h->design = sfsync::design_network(h->scenario);
  }
  return *h->design;
}

sfs_status write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return fail(SFS_ERR_IO, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) return fail(SFS_ERR_IO, "write to '" + path + "' failed");
  return SFS_OK;
}

sfs_status sample_index(const sfs_trajectory* t, size_t k) {
  if (k >= t->traj.samples())
    return fail(SFS_ERR_ARGUMENT, "sample index " + std::to_string(k) + " out of range");
  return SFS_OK;
}

}  // namespace

extern "C" {

const char* sfs_version(void) { return "0.1.0"; }

const char* sfs_last_error(void) { return g_last_error.c_str(); }

const char* sfs_status_name(sfs_status status) {
  switch (status) {
    case SFS_OK: return "ok";
    case SFS_ERR_INTERNAL: return "internal error";
    case SFS_ERR_PARSE: return "parse error";
    case SFS_ERR_ASSUMPTION: return "assumption violated";
    case SFS_ERR_DIVERGENCE: return "divergence";
    case SFS_ERR_IO: return "i/o error";
    case SFS_ERR_ARGUMENT: return "invalid argument";
    case SFS_ERR_UNSUPPORTED: return "unsupported";
  }
  return "unknown status";
}

void sfs_string_free(char* str) { std::free(str); }

sfs_status sfs_scenario_load(const char* path, sfs_scenario** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) return fail(SFS_ERR_IO, std::string("cannot read '") + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::filesystem::path p(path);
    auto h = std::make_unique<sfs_scenario>();
    h->scenario = sfsync::parse_scenario_text(text, p.parent_path().string());
    if (h->scenario.name.empty()) h->scenario.name = p.stem().string();
    *out = h.release();
    return SFS_OK;
  });
}

sfs_status sfs_scenario_parse(const char* text, const char* base_dir, sfs_scenario** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    auto h = std::make_unique<sfs_scenario>();
    h->scenario = sfsync::parse_scenario_text(text, base_dir ? base_dir : ".");
    *out = h.release();
    return SFS_OK;
  });
}

void sfs_scenario_free(sfs_scenario* scenario) { delete scenario; }

sfs_status sfs_scenario_set_horizon(sfs_scenario* scenario, double T) {
  if (!scenario) return null_argument("scenario");
  if (!(T > 0.0)) return fail(SFS_ERR_ARGUMENT, "T must be positive");
  scenario->scenario.T = T;
  return SFS_OK;
}

sfs_status sfs_scenario_set_step(sfs_scenario* scenario, double dt) {
  if (!scenario) return null_argument("scenario");
  if (!(dt > 0.0)) return fail(SFS_ERR_ARGUMENT, "dt must be positive");
  scenario->scenario.dt = dt;
  return SFS_OK;
}

sfs_status sfs_scenario_set_seed(sfs_scenario* scenario, uint64_t seed) {
  if (!scenario) return null_argument("scenario");
  scenario->scenario.seed = seed;
  return SFS_OK;
}

sfs_status sfs_scenario_agent_count(const sfs_scenario* scenario, size_t* out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = scenario->scenario.agents.size();
  return SFS_OK;
}

sfs_status sfs_scenario_name(const sfs_scenario* scenario, char** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = dup_string(scenario->scenario.name);
    return SFS_OK;
  });
}

sfs_status sfs_scenario_validate(const sfs_scenario* scenario) {
  if (!scenario) return null_argument("scenario");
  return guarded([&] {
    sfsync::validate_scenario(scenario->scenario);
    return SFS_OK;
  });
}

sfs_status sfs_scenario_check(const sfs_scenario* scenario, char** report) {
  if (!scenario) return null_argument("scenario");
  if (report) *report = nullptr;
  return guarded([&] {
    if (report) *report = dup_string(sfsync::check_report(scenario->scenario));
    const auto diag = sfsync::scenario_diagnostics(scenario->scenario);
    if (!diag.empty()) throw sfsync::AssumptionError(diag);
    return SFS_OK;
  });
}

sfs_status sfs_scenario_design_bundle(sfs_scenario* scenario, size_t agent, char** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const sfsync::NetworkDesign& d = ensure_design(scenario);
    if (agent >= d.protocols.size())
      return fail(SFS_ERR_ARGUMENT, "agent index " + std::to_string(agent) + " out of range");
    *out = dup_string(sfsync::serialize_bundle(d.protocols[agent]));
    return SFS_OK;
  });
}

sfs_status sfs_scenario_design(sfs_scenario* scenario, const char* out_dir) {
  if (!scenario) return null_argument("scenario");
  if (!out_dir) return null_argument("out_dir");
  return guarded([&] {
    const sfsync::NetworkDesign& d = ensure_design(scenario);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) return fail(SFS_ERR_IO, std::string("cannot create '") + out_dir + "'");
    for (std::size_t i = 0; i < d.protocols.size(); ++i) {
      const auto path = std::filesystem::path(out_dir) /
                        ("agent_" + std::to_string(i + 1) + ".bundle");
      const sfs_status st = write_text(path.string(), sfsync::serialize_bundle(d.protocols[i]));
      if (st != SFS_OK) return st;
    }
    return SFS_OK;
  });
}

sfs_status sfs_simulate(sfs_scenario* scenario, sfs_stepper stepper, sfs_trajectory** out) {
  if (!scenario) return null_argument("scenario");
  if (!out) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    const sfsync::NetworkDesign& d = ensure_design(scenario);
    const sfsync::ClosedLoop net = sfsync::assemble_network(scenario->scenario, d);
    sfsync::SimulationOptions opts;
    opts.stepper = stepper == SFS_STEPPER_EXPM ? sfsync::Stepper::matrix_exponential
                                               : sfsync::Stepper::rk4;
    auto h = std::make_unique<sfs_trajectory>();
    h->traj = sfsync::simulate(net, scenario->scenario, opts);
    h->error = h->traj.has_reference() ? sfsync::regulation_error(h->traj)
                                       : sfsync::output_sync_error(h->traj);
    *out = h.release();
    return SFS_OK;
  });
}

void sfs_trajectory_free(sfs_trajectory* traj) { delete traj; }

sfs_status sfs_trajectory_samples(const sfs_trajectory* traj, size_t* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  *out = traj->traj.samples();
  return SFS_OK;
}

sfs_status sfs_trajectory_outputs(const sfs_trajectory* traj, size_t* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  *out = static_cast<size_t>(traj->traj.outputs.cols());
  return SFS_OK;
}

sfs_status sfs_trajectory_has_reference(const sfs_trajectory* traj, int* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  *out = traj->traj.has_reference() ? 1 : 0;
  return SFS_OK;
}

sfs_status sfs_trajectory_time(const sfs_trajectory* traj, size_t k, double* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  if (sfs_status st = sample_index(traj, k); st != SFS_OK) return st;
  *out = traj->traj.times[k];
  return SFS_OK;
}

sfs_status sfs_trajectory_output(const sfs_trajectory* traj, size_t k, size_t agent,
                                 double* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  if (sfs_status st = sample_index(traj, k); st != SFS_OK) return st;
  if (agent >= static_cast<size_t>(traj->traj.outputs.cols()))
    return fail(SFS_ERR_ARGUMENT, "agent index out of range");
  *out = traj->traj.outputs(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(agent));
  return SFS_OK;
}

sfs_status sfs_trajectory_reference(const sfs_trajectory* traj, size_t k, double* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  if (!traj->traj.has_reference())
    return fail(SFS_ERR_ARGUMENT, "trajectory has no reference output");
  if (sfs_status st = sample_index(traj, k); st != SFS_OK) return st;
  *out = traj->traj.reference(static_cast<Eigen::Index>(k));
  return SFS_OK;
}

sfs_status sfs_trajectory_error(const sfs_trajectory* traj, size_t k, double* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  if (sfs_status st = sample_index(traj, k); st != SFS_OK) return st;
  *out = traj->error[k];
  return SFS_OK;
}

sfs_status sfs_trajectory_hash(const sfs_trajectory* traj, uint64_t* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  *out = traj->traj.scenario_hash;
  return SFS_OK;
}

sfs_status sfs_trajectory_csv(const sfs_trajectory* traj, char** out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = dup_string(sfsync::trajectory_csv(traj->traj));
    return SFS_OK;
  });
}

sfs_status sfs_trajectory_svg(const sfs_trajectory* traj, char** out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = dup_string(sfsync::render_svg(traj->traj));
    return SFS_OK;
  });
}

sfs_status sfs_trajectory_write_csv(const sfs_trajectory* traj, const char* path) {
  if (!traj) return null_argument("traj");
  if (!path) return null_argument("path");
  return guarded([&] { return write_text(path, sfsync::trajectory_csv(traj->traj)); });
}

sfs_status sfs_trajectory_write_svg(const sfs_trajectory* traj, const char* path) {
  if (!traj) return null_argument("traj");
  if (!path) return null_argument("path");
  return guarded([&] { return write_text(path, sfsync::render_svg(traj->traj)); });
}

}  // extern "C"
