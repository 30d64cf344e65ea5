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

// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sfsync/c_api.h"

namespace {

namespace fs = std::filesystem;

enum class Command { check, design, simulate, report };

struct Overrides {
  std::optional<double> T;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::string stepper = "rk4";
};

struct Outcome {
  int exit_code = 0;
  std::string out;
  std::string err;
};

int exit_code_for(sfs_status st) {
  switch (st) {
    case SFS_OK: return 0;
    case SFS_ERR_PARSE: return 2;
    case SFS_ERR_ASSUMPTION:
    case SFS_ERR_UNSUPPORTED: return 3;
    case SFS_ERR_DIVERGENCE: return 4;
    default: return 1;
  }
}

class Session {
 public:
  Session(const std::string& path, Outcome& outcome) : path_(path), outcome_(outcome) {}
  ~Session() {
    sfs_trajectory_free(traj_);
    sfs_scenario_free(scenario_);
  }
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Records the failure and returns false when st is not SFS_OK.
  bool ok(sfs_status st) {
    if (st == SFS_OK) return true;
    outcome_.exit_code = exit_code_for(st);
    outcome_.err += "sfsync: " + path_ + ": " + sfs_status_name(st) + ": " +
                    sfs_last_error() + "\n";
    return false;
  }

  bool load(const Overrides& o) {
    if (!ok(sfs_scenario_load(path_.c_str(), &scenario_))) return false;
    if (o.T && !ok(sfs_scenario_set_horizon(scenario_, *o.T))) return false;
    if (o.dt && !ok(sfs_scenario_set_step(scenario_, *o.dt))) return false;
    if (o.seed && !ok(sfs_scenario_set_seed(scenario_, *o.seed))) return false;
    return true;
  }

  sfs_scenario* scenario() { return scenario_; }
  sfs_trajectory** trajectory() { return &traj_; }
  const std::string& path() const { return path_; }
  Outcome& outcome() { return outcome_; }

 private:
  std::string path_;
  Outcome& outcome_;
  sfs_scenario* scenario_ = nullptr;
  sfs_trajectory* traj_ = nullptr;
};

std::string take(char* s) {
  std::string out = s ? s : "";
  sfs_string_free(s);
  return out;
}

Outcome run_one(Command cmd, const std::string& path, const Overrides& o, bool nested_out) {
  Outcome outcome;
  Session session(path, outcome);
  if (!session.load(o)) return outcome;
  const std::string stem = fs::path(path).stem().string();

  if (cmd == Command::check) {
    char* report = nullptr;
    const sfs_status st = sfs_scenario_check(session.scenario(), &report);
    outcome.out += take(report);
    if (st == SFS_ERR_ASSUMPTION) {
      outcome.exit_code = 3;
      return outcome;
    }
    session.ok(st);
    return outcome;
  }

  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec) {
    outcome.exit_code = 1;
    outcome.err += "sfsync: cannot create output directory '" + o.out + "'\n";
    return outcome;
  }

  if (cmd == Command::design) {
    const std::string dir = nested_out ? (fs::path(o.out) / stem).string() : o.out;
    if (!session.ok(sfs_scenario_design(session.scenario(), dir.c_str()))) return outcome;
    size_t n = 0;
    sfs_scenario_agent_count(session.scenario(), &n);
    for (size_t i = 1; i <= n; ++i)
      outcome.out += (fs::path(dir) / ("agent_" + std::to_string(i) + ".bundle")).string() + "\n";
    return outcome;
  }

  const sfs_stepper stepper = o.stepper == "expm" ? SFS_STEPPER_EXPM : SFS_STEPPER_RK4;
  if (!session.ok(sfs_simulate(session.scenario(), stepper, session.trajectory())))
    return outcome;
  const std::string csv = (fs::path(o.out) / (stem + ".csv")).string();
  if (!session.ok(sfs_trajectory_write_csv(*session.trajectory(), csv.c_str()))) return outcome;
  outcome.out += csv + "\n";
  if (cmd == Command::report) {
    const std::string svg = (fs::path(o.out) / (stem + ".svg")).string();
    if (!session.ok(sfs_trajectory_write_svg(*session.trajectory(), svg.c_str())))
      return outcome;
    outcome.out += svg + "\n";
  }
  size_t samples = 0;
  double final_error = 0.0;
  sfs_trajectory_samples(*session.trajectory(), &samples);
  sfs_trajectory_error(*session.trajectory(), samples - 1, &final_error);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s: %zu samples, final error %.3e\n", stem.c_str(), samples,
                final_error);
  outcome.err += buf;
  return outcome;
}

int run(Command cmd, const std::vector<std::string>& files, const Overrides& o,
        unsigned batch) {
  std::vector<Outcome> outcomes(files.size());
  const bool nested = files.size() > 1;
  const unsigned workers =
      std::max(1u, std::min<unsigned>(batch, static_cast<unsigned>(files.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++)
      outcomes[k] = run_one(cmd, files[k], o, nested);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  int code = 0;
  for (const Outcome& r : outcomes) {
    std::fputs(r.out.c_str(), stdout);
    std::fputs(r.err.c_str(), stderr);
    if (code == 0) code = r.exit_code;
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scale-free output synchronization of heterogeneous linear agents"};
  app.set_version_flag("--version", std::string(sfs_version()));
  app.require_subcommand(1);

  Overrides o;
  std::vector<std::string> files;
  unsigned batch = 1;
  Command cmd = Command::check;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", files, "Scenario file(s)")->required()->check(CLI::ExistingFile);
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--T", o.T, "Horizon in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--dt", o.dt, "Step size in seconds")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed for initial conditions");
    sub->add_option("--stepper", o.stepper, "rk4 or expm")
        ->check(CLI::IsMember({"rk4", "expm"}));
    sub->add_option("--batch", batch, "Scenarios simulated concurrently")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* check = app.add_subcommand("check", "Report assumption and graph checks");
  add_common(check);
  check->callback([&] { cmd = Command::check; });

  CLI::App* design = app.add_subcommand("design", "Write per-agent protocol bundles");
  add_common(design);
  design->add_option("--out", o.out, "Output directory");
  design->callback([&] { cmd = Command::design; });

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate and write the trajectory CSV");
  add_common(simulate);
  add_sim(simulate);
  simulate->add_option("--out", o.out, "Output directory");
  simulate->callback([&] { cmd = Command::simulate; });

  CLI::App* report = app.add_subcommand("report", "Simulate and write CSV plus SVG plot");
  add_common(report);
  add_sim(report);
  report->add_option("--out", o.out, "Output directory");
  report->callback([&] { cmd = Command::report; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return run(cmd, files, o, batch);
}
