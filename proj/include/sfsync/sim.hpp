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

#pragma once

// Networked closed loop: agents + pre-compensators + protocols coupled
// through the graph Laplacian (and the exosystem in regulated mode).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sfsync/graph.hpp"
#include "sfsync/protocol.hpp"

namespace sfsync {

struct Scenario {
  std::string name;
  std::vector<LtiAgent> agents;
  DiGraph graph;
  ProtocolMode mode = ProtocolMode::output_sync;
  std::optional<RootSet> roots;          // regulated only
  std::optional<Exosystem> exosystem;    // regulated only
  std::optional<TargetModel> target;     // output_sync override
  std::optional<ComplexList> k_poles;
  std::optional<ComplexList> h_poles;
  // Per-agent initial states; agents without one draw uniform [-1, 1]
  // entries from `seed`. Controller states start at zero.
  std::vector<Vector> x0;
  std::uint64_t seed = 1;
  double T = 20.0;
  double dt = 1e-3;
  HomogenizationOptions homogenization;
};

// Assumption / graph-class diagnostics; empty when the scenario is admissible.
std::vector<std::string> scenario_diagnostics(const Scenario& s);
// Throws AssumptionError carrying scenario_diagnostics when nonempty.
void validate_scenario(const Scenario& s);

struct NetworkDesign {
  TargetModel target;
  Gains gains;
  int nbar_d = 0;
  // Every agent already equals the target: no pre-compensators are designed.
  bool homogeneous_fast_path = false;
  std::vector<Precompensator> pre;
  std::vector<HomogenizationCertificate> certificates;
  std::vector<ProtocolRealization> protocols;
};

// Target selection, gain synthesis, homogenization and protocol realization.
// Only agent models enter; the graph is not consulted.
NetworkDesign design_network(const Scenario& s);

struct AgentBlock {
  Eigen::Index x = 0;  // offset of the agent state
  Eigen::Index n = 0;
  Eigen::Index s = 0;  // offset of the controller state (xi, xhat, chi)
  Eigen::Index xi = 0;
  Eigen::Index nt = 0;
};

struct ClosedLoop {
  Matrix A;
  std::vector<AgentBlock> blocks;
  Eigen::Index exo = -1;  // offset of the exosystem state, -1 if absent
  Eigen::Index exo_dim = 0;
  Matrix Y;   // N x dim, y_i = Y.row(i) x
  Matrix Yr;  // 1 x dim when regulated
  ProtocolMode mode = ProtocolMode::output_sync;
  Matrix coupling;  // L, or L tilde in regulated mode
  Matrix laplacian;
  NetworkDesign design;
  std::vector<LtiAgent> agents;
  std::optional<Exosystem> exosystem;

  Eigen::Index dim() const { return A.rows(); }
};

// Validates, designs and wires the network into x_cl' = A_cl x_cl.
ClosedLoop assemble_network(const Scenario& s);
// Same, reusing an existing design.
ClosedLoop assemble_network(const Scenario& s, NetworkDesign design);

Vector initial_state(const Scenario& s, const ClosedLoop& net);

enum class Stepper { rk4, matrix_exponential };

struct SimulationOptions {
  Stepper stepper = Stepper::rk4;
  bool keep_states = false;
  double divergence_threshold = 1e9;
};

struct Trajectory {
  ProtocolMode mode = ProtocolMode::output_sync;
  std::vector<double> times;
  Matrix outputs;  // samples x N
  Vector reference;  // samples, regulated only
  Matrix states;   // samples x dim when keep_states
  std::uint64_t scenario_hash = 0;
  std::uint64_t seed = 0;

  std::size_t samples() const { return times.size(); }
  bool has_reference() const { return reference.size() > 0; }
};

// floor(T / dt) + 1 samples at t_k = k dt. Throws DivergenceError on the
// first non-finite or runaway state.
Trajectory simulate(const ClosedLoop& net, const Scenario& s,
                    const SimulationOptions& opts = {});

// Exact RK4 step matrix for x' = A x: I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24.
Matrix rk4_step_matrix(const Matrix& a, double h);

// max_{i,j} |y_i - y_j| per sample.
std::vector<double> output_sync_error(const Trajectory& traj);
// max_i |y_i - y_r| per sample.
std::vector<double> regulation_error(const Trajectory& traj);

struct ProofCoordinates {
  // Output sync: e = xbar - chi and ebar = (Lbar x I) xbar - xhat over the
  // differences to agent N. Regulated: e = xtilde - chi and
  // ebar = (Ltilde x I) xtilde - xhat with xtilde = xbar - xcheck_r.
  std::vector<double> e_norm;
  std::vector<double> ebar_norm;
  std::vector<double> xbar_norm;
  // Raw stacked ebar per sample (samples x dim).
  Matrix ebar;
};

// Requires a trajectory recorded with keep_states.
ProofCoordinates proof_coordinates(const Trajectory& traj, const ClosedLoop& net);

std::uint64_t scenario_hash(const Scenario& s);

// Header t,y_1..y_N[,y_r],e_sync|e_reg; %.17g values.
void write_csv(const Trajectory& traj, std::ostream& out);
std::string trajectory_csv(const Trajectory& traj);

}  // namespace sfsync
