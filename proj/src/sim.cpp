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

#include "sfsync/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "sfsync/errors.hpp"
#include "sfsync/rng.hpp"

namespace sfsync {

namespace {

using Eigen::Index;

std::string agent_label(std::size_t i) { return "agent " + std::to_string(i + 1); }

bool same_triple(const LtiAgent& a, const LtiAgent& b) {
  return a.A == b.A && a.B == b.B && a.C == b.C;
}

class Fnv1a {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ULL;
    }
  }
  void text(const std::string& s) { bytes(s.data(), s.size()); }
  void number(double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g;", v);
    bytes(buf, static_cast<std::size_t>(len));
  }
  void matrix(const Matrix& m) {
    number(static_cast<double>(m.rows()));
    number(static_cast<double>(m.cols()));
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) number(m(i, j));
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::vector<std::string> scenario_diagnostics(const Scenario& s) {
  std::vector<std::string> out;
  const std::size_t n = s.agents.size();
  if (n == 0) {
    out.push_back("scenario: no agents");
    return out;
  }
  if (static_cast<std::size_t>(s.graph.nodes()) != n)
    out.push_back("graph: " + std::to_string(s.graph.nodes()) + " nodes for " +
                  std::to_string(n) + " agents");
  if (!(s.T > 0.0)) out.push_back("simulation: T must be positive");
  if (!(s.dt > 0.0)) out.push_back("simulation: dt must be positive");

  for (std::size_t i = 0; i < n; ++i) {
    const LtiAgent& a = s.agents[i];
    const std::string who = agent_label(i);
    try {
      a.validate();
    } catch (const DimensionError& e) {
      out.push_back(who + ": " + e.what());
      continue;
    }
    if (a.outputs() != 1) {
      out.push_back(who + ": only single-output agents are supported");
      continue;
    }
    if (!pbh_test(a, PbhMode::stabilizable)) out.push_back(who + ": not stabilizable");
    if (!pbh_test(a, PbhMode::detectable)) out.push_back(who + ": not detectable");
    if (!is_right_invertible(a)) out.push_back(who + ": not right-invertible");
    if (!pbh_test(a, PbhMode::detectable, Observation::measurement))
      out.push_back(who + ": (Cm, A) not detectable");
    if (i < s.x0.size() && s.x0[i].size() != 0 && s.x0[i].size() != a.states())
      out.push_back(who + ": initial state has wrong dimension");
  }
  if (!out.empty()) return out;

  if (s.mode == ProtocolMode::output_sync) {
    if (!contains_spanning_tree(s.graph))
      out.push_back("graph: no directed spanning tree");
    if (s.target) {
      const TargetValidation v = validate_target(*s.target, s.agents);
      out.insert(out.end(), v.violations.begin(), v.violations.end());
    }
  } else {
    if (!s.roots) out.push_back("regulated mode requires a root set");
    if (!s.exosystem) out.push_back("regulated mode requires an exosystem");
    if (s.exosystem) {
      const auto bad = exosystem_violations(*s.exosystem);
      out.insert(out.end(), bad.begin(), bad.end());
      if (s.exosystem->Cr.rows() != 1)
        out.push_back("exosystem: only single-output exosystems are supported");
    }
    if (s.roots && !is_rootset_connected(s.graph, *s.roots))
      out.push_back("graph: some node is not reachable from the root set");
  }
  return out;
}

void validate_scenario(const Scenario& s) {
  auto diag = scenario_diagnostics(s);
  if (!diag.empty()) throw AssumptionError(std::move(diag));
}

NetworkDesign design_network(const Scenario& s) {
  NetworkDesign d;
  d.nbar_d = max_relative_degree(s.agents);

  if (s.mode == ProtocolMode::regulated) {
    if (!s.exosystem) throw AssumptionError({"regulated mode requires an exosystem"});
    d.target = remodel_exosystem(*s.exosystem, d.nbar_d);
  } else if (s.target) {
    d.target = *s.target;
  } else {
    bool homogeneous = true;
    for (const LtiAgent& a : s.agents)
      homogeneous = homogeneous && same_triple(a, s.agents.front());
    TargetModel own;
    if (homogeneous) {
      const LtiAgent& a = s.agents.front();
      own = TargetModel{a.C, a.A, a.B, d.nbar_d};
    }
    if (homogeneous && validate_target(own, s.agents).passed)
      d.target = own;
    else
      d.target = integrator_chain_target(d.nbar_d);
  }

  const int nq = d.target.nq;
  d.gains = design_gains(d.target, s.k_poles.value_or(default_k_poles(nq)),
                         s.h_poles.value_or(default_h_poles(nq)));

  d.homogeneous_fast_path = true;
  for (const LtiAgent& a : s.agents)
    d.homogeneous_fast_path = d.homogeneous_fast_path && matches_target(a, d.target);

  Vector iota;
  if (s.mode == ProtocolMode::regulated) {
    if (!s.roots) throw AssumptionError({"regulated mode requires a root set"});
    iota = s.roots->indicator(static_cast<int>(s.agents.size()));
  }

  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const LtiAgent& a = s.agents[i];
    if (matches_target(a, d.target)) {
      Precompensator pre = identity_precompensator(a);
      d.certificates.push_back(verify_homogenization(a, pre, d.target));
      d.pre.push_back(std::move(pre));
    } else {
      HomogenizationResult h = design_precompensator(a, d.target, s.homogenization);
      d.pre.push_back(std::move(h.pre));
      d.certificates.push_back(h.certificate);
    }
    const int id = static_cast<int>(i) + 1;
    if (s.mode == ProtocolMode::output_sync)
      d.protocols.push_back(build_output_protocol(id, d.pre.back(), d.target, d.gains));
    else
      d.protocols.push_back(build_regulated_protocol(
          id, d.pre.back(), d.target, d.gains, static_cast<int>(iota(i))));
  }
  return d;
}

ClosedLoop assemble_network(const Scenario& s) {
  validate_scenario(s);
  return assemble_network(s, design_network(s));
}

ClosedLoop assemble_network(const Scenario& s, NetworkDesign design) {
  const std::size_t n_agents = s.agents.size();
  if (design.protocols.size() != n_agents)
    throw DimensionError("assemble_network: design does not match agent count");
  ClosedLoop net;
  net.mode = s.mode;
  net.agents = s.agents;
  net.exosystem = s.exosystem;
  net.laplacian = laplacian(s.graph);
  net.coupling = s.mode == ProtocolMode::regulated
                     ? expanded_laplacian(s.graph, *s.roots)
                     : net.laplacian;

  Index dim = 0;
  for (std::size_t i = 0; i < n_agents; ++i) {
    AgentBlock b;
    b.x = dim;
    b.n = s.agents[i].states();
    b.s = b.x + b.n;
    b.xi = design.protocols[i].xi_dim;
    b.nt = design.protocols[i].xhat_dim;
    dim = b.s + design.protocols[i].states();
    net.blocks.push_back(b);
  }
  if (s.mode == ProtocolMode::regulated) {
    net.exo = dim;
    net.exo_dim = s.exosystem->Ar.rows();
    dim += net.exo_dim;
  }

  Matrix& A = net.A;
  A = Matrix::Zero(dim, dim);
  net.Y = Matrix::Zero(static_cast<Index>(n_agents), dim);
  for (std::size_t i = 0; i < n_agents; ++i) {
    const LtiAgent& a = s.agents[i];
    const ProtocolRealization& p = design.protocols[i];
    const AgentBlock& b = net.blocks[i];
    const Index ns = p.states();
    A.block(b.x, b.x, b.n, b.n) = a.A + a.B * p.Dz * a.Cm;
    A.block(b.x, b.s, b.n, ns) = a.B * p.Cu;
    A.block(b.s, b.s, ns, ns) = p.Ac;
    A.block(b.s, b.x, ns, b.n) += p.Bz * a.Cm;
    net.Y.block(static_cast<Index>(i), b.x, 1, b.n) = a.C;

    double row_sum = 0.0;
    for (std::size_t j = 0; j < n_agents; ++j) {
      const AgentBlock& bj = net.blocks[j];
      const double c = net.coupling(static_cast<Index>(i), static_cast<Index>(j));
      const double l = net.laplacian(static_cast<Index>(i), static_cast<Index>(j));
      row_sum += c;
      if (c != 0.0) A.block(b.s, bj.x, ns, bj.n) += c * p.Bzeta * s.agents[j].C;
      if (l != 0.0)
        A.block(b.s, bj.s, ns, design.protocols[j].states()) +=
            l * p.Bzhat * design.protocols[j].Meta;
    }
    if (s.mode == ProtocolMode::regulated && row_sum != 0.0)
      A.block(b.s, net.exo, ns, net.exo_dim) -= row_sum * p.Bzeta * s.exosystem->Cr;
  }
  if (s.mode == ProtocolMode::regulated) {
    A.block(net.exo, net.exo, net.exo_dim, net.exo_dim) = s.exosystem->Ar;
    net.Yr = Matrix::Zero(1, dim);
    net.Yr.block(0, net.exo, 1, net.exo_dim) = s.exosystem->Cr;
  }
  net.design = std::move(design);
  return net;
}

Vector initial_state(const Scenario& s, const ClosedLoop& net) {
  Vector x = Vector::Zero(net.dim());
  Rng rng(s.seed);
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    const AgentBlock& b = net.blocks[i];
    if (i < s.x0.size() && s.x0[i].size() == b.n) {
      x.segment(b.x, b.n) = s.x0[i];
    } else {
      for (Index k = 0; k < b.n; ++k) x(b.x + k) = rng.uniform(-1.0, 1.0);
    }
  }
  if (net.exo >= 0 && s.exosystem->xr0.size() == net.exo_dim)
    x.segment(net.exo, net.exo_dim) = s.exosystem->xr0;
  return x;
}

Matrix rk4_step_matrix(const Matrix& a, double h) {
  const Index n = a.rows();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix ha = h * a;
  Matrix step = id + ha / 4.0;
  step = id + (ha / 3.0) * step;
  step = id + (ha / 2.0) * step;
  return id + ha * step;
}

Trajectory simulate(const ClosedLoop& net, const Scenario& s,
                    const SimulationOptions& opts) {
  if (!(s.dt > 0.0) || !(s.T > 0.0)) throw Error("simulate: T and dt must be positive");
  const Matrix step = opts.stepper == Stepper::rk4
                          ? rk4_step_matrix(net.A, s.dt)
                          : Matrix((net.A * s.dt).exp());
  const std::size_t steps = static_cast<std::size_t>(std::floor(s.T / s.dt + 1e-9));
  const Index n_out = net.Y.rows();
  const bool regulated = net.mode == ProtocolMode::regulated;

  Trajectory traj;
  traj.mode = net.mode;
  traj.seed = s.seed;
  traj.scenario_hash = scenario_hash(s);
  traj.times.resize(steps + 1);
  traj.outputs.resize(static_cast<Index>(steps + 1), n_out);
  if (regulated) traj.reference.resize(static_cast<Index>(steps + 1));
  if (opts.keep_states) traj.states.resize(static_cast<Index>(steps + 1), net.dim());

  Vector x = initial_state(s, net);
  Vector next(x.size());
  auto record = [&](std::size_t k) {
    const Index row = static_cast<Index>(k);
    traj.times[k] = static_cast<double>(k) * s.dt;
    traj.outputs.row(row) = (net.Y * x).transpose();
    if (regulated) traj.reference(row) = (net.Yr * x)(0);
    if (opts.keep_states) traj.states.row(row) = x.transpose();
  };
  record(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    next.noalias() = step * x;
    x.swap(next);
    if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > opts.divergence_threshold) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "simulation diverged at t = %.6g",
                    static_cast<double>(k) * s.dt);
      throw DivergenceError(buf, static_cast<double>(k) * s.dt);
    }
    record(k);
  }
  return traj;
}

std::vector<double> output_sync_error(const Trajectory& traj) {
  std::vector<double> out(traj.samples(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto row = traj.outputs.row(static_cast<Index>(k));
    out[k] = row.size() > 0 ? row.maxCoeff() - row.minCoeff() : 0.0;
  }
  return out;
}

std::vector<double> regulation_error(const Trajectory& traj) {
  if (!traj.has_reference())
    throw Error("regulation_error: trajectory has no reference output");
  std::vector<double> out(traj.samples(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Index row = static_cast<Index>(k);
    out[k] = (traj.outputs.row(row).array() - traj.reference(row)).abs().maxCoeff();
  }
  return out;
}

ProofCoordinates proof_coordinates(const Trajectory& traj, const ClosedLoop& net) {
  if (traj.states.rows() != static_cast<Index>(traj.samples()) ||
      traj.states.cols() != net.dim())
    throw Error("proof_coordinates: trajectory was recorded without states");
  const std::size_t n_agents = net.blocks.size();
  const TargetModel& t = net.design.target;
  const Index nt = t.states();

  std::vector<Matrix> to_xbar;
  for (std::size_t i = 0; i < n_agents; ++i)
    to_xbar.push_back(target_coordinates(net.agents[i], net.design.pre[i], t));

  const bool regulated = net.mode == ProtocolMode::regulated;
  Matrix exo_map;
  if (regulated) {
    const Matrix obs_t = linalg::observability_matrix(t.C, t.A, t.nq);
    exo_map = obs_t.fullPivLu().solve(
        linalg::observability_matrix(net.exosystem->Cr, net.exosystem->Ar, t.nq));
  }
  const Matrix coupling = regulated ? net.coupling : reduced_laplacian(net.laplacian);
  const Index groups = regulated ? static_cast<Index>(n_agents)
                                 : static_cast<Index>(n_agents) - 1;

  ProofCoordinates pc;
  pc.ebar.resize(static_cast<Index>(traj.samples()), groups * nt);
  Matrix xbar(nt, static_cast<Index>(n_agents)), xhat(nt, xbar.cols()),
      chi(nt, xbar.cols());
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const Vector x = traj.states.row(static_cast<Index>(k)).transpose();
    for (std::size_t i = 0; i < n_agents; ++i) {
      const AgentBlock& b = net.blocks[i];
      const Matrix& m = to_xbar[i];
      const Index col = static_cast<Index>(i);
      xbar.col(col) = m.leftCols(b.n) * x.segment(b.x, b.n) +
                      m.rightCols(b.xi) * x.segment(b.s, b.xi);
      xhat.col(col) = x.segment(b.s + b.xi, nt);
      chi.col(col) = x.segment(b.s + b.xi + nt, nt);
    }
    Matrix xs, hs, cs;
    if (regulated) {
      const Vector xcheck = exo_map * x.segment(net.exo, net.exo_dim);
      xs = xbar.colwise() - xcheck;
      hs = xhat;
      cs = chi;
    } else {
      xs = xbar.leftCols(groups).colwise() - xbar.col(groups);
      hs = xhat.leftCols(groups).colwise() - xhat.col(groups);
      cs = chi.leftCols(groups).colwise() - chi.col(groups);
    }
    // Columns are agents: (coupling x I) acting on stacked vectors is
    // xs * coupling^T here.
    const Matrix ebar = xs * coupling.transpose() - hs;
    const Matrix e = xs - cs;
    pc.e_norm.push_back(e.size() ? e.norm() : 0.0);
    pc.ebar_norm.push_back(ebar.size() ? ebar.norm() : 0.0);
    pc.xbar_norm.push_back(xs.size() ? xs.norm() : 0.0);
    pc.ebar.row(static_cast<Index>(k)) =
        Eigen::Map<const Vector>(ebar.data(), ebar.size()).transpose();
  }
  return pc;
}

std::uint64_t scenario_hash(const Scenario& s) {
  Fnv1a h;
  h.text(s.name);
  h.text(to_string(s.mode));
  for (const LtiAgent& a : s.agents) {
    h.matrix(a.A);
    h.matrix(a.B);
    h.matrix(a.C);
    h.matrix(a.Cm);
  }
  h.matrix(s.graph.weights());
  if (s.roots)
    for (int r : s.roots->members()) h.number(r);
  if (s.exosystem) {
    h.matrix(s.exosystem->Ar);
    h.matrix(s.exosystem->Cr);
    h.matrix(s.exosystem->xr0);
  }
  if (s.target) {
    h.matrix(s.target->A);
    h.matrix(s.target->B);
    h.matrix(s.target->C);
    h.number(s.target->nq);
  }
  for (const auto* poles : {&s.k_poles, &s.h_poles}) {
    if (!*poles) continue;
    for (const Complex& z : **poles) {
      h.number(z.real());
      h.number(z.imag());
    }
  }
  for (const Vector& v : s.x0) h.matrix(v);
  h.number(static_cast<double>(s.seed));
  h.number(s.T);
  h.number(s.dt);
  return h.value();
}

void write_csv(const Trajectory& traj, std::ostream& out) {
  const Index n = traj.outputs.cols();
  const bool regulated = traj.has_reference();
  out << 't';
  for (Index i = 0; i < n; ++i) out << ",y_" << (i + 1);
  if (regulated) out << ",y_r";
  out << (regulated ? ",e_reg\n" : ",e_sync\n");
  const std::vector<double> err =
      regulated ? regulation_error(traj) : output_sync_error(traj);
  char buf[32];
  std::string line;
  for (std::size_t k = 0; k < traj.samples(); ++k) {
    const Index row = static_cast<Index>(k);
    line.clear();
    auto put = [&](double v, bool first) {
      std::snprintf(buf, sizeof buf, first ? "%.17g" : ",%.17g", v == 0.0 ? 0.0 : v);
      line += buf;
    };
    put(traj.times[k], true);
    for (Index i = 0; i < n; ++i) put(traj.outputs(row, i), false);
    if (regulated) put(traj.reference(row), false);
    put(err[k], false);
    line += '\n';
    out << line;
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_csv(traj, os);
  return os.str();
}

}  // namespace sfsync
