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

#include "sfsync/protocol.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "sfsync/errors.hpp"

namespace sfsync {

namespace {

using Eigen::Index;

ComplexList pole_list(std::initializer_list<double> head, double next, int nq) {
  ComplexList out;
  for (double p : head) {
    if (static_cast<int>(out.size()) == nq) break;
    out.emplace_back(p, 0.0);
  }
  while (static_cast<int>(out.size()) < nq) {
    out.emplace_back(next, 0.0);
    next -= 1.0;
  }
  return out;
}

void require_hurwitz_poles(const ComplexList& poles, const char* which) {
  for (const Complex& p : poles)
    if (!(p.real() < -kHurwitzMargin))
      throw DesignError(std::string(which) + " pole " + format_complex(p) +
                        " is not in the open left half plane");
}

ProtocolRealization assemble(int agent_id, const Precompensator& pre,
                             const TargetModel& t, const Gains& g,
                             ProtocolMode mode, int iota) {
  const Index nt = t.states(), p = t.C.rows(), mt = t.B.cols();
  const Index nx = pre.xi_dim(), q = pre.Bh.cols(), m = pre.Ch.rows();
  if (pre.Eh.cols() != mt || pre.Dh.cols() != mt)
    throw DimensionError("protocol: pre-compensator input differs from target input");
  if (g.K.rows() != mt || g.K.cols() != nt || g.H.rows() != nt || g.H.cols() != p)
    throw DimensionError("protocol: gain shapes do not match the target");
  if (!is_hurwitz(t.A - t.B * g.K) || !is_hurwitz(t.A - g.H * t.C))
    throw DesignError("protocol: A - BK and A - HC must be Hurwitz");
  if (iota != 0 && iota != 1) throw Error("protocol: iota must be 0 or 1");

  ProtocolRealization r;
  r.mode = mode;
  r.agent_id = agent_id;
  r.iota = iota;
  r.xi_dim = nx;
  r.xhat_dim = nt;
  r.chi_dim = nt;
  const Index ns = nx + 2 * nt;
  const Index xh = nx, ch = nx + nt;
  const Matrix bk = t.B * g.K;

  r.Ac = Matrix::Zero(ns, ns);
  r.Ac.block(0, 0, nx, nx) = pre.Ah;
  r.Ac.block(0, ch, nx, nt) = -pre.Eh * g.K;
  r.Ac.block(xh, xh, nt, nt) = t.A - g.H * t.C;
  r.Ac.block(ch, xh, nt, nt) = Matrix::Identity(nt, nt);
  r.Ac.block(ch, ch, nt, nt) = t.A - bk;
  if (iota == 1) {
    r.Ac.block(xh, ch, nt, nt) -= bk;
    r.Ac.block(ch, ch, nt, nt) -= Matrix::Identity(nt, nt);
  }

  r.Bzeta = Matrix::Zero(ns, p);
  r.Bzeta.block(xh, 0, nt, p) = g.H;
  r.Bzhat = Matrix::Zero(ns, nt);
  r.Bzhat.block(xh, 0, nt, nt) = -bk;
  r.Bzhat.block(ch, 0, nt, nt) = -Matrix::Identity(nt, nt);
  r.Bz = Matrix::Zero(ns, q);
  r.Bz.topRows(nx) = pre.Bh;

  r.Cu = Matrix::Zero(m, ns);
  r.Cu.leftCols(nx) = pre.Ch;
  r.Cu.rightCols(nt) = -pre.Dh * g.K;
  r.Dz = pre.Dz;
  r.Meta = Matrix::Zero(nt, ns);
  r.Meta.rightCols(nt) = Matrix::Identity(nt, nt);
  return r;
}

void write_block(std::string& out, const char* name, const Matrix& m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "block %s %td %td\n", name,
                static_cast<std::ptrdiff_t>(m.rows()),
                static_cast<std::ptrdiff_t>(m.cols()));
  out += buf;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = m(i, j) == 0.0 ? 0.0 : m(i, j);
      std::snprintf(buf, sizeof buf, j == 0 ? "%.17g" : " %.17g", v);
      out += buf;
    }
    out += '\n';
  }
}

}  // namespace

ComplexList default_k_poles(int nq) { return pole_list({-2, -3, -5}, -6, nq); }
ComplexList default_h_poles(int nq) { return pole_list({-1, -2, -3}, -4, nq); }

Gains design_gains(const TargetModel& target, const ComplexList& k_poles,
                   const ComplexList& h_poles) {
  require_hurwitz_poles(k_poles, "K");
  require_hurwitz_poles(h_poles, "H");
  Gains g;
  g.K = place_poles(target.A, target.B, k_poles);
  g.H = place_poles(target.A.transpose(), target.C.transpose(), h_poles).transpose();
  if (!is_hurwitz(target.A - target.B * g.K) || !is_hurwitz(target.A - g.H * target.C))
    throw DesignError("design_gains: placement did not yield Hurwitz loops");
  return g;
}

const char* to_string(ProtocolMode mode) {
  return mode == ProtocolMode::output_sync ? "output_sync" : "regulated";
}

ProtocolRealization build_output_protocol(int agent_id, const Precompensator& pre,
                                          const TargetModel& target,
                                          const Gains& gains) {
  return assemble(agent_id, pre, target, gains, ProtocolMode::output_sync, 0);
}

ProtocolRealization build_regulated_protocol(int agent_id,
                                             const Precompensator& pre,
                                             const TargetModel& target,
                                             const Gains& gains, int iota) {
  return assemble(agent_id, pre, target, gains, ProtocolMode::regulated, iota);
}

std::string serialize_bundle(const ProtocolRealization& r) {
  std::string out = "# sfsync protocol bundle\n";
  out += std::string("mode ") + to_string(r.mode) + "\n";
  out += "iota " + std::to_string(r.iota) + "\n";
  out += "dims " + std::to_string(r.xi_dim) + " " + std::to_string(r.xhat_dim) +
         " " + std::to_string(r.chi_dim) + "\n";
  write_block(out, "Ac", r.Ac);
  write_block(out, "Bzeta", r.Bzeta);
  write_block(out, "Bzhat", r.Bzhat);
  write_block(out, "Bz", r.Bz);
  write_block(out, "Cu", r.Cu);
  write_block(out, "Dz", r.Dz);
  write_block(out, "Meta", r.Meta);
  return out;
}

ProtocolRealization parse_bundle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  ProtocolRealization r;
  std::map<std::string, Matrix> blocks;
  bool have_mode = false, have_dims = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "mode") {
      std::string mode;
      ls >> mode;
      if (mode == "output_sync") r.mode = ProtocolMode::output_sync;
      else if (mode == "regulated") r.mode = ProtocolMode::regulated;
      else throw ParseError("bundle: unknown mode '" + mode + "'", lineno);
      have_mode = true;
    } else if (key == "iota") {
      if (!(ls >> r.iota)) throw ParseError("bundle: bad iota", lineno);
    } else if (key == "dims") {
      if (!(ls >> r.xi_dim >> r.xhat_dim >> r.chi_dim))
        throw ParseError("bundle: bad dims", lineno);
      have_dims = true;
    } else if (key == "block") {
      std::string name;
      Index rows = 0, cols = 0;
      if (!(ls >> name >> rows >> cols) || rows < 0 || cols < 0)
        throw ParseError("bundle: bad block header", lineno);
      Matrix m(rows, cols);
      for (Index i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) throw ParseError("bundle: truncated block", lineno);
        ++lineno;
        std::istringstream rs(line);
        for (Index j = 0; j < cols; ++j)
          if (!(rs >> m(i, j))) throw ParseError("bundle: short row", lineno);
      }
      blocks[name] = std::move(m);
    } else {
      throw ParseError("bundle: unknown key '" + key + "'", lineno);
    }
  }
  if (!have_mode || !have_dims) throw ParseError("bundle: missing header", 0);
  auto take = [&](const char* name) {
    auto it = blocks.find(name);
    if (it == blocks.end()) throw ParseError(std::string("bundle: missing block ") + name, 0);
    return it->second;
  };
  r.Ac = take("Ac");
  r.Bzeta = take("Bzeta");
  r.Bzhat = take("Bzhat");
  r.Bz = take("Bz");
  r.Cu = take("Cu");
  r.Dz = take("Dz");
  r.Meta = take("Meta");
  return r;
}

}  // namespace sfsync
