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

// Scale-free collaborative protocols. Per agent, the controller state is
// s = (xi, xhat, chi) with
//
//   s' = Ac s + Bzeta zeta + Bzhat zhat + Bz z,   u = Cu s + Dz z,
//   eta = Meta s   (= chi, the broadcast signal)
//
// where zeta is the relative output measurement (or zeta tilde in regulated
// mode) and zhat the relative broadcast measurement. None of these matrices
// depends on the graph, the number of agents, or other agents' models.

#include <string>

#include "sfsync/homogenize.hpp"

namespace sfsync {

struct Gains {
  Matrix K;  // m_t x n_t, A - B K Hurwitz
  Matrix H;  // n_t x p,   A - H C Hurwitz
};

// Pole sets reproducing K = (30, 30, 10) and H = (6, 10, 0)' on the
// third-order oscillator-chain target; extended with further real poles for
// larger nq and truncated for smaller.
ComplexList default_k_poles(int nq);
ComplexList default_h_poles(int nq);

// Throws DesignError for non-Hurwitz or ill-sized pole requests.
Gains design_gains(const TargetModel& target, const ComplexList& k_poles,
                   const ComplexList& h_poles);

enum class ProtocolMode { output_sync, regulated };

const char* to_string(ProtocolMode mode);

struct ProtocolRealization {
  ProtocolMode mode = ProtocolMode::output_sync;
  int agent_id = 0;
  int iota = 0;
  Eigen::Index xi_dim = 0;
  Eigen::Index xhat_dim = 0;
  Eigen::Index chi_dim = 0;

  Matrix Ac;
  Matrix Bzeta;
  Matrix Bzhat;
  Matrix Bz;
  Matrix Cu;
  Matrix Dz;
  Matrix Meta;

  Eigen::Index states() const { return xi_dim + xhat_dim + chi_dim; }
};

ProtocolRealization build_output_protocol(int agent_id, const Precompensator& pre,
                                          const TargetModel& target,
                                          const Gains& gains);

ProtocolRealization build_regulated_protocol(int agent_id,
                                             const Precompensator& pre,
                                             const TargetModel& target,
                                             const Gains& gains, int iota);

// Matrix bundle text: header lines, then one "block <name> <rows> <cols>"
// section per matrix with rows in row-major order at %.17g precision. The
// agent id is not part of the bundle.
std::string serialize_bundle(const ProtocolRealization& r);
ProtocolRealization parse_bundle(const std::string& text);

}  // namespace sfsync
