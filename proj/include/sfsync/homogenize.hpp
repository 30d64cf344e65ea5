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

// Local pre-compensators reshaping each agent into the target model:
//
//   xi' = Ah xi + Bh z + Eh v,   u = Ch xi + Dz z + Dh v
//
// so that, in suitable coordinates, the compensated agent reads
//   xbar' = A xbar + B (v + rho),  y = C xbar,  rho = Cs omega,
// with every remaining mode Hurwitz. Dz is a direct feedthrough from the
// local measurement; it is what makes static laws (xi empty) expressible.

#include <limits>

#include "sfsync/target.hpp"

namespace sfsync {

struct Precompensator {
  Matrix Ah;
  Matrix Bh;
  Matrix Eh;
  Matrix Ch;
  Matrix Dz;
  Matrix Dh;

  Eigen::Index xi_dim() const { return Ah.rows(); }
  bool is_static() const { return Ah.rows() == 0; }
};

struct HomogenizationCertificate {
  // Internal modes of the compensated agent: first the autonomous block omega
  // whose output rho = Cs omega enters the target input channel, then the
  // zero dynamics that neither the output nor rho can see.
  Matrix As;
  Matrix Cs;
  double decay_rate = std::numeric_limits<double>::infinity();
  // max_k |M_k - Mt_k| / max(1, |C_c| |A_c|^k |B_c|) (spectral norms, with
  // |A_c| floored at 1) over the Markov
  // parameters of the compensated system M_k and of the target Mt_k.
  double markov_error = 0.0;
  // How strongly v excites omega (zero when rho is autonomous).
  double input_residual = 0.0;
  // Rank of the map onto target coordinates.
  Eigen::Index minimal_order = 0;
  bool hurwitz = true;

  bool valid(double tol = 1e-6) const {
    return hurwitz && markov_error < tol && input_residual < tol;
  }
};

struct HomogenizationOptions {
  // Observer poles {-5, -6, ...}; only used when Cm has deficient column rank.
  double observer_pole_start = -5.0;
  double observer_pole_step = 1.0;
  // Assignable zero-dynamics poles {-1, -2, ...}.
  double zero_dynamics_pole_start = -1.0;
  double zero_dynamics_pole_step = 1.0;
};

struct HomogenizationResult {
  Precompensator pre;
  HomogenizationCertificate certificate;
};

// Integrator extension + feedback linearization of the (estimated) state.
// Throws UnsupportedError for p != 1, for agents whose fixed zero dynamics are
// not Hurwitz, or when (Cm, A) is not detectable.
HomogenizationResult design_precompensator(const LtiAgent& agent,
                                           const TargetModel& target,
                                           const HomogenizationOptions& opts = {});

HomogenizationCertificate verify_homogenization(const LtiAgent& agent,
                                                const Precompensator& pre,
                                                const TargetModel& target);

// u = v, no state. Used when an agent already is the target model.
Precompensator identity_precompensator(const LtiAgent& agent);

// Agent (A, B, C) coincides with the target triple.
bool matches_target(const LtiAgent& agent, const TargetModel& target);

struct CompensatedSystem {
  Matrix A;  // over (x, xi)
  Matrix B;  // from v
  Matrix C;  // to y
};

CompensatedSystem compensate(const LtiAgent& agent, const Precompensator& pre);

// Linear map (x, xi) -> xbar: the target-model coordinates of a compensated
// agent, obtained from its first nq output derivatives.
Matrix target_coordinates(const LtiAgent& agent, const Precompensator& pre,
                          const TargetModel& target);

}  // namespace sfsync
