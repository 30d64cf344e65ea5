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

// Target model selection and exosystem remodeling.

#include <string>
#include <vector>

#include "sfsync/lti.hpp"

namespace sfsync {

struct TargetModel {
  Matrix C;
  Matrix A;
  Matrix B;
  int nq = 0;  // uniform rank

  Eigen::Index states() const { return A.rows(); }
  LtiAgent as_system() const { return LtiAgent::from_triple(A, B, C); }
};

struct Exosystem {
  Matrix Ar;
  Matrix Cr;
  Vector xr0;
};

struct TargetValidation {
  bool passed = false;
  int nbar_d = 0;  // max relative degree over the agents
  int nq = 0;
  std::vector<std::string> violations;
};

// All conditions a target (C, A, B) must satisfy for the given agent set:
// rank C = p, square and invertible of uniform rank nq >= nbar_d, no invariant
// zeros, spectrum in the closed left half plane.
TargetValidation validate_target(const TargetModel& t,
                                 const std::vector<LtiAgent>& agents);

// max_i infinite_zero_order(agent_i); throws UnsupportedError for p != 1.
int max_relative_degree(const std::vector<LtiAgent>& agents);

// Observability and marginal-stability checks; empty when valid.
std::vector<std::string> exosystem_violations(const Exosystem& e);

// Companion-chain exosystem of order nq = max(nbar_d, r) producing the same
// outputs, with Cr = (1, 0, ..., 0) and Br = (0, ..., 0, 1)'. Single-output only.
TargetModel remodel_exosystem(const Exosystem& e,
                              const std::vector<LtiAgent>& agents);
TargetModel remodel_exosystem(const Exosystem& e, int nbar_d);

// (y_r, y_r', ..., y_r^(nq-1)) at t = 0.
Vector match_initial_condition(const Exosystem& e, const TargetModel& t,
                               const Vector& xr0);

// Integrator chain of length nq; the default output-synchronization target.
TargetModel integrator_chain_target(int nq);

}  // namespace sfsync
