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

// Shared fixtures for the unit tests and the acceptance suite: the five
// reference agents, the oscillator-chain target, and random scenario
// generators for the synchronization fuzz runs.

#include <cstdint>
#include <string>

#include "sfsync/sim.hpp"

namespace sfsync::testing {

// Reference agents 1..5 (agents 3 and 4 share a model). Cm = I.
LtiAgent reference_agent(int k);
// y''' = -y' + v.
TargetModel oscillator_target();
// x_r' = [[0, 1], [-1, 0]] x_r, y_r = x_r1, x_r(0) = (1, 0): y_r = cos t.
Exosystem oscillator_exosystem();
ComplexList reference_k_poles();
ComplexList reference_h_poles();

// Random output-synchronization scenario: N in [2, 10], agents drawn from the
// reference pool, random spanning-tree graph with unit weights, oscillator
// target, uniform [-1, 1] initial states.
Scenario random_sync_scenario(std::uint64_t seed, double T = 40.0);

// Random regulated scenario with the oscillator exosystem. When `forest` is
// set the graph is a forest anchored at >= 2 roots (no spanning tree).
// Gains use the default poles for the remodeled target order.
Scenario random_regulated_scenario(std::uint64_t seed, bool forest, double T = 40.0);

// Directory holding the bundled .scn files.
std::string scenario_dir();

}  // namespace sfsync::testing
