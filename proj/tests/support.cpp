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

#include "support.hpp"

#include <algorithm>

#include "sfsync/errors.hpp"
#include "sfsync/rng.hpp"

namespace sfsync::testing {

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::vector<LtiAgent> draw_agents(Rng& rng, int n) {
  std::vector<LtiAgent> agents;
  for (int i = 0; i < n; ++i) {
    LtiAgent a = reference_agent(1 + static_cast<int>(rng.below(5)));
    a.id = i + 1;
    agents.push_back(std::move(a));
  }
  return agents;
}

}  // namespace

LtiAgent reference_agent(int k) {
  Matrix a, b, c;
  switch (k) {
    case 1:
      a = rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}});
      b = rows({{0, 1}, {0, 0}, {1, 0}, {0, 1}});
      c = rows({{1, 0, 0, 0}});
      break;
    case 2:
      a = rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
      b = rows({{0}, {0}, {1}});
      c = rows({{1, 0, 0}});
      break;
    case 3:
    case 4:
      a = rows({{-1, 0, 0, -1, 0},
                {0, 0, 1, 1, 0},
                {0, 1, -1, 1, 0},
                {0, 0, 0, 1, 1},
                {-1, 1, 0, 1, 1}});
      b = rows({{0, 0}, {0, 0}, {0, 1}, {0, 0}, {1, 0}});
      c = rows({{0, 0, 0, 1, 0}});
      break;
    case 5:
      a = rows({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}});
      b = rows({{0}, {0}, {1}});
      c = rows({{1, 0, 0}});
      break;
    default:
      throw Error("reference agents are numbered 1..5");
  }
  return LtiAgent::from_triple(a, b, c, k);
}

TargetModel oscillator_target() {
  return TargetModel{rows({{1, 0, 0}}), rows({{0, 1, 0}, {0, 0, 1}, {0, -1, 0}}),
                     rows({{0}, {0}, {1}}), 3};
}

Exosystem oscillator_exosystem() {
  Exosystem e;
  e.Ar = rows({{0, 1}, {-1, 0}});
  e.Cr = rows({{1, 0}});
  e.xr0 = Vector::Zero(2);
  e.xr0(0) = 1.0;
  return e;
}

ComplexList reference_k_poles() { return {-2.0, -3.0, -5.0}; }
ComplexList reference_h_poles() { return {-1.0, -2.0, -3.0}; }

Scenario random_sync_scenario(std::uint64_t seed, double T) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  const int n = 2 + static_cast<int>(rng.below(9));
  Scenario s;
  s.name = "sync-fuzz-" + std::to_string(seed);
  s.agents = draw_agents(rng, n);
  RandomGraphOptions g;
  g.random_weights = false;
  s.graph = random_admissible_graph(n, GraphClass::spanning_tree, RootSet{}, seed, g);
  s.mode = ProtocolMode::output_sync;
  s.target = oscillator_target();
  s.k_poles = reference_k_poles();
  s.h_poles = reference_h_poles();
  s.seed = seed;
  s.T = T;
  return s;
}

Scenario random_regulated_scenario(std::uint64_t seed, bool forest, double T) {
  Rng rng(seed * 0xbf58476d1ce4e5b9ULL + 7);
  const int n = (forest ? 3 : 2) + static_cast<int>(rng.below(forest ? 8 : 9));
  Scenario s;
  s.name = "reg-fuzz-" + std::to_string(seed);
  s.agents = draw_agents(rng, n);

  std::vector<int> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i)
    std::swap(nodes[static_cast<std::size_t>(i)],
              nodes[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
  const int min_roots = forest ? 2 : 1;
  const int count = min_roots + static_cast<int>(rng.below(static_cast<std::uint64_t>(
                                    std::max(1, n / 2 - min_roots + 1))));
  std::vector<int> members(nodes.begin(), nodes.begin() + count);
  std::sort(members.begin(), members.end());
  s.roots = RootSet(members);

  RandomGraphOptions g;
  g.random_weights = false;
  if (forest) g.density = 0.0;
  s.graph = random_admissible_graph(n, GraphClass::rootset, *s.roots, seed, g);
  s.mode = ProtocolMode::regulated;
  s.exosystem = oscillator_exosystem();
  s.seed = seed;
  s.T = T;
  return s;
}

std::string scenario_dir() { return SFS_SCENARIO_DIR; }

}  // namespace sfsync::testing
