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

// Weighted directed communication graphs. weight(i, j) = a_ij is the weight
// of the edge j -> i: node i listens to node j. Node indices are 0-based in
// the C++ API and 1-based in the edge-list text format.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sfsync/linalg.hpp"

namespace sfsync {

struct Edge {
  int src = 0;
  int dst = 0;
  double weight = 1.0;
};

class DiGraph {
 public:
  DiGraph() = default;
  // Throws Error on negative weights or self-loops.
  explicit DiGraph(Matrix weights);

  static DiGraph from_edges(int nodes, const std::vector<Edge>& edges);

  int nodes() const { return static_cast<int>(weights_.rows()); }
  double weight(int i, int j) const { return weights_(i, j); }
  const Matrix& weights() const { return weights_; }
  std::vector<Edge> edges() const;

  bool operator==(const DiGraph& other) const {
    return weights_ == other.weights_;
  }

 private:
  Matrix weights_;
};

class RootSet {
 public:
  RootSet() = default;
  // Throws Error if members is empty or contains duplicates / negatives.
  explicit RootSet(std::vector<int> members);

  const std::vector<int>& members() const { return members_; }
  bool contains(int i) const;
  // iota_i in {0, 1} for i = 0..n-1; throws if a member is >= n.
  Vector indicator(int n) const;

 private:
  std::vector<int> members_;
};

Matrix laplacian(const DiGraph& g);
bool contains_spanning_tree(const DiGraph& g);
bool is_rootset_connected(const DiGraph& g, const RootSet& roots);
Matrix expanded_laplacian(const DiGraph& g, const RootSet& roots);
// lbar_ij = l_ij - l_Nj for i, j < N.
Matrix reduced_laplacian(const Matrix& l);

// Nodes reachable from `sources` along directed edges (BFS on the support).
std::vector<bool> reachable_from(const DiGraph& g, const std::vector<int>& sources);

struct RandomGraphOptions {
  // Probability of each extra (non-tree) directed edge.
  double density = 0.3;
  // Weights are drawn uniformly from (0, max_weight]; unit weights if false.
  bool random_weights = true;
  double max_weight = 2.0;
};

enum class GraphClass { spanning_tree, rootset };

// Random spanning tree (or forest anchored at the roots) plus extra random
// edges. Deterministic in `seed`.
DiGraph random_admissible_graph(int nodes, GraphClass cls, const RootSet& roots,
                                std::uint64_t seed,
                                const RandomGraphOptions& opts = {});

// Edge-list text: one "src dst weight" triple per line, 1-based, '#' comments.
// `nodes` < 0 infers the node count from the largest index.
DiGraph parse_edge_list(const std::string& text, int nodes = -1);
std::string format_edge_list(const DiGraph& g);

}  // namespace sfsync
