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

#include "sfsync/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>
#include <sstream>

#include "sfsync/errors.hpp"
#include "sfsync/rng.hpp"

namespace sfsync {

DiGraph::DiGraph(Matrix weights) : weights_(std::move(weights)) {
  if (weights_.rows() != weights_.cols())
    throw DimensionError("graph: adjacency matrix must be square");
  for (Eigen::Index i = 0; i < weights_.rows(); ++i) {
    if (weights_(i, i) != 0.0)
      throw Error("self-loop forbidden at node " + std::to_string(i + 1));
    for (Eigen::Index j = 0; j < weights_.cols(); ++j)
      if (!(weights_(i, j) >= 0.0))
        throw Error("graph: negative or non-finite weight on edge " +
                    std::to_string(j + 1) + " -> " + std::to_string(i + 1));
  }
}

DiGraph DiGraph::from_edges(int nodes, const std::vector<Edge>& edges) {
  Matrix w = Matrix::Zero(nodes, nodes);
  for (const Edge& e : edges) {
    if (e.src < 0 || e.src >= nodes || e.dst < 0 || e.dst >= nodes)
      throw Error("graph: edge endpoint out of range");
    if (e.src == e.dst)
      throw Error("self-loop forbidden at node " + std::to_string(e.src + 1));
    w(e.dst, e.src) = e.weight;
  }
  return DiGraph(std::move(w));
}

std::vector<Edge> DiGraph::edges() const {
  std::vector<Edge> out;
  for (int j = 0; j < nodes(); ++j)
    for (int i = 0; i < nodes(); ++i)
      if (weights_(i, j) > 0.0) out.push_back({j, i, weights_(i, j)});
  return out;
}

RootSet::RootSet(std::vector<int> members) : members_(std::move(members)) {
  if (members_.empty()) throw Error("root set must be nonempty");
  std::sort(members_.begin(), members_.end());
  if (members_.front() < 0) throw Error("root set: negative node index");
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw Error("root set: duplicate member");
}

bool RootSet::contains(int i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

Vector RootSet::indicator(int n) const {
  Vector iota = Vector::Zero(n);
  for (int i : members_) {
    if (i >= n)
      throw Error("root set member " + std::to_string(i + 1) +
                  " exceeds node count " + std::to_string(n));
    iota(i) = 1.0;
  }
  return iota;
}

Matrix laplacian(const DiGraph& g) {
  Matrix l = -g.weights();
  for (int i = 0; i < g.nodes(); ++i) l(i, i) = g.weights().row(i).sum();
  return l;
}

std::vector<bool> reachable_from(const DiGraph& g,
                                 const std::vector<int>& sources) {
  const int n = g.nodes();
  std::vector<bool> seen(n, false);
  std::deque<int> queue;
  for (int s : sources) {
    if (s >= 0 && s < n && !seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const int j = queue.front();
    queue.pop_front();
    for (int i = 0; i < n; ++i) {
      if (!seen[i] && g.weight(i, j) > 0.0) {
        seen[i] = true;
        queue.push_back(i);
      }
    }
  }
  return seen;
}

bool contains_spanning_tree(const DiGraph& g) {
  for (int r = 0; r < g.nodes(); ++r) {
    const auto seen = reachable_from(g, {r});
    if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
      return true;
  }
  return false;
}

bool is_rootset_connected(const DiGraph& g, const RootSet& roots) {
  for (int r : roots.members())
    if (r >= g.nodes()) return false;
  const auto seen = reachable_from(g, roots.members());
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

Matrix expanded_laplacian(const DiGraph& g, const RootSet& roots) {
  Matrix l = laplacian(g);
  l.diagonal() += roots.indicator(g.nodes());
  return l;
}

Matrix reduced_laplacian(const Matrix& l) {
  if (l.rows() != l.cols() || l.rows() < 1)
    throw DimensionError("reduced_laplacian: expected a nonempty square matrix");
  const Eigen::Index m = l.rows() - 1;
  Matrix out(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out(i, j) = l(i, j) - l(m, j);
  return out;
}

DiGraph random_admissible_graph(int nodes, GraphClass cls, const RootSet& roots,
                                std::uint64_t seed,
                                const RandomGraphOptions& opts) {
  if (nodes < 1) throw Error("random graph: need at least one node");
  Rng rng(seed);
  auto draw_weight = [&] {
    return opts.random_weights ? rng.positive(opts.max_weight) : 1.0;
  };

  // Attachment order; every node after the anchors picks a parent among the
  // nodes placed before it.
  std::vector<int> order(nodes);
  std::iota(order.begin(), order.end(), 0);
  for (int i = nodes - 1; i > 0; --i)
    std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  int anchors = 1;
  if (cls == GraphClass::rootset) {
    std::vector<int> rest;
    for (int v : order)
      if (!roots.contains(v)) rest.push_back(v);
    order = roots.members();
    for (int r : order)
      if (r >= nodes) throw Error("random graph: root outside node range");
    anchors = static_cast<int>(order.size());
    order.insert(order.end(), rest.begin(), rest.end());
  }

  Matrix w = Matrix::Zero(nodes, nodes);
  for (int k = anchors; k < nodes; ++k) {
    const int parent = order[rng.below(static_cast<std::uint64_t>(k))];
    w(order[k], parent) = draw_weight();
  }
  for (int i = 0; i < nodes; ++i)
    for (int j = 0; j < nodes; ++j)
      if (i != j && w(i, j) == 0.0 && rng.bernoulli(opts.density))
        w(i, j) = draw_weight();
  return DiGraph(std::move(w));
}

DiGraph parse_edge_list(const std::string& text, int nodes) {
  std::istringstream in(text);
  std::string line;
  std::vector<Edge> edges;
  int max_index = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long src = 0, dst = 0;
    double w = 0.0;
    if (!(ls >> src)) continue;
    if (!(ls >> dst >> w))
      throw ParseError("edge list: expected 'src dst weight'", lineno);
    std::string extra;
    if (ls >> extra) throw ParseError("edge list: trailing token '" + extra + "'", lineno);
    if (src < 1 || dst < 1)
      throw ParseError("edge list: node indices are 1-based", lineno);
    if (src == dst) throw ParseError("self-loop forbidden", lineno);
    if (!(w >= 0.0)) throw ParseError("edge list: weight must be nonnegative", lineno);
    max_index = std::max<int>(max_index, static_cast<int>(std::max(src, dst)));
    edges.push_back({static_cast<int>(src - 1), static_cast<int>(dst - 1), w});
  }
  if (nodes < 0) nodes = max_index;
  if (max_index > nodes)
    throw ParseError("edge list: node " + std::to_string(max_index) +
                         " exceeds node count " + std::to_string(nodes),
                     0);
  return DiGraph::from_edges(nodes, edges);
}

std::string format_edge_list(const DiGraph& g) {
  std::string out;
  char buf[96];
  for (const Edge& e : g.edges()) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.src + 1, e.dst + 1, e.weight);
    out += buf;
  }
  return out;
}

}  // namespace sfsync
