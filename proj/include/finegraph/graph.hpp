// Copyright 2026 The finegraph Authors
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

#ifndef FINEGRAPH_GRAPH_HPP
#define FINEGRAPH_GRAPH_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "finegraph/group.hpp"

namespace finegraph {

using Vertex = std::size_t;
using Edge = std::pair<Vertex, Vertex>;  // first < second

/// Shortlex order on vertex ids: length first, then bytewise.
inline bool id_shortlex_less(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Undirected simplicial graph: no loops, no multi-edges.
///
/// Vertex indices follow the shortlex order of the ids, so iterating indices or
/// sorted adjacency lists visits vertices in shortlex id order.
class SimplicialGraph {
 public:
  SimplicialGraph() = default;

  std::size_t num_vertices() const { return names_.size(); }
  std::size_t num_edges() const { return num_edges_; }

  const std::string& name(Vertex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  Vertex at(std::string_view id) const {
    auto v = find(id);
    if (!v) throw InvalidInput("unknown vertex '" + std::string(id) + "'");
    return *v;
  }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  bool adjacent(Vertex u, Vertex v) const {
    const auto& a = adjacency_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  /// All edges (u < v), lexicographically ordered.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges_);
    for (Vertex u = 0; u < adjacency_.size(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  /// Same vertex set (and indices) with extra edges. Edges already present are
  /// ignored; loops are rejected.
  SimplicialGraph with_edges(std::span<const Edge> extra) const {
    SimplicialGraph g = *this;
    for (auto [u, v] : extra) g.insert_edge(u, v);
    for (auto& a : g.adjacency_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    g.recount();
    return g;
  }

  friend bool operator==(const SimplicialGraph& a, const SimplicialGraph& b) {
    return a.names_ == b.names_ && a.adjacency_ == b.adjacency_;
  }

 private:
  friend class GraphBuilder;

  void insert_edge(Vertex u, Vertex v) {
    if (u == v) throw InvalidInput("loop edge at '" + names_.at(u) + "' (graphs are anti-reflexive)");
    if (u >= names_.size() || v >= names_.size()) throw InvalidInput("edge endpoint out of range");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  void recount() {
    std::size_t twice = 0;
    for (const auto& a : adjacency_) twice += a.size();
    num_edges_ = twice / 2;
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, Vertex> index_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t num_edges_ = 0;
};

/// Accumulates vertex ids and edges by id; build() fixes the shortlex indexing.
class GraphBuilder {
 public:
  GraphBuilder& add_vertex(std::string id) {
    if (id.empty()) throw InvalidInput("empty vertex id");
    if (seen_.emplace(id, ids_.size()).second) ids_.push_back(std::move(id));
    return *this;
  }
  GraphBuilder& add_edge(const std::string& a, const std::string& b) {
    if (a == b) throw InvalidInput("loop edge at '" + a + "' (graphs are anti-reflexive)");
    add_vertex(a);
    add_vertex(b);
    edges_.emplace_back(a, b);
    return *this;
  }
  bool has_vertex(const std::string& id) const { return seen_.contains(id); }

  SimplicialGraph build() const {
    SimplicialGraph g;
    g.names_ = ids_;
    std::sort(g.names_.begin(), g.names_.end(), [](const std::string& a, const std::string& b) {
      return id_shortlex_less(a, b);
    });
    for (Vertex v = 0; v < g.names_.size(); ++v) g.index_.emplace(g.names_[v], v);
    g.adjacency_.assign(g.names_.size(), {});
    for (const auto& [a, b] : edges_) g.insert_edge(g.index_.at(a), g.index_.at(b));
    for (auto& a : g.adjacency_) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    g.recount();
    return g;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> seen_;
  std::vector<std::pair<std::string, std::string>> edges_;
};

inline SimplicialGraph make_graph(const std::vector<std::string>& vertices,
                                  const std::vector<std::pair<std::string, std::string>>& edges) {
  GraphBuilder b;
  for (const auto& v : vertices) b.add_vertex(v);
  for (const auto& [x, y] : edges) b.add_edge(x, y);
  return b.build();
}

/// Cycle on vertices v0..v{n-1}.
inline SimplicialGraph cycle_graph(std::size_t n) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  for (std::size_t i = 0; i < n && n >= 3; ++i) b.add_edge("v" + std::to_string(i), "v" + std::to_string((i + 1) % n));
  return b.build();
}

}  // namespace finegraph

#endif  // FINEGRAPH_GRAPH_HPP
