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

#ifndef FINEGRAPH_METRICS_HPP
#define FINEGRAPH_METRICS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "finegraph/graph.hpp"

namespace finegraph {

using Distance = std::uint32_t;
inline constexpr Distance kInfinity = std::numeric_limits<Distance>::max();

inline std::string distance_string(Distance d) { return d == kInfinity ? "inf" : std::to_string(d); }

//------------------------------------------------------------------------------
// Path metric
//------------------------------------------------------------------------------

/// BFS distances from `source`, optionally in the graph with `removed` deleted
/// (the removed vertex gets kInfinity). Stops expanding beyond `max_depth`.
inline std::vector<Distance> bfs_distances(const SimplicialGraph& g, Vertex source,
                                           std::optional<Vertex> removed = std::nullopt,
                                           Distance max_depth = kInfinity) {
  std::vector<Distance> dist(g.num_vertices(), kInfinity);
  if (removed && *removed == source) return dist;
  std::vector<Vertex> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Vertex x = queue[head];
    if (dist[x] >= max_depth) continue;
    for (Vertex y : g.neighbors(x)) {
      if (dist[y] != kInfinity || (removed && y == *removed)) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

/// Exact BFS distance; kInfinity iff x and y lie in different components.
inline Distance path_distance(const SimplicialGraph& g, Vertex x, Vertex y) { return bfs_distances(g, x)[y]; }

inline bool is_connected(const SimplicialGraph& g) {
  if (g.num_vertices() == 0) return true;
  auto d = bfs_distances(g, 0);
  return std::none_of(d.begin(), d.end(), [](Distance x) { return x == kInfinity; });
}

/// Connected-component label per vertex, labels in order of smallest member.
inline std::vector<std::size_t> components(const SimplicialGraph& g) {
  std::vector<std::size_t> label(g.num_vertices(), std::numeric_limits<std::size_t>::max());
  std::size_t next = 0;
  for (Vertex s = 0; s < g.num_vertices(); ++s) {
    if (label[s] != std::numeric_limits<std::size_t>::max()) continue;
    auto d = bfs_distances(g, s);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (d[v] != kInfinity) label[v] = next;
    }
    ++next;
  }
  return label;
}

/// Row-major all-pairs distance matrix.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(const SimplicialGraph& g) : n_(g.num_vertices()), d_(n_ * n_) {
    for (Vertex s = 0; s < n_; ++s) {
      auto row = bfs_distances(g, s);
      std::copy(row.begin(), row.end(), d_.begin() + static_cast<std::ptrdiff_t>(s * n_));
    }
  }
  std::size_t size() const { return n_; }
  Distance operator()(Vertex x, Vertex y) const { return d_[x * n_ + y]; }

 private:
  std::size_t n_ = 0;
  std::vector<Distance> d_;
};

/// Lexicographically least geodesic from x to y (in g - removed when given);
/// empty when y is unreachable.
inline std::vector<Vertex> geodesic(const SimplicialGraph& g, Vertex x, Vertex y,
                                    std::optional<Vertex> removed = std::nullopt) {
  auto to_target = bfs_distances(g, y, removed);
  if (to_target[x] == kInfinity) return {};
  std::vector<Vertex> path{x};
  Vertex cur = x;
  while (cur != y) {
    for (Vertex n : g.neighbors(cur)) {  // ascending = shortlex id order
      if (to_target[n] != kInfinity && to_target[n] + 1 == to_target[cur]) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
  }
  return path;
}

//------------------------------------------------------------------------------
// Angle metric
//------------------------------------------------------------------------------

/// Distance between two neighbours of v in the graph with v deleted.
inline Distance angle_distance(const SimplicialGraph& g, Vertex v, Vertex x, Vertex y) {
  if (!g.adjacent(v, x) || !g.adjacent(v, y)) {
    throw InvalidInput("angle_distance: '" + g.name(x) + "' and '" + g.name(y) + "' must both be adjacent to '" +
                       g.name(v) + "'");
  }
  return bfs_distances(g, x, v)[y];
}

/// The metric space (T_v, angle_v), materialised for all pairs of neighbours.
class AngleTable {
 public:
  AngleTable(const SimplicialGraph& g, Vertex v) : base_(v) {
    auto nb = g.neighbors(v);
    link_.assign(nb.begin(), nb.end());
    d_.resize(link_.size() * link_.size());
    for (std::size_t i = 0; i < link_.size(); ++i) {
      auto row = bfs_distances(g, link_[i], v);
      for (std::size_t j = 0; j < link_.size(); ++j) d_[i * link_.size() + j] = row[link_[j]];
    }
  }
  Vertex base() const { return base_; }
  const std::vector<Vertex>& link() const { return link_; }
  /// Position of x in link(), if adjacent to the base.
  std::optional<std::size_t> position(Vertex x) const {
    auto it = std::lower_bound(link_.begin(), link_.end(), x);
    if (it == link_.end() || *it != x) return std::nullopt;
    return static_cast<std::size_t>(it - link_.begin());
  }
  Distance at(std::size_t i, std::size_t j) const { return d_[i * link_.size() + j]; }
  Distance operator()(Vertex x, Vertex y) const { return at(*position(x), *position(y)); }

 private:
  Vertex base_;
  std::vector<Vertex> link_;
  std::vector<Distance> d_;
};

/// Closed ball in (T_v, angle_v).
struct AngleBall {
  Vertex base = 0;
  Vertex center = 0;
  Distance radius = 0;
  std::vector<Vertex> members;  // ascending
};

inline AngleBall angle_ball(const SimplicialGraph& g, Vertex v, Vertex center, Distance radius) {
  if (!g.adjacent(v, center)) throw InvalidInput("angle_ball: center must be adjacent to the base vertex");
  AngleBall ball{v, center, radius, {}};
  auto d = bfs_distances(g, center, v, radius);
  for (Vertex w : g.neighbors(v)) {
    if (d[w] <= radius) ball.members.push_back(w);
  }
  return ball;
}

//------------------------------------------------------------------------------
// Escaping paths
//------------------------------------------------------------------------------

/// The set uv(k): neighbours w of u lying on an escaping path from u to v of
/// length <= k, each with the lexicographically least shortest witness.
struct EscapingPathSet {
  Vertex u = 0;
  Vertex v = 0;
  Distance bound = 0;
  std::vector<Vertex> members;                  // ascending
  std::vector<std::vector<Vertex>> witnesses;   // witnesses[i] = [u, members[i], ..., v]

  bool contains(Vertex w) const { return std::binary_search(members.begin(), members.end(), w); }
};

/// A path [u, u_1, ..., u_n] escapes from u to v when it never revisits u and
/// meets v. Every escaping path can be cut at its first visit to v, so the
/// search keeps, for each candidate second vertex, only the remaining budget
/// needed to reach v in g - u.
inline EscapingPathSet escaping_set(const SimplicialGraph& g, Vertex u, Vertex v, Distance k) {
  if (u == v) throw InvalidInput("escaping_set requires u != v");
  if (k < 1) throw InvalidInput("escaping_set requires k >= 1");
  EscapingPathSet out{u, v, k, {}, {}};
  auto to_target = bfs_distances(g, v, u, k - 1);
  for (Vertex w : g.neighbors(u)) {
    if (to_target[w] > k - 1) continue;
    out.members.push_back(w);
    std::vector<Vertex> path{u, w};
    Vertex cur = w;
    while (cur != v) {
      for (Vertex n : g.neighbors(cur)) {
        if (n != u && to_target[n] != kInfinity && to_target[n] + 1 == to_target[cur]) {
          cur = n;
          break;
        }
      }
      path.push_back(cur);
    }
    out.witnesses.push_back(std::move(path));
  }
  return out;
}

//------------------------------------------------------------------------------
// Fineness probe
//------------------------------------------------------------------------------

enum class Trend { kStable, kGrowing };
inline std::string_view to_string(Trend t) { return t == Trend::kStable ? "stable" : "growing"; }

struct FinenessRow {
  int window = 0;
  Distance k = 0;
  std::size_t ball_size = 0;           // |B_{T_v}(center, k)|
  std::size_t max_escaping_size = 0;   // max over targets b != v of |vb(k)|
};

struct FinenessProbe {
  std::string vertex;
  std::string center;
  Distance k_max = 0;
  std::vector<int> windows;
  std::vector<FinenessRow> rows;  // window-major, k ascending
  Trend verdict = Trend::kStable;
};

/// Growth table of angle balls and escaping sets at `vertex` across a monotone
/// family of windowed graphs. The verdict is "stable" when the two largest
/// windows agree on every entry; it is a heuristic, not a certificate.
inline FinenessProbe fineness_probe(const std::function<SimplicialGraph(int)>& family, const std::vector<int>& windows,
                                    const std::string& vertex, Distance k_max) {
  if (windows.empty()) throw InvalidInput("fineness_probe needs at least one window");
  FinenessProbe probe;
  probe.vertex = vertex;
  probe.k_max = k_max;
  probe.windows = windows;
  for (int window : windows) {
    SimplicialGraph g = family(window);
    Vertex v = g.at(vertex);
    if (g.degree(v) == 0) throw InvalidInput("fineness_probe: vertex '" + vertex + "' is isolated");
    if (probe.center.empty()) probe.center = g.name(g.neighbors(v).front());
    Vertex center = g.at(probe.center);
    auto from_center = bfs_distances(g, center, v, k_max);
    auto from_v = bfs_distances(g, v, std::nullopt, k_max);
    std::vector<std::size_t> max_escaping(k_max + 1, 0);
    for (Vertex b = 0; b < g.num_vertices(); ++b) {
      if (b == v || from_v[b] > k_max) continue;
      auto to_b = bfs_distances(g, b, v, k_max - 1);
      for (Distance k = 1; k <= k_max; ++k) {
        std::size_t count = 0;
        for (Vertex w : g.neighbors(v)) count += to_b[w] <= k - 1 ? 1 : 0;
        max_escaping[k] = std::max(max_escaping[k], count);
      }
    }
    for (Distance k = 1; k <= k_max; ++k) {
      std::size_t ball = 0;
      for (Vertex w : g.neighbors(v)) ball += from_center[w] <= k ? 1 : 0;
      probe.rows.push_back({window, k, ball, max_escaping[k]});
    }
  }
  if (windows.size() >= 2) {
    std::size_t last = probe.rows.size() - k_max;
    std::size_t prev = last - k_max;
    for (Distance i = 0; i < k_max; ++i) {
      const auto& a = probe.rows[prev + i];
      const auto& b = probe.rows[last + i];
      if (a.ball_size != b.ball_size || a.max_escaping_size != b.max_escaping_size) probe.verdict = Trend::kGrowing;
    }
  }
  return probe;
}

//------------------------------------------------------------------------------
// Hyperbolicity
//------------------------------------------------------------------------------

/// Four-point estimate; stored doubled so half-integers stay exact.
struct HyperbolicityEstimate {
  std::int64_t delta_twice = 0;
  std::string basepoint;  // empty when maximised over all basepoints
  std::string method = "four-point";
  std::string provenance;

  double delta() const { return static_cast<double>(delta_twice) / 2.0; }
  /// Exact decimal form: "2" or "2.5".
  std::string text() const { return std::to_string(delta_twice / 2) + (delta_twice % 2 ? ".5" : ""); }
};

namespace detail {

inline std::int64_t four_point_defect_twice(const DistanceTable& d, Vertex w) {
  const std::size_t n = d.size();
  std::int64_t best = 0;
  // 2*(x|y)_w = d(x,w) + d(y,w) - d(x,y)
  auto product = [&](Vertex x, Vertex y) {
    return static_cast<std::int64_t>(d(x, w)) + d(y, w) - static_cast<std::int64_t>(d(x, y));
  };
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) {
      const std::int64_t xy = product(x, y);
      for (Vertex z = 0; z < n; ++z) {
        std::int64_t defect = std::min(product(x, z), product(y, z)) - xy;
        if (defect > best) best = defect;
      }
    }
  }
  return best;
}

}  // namespace detail

/// delta at a fixed basepoint w: the largest min((x|z)_w, (y|z)_w) - (x|y)_w.
inline HyperbolicityEstimate hyperbolicity_delta(const SimplicialGraph& g, Vertex basepoint) {
  if (!is_connected(g)) throw InvalidInput("hyperbolicity_delta requires a connected graph");
  DistanceTable d(g);
  return {detail::four_point_defect_twice(d, basepoint), g.name(basepoint), "four-point", ""};
}

/// Maximum of the fixed-basepoint estimate over every basepoint; equals the
/// four-point constant over all quadruples.
inline HyperbolicityEstimate hyperbolicity_delta_all_basepoints(const SimplicialGraph& g) {
  if (!is_connected(g)) throw InvalidInput("hyperbolicity_delta requires a connected graph");
  DistanceTable d(g);
  std::int64_t best = 0;
  for (Vertex w = 0; w < g.num_vertices(); ++w) best = std::max(best, detail::four_point_defect_twice(d, w));
  return {best, "", "four-point", "all basepoints"};
}

//------------------------------------------------------------------------------
// Quasi-isometry check
//------------------------------------------------------------------------------

struct QIViolation {
  enum class Kind { kLower, kUpper, kDensity } kind = Kind::kLower;
  Vertex x = 0;
  Vertex y = 0;  // for density: the uncovered target vertex
  Distance source_distance = 0;
  Distance target_distance = 0;
};

inline std::string_view to_string(QIViolation::Kind k) {
  switch (k) {
    case QIViolation::Kind::kLower: return "lower";
    case QIViolation::Kind::kUpper: return "upper";
    case QIViolation::Kind::kDensity: return "density";
  }
  return "";
}

struct QIWitness {
  double multiplicative = 1;  // L
  double additive = 0;        // C
  std::size_t pairs_checked = 0;
  std::size_t targets_checked = 0;
  std::optional<QIViolation> violation;

  bool passed() const { return !violation.has_value(); }
};

/// Restricts which pairs and targets qi_check inspects.
struct QIScope {
  std::optional<std::vector<Vertex>> sources;  // default: all of V(source)
  std::optional<std::vector<Vertex>> targets;  // default: all of V(target)
  std::function<bool(Vertex, Vertex)> pair_filter;
};

/// Exhaustively checks that q is an (L,C)-quasi-isometry on the scope.
inline QIWitness qi_check(const std::vector<Vertex>& q, const SimplicialGraph& source, const SimplicialGraph& target,
                          double L, double C, const QIScope& scope = {}) {
  if (q.size() != source.num_vertices()) throw InvalidInput("qi_check: map must be total on the source");
  if (L <= 0) throw InvalidInput("qi_check: L must be positive");
  QIWitness out{L, C, 0, 0, std::nullopt};
  std::vector<Vertex> sources;
  if (scope.sources) {
    sources = *scope.sources;
  } else {
    for (Vertex v = 0; v < source.num_vertices(); ++v) sources.push_back(v);
  }
  for (std::size_t i = 0; i < sources.size() && out.passed(); ++i) {
    Vertex x = sources[i];
    auto ds = bfs_distances(source, x);
    auto dt = bfs_distances(target, q[x]);
    for (std::size_t j = i + 1; j < sources.size(); ++j) {
      Vertex y = sources[j];
      if (scope.pair_filter && !scope.pair_filter(x, y)) continue;
      ++out.pairs_checked;
      Distance a = ds[y], b = dt[q[y]];
      bool lower_ok = true, upper_ok = true;
      if (a == kInfinity) {
        lower_ok = b == kInfinity;
      } else if (b != kInfinity) {
        lower_ok = static_cast<double>(a) / L - C <= static_cast<double>(b);
        upper_ok = static_cast<double>(b) <= L * static_cast<double>(a) + C;
      } else {
        upper_ok = false;
      }
      if (!lower_ok || !upper_ok) {
        out.violation = QIViolation{lower_ok ? QIViolation::Kind::kUpper : QIViolation::Kind::kLower, x, y, a, b};
        break;
      }
    }
  }
  if (!out.passed()) return out;
  // C-density: multi-source BFS from the image.
  std::vector<Distance> cover(target.num_vertices(), kInfinity);
  std::vector<Vertex> queue;
  for (Vertex x : sources) {
    if (cover[q[x]] != 0) {
      cover[q[x]] = 0;
      queue.push_back(q[x]);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Vertex n : target.neighbors(queue[head])) {
      if (cover[n] == kInfinity) {
        cover[n] = cover[queue[head]] + 1;
        queue.push_back(n);
      }
    }
  }
  std::vector<Vertex> targets;
  if (scope.targets) {
    targets = *scope.targets;
  } else {
    for (Vertex v = 0; v < target.num_vertices(); ++v) targets.push_back(v);
  }
  for (Vertex z : targets) {
    ++out.targets_checked;
    if (cover[z] == kInfinity || static_cast<double>(cover[z]) > C) {
      out.violation = QIViolation{QIViolation::Kind::kDensity, 0, z, 0, cover[z]};
      break;
    }
  }
  return out;
}

}  // namespace finegraph

#endif  // FINEGRAPH_METRICS_HPP
