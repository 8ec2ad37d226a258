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

#ifndef FINEGRAPH_GGRAPH_HPP
#define FINEGRAPH_GGRAPH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "finegraph/graph.hpp"
#include "finegraph/group.hpp"
#include "finegraph/metrics.hpp"

namespace finegraph {

//------------------------------------------------------------------------------
// Partial group actions
//------------------------------------------------------------------------------

/// Action of the window elements on a vertex set. Each element acts by a
/// partial injective map; kOut marks vertices whose image leaves the window.
class GroupAction {
 public:
  static constexpr Vertex kOut = std::numeric_limits<Vertex>::max();

  GroupAction() = default;
  GroupAction(WindowPtr window, std::vector<std::vector<Vertex>> images)
      : window_(std::move(window)), images_(std::move(images)) {
    if (images_.size() != window_->size()) throw InvalidInput("action needs one map per window element");
    n_ = images_.empty() ? 0 : images_.front().size();
    for (const auto& m : images_) {
      if (m.size() != n_) throw InvalidInput("action maps have inconsistent vertex counts");
    }
  }

  /// Builds the action of every window element from partial maps of the
  /// generators, composing along shortlex words: g = p.x acts as p after x.
  static GroupAction from_generators(WindowPtr window, std::size_t num_vertices,
                                     const std::vector<std::vector<Vertex>>& generator_maps) {
    const Group& group = window->group();
    if (generator_maps.size() != group.num_generators()) {
      throw InvalidInput("action must give one map per generator");
    }
    std::vector<std::vector<Vertex>> letter_maps;
    for (const auto& m : generator_maps) {
      if (m.size() != num_vertices) throw InvalidInput("generator map has wrong vertex count");
      std::vector<Vertex> inv(num_vertices, kOut);
      for (Vertex v = 0; v < num_vertices; ++v) {
        if (m[v] == kOut) continue;
        if (m[v] >= num_vertices) throw InvalidInput("generator map image out of range");
        if (inv[m[v]] != kOut) throw InvalidInput("generator map is not injective");
        inv[m[v]] = v;
      }
      letter_maps.push_back(m);
      letter_maps.push_back(std::move(inv));
    }
    std::vector<std::vector<Vertex>> images(window->size());
    images[0].resize(num_vertices);
    std::iota(images[0].begin(), images[0].end(), Vertex{0});
    for (std::size_t i = 1; i < window->size(); ++i) {
      const auto& parent = images[window->parent(i)];
      const auto& letter = letter_maps[window->last_letter(i).code()];
      images[i].resize(num_vertices);
      for (Vertex v = 0; v < num_vertices; ++v) {
        Vertex x = letter[v];
        images[i][v] = x == kOut ? kOut : parent[x];
      }
    }
    return GroupAction(std::move(window), std::move(images));
  }

  /// Every window element acts as the identity.
  static GroupAction trivial(WindowPtr window, std::size_t num_vertices) {
    std::vector<Vertex> id(num_vertices);
    std::iota(id.begin(), id.end(), Vertex{0});
    std::vector<std::vector<Vertex>> images(window->size(), id);
    return GroupAction(std::move(window), std::move(images));
  }

  const Window& window() const { return *window_; }
  const WindowPtr& window_ptr() const { return window_; }
  std::size_t num_elements() const { return images_.size(); }
  std::size_t num_vertices() const { return n_; }

  Vertex image(std::size_t g, Vertex v) const { return images_[g][v]; }
  std::optional<Vertex> apply(std::size_t g, Vertex v) const {
    Vertex x = images_[g][v];
    if (x == kOut) return std::nullopt;
    return x;
  }
  const std::vector<Vertex>& map(std::size_t g) const { return images_[g]; }

  bool truncated() const {
    for (const auto& m : images_) {
      for (Vertex x : m) {
        if (x == kOut) return true;
      }
    }
    return false;
  }

  /// First violated action axiom on `graph`, or nullopt. Checks the identity,
  /// compatibility (g.(x.v) = (gx).v for generator letters x) and that edges
  /// map to edges, wherever every vertex involved is in-window.
  std::optional<std::string> verify(const SimplicialGraph& graph) const {
    if (graph.num_vertices() != n_) return "vertex count mismatch";
    for (Vertex v = 0; v < n_; ++v) {
      if (images_[0][v] != v) return "identity moves '" + graph.name(v) + "'";
    }
    const Window& w = *window_;
    const Group& group = w.group();
    for (std::size_t code = 0; code < group.alphabet_size(); ++code) {
      auto letter = w.find(group.letter_element(Letter::from_code(static_cast<int>(code))));
      if (!letter) continue;
      for (std::size_t g = 0; g < w.size(); ++g) {
        auto gx = w.product(g, *letter);
        if (!gx) continue;
        for (Vertex v = 0; v < n_; ++v) {
          Vertex a = images_[*letter][v];
          if (a == kOut) continue;
          Vertex lhs = images_[g][a];
          Vertex rhs = images_[*gx][v];
          if (lhs != kOut && rhs != kOut && lhs != rhs) {
            return "compatibility fails for " + w.name(g) + " and letter " + group.format_word({Letter::from_code(static_cast<int>(code))}) +
                   " at '" + graph.name(v) + "'";
          }
        }
      }
    }
    for (std::size_t g = 0; g < w.size(); ++g) {
      for (auto [x, y] : graph.edges()) {
        Vertex a = images_[g][x], b = images_[g][y];
        if (a != kOut && b != kOut && !graph.adjacent(a, b)) {
          return "element " + w.name(g) + " maps edge {" + graph.name(x) + "," + graph.name(y) + "} to a non-edge";
        }
      }
    }
    return std::nullopt;
  }

 private:
  WindowPtr window_;
  std::vector<std::vector<Vertex>> images_;
  std::size_t n_ = 0;
};

//------------------------------------------------------------------------------
// Orbits and stabilizers
//------------------------------------------------------------------------------

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;  // the smaller index stays the root
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::uint64_t edge_key(Vertex a, Vertex b) {
  if (b < a) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

/// Dense labels 0.. in order of the smallest member of each class.
inline std::vector<std::size_t> dense_labels(DisjointSets& sets, std::size_t n, std::vector<std::size_t>& reps) {
  std::vector<std::size_t> label(n);
  std::unordered_map<std::size_t, std::size_t> root_label;
  reps.clear();
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = root_label.emplace(sets.find(i), reps.size());
    if (inserted) reps.push_back(i);
    label[i] = it->second;
  }
  return label;
}

}  // namespace detail

struct OrbitDecomposition {
  std::vector<std::size_t> vertex_orbit;
  std::vector<Vertex> vertex_representatives;  // shortlex-least id per orbit
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_orbit;
  std::vector<Edge> edge_representatives;
  bool window_truncated = false;  // some image left the window

  std::size_t num_vertex_orbits() const { return vertex_representatives.size(); }
  std::size_t num_edge_orbits() const { return edge_representatives.size(); }
};

/// Orbits under the enumerated elements. For infinite backends the labels are
/// a refinement of the true orbits and window_truncated is set.
inline OrbitDecomposition orbit_decomposition(const SimplicialGraph& graph, const GroupAction& action) {
  OrbitDecomposition out;
  const std::size_t n = graph.num_vertices();
  detail::DisjointSets vsets(n);
  out.edges = graph.edges();
  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    edge_index.emplace(detail::edge_key(out.edges[i].first, out.edges[i].second), i);
  }
  detail::DisjointSets esets(out.edges.size());
  for (std::size_t g = 0; g < action.num_elements(); ++g) {
    const auto& m = action.map(g);
    for (Vertex v = 0; v < n; ++v) {
      if (m[v] == GroupAction::kOut) {
        out.window_truncated = true;
      } else {
        vsets.unite(v, m[v]);
      }
    }
    for (std::size_t i = 0; i < out.edges.size(); ++i) {
      Vertex a = m[out.edges[i].first], b = m[out.edges[i].second];
      if (a == GroupAction::kOut || b == GroupAction::kOut) continue;
      auto it = edge_index.find(detail::edge_key(a, b));
      if (it != edge_index.end()) esets.unite(i, it->second);
    }
  }
  if (!action.window().covers_group()) out.window_truncated = true;
  std::vector<std::size_t> reps;
  out.vertex_orbit = detail::dense_labels(vsets, n, reps);
  out.vertex_representatives.assign(reps.begin(), reps.end());
  out.edge_orbit = detail::dense_labels(esets, out.edges.size(), reps);
  for (auto r : reps) out.edge_representatives.push_back(out.edges[r]);
  return out;
}

struct Stabilizer {
  std::vector<std::size_t> elements;  // window indices, shortlex order
  bool window_truncated = false;
};

inline Stabilizer stabilizer(const GroupAction& action, Vertex v) {
  Stabilizer s;
  for (std::size_t g = 0; g < action.num_elements(); ++g) {
    if (action.image(g, v) == v) s.elements.push_back(g);
  }
  s.window_truncated = !action.window().covers_group();
  return s;
}

/// Elements mapping the edge {x, y} to itself in either orientation.
inline Stabilizer edge_stabilizer(const GroupAction& action, Edge e) {
  Stabilizer s;
  for (std::size_t g = 0; g < action.num_elements(); ++g) {
    Vertex a = action.image(g, e.first), b = action.image(g, e.second);
    if ((a == e.first && b == e.second) || (a == e.second && b == e.first)) s.elements.push_back(g);
  }
  s.window_truncated = !action.window().covers_group();
  return s;
}

/// Number of G_a-orbits on a subset of vertices (typically a link T_a).
inline std::size_t stabilizer_orbit_count(const GroupAction& action, Vertex a, const std::vector<Vertex>& subset) {
  if (subset.empty()) return 0;
  std::unordered_map<Vertex, std::size_t> pos;
  for (std::size_t i = 0; i < subset.size(); ++i) pos.emplace(subset[i], i);
  detail::DisjointSets sets(subset.size());
  for (std::size_t g : stabilizer(action, a).elements) {
    for (std::size_t i = 0; i < subset.size(); ++i) {
      auto it = pos.find(action.image(g, subset[i]));
      if (it != pos.end()) sets.unite(i, it->second);
    }
  }
  std::vector<std::size_t> reps;
  detail::dense_labels(sets, subset.size(), reps);
  return reps.size();
}

inline std::size_t link_orbit_count(const SimplicialGraph& graph, const GroupAction& action, Vertex a) {
  auto nb = graph.neighbors(a);
  return stabilizer_orbit_count(action, a, std::vector<Vertex>(nb.begin(), nb.end()));
}

//------------------------------------------------------------------------------
// Edge-orbit attachment
//------------------------------------------------------------------------------

struct AttachmentResult {
  SimplicialGraph graph;
  Vertex u = 0;
  Vertex v = 0;
  std::vector<Edge> new_edges;             // ascending, none of them in the input graph
  std::vector<std::size_t> dropped;        // window elements g with g.u or g.v out of window
  std::vector<std::vector<Vertex>> new_neighbors;  // D_a = T_a(new) - T_a(old), per vertex
};

/// Adds {g.u, g.v} for every enumerated g. Translates leaving the window are
/// dropped and recorded.
inline AttachmentResult attach_edge_orbit(const SimplicialGraph& graph, const GroupAction& action, Vertex u, Vertex v) {
  if (u == v) throw InvalidInput("attach_edge_orbit requires distinct vertices");
  if (graph.adjacent(u, v)) {
    throw InvalidInput("attach_edge_orbit: {" + graph.name(u) + "," + graph.name(v) + "} is already an edge");
  }
  if (action.num_vertices() != graph.num_vertices()) throw InvalidInput("action does not match graph");
  AttachmentResult out;
  out.u = u;
  out.v = v;
  std::set<Edge> added;
  for (std::size_t g = 0; g < action.num_elements(); ++g) {
    Vertex a = action.image(g, u), b = action.image(g, v);
    if (a == GroupAction::kOut || b == GroupAction::kOut) {
      out.dropped.push_back(g);
      continue;
    }
    if (a == b) throw InvalidInput("action is not injective on the attached pair");
    if (!graph.adjacent(a, b)) added.insert(a < b ? Edge{a, b} : Edge{b, a});
  }
  out.new_edges.assign(added.begin(), added.end());
  out.graph = graph.with_edges(out.new_edges);
  out.new_neighbors.assign(graph.num_vertices(), {});
  for (auto [a, b] : out.new_edges) {
    out.new_neighbors[a].push_back(b);
    out.new_neighbors[b].push_back(a);
  }
  for (auto& d : out.new_neighbors) std::sort(d.begin(), d.end());
  return out;
}

/// Number of G_a-orbits in D_a = T_a(new) - T_a(old).
inline std::size_t new_orbit_count(const AttachmentResult& attachment, const GroupAction& action, Vertex a) {
  return stabilizer_orbit_count(action, a, attachment.new_neighbors.at(a));
}

//------------------------------------------------------------------------------
// (G,H)-graph validation
//------------------------------------------------------------------------------

enum class Verdict { kPass, kFail, kWindowInconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kWindowInconclusive: return "window-inconclusive";
  }
  return "";
}

/// Declared vertex stabilizer type, used where a window cannot decide
/// infiniteness.
enum class StabilizerTag { kUnknown, kFinite, kConjugateOfH };

inline std::string_view to_string(StabilizerTag t) {
  switch (t) {
    case StabilizerTag::kUnknown: return "unknown";
    case StabilizerTag::kFinite: return "finite";
    case StabilizerTag::kConjugateOfH: return "H";
  }
  return "";
}

struct ItemVerdict {
  Verdict verdict = Verdict::kWindowInconclusive;
  std::string evidence;
  std::optional<Trend> trend;
};

struct ActedGraph {
  SimplicialGraph graph;
  GroupAction action;
};

struct AttachmentRecord {
  std::string u;
  std::string v;
  std::size_t new_edges = 0;
  std::size_t dropped = 0;
  std::size_t max_new_orbits = 0;  // max over vertices a of |G_a \ D_a|
};

struct ValidationOptions {
  std::vector<StabilizerTag> tags;  // per vertex; empty = nothing declared
  std::optional<Vertex> apex;       // vertex declared to have stabilizer exactly H
  /// Monotone family of windowed graphs used for stability evidence.
  std::function<ActedGraph(int)> family;
  std::vector<int> probe_windows;
  Distance k_max = 4;
  std::size_t delta_vertex_cap = 1200;
};

struct GHGraphReport {
  std::array<ItemVerdict, 5> items;
  std::optional<HyperbolicityEstimate> delta;
  std::vector<std::string> infinite_stabilizer_vertices;  // V_infinity
  std::vector<FinenessProbe> fineness;
  std::vector<AttachmentRecord> attachments;
  std::vector<std::string> notes;

  bool any_fail() const {
    return std::any_of(items.begin(), items.end(), [](const ItemVerdict& i) { return i.verdict == Verdict::kFail; });
  }
  bool all_pass() const {
    return std::all_of(items.begin(), items.end(), [](const ItemVerdict& i) { return i.verdict == Verdict::kPass; });
  }
};

/// Checks the five (G,H)-graph conditions on a windowed G-graph. Finite
/// backends with a full window are decided exactly; otherwise declared
/// stabilizer metadata is cross-checked against window evidence and
/// hyperbolicity is only estimated.
inline GHGraphReport validate_gh_graph(const SimplicialGraph& graph, const GroupAction& action, const Subgroup& h,
                                       const ValidationOptions& options = {}) {
  GHGraphReport report;
  const Window& window = action.window();
  const Group& group = window.group();
  const bool exact = window.covers_group();
  auto tag_of = [&](Vertex v) { return options.tags.empty() ? StabilizerTag::kUnknown : options.tags.at(v); };

  // (1) connected and hyperbolic
  {
    auto& item = report.items[0];
    if (!is_connected(graph)) {
      item = {Verdict::kFail, "graph is disconnected", std::nullopt};
    } else {
      std::string delta_text = "delta not estimated (vertex cap)";
      if (graph.num_vertices() <= options.delta_vertex_cap && graph.num_vertices() > 0) {
        report.delta = hyperbolicity_delta(graph, 0);
        delta_text = "delta(" + graph.name(0) + ") = " + report.delta->text();
      }
      if (exact) {
        item = {Verdict::kPass, "connected; finite graph; " + delta_text, std::nullopt};
      } else {
        item = {Verdict::kWindowInconclusive, "connected on window; " + delta_text, std::nullopt};
        if (options.family && options.probe_windows.size() >= 2 && report.delta) {
          auto prev = options.family(options.probe_windows[options.probe_windows.size() - 2]);
          if (prev.graph.num_vertices() <= options.delta_vertex_cap && is_connected(prev.graph)) {
            auto d = hyperbolicity_delta(prev.graph, prev.graph.at(graph.name(0)));
            item.trend = d.delta_twice == report.delta->delta_twice ? Trend::kStable : Trend::kGrowing;
          }
        }
      }
    }
  }

  auto orbits = orbit_decomposition(graph, action);

  // (2) finitely many vertex orbits
  {
    auto& item = report.items[1];
    std::string evidence = std::to_string(orbits.num_vertex_orbits()) + " vertex orbits";
    if (exact) {
      item = {Verdict::kPass, evidence, std::nullopt};
    } else if (options.family && options.probe_windows.size() >= 2) {
      auto prev = options.family(options.probe_windows[options.probe_windows.size() - 2]);
      auto prev_orbits = orbit_decomposition(prev.graph, prev.action);
      bool stable = prev_orbits.num_vertex_orbits() == orbits.num_vertex_orbits();
      item = {stable ? Verdict::kPass : Verdict::kWindowInconclusive,
              evidence + " (previous window: " + std::to_string(prev_orbits.num_vertex_orbits()) + ")",
              stable ? Trend::kStable : Trend::kGrowing};
    } else {
      item = {Verdict::kWindowInconclusive, evidence + " on window", std::nullopt};
    }
  }

  // (3) vertex stabilizers finite or conjugate to H; one equal to H
  {
    auto& item = report.items[2];
    if (exact) {
      std::set<std::size_t> h_set;
      for (const auto& x : h.elements()) h_set.insert(window.index_of(x));
      std::optional<Vertex> found;
      for (Vertex v = 0; v < graph.num_vertices() && !found; ++v) {
        auto s = stabilizer(action, v).elements;
        if (std::set<std::size_t>(s.begin(), s.end()) == h_set) found = v;
      }
      if (found) {
        item = {Verdict::kPass, "all stabilizers finite; G_v = H at '" + graph.name(*found) + "'", std::nullopt};
      } else {
        item = {Verdict::kFail, "no vertex has stabilizer exactly H", std::nullopt};
      }
    } else if (!options.apex) {
      item = {Verdict::kWindowInconclusive, "no vertex declared with stabilizer H", std::nullopt};
    } else {
      Vertex apex = *options.apex;
      std::string problem;
      for (std::size_t g : stabilizer(action, apex).elements) {
        if (!h.contains(window.element(g))) problem = "window element " + window.name(g) + " fixes the apex but is not in H";
      }
      for (std::size_t g = 0; g < window.size() && problem.empty(); ++g) {
        if (!h.contains(window.element(g))) continue;
        Vertex x = action.image(g, apex);
        if (x != GroupAction::kOut && x != apex) problem = "element " + window.name(g) + " of H moves the apex";
      }
      for (Vertex v = 0; v < graph.num_vertices() && problem.empty(); ++v) {
        if (tag_of(v) != StabilizerTag::kConjugateOfH || v == apex) continue;
        std::optional<std::size_t> carrier;
        for (std::size_t g = 0; g < window.size() && !carrier; ++g) {
          if (action.image(g, apex) == v) carrier = g;
        }
        if (!carrier) continue;  // no in-window translate: nothing to cross-check
        const Element& c = window.element(*carrier);
        for (std::size_t s : stabilizer(action, v).elements) {
          Element conj = group.multiply(group.multiply(group.invert(c), window.element(s)), c);
          if (!h.contains(conj)) {
            problem = "stabilizer of '" + graph.name(v) + "' is not inside the conjugate of H";
            break;
          }
        }
      }
      if (problem.empty()) {
        item = {Verdict::kPass, "declared metadata consistent with window; apex '" + graph.name(apex) + "'", std::nullopt};
        report.notes.push_back("item (3): stabilizer H at the apex is declared, not derived");
      } else {
        item = {Verdict::kFail, problem, std::nullopt};
      }
    }
  }

  // (4) finite edge stabilizers
  {
    auto& item = report.items[3];
    if (exact) {
      item = {Verdict::kPass, "finite group", std::nullopt};
    } else {
      bool all_declared = !options.tags.empty();
      for (auto [x, y] : graph.edges()) {
        if (tag_of(x) != StabilizerTag::kFinite && tag_of(y) != StabilizerTag::kFinite) all_declared = false;
      }
      if (all_declared) {
        item = {Verdict::kPass, "every edge has an endpoint declared with finite stabilizer", std::nullopt};
      } else {
        item = {Verdict::kWindowInconclusive, "edge stabilizers not decidable on window", std::nullopt};
      }
    }
  }

  // (5) fine at V_infinity
  {
    auto& item = report.items[4];
    if (exact) {
      item = {Verdict::kPass, "finite graph (V_infinity empty)", std::nullopt};
    } else {
      std::set<std::size_t> probed_orbits;
      for (Vertex v = 0; v < graph.num_vertices(); ++v) {
        if (tag_of(v) == StabilizerTag::kConjugateOfH) report.infinite_stabilizer_vertices.push_back(graph.name(v));
      }
      if (report.infinite_stabilizer_vertices.empty()) {
        item = {Verdict::kWindowInconclusive, "no vertex declared with infinite stabilizer", std::nullopt};
      } else if (!options.family || options.probe_windows.size() < 2) {
        item = {Verdict::kWindowInconclusive, "no window family to probe", std::nullopt};
      } else {
        Trend overall = Trend::kStable;
        std::vector<Vertex> order;
        if (options.apex) order.push_back(*options.apex);
        for (Vertex v = 0; v < graph.num_vertices(); ++v) order.push_back(v);
        for (Vertex v : order) {
          if (tag_of(v) != StabilizerTag::kConjugateOfH) continue;
          if (!probed_orbits.insert(orbits.vertex_orbit[v]).second) continue;
          auto graphs = [&](int L) { return options.family(L).graph; };
          report.fineness.push_back(fineness_probe(graphs, options.probe_windows, graph.name(v), options.k_max));
          if (report.fineness.back().verdict == Trend::kGrowing) overall = Trend::kGrowing;
        }
        item = {overall == Trend::kStable ? Verdict::kPass : Verdict::kWindowInconclusive,
                "fineness probe at " + std::to_string(report.fineness.size()) + " orbit representative(s): " +
                    std::string(to_string(overall)),
                overall};
      }
    }
  }
  if (!exact) report.notes.push_back("window-scale evidence only; infinite-graph properties are not certified");
  return report;
}

}  // namespace finegraph

#endif  // FINEGRAPH_GGRAPH_HPP
