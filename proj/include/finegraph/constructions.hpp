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

#ifndef FINEGRAPH_CONSTRUCTIONS_HPP
#define FINEGRAPH_CONSTRUCTIONS_HPP

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "finegraph/conedoff.hpp"
#include "finegraph/ggraph.hpp"
#include "finegraph/graph.hpp"
#include "finegraph/group.hpp"
#include "finegraph/metrics.hpp"

namespace finegraph {

//------------------------------------------------------------------------------
// Replacement of attached edges
//------------------------------------------------------------------------------

/// The attached pair {u, v} together with the lex-least geodesic alpha from u
/// to v in the graph before attachment.
struct ReplacementScheme {
  Vertex u = 0;
  Vertex v = 0;
  std::vector<Vertex> alpha;  // [u, ..., v]

  std::size_t length() const { return alpha.size() - 1; }
  std::vector<Vertex> reversed() const { return {alpha.rbegin(), alpha.rend()}; }

  /// Interior triples [alpha[i-1], alpha[i], alpha[i+1]]; corners of the
  /// reverse path are the same triples read backwards.
  std::vector<std::array<Vertex, 3>> corners() const {
    std::vector<std::array<Vertex, 3>> out;
    for (std::size_t i = 1; i + 1 < alpha.size(); ++i) out.push_back({alpha[i - 1], alpha[i], alpha[i + 1]});
    return out;
  }
};

inline ReplacementScheme make_replacement_scheme(const SimplicialGraph& base, Vertex u, Vertex v) {
  if (u == v) throw InvalidInput("replacement scheme needs distinct endpoints");
  ReplacementScheme s{u, v, geodesic(base, u, v)};
  if (s.alpha.empty()) {
    throw InvalidInput("'" + base.name(u) + "' and '" + base.name(v) + "' lie in different components");
  }
  return s;
}

struct Replacement {
  std::vector<Vertex> path;
  /// One entry per step of the input path: the window element used, or
  /// nullopt when the edge was copied.
  std::vector<std::optional<std::size_t>> translators;
  std::vector<bool> reversed;
};

/// Replaces each attached edge [g.u, g.v] of `path` by g.alpha (and [g.v, g.u]
/// by the translate of the reverse), with g the shortlex-least window element
/// that works. Edges of `base` are copied.
inline Replacement alpha_replacement(const std::vector<Vertex>& path, const SimplicialGraph& base,
                                     const SimplicialGraph& attached, const GroupAction& action,
                                     const ReplacementScheme& scheme) {
  Replacement out;
  if (path.empty()) return out;
  out.path.push_back(path.front());
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Vertex p = path[i], q = path[i + 1];
    if (base.adjacent(p, q)) {
      out.path.push_back(q);
      out.translators.push_back(std::nullopt);
      out.reversed.push_back(false);
      continue;
    }
    if (!attached.adjacent(p, q)) {
      throw InvalidInput("path step '" + attached.name(p) + "' -> '" + attached.name(q) + "' is not an edge");
    }
    std::optional<std::size_t> chosen;
    bool backwards = false;
    for (std::size_t g = 0; g < action.num_elements() && !chosen; ++g) {
      Vertex gu = action.image(g, scheme.u), gv = action.image(g, scheme.v);
      if (gu == p && gv == q) {
        chosen = g;
      } else if (gv == p && gu == q) {
        chosen = g;
        backwards = true;
      }
    }
    if (!chosen) {
      throw WindowExceeded("no window element carries {" + attached.name(scheme.u) + "," + attached.name(scheme.v) +
                           "} to {" + attached.name(p) + "," + attached.name(q) + "}");
    }
    auto segment = backwards ? scheme.reversed() : scheme.alpha;
    for (std::size_t j = 1; j < segment.size(); ++j) {
      Vertex x = action.image(*chosen, segment[j]);
      if (x == GroupAction::kOut) throw WindowExceeded("translate of alpha leaves the window");
      out.path.push_back(x);
    }
    out.translators.push_back(chosen);
    out.reversed.push_back(backwards);
  }
  return out;
}

//------------------------------------------------------------------------------
// The W/Z filtration
//------------------------------------------------------------------------------

/// Decomposition of a replaced path as [a, g_1, a, g_2, ..., a, g_m] with
/// segments g_i avoiding a; first/last hold (w_i, z_i).
struct WitnessDecomposition {
  Vertex member = 0;               // x in ab(k) of the attached graph
  std::vector<Vertex> original;    // witness path in the attached graph
  std::vector<Vertex> replaced;    // its alpha-replacement in the base graph
  std::vector<std::pair<Vertex, Vertex>> segments;
};

struct WZFiltration {
  Vertex a = 0;
  Vertex b = 0;
  Distance k = 0;
  std::size_t ell = 0;
  std::size_t n = 0;
  bool degenerate = false;  // ell = 1: nothing was attached
  /// W[j] for 1 <= j <= n and Z[j] for 1 <= j <= n - 1; index 0 unused.
  std::vector<std::vector<Vertex>> W;
  std::vector<std::vector<Vertex>> Z;
  std::vector<Vertex> X0;
  std::vector<Vertex> escaping_attached;  // ab(k) computed in the attached graph
  std::vector<std::size_t> Y;              // window elements carrying {u,v} to an edge at a with far end in ab(k)
  std::vector<WitnessDecomposition> witnesses;

  /// First level j at which W_j, Z_{j-1}, W_{j-1} fail to nest, or nullopt.
  std::optional<std::size_t> chain_failure() const {
    auto subset = [](const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
      return std::includes(y.begin(), y.end(), x.begin(), x.end());
    };
    for (std::size_t j = n; j >= 2; --j) {
      if (!subset(W[j], Z[j - 1]) || !subset(Z[j - 1], W[j - 1])) return j;
    }
    return std::nullopt;
  }
  /// Members of ab(k) in the attached graph lying outside W_1 and X_0.
  std::vector<Vertex> uncovered() const {
    std::vector<Vertex> out;
    for (Vertex x : escaping_attached) {
      bool in_w1 = !W.empty() && n >= 1 && std::binary_search(W[1].begin(), W[1].end(), x);
      if (!in_w1 && !std::binary_search(X0.begin(), X0.end(), x)) out.push_back(x);
    }
    return out;
  }
};

namespace detail {

inline void sort_unique(std::vector<Vertex>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

/// Builds W_n = ab(n) (n = k * ell) in `base` and descends: Z_{j-1} adds the
/// far ends of corner translates [z, a, w] with w in W_j, and W_{j-1} closes
/// Z_{j-1} under angle balls of radius n at a. X_0 collects members of ab(k)
/// in `attached` that are not neighbours of a in `base`.
inline WZFiltration wz_filtration(const SimplicialGraph& base, const SimplicialGraph& attached,
                                  const GroupAction& action, const ReplacementScheme& scheme, Vertex a, Vertex b,
                                  Distance k) {
  if (a == b) throw InvalidInput("wz_filtration requires a != b");
  if (k < 1) throw InvalidInput("wz_filtration requires k >= 1");
  if (attached.num_vertices() != base.num_vertices()) throw InvalidInput("attached graph has a different vertex set");
  WZFiltration f;
  f.a = a;
  f.b = b;
  f.k = k;
  f.ell = scheme.length();
  if (f.ell <= 1) {
    f.degenerate = true;
    return f;
  }
  f.n = static_cast<std::size_t>(k) * f.ell;
  f.W.assign(f.n + 1, {});
  f.Z.assign(f.n, {});
  f.W[f.n] = escaping_set(base, a, b, static_cast<Distance>(f.n)).members;

  // Corner translates centred at a: (g.c0, g.c2) for every corner and g with g.c1 = a.
  std::vector<std::pair<Vertex, Vertex>> translated;
  for (const auto& c : scheme.corners()) {
    for (std::size_t g = 0; g < action.num_elements(); ++g) {
      if (action.image(g, c[1]) != a) continue;
      Vertex x = action.image(g, c[0]), y = action.image(g, c[2]);
      if (x == GroupAction::kOut || y == GroupAction::kOut) {
        throw WindowExceeded("corner translate at '" + base.name(a) + "' leaves the window");
      }
      translated.emplace_back(x, y);
    }
  }
  AngleTable angle(base, a);
  const auto link = base.neighbors(a);
  for (std::size_t j = f.n; j >= 2; --j) {
    const auto& wj = f.W[j];
    auto& z = f.Z[j - 1];
    z = wj;
    for (auto [x, y] : translated) {
      // a corner of alpha or of its reverse: [x, a, y] or [y, a, x]
      if (std::binary_search(wj.begin(), wj.end(), y)) z.push_back(x);
      if (std::binary_search(wj.begin(), wj.end(), x)) z.push_back(y);
    }
    detail::sort_unique(z);
    auto& w = f.W[j - 1];
    w = z;
    for (Vertex t : link) {
      for (Vertex s : z) {
        if (angle(s, t) <= f.n) {
          w.push_back(t);
          break;
        }
      }
    }
    detail::sort_unique(w);
  }

  auto direct = escaping_set(attached, a, b, k);
  f.escaping_attached = direct.members;
  for (Vertex x : direct.members) {
    if (!base.adjacent(a, x)) f.X0.push_back(x);
  }
  for (std::size_t g = 0; g < action.num_elements(); ++g) {
    Vertex gu = action.image(g, scheme.u), gv = action.image(g, scheme.v);
    if ((gu == a && gv != GroupAction::kOut && direct.contains(gv)) ||
        (gv == a && gu != GroupAction::kOut && direct.contains(gu))) {
      f.Y.push_back(g);
    }
  }
  for (std::size_t i = 0; i < direct.members.size(); ++i) {
    WitnessDecomposition d;
    d.member = direct.members[i];
    d.original = direct.witnesses[i];
    d.replaced = alpha_replacement(d.original, base, attached, action, scheme).path;
    std::optional<Vertex> first;
    Vertex last = a;
    for (std::size_t t = 1; t < d.replaced.size(); ++t) {
      Vertex x = d.replaced[t];
      if (x == a) {
        if (first) d.segments.emplace_back(*first, last);
        first.reset();
        continue;
      }
      if (!first) first = x;
      last = x;
    }
    if (first) d.segments.emplace_back(*first, last);
    f.witnesses.push_back(std::move(d));
  }
  return f;
}

/// Checks path' ∩ T_a ⊆ path ∩ T_a ⊆ W_1 for a path and its replacement.
/// Returns the first offending vertex.
inline std::optional<Vertex> containment_failure(const WZFiltration& f, const SimplicialGraph& base,
                                                 const std::vector<Vertex>& original,
                                                 const std::vector<Vertex>& replaced) {
  std::set<Vertex> in_replaced;
  for (Vertex x : replaced) {
    if (base.adjacent(f.a, x)) in_replaced.insert(x);
  }
  for (Vertex x : original) {
    if (base.adjacent(f.a, x) && !in_replaced.contains(x)) return x;
  }
  if (f.degenerate) return std::nullopt;
  for (Vertex x : in_replaced) {
    if (!std::binary_search(f.W[1].begin(), f.W[1].end(), x)) return x;
  }
  return std::nullopt;
}

//------------------------------------------------------------------------------
// Thickening
//------------------------------------------------------------------------------

struct ExtendedGraph {
  SimplicialGraph graph;
  GroupAction action;
  std::vector<Vertex> old_to_new;
  std::vector<StabilizerTag> tags;  // empty when the input carried none
  Vertex base = 0;                  // a vertex with trivial stabilizer
  bool added = false;
};

namespace detail {

inline std::optional<Vertex> trivial_stabilizer_vertex(const SimplicialGraph& graph, const GroupAction& action) {
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    if (stabilizer(action, v).elements.size() == 1) return v;
  }
  return std::nullopt;
}

}  // namespace detail

/// Returns the input unchanged when some vertex has trivial stabilizer.
/// Otherwise adds a free orbit of vertices u[g], one per window element, with
/// edges {u[g], g.anchor}. The anchor defaults to vertex 0.
inline ExtendedGraph add_trivial_stabilizer_vertex(const SimplicialGraph& graph, const GroupAction& action,
                                                   std::optional<Vertex> anchor = std::nullopt,
                                                   const std::vector<StabilizerTag>& tags = {}) {
  ExtendedGraph out;
  if (auto v = detail::trivial_stabilizer_vertex(graph, action)) {
    out.graph = graph;
    out.action = action;
    out.old_to_new.resize(graph.num_vertices());
    std::iota(out.old_to_new.begin(), out.old_to_new.end(), Vertex{0});
    out.tags = tags;
    out.base = *v;
    return out;
  }
  if (graph.num_vertices() == 0) throw InvalidInput("cannot attach a free orbit to an empty graph");
  Vertex v = anchor.value_or(0);
  const Window& w = action.window();
  const Group& group = w.group();
  GraphBuilder builder;
  for (const auto& id : graph.names()) builder.add_vertex(id);
  for (auto [x, y] : graph.edges()) builder.add_edge(graph.name(x), graph.name(y));
  std::vector<std::string> fresh(w.size());
  for (std::size_t g = 0; g < w.size(); ++g) {
    fresh[g] = "u[" + w.name(g) + "]";
    if (builder.has_vertex(fresh[g])) throw InvalidInput("vertex id '" + fresh[g] + "' already in use");
    builder.add_vertex(fresh[g]);
    Vertex target = action.image(g, v);
    if (target != GroupAction::kOut) builder.add_edge(fresh[g], graph.name(target));
  }
  out.graph = builder.build();
  out.added = true;
  const std::size_t n = out.graph.num_vertices();
  out.old_to_new.resize(graph.num_vertices());
  for (Vertex x = 0; x < graph.num_vertices(); ++x) out.old_to_new[x] = out.graph.at(graph.name(x));
  std::vector<Vertex> fresh_vertex(w.size());
  for (std::size_t g = 0; g < w.size(); ++g) fresh_vertex[g] = out.graph.at(fresh[g]);
  std::vector<std::vector<Vertex>> images(w.size(), std::vector<Vertex>(n, GroupAction::kOut));
  for (std::size_t s = 0; s < w.size(); ++s) {
    for (Vertex x = 0; x < graph.num_vertices(); ++x) {
      Vertex y = action.image(s, x);
      if (y != GroupAction::kOut) images[s][out.old_to_new[x]] = out.old_to_new[y];
    }
    for (std::size_t g = 0; g < w.size(); ++g) {
      auto sg = w.find(group.multiply(w.element(s), w.element(g)));
      if (sg) images[s][fresh_vertex[g]] = fresh_vertex[*sg];
    }
  }
  out.action = GroupAction(action.window_ptr(), std::move(images));
  if (!tags.empty()) {
    out.tags.assign(n, StabilizerTag::kFinite);
    for (Vertex x = 0; x < graph.num_vertices(); ++x) out.tags[out.old_to_new[x]] = tags.at(x);
  }
  out.base = fresh_vertex[0];
  return out;
}

/// Base vertex u_0, apex v_0 (stabilizer H), relative generating set S, the
/// other finite-stabilizer orbit representatives u_1..u_l, and the attachments
/// performed, in order. Vertex indices refer to the thickened graph.
struct ThickeningPlan {
  Vertex base = 0;
  Vertex apex = 0;
  std::vector<Element> generating_set;
  std::vector<Vertex> representatives;
  std::vector<AttachmentRecord> attachments;
  bool added_trivial_vertex = false;
};

struct ThickenOptions {
  std::optional<Vertex> base;
  std::optional<Vertex> apex;
  std::vector<StabilizerTag> tags;
};

struct ThickeningResult {
  SimplicialGraph graph;
  GroupAction action;
  ThickeningPlan plan;
  std::vector<StabilizerTag> tags;
};

namespace detail {

inline AttachmentRecord record_attachment(const AttachmentResult& r, const SimplicialGraph& before,
                                          const GroupAction& action) {
  AttachmentRecord rec{before.name(r.u), before.name(r.v), r.new_edges.size(), r.dropped.size(), 0};
  for (Vertex a = 0; a < before.num_vertices(); ++a) {
    if (r.new_neighbors[a].empty()) continue;
    rec.max_new_orbits = std::max(rec.max_new_orbits, new_orbit_count(r, action, a));
  }
  return rec;
}

inline std::optional<Vertex> stabilizer_equals(const SimplicialGraph& graph, const GroupAction& action,
                                               const Subgroup& h) {
  const Window& w = action.window();
  std::set<std::size_t> target;
  for (const auto& x : h.elements()) target.insert(w.index_of(x));
  for (Vertex v = 0; v < graph.num_vertices(); ++v) {
    auto s = stabilizer(action, v).elements;
    if (std::set<std::size_t>(s.begin(), s.end()) == target) return v;
  }
  return std::nullopt;
}

}  // namespace detail

/// Attaches edge orbits until {u0,v0}, {u0,s.u0} (s in S) and {u0,u_j} are
/// edges, in that order. When no vertex has trivial stabilizer a free orbit
/// is added first. The default base is the vertex named after the identity
/// if it has trivial stabilizer, else the first such vertex.
inline ThickeningResult thicken(const SimplicialGraph& graph, const GroupAction& action, const Subgroup& h,
                                const std::vector<Element>& s, const ThickenOptions& options = {}) {
  const Window& w = action.window();
  const Group& group = w.group();
  if (h.group_ptr() != w.group_ptr()) throw InvalidInput("subgroup belongs to a different group");
  std::optional<Vertex> apex = options.apex;
  if (!apex) {
    if (!w.covers_group()) throw InvalidInput("the apex (vertex with stabilizer H) must be declared on infinite windows");
    apex = detail::stabilizer_equals(graph, action, h);
    if (!apex) throw InvalidInput("no vertex has stabilizer exactly H");
  }

  ThickeningResult out;
  auto extended = add_trivial_stabilizer_vertex(graph, action, apex, options.tags);
  out.graph = std::move(extended.graph);
  out.action = std::move(extended.action);
  out.tags = std::move(extended.tags);
  out.plan.added_trivial_vertex = extended.added;
  out.plan.apex = extended.old_to_new[*apex];
  out.plan.generating_set = s;

  Vertex u0 = extended.base;
  if (options.base && !extended.added) {
    u0 = *options.base;
    if (stabilizer(out.action, u0).elements.size() != 1) {
      throw InvalidInput("base vertex '" + out.graph.name(u0) + "' has nontrivial stabilizer");
    }
  } else if (!extended.added) {
    auto named = out.graph.find(group.name(group.identity()));
    if (named && stabilizer(out.action, *named).elements.size() == 1) u0 = *named;
  }
  out.plan.base = u0;

  auto attach = [&](Vertex x, Vertex y) {
    if (x == y || out.graph.adjacent(x, y)) return;
    auto r = attach_edge_orbit(out.graph, out.action, x, y);
    out.plan.attachments.push_back(detail::record_attachment(r, out.graph, out.action));
    out.graph = std::move(r.graph);
  };
  attach(u0, out.plan.apex);
  for (const auto& x : s) {
    group.validate(x);
    Vertex target = out.action.image(w.index_of(x), u0);
    if (target == GroupAction::kOut) throw WindowExceeded("translate of the base by " + group.name(x) + " leaves the window");
    attach(u0, target);
  }
  auto orbits = orbit_decomposition(out.graph, out.action);
  for (std::size_t o = 0; o < orbits.num_vertex_orbits(); ++o) {
    Vertex rep = orbits.vertex_representatives[o];
    if (o == orbits.vertex_orbit[u0]) continue;
    bool h_type = false;
    for (Vertex v = 0; v < out.graph.num_vertices() && !h_type; ++v) {
      if (orbits.vertex_orbit[v] != o) continue;
      if (!out.tags.empty() && out.tags[v] == StabilizerTag::kConjugateOfH) h_type = true;
    }
    if (h_type) continue;
    out.plan.representatives.push_back(rep);
    attach(u0, rep);
  }
  return out;
}

/// Edge-membership check of the thickness conditions; the first missing edge.
inline std::optional<Edge> missing_thick_edge(const SimplicialGraph& graph, const GroupAction& action,
                                              const ThickeningPlan& plan) {
  const Window& w = action.window();
  Vertex u0 = plan.base;
  if (!graph.adjacent(u0, plan.apex)) return Edge{u0, plan.apex};
  for (const auto& x : plan.generating_set) {
    Vertex t = action.image(w.index_of(x), u0);
    if (t != u0 && (t == GroupAction::kOut || !graph.adjacent(u0, t))) return Edge{u0, t};
  }
  for (Vertex r : plan.representatives) {
    if (!graph.adjacent(u0, r)) return Edge{u0, r};
  }
  return std::nullopt;
}

//------------------------------------------------------------------------------
// Relative generating set and the quasi-isometry to the coned-off graph
//------------------------------------------------------------------------------

struct RelativeGenSet {
  std::vector<std::size_t> elements;   // window indices, shortlex order
  std::vector<std::string> provenance;  // one per element: the condition that fired

  std::vector<Element> as_elements(const Window& w) const {
    std::vector<Element> out;
    for (auto i : elements) out.push_back(w.element(i));
    return out;
  }
};

/// X = {g : dist(u_i, g.u_j) = 1 or dist(u_i, g.v0) = 1}, u_0 being the base.
inline RelativeGenSet extract_X(const SimplicialGraph& graph, const GroupAction& action, const ThickeningPlan& plan) {
  RelativeGenSet out;
  std::vector<Vertex> reps{plan.base};
  reps.insert(reps.end(), plan.representatives.begin(), plan.representatives.end());
  for (std::size_t g = 0; g < action.num_elements(); ++g) {
    std::string why;
    for (Vertex ui : reps) {
      for (Vertex uj : reps) {
        Vertex t = action.image(g, uj);
        if (t != GroupAction::kOut && graph.adjacent(ui, t)) {
          why = "dist(" + graph.name(ui) + ", g." + graph.name(uj) + ") = 1";
          break;
        }
      }
      if (!why.empty()) break;
      Vertex t = action.image(g, plan.apex);
      if (t != GroupAction::kOut && graph.adjacent(ui, t)) {
        why = "dist(" + graph.name(ui) + ", g." + graph.name(plan.apex) + ") = 1";
        break;
      }
    }
    if (!why.empty()) {
      out.elements.push_back(g);
      out.provenance.push_back(std::move(why));
    }
  }
  return out;
}

struct ConedOffQIViolation {
  std::string x;
  std::string y;
  Distance coned_off_distance = 0;
  Distance graph_distance = 0;
  std::string inequality;  // which bound failed
};

struct ConedOffQIWitness {
  std::size_t points = 0;         // in-window vertices of the coned-off graph with q defined
  std::size_t pairs_checked = 0;
  Distance density_radius = 0;    // max over graph vertices of distance to the image of q
  std::optional<ConedOffQIViolation> violation;

  bool passed() const { return !violation.has_value(); }
};

/// Builds the coned-off graph for (H, X) on the window of `action` and checks
/// dist(q a, q b) <= 3 dist^(a, b) and dist^(a, b) <= 2 dist(q a, q b) for all
/// pairs, where q(g) = g.u0 and q(gH) = g.v0.
inline ConedOffQIWitness coned_off_qi_witness(const SimplicialGraph& graph, const GroupAction& action,
                                              const ThickeningPlan& plan, const Subgroup& h,
                                              const std::vector<Element>& x) {
  const Window& w = action.window();
  auto coned = build_coned_off(w.group_ptr(), h, x, w.radius(), false);
  const SimplicialGraph& hat = coned.graph;
  std::vector<Vertex> points;
  std::vector<Vertex> q(hat.num_vertices(), GroupAction::kOut);
  for (Vertex p = 0; p < hat.num_vertices(); ++p) {
    std::size_t g = coned.vertex_element[p] ? *coned.vertex_element[p] : w.index_of(*coned.vertex_coset[p]);
    q[p] = action.image(g, coned.is_cone(p) ? plan.apex : plan.base);
    if (q[p] != GroupAction::kOut) points.push_back(p);
  }
  ConedOffQIWitness out;
  out.points = points.size();
  for (std::size_t i = 0; i < points.size() && out.passed(); ++i) {
    auto dh = bfs_distances(hat, points[i]);
    auto dg = bfs_distances(graph, q[points[i]]);
    for (std::size_t j = i; j < points.size(); ++j) {
      Distance a = dh[points[j]], b = dg[q[points[j]]];
      ++out.pairs_checked;
      std::string failed;
      if (a != kInfinity && (b == kInfinity || b > 3 * a)) failed = "dist(q a, q b) <= 3 dist^(a, b)";
      if (b != kInfinity && (a == kInfinity || a > 2 * b)) failed = "dist^(a, b) <= 2 dist(q a, q b)";
      if (!failed.empty()) {
        out.violation = ConedOffQIViolation{hat.name(points[i]), hat.name(points[j]), a, b, failed};
        break;
      }
    }
  }
  std::vector<Distance> cover(graph.num_vertices(), kInfinity);
  std::vector<Vertex> queue;
  for (Vertex p : points) {
    if (cover[q[p]] != 0) {
      cover[q[p]] = 0;
      queue.push_back(q[p]);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Vertex nb : graph.neighbors(queue[head])) {
      if (cover[nb] == kInfinity) {
        cover[nb] = cover[queue[head]] + 1;
        queue.push_back(nb);
      }
    }
  }
  for (Distance c : cover) out.density_radius = std::max(out.density_radius, c);
  return out;
}

}  // namespace finegraph

#endif  // FINEGRAPH_CONSTRUCTIONS_HPP
