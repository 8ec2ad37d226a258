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

#ifndef FINEGRAPH_CONEDOFF_HPP
#define FINEGRAPH_CONEDOFF_HPP

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "finegraph/ggraph.hpp"
#include "finegraph/graph.hpp"
#include "finegraph/group.hpp"
#include "finegraph/metrics.hpp"

namespace finegraph {

inline std::string cone_vertex_id(const Group& group, const Element& representative) {
  return "(" + group.name(representative) + ")H";
}

/// Windowed coned-off Cayley graph: group vertices for the window, cone
/// vertices for the cosets gH meeting it, edges {g, gx} (x in X and X^-1) and
/// {g, gH}. G acts by left multiplication.
struct ConedOffGraph {
  SimplicialGraph graph;
  GroupAction action;  // empty when built without the action
  WindowPtr window;
  std::vector<Element> generating_set;  // X as given

  std::vector<Vertex> element_vertex;                // window index -> vertex
  std::vector<std::optional<std::size_t>> vertex_element;  // vertex -> window index (group vertices)
  std::vector<std::optional<Element>> vertex_coset;        // vertex -> coset representative (cone vertices)
  Vertex apex = 0;                                          // the cone vertex H

  bool is_cone(Vertex v) const { return vertex_coset.at(v).has_value(); }
  std::vector<StabilizerTag> stabilizer_tags() const {
    std::vector<StabilizerTag> tags(graph.num_vertices(), StabilizerTag::kFinite);
    for (Vertex v = 0; v < graph.num_vertices(); ++v) {
      if (is_cone(v)) tags[v] = StabilizerTag::kConjugateOfH;
    }
    return tags;
  }
  std::vector<Vertex> group_vertices() const { return element_vertex; }
  std::optional<Vertex> cone_vertex(const Element& representative) const {
    return graph.find(cone_vertex_id(window->group(), representative));
  }
};

namespace detail {

/// X together with X^-1, identity dropped, duplicates removed, in given order.
inline std::vector<Element> symmetrized(const Group& group, const std::vector<Element>& x) {
  std::vector<Element> out;
  auto push = [&](Element e) {
    if (group.is_identity(e)) return;
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
  };
  for (const auto& e : x) {
    group.validate(e);
    push(e);
    push(group.invert(e));
  }
  return out;
}

inline ConedOffGraph build_windowed(const GroupPtr& group, const Subgroup* h, const std::vector<Element>& x, int radius,
                                    bool with_action, std::size_t cap) {
  if (radius < 0) throw InvalidInput("window radius must be non-negative");
  ConedOffGraph out;
  out.window = Window::ball(group, radius, cap);
  out.generating_set = x;
  const Window& w = *out.window;
  auto letters = symmetrized(*group, x);
  GraphBuilder builder;
  std::vector<std::string> names(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    names[i] = w.name(i);
    builder.add_vertex(names[i]);
  }
  std::vector<Element> reps;
  if (h) {
    reps.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      reps.push_back(h->coset_representative(w.element(i)));
      builder.add_edge(names[i], cone_vertex_id(*group, reps.back()));
    }
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const auto& l : letters) {
      auto j = w.find(group->multiply(w.element(i), l));
      if (j && *j != i) builder.add_edge(names[i], names[*j]);
    }
  }
  out.graph = builder.build();
  if (out.graph.num_vertices() > cap) throw CapExceeded("coned-off graph exceeds vertex cap");
  const SimplicialGraph& g = out.graph;
  out.element_vertex.resize(w.size());
  out.vertex_element.assign(g.num_vertices(), std::nullopt);
  out.vertex_coset.assign(g.num_vertices(), std::nullopt);
  for (std::size_t i = 0; i < w.size(); ++i) {
    Vertex v = g.at(names[i]);
    out.element_vertex[i] = v;
    out.vertex_element[v] = i;
  }
  if (h) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      Vertex c = g.at(cone_vertex_id(*group, reps[i]));
      if (!out.vertex_coset[c]) out.vertex_coset[c] = reps[i];
    }
    out.apex = g.at(cone_vertex_id(*group, group->identity()));
  }
  if (with_action) {
    std::vector<std::vector<Vertex>> images(w.size(), std::vector<Vertex>(g.num_vertices(), GroupAction::kOut));
    for (std::size_t s = 0; s < w.size(); ++s) {
      const Element& se = w.element(s);
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (out.vertex_element[v]) {
          auto j = w.find(group->multiply(se, w.element(*out.vertex_element[v])));
          if (j) images[s][v] = out.element_vertex[*j];
        } else {
          Element rep = h->coset_representative(group->multiply(se, *out.vertex_coset[v]));
          if (w.contains(rep)) {
            if (auto c = g.find(cone_vertex_id(*group, rep))) images[s][v] = *c;
          }
        }
      }
    }
    out.action = GroupAction(out.window, std::move(images));
  }
  return out;
}

}  // namespace detail

/// Coned-off Cayley graph on the ball of radius L.
inline ConedOffGraph build_coned_off(const GroupPtr& group, const Subgroup& h, const std::vector<Element>& x,
                                     int radius, bool with_action = true, std::size_t cap = kDefaultElementCap) {
  if (h.group_ptr() != group) throw InvalidInput("subgroup belongs to a different group");
  return detail::build_windowed(group, &h, x, radius, with_action, cap);
}

/// Simplicial Cayley graph of G with respect to X on the ball of radius L.
inline ConedOffGraph build_cayley(const GroupPtr& group, const std::vector<Element>& x, int radius,
                                  bool with_action = true, std::size_t cap = kDefaultElementCap) {
  return detail::build_windowed(group, nullptr, x, radius, with_action, cap);
}

/// Window family L -> coned-off graph with its action.
inline std::function<ActedGraph(int)> coned_off_family(GroupPtr group, Subgroup h, std::vector<Element> x) {
  return [group, h, x](int radius) {
    auto c = build_coned_off(group, h, x, radius);
    return ActedGraph{std::move(c.graph), std::move(c.action)};
  };
}

//------------------------------------------------------------------------------
// Relative Cayley graph and the admissible metric
//------------------------------------------------------------------------------

struct LabeledEdge {
  std::size_t from = 0;  // window indices; from * label = to
  std::size_t to = 0;
  bool h_letter = false;  // provenance in the disjoint union X ⊔ H
  Element label;
};

/// Windowed Cayley graph of G over the formal alphabet X ⊔ (H - {e}). Parallel
/// edges with distinct provenance are kept.
struct RelativeCayleyGraph {
  WindowPtr window;
  std::vector<Element> generating_set;
  std::vector<LabeledEdge> edges;
  std::vector<std::vector<std::size_t>> incident;  // edge indices per vertex
  std::vector<bool> in_subgroup;

  std::size_t num_vertices() const { return incident.size(); }
  std::size_t degree(std::size_t v) const { return incident.at(v).size(); }
  std::size_t other(std::size_t e, std::size_t v) const { return edges[e].from == v ? edges[e].to : edges[e].from; }

  /// Simplicial graph Γ(G, H ∪ X) with labels forgotten, ids = element names.
  SimplicialGraph underlying() const {
    GraphBuilder b;
    for (std::size_t i = 0; i < num_vertices(); ++i) b.add_vertex(window->name(i));
    for (const auto& e : edges) b.add_edge(window->name(e.from), window->name(e.to));
    return b.build();
  }
};

inline RelativeCayleyGraph build_relative_cayley(const GroupPtr& group, const Subgroup& h,
                                                 const std::vector<Element>& x, int radius,
                                                 std::size_t cap = kDefaultElementCap) {
  if (h.group_ptr() != group) throw InvalidInput("subgroup belongs to a different group");
  RelativeCayleyGraph out;
  out.window = Window::ball(group, radius, cap);
  out.generating_set = x;
  const Window& w = *out.window;
  out.incident.assign(w.size(), {});
  out.in_subgroup.assign(w.size(), false);
  for (std::size_t i = 0; i < w.size(); ++i) out.in_subgroup[i] = h.contains(w.element(i));
  auto add = [&](std::size_t a, std::size_t b, bool h_letter, Element label) {
    out.incident[a].push_back(out.edges.size());
    out.incident[b].push_back(out.edges.size());
    out.edges.push_back({a, b, h_letter, std::move(label)});
  };
  // X-letters: one edge {g, gx} per letter x; an involution reaches it from both ends.
  for (std::size_t xi = 0; xi < x.size(); ++xi) {
    group->validate(x[xi]);
    if (group->is_identity(x[xi])) continue;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto j = w.find(group->multiply(w.element(i), x[xi]));
      if (!j) continue;
      if (seen.insert({std::min(i, *j), std::max(i, *j)}).second) add(i, *j, false, x[xi]);
    }
  }
  // H-letters: each pair in a common coset is joined by the letter g^-1 g'.
  std::map<Element, std::vector<std::size_t>> by_coset;
  for (std::size_t i = 0; i < w.size(); ++i) by_coset[h.coset_representative(w.element(i))].push_back(i);
  for (const auto& [rep, members] : by_coset) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const Element& ga = w.element(members[a]);
        add(members[a], members[b], true, group->multiply(group->invert(ga), w.element(members[b])));
      }
    }
  }
  if (out.edges.size() > cap) throw CapExceeded("relative Cayley graph exceeds edge cap");
  return out;
}

/// d̂_H value: finite, proven infinite (finite backends only), or infinite as
/// far as the window can tell.
struct HatDistance {
  enum class Status { kFinite, kInfinite, kInfiniteAtWindow } status = Status::kFinite;
  Distance value = 0;

  bool finite() const { return status == Status::kFinite; }
  std::string to_string() const {
    switch (status) {
      case Status::kFinite: return std::to_string(value);
      case Status::kInfinite: return "inf";
      case Status::kInfiniteAtWindow: return "inf-at-window";
    }
    return "";
  }
  friend bool operator==(const HatDistance&, const HatDistance&) = default;
};

/// BFS distances from `source` over admissible edges: X-letter edges always,
/// H-letter edges only between vertices outside H.
inline std::vector<Distance> admissible_distances(const RelativeCayleyGraph& rel, std::size_t source) {
  std::vector<Distance> dist(rel.num_vertices(), kInfinity);
  std::vector<std::size_t> queue{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t x = queue[head];
    for (std::size_t e : rel.incident[x]) {
      const auto& edge = rel.edges[e];
      if (edge.h_letter && (rel.in_subgroup[edge.from] || rel.in_subgroup[edge.to])) continue;
      std::size_t y = rel.other(e, x);
      if (dist[y] != kInfinity) continue;
      dist[y] = dist[x] + 1;
      queue.push_back(y);
    }
  }
  return dist;
}

inline HatDistance hat_distance(const RelativeCayleyGraph& rel, const Element& h, const Element& k) {
  auto hi = rel.window->find(h), ki = rel.window->find(k);
  if (!hi || !ki || !rel.in_subgroup[*hi] || !rel.in_subgroup[*ki]) {
    throw InvalidInput("hat_distance endpoints must be elements of H inside the window");
  }
  Distance d = admissible_distances(rel, *hi)[*ki];
  if (d != kInfinity) return {HatDistance::Status::kFinite, d};
  return {rel.window->covers_group() ? HatDistance::Status::kInfinite : HatDistance::Status::kInfiniteAtWindow, 0};
}

/// d̂_H over all pairs of H inside the window.
struct AdmissibleDistanceTable {
  std::vector<std::size_t> members;  // window indices of H ∩ window
  std::vector<HatDistance> values;   // row-major over members

  const HatDistance& at(std::size_t i, std::size_t j) const { return values[i * members.size() + j]; }
};

inline AdmissibleDistanceTable hat_distance_table(const RelativeCayleyGraph& rel) {
  AdmissibleDistanceTable t;
  for (std::size_t i = 0; i < rel.num_vertices(); ++i) {
    if (rel.in_subgroup[i]) t.members.push_back(i);
  }
  const auto status = rel.window->covers_group() ? HatDistance::Status::kInfinite : HatDistance::Status::kInfiniteAtWindow;
  for (std::size_t h : t.members) {
    auto d = admissible_distances(rel, h);
    for (std::size_t k : t.members) {
      t.values.push_back(d[k] == kInfinity ? HatDistance{status, 0} : HatDistance{HatDistance::Status::kFinite, d[k]});
    }
  }
  return t;
}

//------------------------------------------------------------------------------
// Coned-off comparison checks
//------------------------------------------------------------------------------

struct LemmaCheck {
  std::string id;
  Verdict verdict = Verdict::kPass;
  std::string evidence;
  std::size_t checked = 0;
  std::string witness;  // empty unless a violation or inconclusive pair was found
};

struct ConedOffLemmaReport {
  std::array<LemmaCheck, 4> items;
  bool exact = false;             // finite backend with the whole group in the window
  bool subgroup_infinite = false;  // the infinite-H hypothesis; checks run regardless

  bool any_fail() const {
    return std::any_of(items.begin(), items.end(), [](const LemmaCheck& c) { return c.verdict == Verdict::kFail; });
  }
};

namespace detail {

struct ConedOffPair {
  ConedOffGraph coned;
  RelativeCayleyGraph relative;
  SimplicialGraph relative_simple;
};

inline ConedOffPair build_pair(const GroupPtr& group, const Subgroup& h, const std::vector<Element>& x, int radius) {
  ConedOffPair p{build_coned_off(group, h, x, radius, false), build_relative_cayley(group, h, x, radius), {}};
  p.relative_simple = p.relative.underlying();
  return p;
}

}  // namespace detail

/// Checks, on the window: (i) the three connectivity statements agree;
/// (ii) dist_Γ <= dist_Γ̂ <= 2 dist_Γ on group vertices; (iii)
/// d̂_H/2 <= angle_H <= 2 d̂_H on H; (iv) the links of all sampled cone vertices
/// are isometric to the link at H via h -> gh. For infinite backends only
/// values that agree between windows L and L+1 are compared.
inline ConedOffLemmaReport check_coned_off_lemma(const GroupPtr& group, const Subgroup& h,
                                                 const std::vector<Element>& x, int radius,
                                                 std::size_t sampled_cosets = 16) {
  ConedOffLemmaReport report;
  auto at = detail::build_pair(group, h, x, radius);
  const bool exact = at.coned.window->covers_group();
  report.exact = exact;
  report.subgroup_infinite = !h.order().has_value();
  std::optional<detail::ConedOffPair> next;
  if (!exact) next = detail::build_pair(group, h, x, radius + 1);
  const Window& w = *at.coned.window;
  const SimplicialGraph& hat = at.coned.graph;
  const SimplicialGraph& rel = at.relative_simple;
  auto rel_vertex = [&](const SimplicialGraph& g, std::size_t i, const Window& win) { return g.at(win.name(i)); };

  // (i)
  {
    auto& item = report.items[0];
    item.id = "connectivity";
    bool hat_connected = is_connected(hat);
    bool rel_connected = is_connected(rel);
    std::vector<Element> gens = x;
    for (const auto& e : h.generators()) gens.push_back(e);
    std::string generation = "window";
    bool generates = rel_connected;
    if (group->is_finite()) {
      generates = generated_order(group, gens) == *group->order();
      generation = generates ? "yes" : "no";
    }
    item.checked = 3;
    item.evidence = std::string("coned-off connected: ") + (hat_connected ? "yes" : "no") +
                    "; relative connected: " + (rel_connected ? "yes" : "no") + "; X ∪ H generates G: " + generation;
    if (hat_connected != rel_connected || (exact && generates != hat_connected)) {
      item.verdict = Verdict::kFail;
      item.witness = item.evidence;
    }
  }

  // (ii)
  {
    auto& item = report.items[1];
    item.id = "group-vertex-distances";
    DistanceTable dh(hat), dr(rel);
    std::optional<DistanceTable> nh, nr;
    if (next) {
      nh.emplace(next->coned.graph);
      nr.emplace(next->relative_simple);
    }
    for (std::size_t i = 0; i < w.size() && item.verdict != Verdict::kFail; ++i) {
      for (std::size_t j = i + 1; j < w.size(); ++j) {
        Vertex hi = at.coned.element_vertex[i], hj = at.coned.element_vertex[j];
        Vertex ri = rel_vertex(rel, i, w), rj = rel_vertex(rel, j, w);
        Distance a = dr(ri, rj), b = dh(hi, hj);
        if (next) {
          const auto& nw = *next->coned.window;
          std::size_t ni = nw.index_of(w.element(i)), nj = nw.index_of(w.element(j));
          Distance a2 = (*nr)(rel_vertex(next->relative_simple, ni, nw), rel_vertex(next->relative_simple, nj, nw));
          Distance b2 = (*nh)(next->coned.element_vertex[ni], next->coned.element_vertex[nj]);
          if (a != a2 || b != b2) continue;
        }
        ++item.checked;
        bool ok = (a == kInfinity) == (b == kInfinity);
        if (ok && a != kInfinity) ok = a <= b && b <= 2 * a;
        if (!ok) {
          item.verdict = exact ? Verdict::kFail : Verdict::kWindowInconclusive;
          item.witness = w.name(i) + " " + w.name(j) + ": relative " + distance_string(a) + ", coned-off " +
                         distance_string(b);
          if (exact) break;
        }
      }
    }
    item.evidence = std::to_string(item.checked) + " pairs compared";
  }

  // (iii)
  AngleTable angle_h(hat, at.coned.apex);
  {
    auto& item = report.items[2];
    item.id = "hat-vs-angle";
    auto table = hat_distance_table(at.relative);
    std::optional<AdmissibleDistanceTable> next_table;
    std::optional<AngleTable> next_angle;
    if (next) {
      next_table = hat_distance_table(next->relative);
      next_angle.emplace(next->coned.graph, next->coned.apex);
    }
    for (std::size_t a = 0; a < table.members.size() && item.verdict != Verdict::kFail; ++a) {
      for (std::size_t b = a + 1; b < table.members.size(); ++b) {
        std::size_t hi = table.members[a], ki = table.members[b];
        HatDistance dhat = table.at(a, b);
        Distance ang = angle_h(at.coned.element_vertex[hi], at.coned.element_vertex[ki]);
        if (next) {
          const auto& nw = *next->coned.window;
          std::size_t nh = nw.index_of(w.element(hi)), nk = nw.index_of(w.element(ki));
          auto pa = std::find(next_table->members.begin(), next_table->members.end(), nh) - next_table->members.begin();
          auto pb = std::find(next_table->members.begin(), next_table->members.end(), nk) - next_table->members.begin();
          HatDistance dhat2 = next_table->at(static_cast<std::size_t>(pa), static_cast<std::size_t>(pb));
          Distance ang2 = (*next_angle)(next->coned.element_vertex[nh], next->coned.element_vertex[nk]);
          if (!(dhat2.finite() == dhat.finite() && dhat2.value == dhat.value) || ang2 != ang) continue;
        }
        ++item.checked;
        bool ok = true;
        if (dhat.finite() && ang != kInfinity) {
          ok = dhat.value <= 2 * ang && ang <= 2 * dhat.value;
        } else {
          ok = !dhat.finite() && ang == kInfinity;
        }
        if (!ok) {
          item.verdict = exact ? Verdict::kFail : Verdict::kWindowInconclusive;
          item.witness = w.name(hi) + " " + w.name(ki) + ": hat " + dhat.to_string() + ", angle " + distance_string(ang);
          if (exact) break;
        }
      }
    }
    item.evidence = std::to_string(item.checked) + " pairs of H compared";
  }

  // (iv)
  {
    auto& item = report.items[3];
    item.id = "cone-links-isometric";
    std::optional<AngleTable> next_angle_h;
    if (next) next_angle_h.emplace(next->coned.graph, next->coned.apex);
    std::size_t sampled = 0;
    for (Vertex c = 0; c < hat.num_vertices() && sampled < sampled_cosets && item.verdict != Verdict::kFail; ++c) {
      if (!at.coned.is_cone(c) || c == at.coned.apex) continue;
      ++sampled;
      const Element& g = *at.coned.vertex_coset[c];
      AngleTable angle_c(hat, c);
      std::optional<AngleTable> next_angle_c;
      if (next) next_angle_c.emplace(next->coned.graph, next->coned.graph.at(hat.name(c)));
      const auto& link = angle_h.link();
      for (std::size_t a = 0; a < link.size() && item.verdict != Verdict::kFail; ++a) {
        for (std::size_t b = a + 1; b < link.size(); ++b) {
          const Element& ha = w.element(*at.coned.vertex_element[link[a]]);
          const Element& hb = w.element(*at.coned.vertex_element[link[b]]);
          auto ga = w.find(group->multiply(g, ha)), gb = w.find(group->multiply(g, hb));
          if (!ga || !gb) continue;
          Distance base = angle_h.at(a, b);
          Distance moved = angle_c(at.coned.element_vertex[*ga], at.coned.element_vertex[*gb]);
          if (next) {
            const SimplicialGraph& ng = next->coned.graph;
            Distance base2 = (*next_angle_h)(ng.at(hat.name(link[a])), ng.at(hat.name(link[b])));
            Distance moved2 = (*next_angle_c)(ng.at(w.name(*ga)), ng.at(w.name(*gb)));
            if (base2 != base || moved2 != moved) continue;
          }
          ++item.checked;
          if (base != moved) {
            item.verdict = exact ? Verdict::kFail : Verdict::kWindowInconclusive;
            item.witness = hat.name(c) + ": angle(" + w.name(*ga) + "," + w.name(*gb) + ") = " + distance_string(moved) +
                           " but angle_H(" + w.name(*at.coned.vertex_element[link[a]]) + "," +
                           w.name(*at.coned.vertex_element[link[b]]) + ") = " + distance_string(base);
            if (exact) break;
          }
        }
      }
    }
    item.evidence = std::to_string(sampled) + " cosets sampled, " + std::to_string(item.checked) + " pairs compared";
  }
  return report;
}

/// (G,H)-graph validation of a windowed coned-off graph, with the window
/// family L-3..L (clamped at 1) for stability evidence.
inline GHGraphReport validate_coned_off(const GroupPtr& group, const Subgroup& h, const std::vector<Element>& x,
                                        int radius, Distance k_max = 4) {
  auto coned = build_coned_off(group, h, x, radius);
  ValidationOptions options;
  options.tags = coned.stabilizer_tags();
  options.apex = coned.apex;
  options.family = coned_off_family(group, h, x);
  for (int l = std::max(1, radius - 3); l <= radius; ++l) options.probe_windows.push_back(l);
  options.k_max = k_max;
  return validate_gh_graph(coned.graph, coned.action, h, options);
}

}  // namespace finegraph

#endif  // FINEGRAPH_CONEDOFF_HPP
