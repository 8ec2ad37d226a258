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

// Desk-scale instances shared by the command-line tool, the tests and the
// acceptance run.

#ifndef FINEGRAPH_TOOLS_CORPUS_HPP
#define FINEGRAPH_TOOLS_CORPUS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "finegraph/finegraph.hpp"

namespace finegraph::corpus {

/// Erdős–Rényi graph on v0..v{n-1}; every edge drawn independently with
/// probability p from a 64-bit Mersenne twister.
inline SimplicialGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) b.add_edge("v" + std::to_string(i), "v" + std::to_string(j));
    }
  }
  return b.build();
}

/// A windowed G-graph with the data needed by the validators.
struct Instance {
  std::string name;
  GroupPtr group;
  Subgroup subgroup;
  SimplicialGraph graph;
  GroupAction action;
  std::vector<StabilizerTag> tags;
  std::optional<Vertex> apex;
};

/// Vertices g K_i for each listed subgroup (ids "(g)K<i>" with g the shortlex
/// coset representative); the i-th subgroup's identity coset is at index i of
/// `bases`. No edges.
struct CosetGraph {
  SimplicialGraph graph;
  GroupAction action;
  std::vector<Vertex> bases;
};

inline CosetGraph coset_graph(const GroupPtr& group, const std::vector<Subgroup>& subgroups) {
  if (!group->is_finite()) throw InvalidInput("coset graphs are built for finite groups only");
  WindowPtr w = Window::full(group);
  auto id = [&](std::size_t i, const Element& g) {
    return "(" + group->name(subgroups[i].coset_representative(g)) + ")K" + std::to_string(i);
  };
  GraphBuilder b;
  for (std::size_t i = 0; i < subgroups.size(); ++i) {
    for (const auto& g : w->elements()) b.add_vertex(id(i, g));
  }
  CosetGraph out;
  out.graph = b.build();
  const std::size_t n = out.graph.num_vertices();
  std::vector<std::vector<Vertex>> images(w->size(), std::vector<Vertex>(n));
  for (std::size_t s = 0; s < w->size(); ++s) {
    for (std::size_t i = 0; i < subgroups.size(); ++i) {
      for (const auto& g : w->elements()) {
        images[s][out.graph.at(id(i, g))] = out.graph.at(id(i, group->multiply(w->element(s), g)));
      }
    }
  }
  out.action = GroupAction(w, std::move(images));
  for (std::size_t i = 0; i < subgroups.size(); ++i) out.bases.push_back(out.graph.at(id(i, group->identity())));
  return out;
}

inline Instance cayley_instance(const std::string& name, const GroupPtr& group) {
  std::vector<Element> gens;
  for (std::size_t i = 0; i < group->num_generators(); ++i) gens.push_back(group->generator(i));
  auto radius = Window::full(group)->radius();
  auto c = build_cayley(group, gens, radius);
  return {name, group, Subgroup::trivial(group), std::move(c.graph), std::move(c.action), {}, std::nullopt};
}

inline Instance coned_off_instance(const std::string& name, const GroupPtr& group, const Subgroup& h,
                                   const std::vector<Element>& x) {
  auto radius = Window::full(group)->radius();
  auto c = build_coned_off(group, h, x, radius);
  auto tags = c.stabilizer_tags();
  return {name, group, h, std::move(c.graph), std::move(c.action), std::move(tags), c.apex};
}

/// Two coset families joined by the single edge orbit of {K_0, K_1}; the
/// stabilizer of K_1 is the distinguished subgroup.
inline Instance two_coset_instance(const std::string& name, const GroupPtr& group, const Subgroup& k,
                                   const Subgroup& h) {
  auto c = coset_graph(group, {k, h});
  auto joined = attach_edge_orbit(c.graph, c.action, c.bases[0], c.bases[1]);
  return {name, group, h, std::move(joined.graph), std::move(c.action), {}, c.bases[1]};
}

/// Finite instances: Cayley graphs, coned-off Cayley graphs and coset graphs
/// of S3, D4 and Z/12.
inline std::vector<Instance> finite_instances() {
  std::vector<Instance> out;
  auto s3 = Group::symmetric(3);
  auto d4 = Group::dihedral(4);
  auto z12 = Group::cyclic(12);
  auto sub = [](const GroupPtr& g, std::initializer_list<const char*> words) {
    std::vector<Element> gens;
    for (const char* w : words) gens.push_back(g->parse(w));
    return Subgroup::generated_by(g, gens);
  };
  out.push_back(cayley_instance("Cayley(S3; s, c)", s3));
  out.push_back(cayley_instance("Cayley(D4; r, s)", d4));
  out.push_back(cayley_instance("Cayley(Z/12; t)", z12));
  out.push_back(coned_off_instance("Cone(S3, <c>, {s})", s3, sub(s3, {"c"}), {s3->parse("s")}));
  out.push_back(coned_off_instance("Cone(S3, <s>, {c})", s3, sub(s3, {"s"}), {s3->parse("c")}));
  out.push_back(coned_off_instance("Cone(D4, <r>, {s})", d4, sub(d4, {"r"}), {d4->parse("s")}));
  out.push_back(coned_off_instance("Cone(D4, <s>, {r})", d4, sub(d4, {"s"}), {d4->parse("r")}));
  out.push_back(coned_off_instance("Cone(Z/12, <t^4>, {t})", z12, sub(z12, {"t^4"}), {z12->parse("t")}));
  out.push_back(coned_off_instance("Cone(Z/12, <t^3>, {t^2})", z12, sub(z12, {"t^3"}), {z12->parse("t^2")}));
  out.push_back(two_coset_instance("Cosets(S3; <s>, <c>)", s3, sub(s3, {"s"}), sub(s3, {"c"})));
  out.push_back(two_coset_instance("Cosets(D4; <s>, <r.s>)", d4, sub(d4, {"s"}), sub(d4, {"r.s"})));
  return out;
}

/// Every nonadjacent pair {u, v} with u the representative of a vertex orbit;
/// up to translation these are all single edge-orbit attachments.
inline std::vector<Edge> attachment_pairs(const SimplicialGraph& graph, const GroupAction& action) {
  auto orbits = orbit_decomposition(graph, action);
  std::vector<Edge> out;
  for (Vertex u : orbits.vertex_representatives) {
    for (Vertex v = 0; v < graph.num_vertices(); ++v) {
      if (v != u && !graph.adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace finegraph::corpus

#endif  // FINEGRAPH_TOOLS_CORPUS_HPP
