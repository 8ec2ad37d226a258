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

#include <gtest/gtest.h>

#include "corpus.hpp"
#include "finegraph/constructions.hpp"
#include "support/oracles.hpp"

namespace finegraph {
namespace {

struct Attached {
  corpus::Instance inst;
  Vertex u = 0, v = 0;
  AttachmentResult result;
  ReplacementScheme scheme;
};

Attached attach_names(corpus::Instance inst, const std::string& u, const std::string& v) {
  Attached a{std::move(inst), 0, 0, {}, {}};
  a.u = a.inst.graph.at(u);
  a.v = a.inst.graph.at(v);
  a.result = attach_edge_orbit(a.inst.graph, a.inst.action, a.u, a.v);
  a.scheme = make_replacement_scheme(a.inst.graph, a.u, a.v);
  return a;
}

TEST(ReplacementSchemeTest, AlphaIsLexLeastGeodesic) {
  auto a = attach_names(corpus::cayley_instance("Z12", Group::cyclic(12)), "e", "t.t.t");
  EXPECT_EQ(a.scheme.length(), 3u);
  std::vector<std::string> names;
  for (Vertex x : a.scheme.alpha) names.push_back(a.inst.graph.name(x));
  EXPECT_EQ(names, (std::vector<std::string>{"e", "t", "t.t", "t.t.t"}));
  EXPECT_EQ(a.scheme.reversed().front(), a.v);
  EXPECT_EQ(a.scheme.corners().size(), 2u);
}

TEST(AlphaReplacementTest, PathWithoutAttachedEdgesIsCopied) {
  auto a = attach_names(corpus::cayley_instance("Z12", Group::cyclic(12)), "e", "t.t.t");
  const auto& g = a.inst.graph;
  std::vector<Vertex> path = {g.at("e"), g.at("t"), g.at("t.t")};
  EXPECT_EQ(alpha_replacement(path, g, a.result.graph, a.inst.action, a.scheme).path, path);
}

TEST(AlphaReplacementTest, AttachedRepresentativeBecomesAlpha) {
  auto a = attach_names(corpus::cayley_instance("Z12", Group::cyclic(12)), "e", "t.t.t");
  auto r = alpha_replacement({a.u, a.v}, a.inst.graph, a.result.graph, a.inst.action, a.scheme);
  EXPECT_EQ(r.path, a.scheme.alpha);
  ASSERT_EQ(r.translators.size(), 1u);
  EXPECT_EQ(r.translators[0], std::optional<std::size_t>(0));  // the identity
  auto back = alpha_replacement({a.v, a.u}, a.inst.graph, a.result.graph, a.inst.action, a.scheme);
  EXPECT_EQ(back.path, a.scheme.reversed());
}

TEST(AlphaReplacementTest, LengthBoundAndVertexSubsetOnCorpus) {
  for (const auto& inst : corpus::finite_instances()) {
    for (auto [u, v] : corpus::attachment_pairs(inst.graph, inst.action)) {
      auto result = attach_edge_orbit(inst.graph, inst.action, u, v);
      auto scheme = make_replacement_scheme(inst.graph, u, v);
      for (Vertex x = 0; x < inst.graph.num_vertices(); ++x)
        for (Vertex y = 0; y < inst.graph.num_vertices(); ++y) {
          auto p = geodesic(result.graph, x, y);
          if (p.size() < 2) continue;
          auto r = alpha_replacement(p, inst.graph, result.graph, inst.action, scheme).path;
          EXPECT_LE(r.size() - 1, scheme.length() * (p.size() - 1)) << inst.name;
          for (std::size_t i = 1; i < r.size(); ++i) ASSERT_TRUE(inst.graph.adjacent(r[i - 1], r[i])) << inst.name;
          for (Vertex z : p) EXPECT_NE(std::find(r.begin(), r.end(), z), r.end()) << inst.name;
        }
    }
  }
}

TEST(AlphaReplacementTest, NonEdgeStepIsRejected) {
  auto a = attach_names(corpus::cayley_instance("Z12", Group::cyclic(12)), "e", "t.t.t");
  const auto& g = a.inst.graph;
  EXPECT_THROW(alpha_replacement({g.at("e"), g.at("t.t")}, g, a.result.graph, a.inst.action, a.scheme), InvalidInput);
}

TEST(WZFiltrationTest, DegenerateWhenEndpointsAdjacent) {
  auto inst = corpus::cayley_instance("Z12", Group::cyclic(12));
  const auto& g = inst.graph;
  auto scheme = make_replacement_scheme(g, g.at("e"), g.at("t"));
  auto f = wz_filtration(g, g, inst.action, scheme, g.at("e"), g.at("t.t"), 2);
  EXPECT_TRUE(f.degenerate);
  EXPECT_TRUE(f.W.empty());
  EXPECT_TRUE(f.Z.empty());
}

TEST(WZFiltrationTest, TopLevelIsEscapingSetOfLengthKl) {
  auto a = attach_names(corpus::cayley_instance("Z12", Group::cyclic(12)), "e", "t.t.t");
  const auto& g = a.inst.graph;
  auto f = wz_filtration(g, a.result.graph, a.inst.action, a.scheme, g.at("e"), g.at("t.t.t.t.t"), 2);
  EXPECT_EQ(f.n, 6u);
  auto top = oracle::escaping(g, g.at("e"), g.at("t.t.t.t.t"), 6);
  EXPECT_EQ(std::set<Vertex>(f.W[6].begin(), f.W[6].end()), top);
}

TEST(WZFiltrationTest, ChainAndCoverOnCorpus) {
  for (const auto& inst : corpus::finite_instances()) {
    for (auto [u, v] : corpus::attachment_pairs(inst.graph, inst.action)) {
      auto result = attach_edge_orbit(inst.graph, inst.action, u, v);
      auto scheme = make_replacement_scheme(inst.graph, u, v);
      for (Vertex a = 0; a < inst.graph.num_vertices(); ++a)
        for (Vertex b = 0; b < inst.graph.num_vertices(); ++b) {
          if (a == b) continue;
          for (Distance k = 1; k <= 2; ++k) {
            auto f = wz_filtration(inst.graph, result.graph, inst.action, scheme, a, b, k);
            EXPECT_EQ(f.chain_failure(), std::nullopt) << inst.name;
            // The cover is checked against the brute-force escaping set of the attached graph.
            auto direct = oracle::escaping(result.graph, a, b, k);
            EXPECT_EQ(std::set<Vertex>(f.escaping_attached.begin(), f.escaping_attached.end()), direct);
            EXPECT_TRUE(f.uncovered().empty()) << inst.name;
            for (const auto& d : f.witnesses) {
              EXPECT_EQ(containment_failure(f, inst.graph, d.original, d.replaced), std::nullopt) << inst.name;
            }
          }
        }
    }
  }
}

TEST(WZFiltrationTest, X0HoldsExactlyTheNewNeighboursThatEscape) {
  auto a = attach_names(corpus::cayley_instance("Z12", Group::cyclic(12)), "e", "t.t.t");
  const auto& g = a.inst.graph;
  auto f = wz_filtration(g, a.result.graph, a.inst.action, a.scheme, g.at("e"), g.at("t.t.t"), 1);
  EXPECT_EQ(f.X0, std::vector<Vertex>{g.at("t.t.t")});
  ASSERT_EQ(f.Y.size(), 1u);
  EXPECT_EQ(f.Y[0], 0u);
}

TEST(TrivialStabilizerTest, IdentityWhenFreeVertexExists) {
  auto inst = corpus::cayley_instance("S3", Group::symmetric(3));
  auto out = add_trivial_stabilizer_vertex(inst.graph, inst.action);
  EXPECT_FALSE(out.added);
  EXPECT_EQ(out.graph, inst.graph);
}

TEST(TrivialStabilizerTest, AddsOneVertexPerGroupElement) {
  auto s3 = Group::symmetric(3);
  auto h = Subgroup::generated_by(s3, {s3->parse("c")});
  auto inst = corpus::two_coset_instance("cosets", s3, Subgroup::generated_by(s3, {s3->parse("s")}), h);
  auto out = add_trivial_stabilizer_vertex(inst.graph, inst.action, inst.apex);
  ASSERT_TRUE(out.added);
  EXPECT_EQ(out.graph.num_vertices(), inst.graph.num_vertices() + 6);
  EXPECT_EQ(out.action.verify(out.graph), std::nullopt);
  EXPECT_EQ(stabilizer(out.action, out.base).elements.size(), 1u);
  // The inclusion is a quasi-isometry: distances unchanged, every new vertex at distance 1.
  std::vector<Vertex> inclusion = out.old_to_new;
  EXPECT_TRUE(qi_check(inclusion, inst.graph, out.graph, 1, 1).passed());
}

TEST(ThickenTest, ConedOffFreeGroupIsAlreadyThick) {
  auto f2 = Group::free(2);
  auto h = Subgroup::from_letters(f2, {0});
  auto c = build_coned_off(f2, h, {f2->parse("b")}, 4);
  ThickenOptions options{std::nullopt, c.apex, c.stabilizer_tags()};
  auto t = thicken(c.graph, c.action, h, {f2->parse("b")}, options);
  EXPECT_TRUE(t.plan.attachments.empty());
  EXPECT_EQ(t.graph.name(t.plan.base), "e");
  EXPECT_EQ(t.graph, c.graph);
  EXPECT_EQ(missing_thick_edge(t.graph, t.action, t.plan), std::nullopt);
}

TEST(ThickenTest, AttachesMissingGeneratorOrbits) {
  auto f2 = Group::free(2);
  auto h = Subgroup::from_letters(f2, {0});
  auto c = build_coned_off(f2, h, {f2->parse("b")}, 4);
  ThickenOptions options{std::nullopt, c.apex, c.stabilizer_tags()};
  auto t = thicken(c.graph, c.action, h, {f2->parse("b"), f2->parse("a.b")}, options);
  ASSERT_EQ(t.plan.attachments.size(), 1u);
  EXPECT_EQ(t.plan.attachments[0].u, "e");
  EXPECT_EQ(t.plan.attachments[0].v, "a.b");
  EXPECT_LE(t.plan.attachments[0].max_new_orbits, 2u);
  EXPECT_EQ(missing_thick_edge(t.graph, t.action, t.plan), std::nullopt);
  auto before = validate_gh_graph(c.graph, c.action, h, {c.stabilizer_tags(), c.apex, {}, {}, 4, 1200});
  auto after = validate_gh_graph(t.graph, t.action, h, {t.tags, t.plan.apex, {}, {}, 4, 1200});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(before.items[i].verdict, after.items[i].verdict) << i;
}

TEST(ThickenTest, CosetGraphGetsFreeOrbitAndRepresentatives) {
  auto s3 = Group::symmetric(3);
  auto h = Subgroup::generated_by(s3, {s3->parse("c")});
  auto inst = corpus::two_coset_instance("cosets", s3, Subgroup::generated_by(s3, {s3->parse("s")}), h);
  auto t = thicken(inst.graph, inst.action, h, {s3->parse("s")});
  EXPECT_TRUE(t.plan.added_trivial_vertex);
  EXPECT_EQ(missing_thick_edge(t.graph, t.action, t.plan), std::nullopt);
  for (const auto& rec : t.plan.attachments) EXPECT_LE(rec.max_new_orbits, 2u);
  auto report = validate_gh_graph(t.graph, t.action, h);
  EXPECT_TRUE(report.all_pass());
}

TEST(ExtractXTest, FreeGroupContainsGeneratorAndInverse) {
  auto f2 = Group::free(2);
  auto h = Subgroup::from_letters(f2, {0});
  auto c = build_coned_off(f2, h, {f2->parse("b")}, 4);
  ThickenOptions options{std::nullopt, c.apex, c.stabilizer_tags()};
  auto t = thicken(c.graph, c.action, h, {f2->parse("b")}, options);
  auto x = extract_X(t.graph, t.action, t.plan);
  auto elems = x.as_elements(t.action.window());
  auto has = [&](const char* w) { return std::find(elems.begin(), elems.end(), f2->parse(w)) != elems.end(); };
  EXPECT_TRUE(has("b"));
  EXPECT_TRUE(has("b^-1"));
  EXPECT_TRUE(has("a^-3"));  // g.v0 = v0 for g in H
  EXPECT_FALSE(has("a.b"));
  // the base is adjacent to the apex, so g = e satisfies dist(u0, g.v0) = 1
  EXPECT_TRUE(has("e"));
  ASSERT_EQ(x.provenance.size(), elems.size());
}

TEST(ExtractXTest, GeneratingSetLiesInX) {
  auto s3 = Group::symmetric(3);
  auto h = Subgroup::generated_by(s3, {s3->parse("c")});
  auto inst = corpus::two_coset_instance("cosets", s3, Subgroup::generated_by(s3, {s3->parse("s")}), h);
  auto t = thicken(inst.graph, inst.action, h, {s3->parse("s")});
  auto elems = extract_X(t.graph, t.action, t.plan).as_elements(t.action.window());
  EXPECT_NE(std::find(elems.begin(), elems.end(), s3->parse("s")), elems.end());
}

TEST(QuasiIsometryWitnessTest, FreeGroupWindowFour) {
  auto f2 = Group::free(2);
  auto h = Subgroup::from_letters(f2, {0});
  auto c = build_coned_off(f2, h, {f2->parse("b")}, 4);
  ThickenOptions options{std::nullopt, c.apex, c.stabilizer_tags()};
  auto t = thicken(c.graph, c.action, h, {f2->parse("b")}, options);
  auto x = extract_X(t.graph, t.action, t.plan);
  auto w = coned_off_qi_witness(t.graph, t.action, t.plan, h, x.as_elements(t.action.window()));
  EXPECT_TRUE(w.passed());
  EXPECT_EQ(w.points, t.graph.num_vertices());
  EXPECT_EQ(w.pairs_checked, w.points * (w.points + 1) / 2);
}

TEST(QuasiIsometryWitnessTest, FiniteCorpusAfterThickening) {
  for (const auto& inst : corpus::finite_instances()) {
    if (!inst.apex) continue;
    std::vector<Element> s;
    for (std::size_t i = 0; i < inst.group->num_generators(); ++i) s.push_back(inst.group->generator(i));
    ThickenOptions options{std::nullopt, inst.apex, {}};
    auto t = thicken(inst.graph, inst.action, inst.subgroup, s, options);
    auto x = extract_X(t.graph, t.action, t.plan);
    auto w = coned_off_qi_witness(t.graph, t.action, t.plan, inst.subgroup, x.as_elements(t.action.window()));
    EXPECT_TRUE(w.passed()) << inst.name;
  }
}

TEST(QuasiIsometryWitnessTest, DetectsAWrongGeneratingSet) {
  // With X empty the coned-off graph of Z/12 over <t^4> is disconnected
  // while the thick graph is connected, so the upper bound must fail.
  auto z12 = Group::cyclic(12);
  auto h = Subgroup::generated_by(z12, {z12->parse("t^4")});
  auto inst = corpus::coned_off_instance("Z12", z12, h, {z12->parse("t")});
  ThickenOptions options{std::nullopt, inst.apex, {}};
  auto t = thicken(inst.graph, inst.action, h, {z12->parse("t")}, options);
  auto w = coned_off_qi_witness(t.graph, t.action, t.plan, h, {});
  EXPECT_FALSE(w.passed());
}

}  // namespace
}  // namespace finegraph
