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

#include "finegraph/conedoff.hpp"
#include "support/oracles.hpp"

namespace finegraph {
namespace {

struct S3Example {
  GroupPtr group = Group::symmetric(3);
  Subgroup h = Subgroup::generated_by(group, {group->parse("c")});
  std::vector<Element> x = {group->parse("s")};
};

TEST(ConedOffTest, S3WorkedValues) {
  S3Example ex;
  auto rel = build_relative_cayley(ex.group, ex.h, ex.x, 3);
  Element c = ex.group->parse("c");
  EXPECT_EQ(hat_distance(rel, ex.group->identity(), c), (HatDistance{HatDistance::Status::kFinite, 3}));
  auto coned = build_coned_off(ex.group, ex.h, ex.x, 3);
  const Window& w = *coned.window;
  EXPECT_EQ(angle_distance(coned.graph, coned.apex, coned.element_vertex[w.index_of(ex.group->identity())],
                           coned.element_vertex[w.index_of(c)]),
            4u);
}

TEST(ConedOffTest, S3WorkedValuesFromOracle) {
  S3Example ex;
  Element c = ex.group->parse("c");
  EXPECT_EQ(oracle::hat_distance(*ex.group, ex.h.elements(), ex.x, ex.group->identity(), c), 3u);
  auto plain = oracle::coned_off(*ex.group, ex.h.elements(), ex.x);
  std::set<Element> h_set(ex.h.elements().begin(), ex.h.elements().end());
  EXPECT_EQ(oracle::angle(plain.graph, plain.coset.at(h_set), plain.element.at(ex.group->identity()),
                          plain.element.at(c)),
            4u);
}

TEST(ConedOffTest, VertexAndEdgeCounts) {
  S3Example ex;
  auto coned = build_coned_off(ex.group, ex.h, ex.x, 3);
  // 6 group vertices, 2 cones; 3 edges from the involution s and 6 cone edges
  EXPECT_EQ(coned.graph.num_vertices(), 8u);
  EXPECT_EQ(coned.graph.num_edges(), 9u);
  EXPECT_EQ(coned.graph.name(coned.apex), "(e)H");
  EXPECT_TRUE(coned.cone_vertex(ex.group->parse("s")).has_value());
}

TEST(ConedOffTest, MatchesIndependentConstructionOnAllSubgroups) {
  for (auto group : {Group::symmetric(3), Group::dihedral(4)}) {
    for (const auto& h : all_subgroups(group)) {
      for (const auto& x : group->elements()) {
        auto coned = build_coned_off(group, h, {x}, 4);
        auto plain = oracle::coned_off(*group, h.elements(), {x});
        ASSERT_EQ(coned.graph.num_vertices(), plain.graph.num_vertices());
        ASSERT_EQ(coned.graph.num_edges(), plain.graph.num_edges());
        auto d = oracle::floyd(plain.graph);
        DistanceTable t(coned.graph);
        for (const auto& a : group->elements())
          for (const auto& b : group->elements()) {
            EXPECT_EQ(t(coned.element_vertex[coned.window->index_of(a)], coned.element_vertex[coned.window->index_of(b)]),
                      d[plain.element.at(a)][plain.element.at(b)]);
          }
      }
    }
  }
}

TEST(RelativeCayleyTest, KeepsParallelEdgesWithDistinctProvenance) {
  // X = {c} with H = <c>: the letter c and the H-letter c join the same pairs.
  S3Example ex;
  auto rel = build_relative_cayley(ex.group, ex.h, {ex.group->parse("c")}, 3);
  std::size_t x_edges = 0, h_edges = 0;
  for (const auto& e : rel.edges) (e.h_letter ? h_edges : x_edges)++;
  EXPECT_EQ(x_edges, 6u);
  EXPECT_EQ(h_edges, 6u);  // two cosets of size 3, three pairs each
  EXPECT_EQ(rel.underlying().num_edges(), 6u);
}

TEST(RelativeCayleyTest, IdentityLetterIsIgnored) {
  S3Example ex;
  auto rel = build_relative_cayley(ex.group, ex.h, {ex.group->identity()}, 3);
  for (const auto& e : rel.edges) EXPECT_TRUE(e.h_letter);
}

TEST(HatDistanceTest, MatchesGroupArithmeticOracle) {
  for (auto group : {Group::symmetric(3), Group::dihedral(4), Group::cyclic(12)}) {
    auto subgroups = all_subgroups(group);
    const auto& all = group->elements();
    for (const auto& h : subgroups) {
      for (std::size_t i = 0; i < all.size(); ++i) {
        std::vector<Element> x = {all[i]};
        auto rel = build_relative_cayley(group, h, x, static_cast<int>(all.size()));
        auto table = hat_distance_table(rel);
        for (std::size_t a = 0; a < table.members.size(); ++a)
          for (std::size_t b = 0; b < table.members.size(); ++b) {
            Distance o = oracle::hat_distance(*group, h.elements(), x, rel.window->element(table.members[a]),
                                              rel.window->element(table.members[b]));
            const auto& v = table.at(a, b);
            if (o == kInfinity) {
              EXPECT_EQ(v.status, HatDistance::Status::kInfinite);
            } else {
              EXPECT_EQ(v, (HatDistance{HatDistance::Status::kFinite, o}));
            }
          }
      }
    }
  }
}

TEST(HatDistanceTest, FreeFactorIsInfiniteAtWindow) {
  auto f2 = Group::free(2);
  auto h = Subgroup::from_letters(f2, {0});
  auto rel = build_relative_cayley(f2, h, {f2->parse("b")}, 3);
  EXPECT_EQ(hat_distance(rel, f2->identity(), f2->parse("a")).status, HatDistance::Status::kInfiniteAtWindow);
  EXPECT_THROW(hat_distance(rel, f2->identity(), f2->parse("b")), InvalidInput);
}

TEST(HatDistanceTest, FreeAbelianCoordinateIsShortcut) {
  // In Z^2 relative to <b> with X = {a}: a.b^n.a^-1 = b^n gives d^(e, b^n) = 3.
  auto z2 = Group::free_abelian(2);
  auto h = Subgroup::from_letters(z2, {1});
  auto rel = build_relative_cayley(z2, h, {z2->parse("a")}, 4);
  EXPECT_EQ(hat_distance(rel, z2->identity(), z2->parse("b^3")).value, 3u);
  EXPECT_EQ(hat_distance(rel, z2->identity(), z2->parse("b^3")).status, HatDistance::Status::kFinite);
}

TEST(ConedOffCheckTest, ComparabilityOnAllSmallSubgroups) {
  for (auto group : {Group::symmetric(3), Group::dihedral(4), Group::cyclic(12)}) {
    for (const auto& h : all_subgroups(group)) {
      for (const auto& x : group->elements()) {
        auto report = check_coned_off_lemma(group, h, {x}, 6);
        EXPECT_TRUE(report.exact);
        for (const auto& item : report.items) {
          EXPECT_EQ(item.verdict, Verdict::kPass) << item.id << " " << h.description() << " " << group->name(x);
        }
      }
    }
  }
}

TEST(ConedOffCheckTest, WindowedChecksOnInfiniteGroups) {
  auto f2 = Group::free(2);
  auto report = check_coned_off_lemma(f2, Subgroup::from_letters(f2, {0}), {f2->parse("b")}, 3);
  EXPECT_FALSE(report.exact);
  EXPECT_TRUE(report.subgroup_infinite);
  EXPECT_FALSE(report.any_fail());
  auto z2 = Group::free_abelian(2);
  auto r2 = check_coned_off_lemma(z2, Subgroup::from_letters(z2, {1}), {z2->parse("a")}, 3);
  EXPECT_FALSE(r2.any_fail());
  EXPECT_GT(r2.items[2].checked, 0u);
}

TEST(FinenessTest, FreeFactorStableAndFreeAbelianGrowing) {
  auto f2 = Group::free(2);
  auto f2_family = coned_off_family(f2, Subgroup::from_letters(f2, {0}), {f2->parse("b")});
  auto f2_probe = fineness_probe([&](int l) { return f2_family(l).graph; }, {3, 4, 5}, "(e)H", 4);
  EXPECT_EQ(f2_probe.verdict, Trend::kStable);
  auto z2 = Group::free_abelian(2);
  auto z2_family = coned_off_family(z2, Subgroup::from_letters(z2, {1}), {z2->parse("a")});
  auto z2_probe = fineness_probe([&](int l) { return z2_family(l).graph; }, {3, 4, 5}, "(e)H", 4);
  EXPECT_EQ(z2_probe.verdict, Trend::kGrowing);
  // every b^n in the window is within angle 4 of b: 2L - 1 neighbours at L
  EXPECT_EQ(z2_probe.rows.back().ball_size, 9u);
}

}  // namespace
}  // namespace finegraph
