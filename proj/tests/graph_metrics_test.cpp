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

#include <random>

#include "corpus.hpp"
#include "finegraph/graph.hpp"
#include "finegraph/metrics.hpp"
#include "support/oracles.hpp"

namespace finegraph {
namespace {

SimplicialGraph path_graph(std::size_t n) {
  GraphBuilder b;
  for (std::size_t i = 0; i < n; ++i) b.add_vertex("p" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) b.add_edge("p" + std::to_string(i), "p" + std::to_string(i + 1));
  return b.build();
}

SimplicialGraph star_tree() {
  return make_graph({}, {{"r", "a"}, {"r", "b"}, {"r", "c"}, {"a", "a1"}, {"a", "a2"}, {"c", "c1"}, {"c1", "c2"}});
}

TEST(GraphTest, VerticesAreIndexedInShortlexOrder) {
  auto g = make_graph({"bb", "a", "c", "ab"}, {{"a", "bb"}});
  EXPECT_EQ(g.names(), (std::vector<std::string>{"a", "c", "ab", "bb"}));
  EXPECT_TRUE(g.adjacent(g.at("a"), g.at("bb")));
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(GraphTest, LoopsAreRejected) {
  GraphBuilder b;
  EXPECT_THROW(b.add_edge("x", "x"), InvalidInput);
}

TEST(GraphTest, ParallelEdgesCollapse) {
  auto g = make_graph({}, {{"x", "y"}, {"y", "x"}, {"x", "y"}});
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_EQ(g.degree(g.at("x")), 1u);
}

TEST(GraphTest, WithEdgesKeepsIndices) {
  auto g = cycle_graph(5);
  auto h = g.with_edges(std::vector<Edge>{{0, 2}});
  EXPECT_EQ(h.names(), g.names());
  EXPECT_EQ(h.num_edges(), 6u);
}

TEST(MetricsTest, BfsMatchesFloydOnRandomGraphs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = corpus::random_graph(12, 0.2, rng);
    auto d = oracle::floyd(g);
    DistanceTable t(g);
    for (Vertex x = 0; x < g.num_vertices(); ++x)
      for (Vertex y = 0; y < g.num_vertices(); ++y) EXPECT_EQ(t(x, y), d[x][y]);
  }
}

TEST(MetricsTest, ComponentsAndConnectivity) {
  auto g = make_graph({"z"}, {{"x", "y"}});
  EXPECT_FALSE(is_connected(g));
  auto c = components(g);
  EXPECT_EQ(c[g.at("x")], c[g.at("y")]);
  EXPECT_NE(c[g.at("x")], c[g.at("z")]);
  EXPECT_EQ(path_distance(g, g.at("x"), g.at("z")), kInfinity);
}

TEST(MetricsTest, GeodesicIsLexicographicallyLeast) {
  auto g = cycle_graph(6);  // v0..v5
  auto p = geodesic(g, g.at("v0"), g.at("v3"));
  ASSERT_EQ(p.size(), 4u);
  std::vector<std::string> names;
  for (Vertex v : p) names.push_back(g.name(v));
  EXPECT_EQ(names, (std::vector<std::string>{"v0", "v1", "v2", "v3"}));
}

TEST(MetricsTest, AngleInCycleIsLengthOfComplement) {
  auto g = cycle_graph(8);
  EXPECT_EQ(angle_distance(g, g.at("v0"), g.at("v1"), g.at("v7")), 6u);
  EXPECT_THROW(angle_distance(g, g.at("v0"), g.at("v2"), g.at("v1")), InvalidInput);
}

TEST(MetricsTest, AngleAtTreeVertexIsInfinite) {
  auto g = star_tree();
  EXPECT_EQ(angle_distance(g, g.at("r"), g.at("a"), g.at("b")), kInfinity);
  EXPECT_EQ(angle_distance(g, g.at("r"), g.at("a"), g.at("a")), 0u);
}

TEST(MetricsTest, AngleTableMatchesFloydOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = corpus::random_graph(10, 0.3, rng);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      AngleTable t(g, v);
      auto d = oracle::floyd(g, v);
      for (Vertex x : g.neighbors(v))
        for (Vertex y : g.neighbors(v)) EXPECT_EQ(t(x, y), d[x][y]);
    }
  }
}

TEST(MetricsTest, AngleBallCollectsNeighbours) {
  auto g = cycle_graph(4);
  auto ball = angle_ball(g, g.at("v0"), g.at("v1"), 2);
  EXPECT_EQ(ball.members.size(), 2u);
  EXPECT_EQ(angle_ball(g, g.at("v0"), g.at("v1"), 1).members.size(), 1u);
}

TEST(EscapingTest, EqualsOracleOnRandomGraphs) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    auto g = corpus::random_graph(14, 0.18, rng);
    for (Vertex u = 0; u < g.num_vertices(); ++u)
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (u == v) continue;
        for (Distance k = 1; k <= 5; ++k) {
          auto s = escaping_set(g, u, v, k);
          auto o = oracle::escaping(g, u, v, k);
          EXPECT_EQ(std::set<Vertex>(s.members.begin(), s.members.end()), o);
        }
      }
  }
}

TEST(EscapingTest, WitnessesAreEscapingPaths) {
  std::mt19937_64 rng(19);
  auto g = corpus::random_graph(15, 0.2, rng);
  for (Vertex u = 0; u < g.num_vertices(); ++u)
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      if (u == v) continue;
      auto s = escaping_set(g, u, v, 4);
      for (std::size_t i = 0; i < s.members.size(); ++i) {
        const auto& p = s.witnesses[i];
        ASSERT_GE(p.size(), 2u);
        EXPECT_EQ(p.front(), u);
        EXPECT_EQ(p[1], s.members[i]);
        EXPECT_EQ(p.back(), v);
        EXPECT_LE(p.size() - 1, 4u);
        for (std::size_t j = 1; j < p.size(); ++j) {
          EXPECT_NE(p[j], u);
          EXPECT_TRUE(g.adjacent(p[j - 1], p[j]));
        }
      }
    }
}

TEST(EscapingTest, NeighbourIsAlwaysInItsOwnSet) {
  auto g = cycle_graph(5);
  auto s = escaping_set(g, g.at("v0"), g.at("v1"), 1);
  EXPECT_EQ(s.members, std::vector<Vertex>{g.at("v1")});
  EXPECT_THROW(escaping_set(g, 0, 0, 1), InvalidInput);
  EXPECT_THROW(escaping_set(g, 0, 1, 0), InvalidInput);
}

TEST(EscapingTest, AngleBallSandwichOnSmallRandomGraphs) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    auto g = corpus::random_graph(10, 0.3, rng);
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
      if (g.degree(u) == 0) continue;
      AngleTable angle(g, u);
      for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (v == u) continue;
        for (Distance k = 1; k <= 4; ++k) {
          auto uv = oracle::escaping(g, u, v, k);
          for (Vertex w : uv)
            for (Vertex x : uv) EXPECT_LE(angle(w, x), 2 * k - 2);
        }
      }
      for (Vertex w : g.neighbors(u))
        for (Distance k = 1; k <= 4; ++k) {
          auto uw = oracle::escaping(g, u, w, k + 1);
          for (Vertex x : g.neighbors(u)) {
            if (angle(w, x) <= k) {
              EXPECT_TRUE(uw.contains(x));
            }
          }
        }
    }
  }
}

TEST(HyperbolicityTest, TreesHaveDeltaZero) {
  EXPECT_EQ(hyperbolicity_delta_all_basepoints(star_tree()).delta_twice, 0);
  EXPECT_EQ(hyperbolicity_delta_all_basepoints(path_graph(7)).delta_twice, 0);
  EXPECT_EQ(hyperbolicity_delta(star_tree(), 0).text(), "0");
}

TEST(HyperbolicityTest, CyclesMatchQuadrupleOracle) {
  for (std::size_t n = 3; n <= 12; ++n) {
    auto g = cycle_graph(n);
    EXPECT_EQ(hyperbolicity_delta_all_basepoints(g).delta_twice, oracle::delta_twice(g)) << "C" << n;
  }
  EXPECT_EQ(hyperbolicity_delta_all_basepoints(cycle_graph(8)).text(), "2");
}

TEST(HyperbolicityTest, AllBasepointsMatchesQuadrupleOracleOnRandomGraphs) {
  std::mt19937_64 rng(29);
  int checked = 0;
  while (checked < 15) {
    auto g = corpus::random_graph(9, 0.35, rng);
    if (!is_connected(g)) continue;
    ++checked;
    auto all = hyperbolicity_delta_all_basepoints(g);
    EXPECT_EQ(all.delta_twice, oracle::delta_twice(g));
    for (Vertex w = 0; w < g.num_vertices(); ++w) EXPECT_LE(hyperbolicity_delta(g, w).delta_twice, all.delta_twice);
  }
}

TEST(HyperbolicityTest, DisconnectedGraphIsRejected) {
  EXPECT_THROW(hyperbolicity_delta(make_graph({"a", "b"}, {}), 0), InvalidInput);
}

TEST(QuasiIsometryTest, IdentityPassesAndCollapseFails) {
  auto g = cycle_graph(6);
  std::vector<Vertex> id(6);
  std::iota(id.begin(), id.end(), Vertex{0});
  EXPECT_TRUE(qi_check(id, g, g, 1, 0).passed());
  std::vector<Vertex> collapse(6, 0);
  auto w = qi_check(collapse, g, g, 2, 0);
  ASSERT_FALSE(w.passed());
  EXPECT_EQ(w.violation->kind, QIViolation::Kind::kLower);
}

TEST(QuasiIsometryTest, DensityIsChecked) {
  auto small = make_graph({"x"}, {});
  auto big = path_graph(5);
  auto w = qi_check({big.at("p0")}, small, big, 1, 2);
  ASSERT_FALSE(w.passed());
  EXPECT_EQ(w.violation->kind, QIViolation::Kind::kDensity);
  EXPECT_TRUE(qi_check({big.at("p2")}, small, big, 1, 2).passed());
}

TEST(FinenessProbeTest, CycleFamilyIsStableAtFixedWindow) {
  auto p = fineness_probe([](int) { return cycle_graph(6); }, {1, 2}, "v0", 3);
  EXPECT_EQ(p.verdict, Trend::kStable);
  EXPECT_EQ(p.center, "v1");
  ASSERT_EQ(p.rows.size(), 6u);
  EXPECT_EQ(p.rows[2].ball_size, 1u);  // angle 4 at k=3
}

TEST(FinenessProbeTest, GrowingFansAreDetected) {
  // Fan of n triangles at a hub: the link is a path whose angle balls grow with n.
  auto fan = [](int n) {
    GraphBuilder b;
    for (int i = 0; i <= n; ++i) {
      b.add_edge("hub", "x" + std::to_string(i));
      if (i) b.add_edge("x" + std::to_string(i - 1), "x" + std::to_string(i));
    }
    return b.build();
  };
  auto p = fineness_probe(fan, {2, 3}, "hub", 4);
  EXPECT_EQ(p.verdict, Trend::kGrowing);
}

}  // namespace
}  // namespace finegraph
