// Copyright 2026 The PGLP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <vector>

#include <gtest/gtest.h>

#include "pglp/exposure.hpp"
#include "pglp/random.hpp"
#include "oracles.hpp"

namespace pglp {
namespace {

// 3x2 map, s1..s6 = indices 0..5 (s1 s2 s3 bottom row, s4 s5 s6 top row).
// Only s2-s3 survives C = {s2, s3, s5}; s5's neighbors s1, s4 are outside C.
struct Fig3Layout {
  GridMap map{3, 2};
  PolicyGraph g = [] {
    PolicyGraph g(6);
    g.add_edge(0, 1);
    g.add_edge(1, 2);
    g.add_edge(3, 4);
    g.add_edge(0, 4);
    g.add_edge(1, 5);
    return g;
  }();
  ConstrainedDomain c{6, {1, 2, 4}};
};

// 3x3 map. s2 = (1,0) with neighbors s1 = (0,0) and s3 = (2,0) only;
// s4 = (0,1), s5 = (2,1), s6 = (1,2) form a triangle whose hull is the
// hexagon with vertices +/-(2,0), +/-(1,1), +/-(-1,1).
struct NotIsolatedLayout {
  GridMap map{3, 3};
  std::size_t s1 = 0, s2 = 1, s3 = 2, s4 = 3, s5 = 5, s6 = 7;
  PolicyGraph g = [this] {
    PolicyGraph g(9);
    g.add_edge(s1, s2);
    g.add_edge(s2, s3);
    g.add_edge(s4, s5);
    g.add_edge(s5, s6);
    g.add_edge(s4, s6);
    return g;
  }();
  ConstrainedDomain c{9, {s2, s4, s5, s6}};
};

TEST(ClassifyTest, Fig3Structure) {
  const Fig3Layout f;
  const auto st = classify(f.g, f.c);
  EXPECT_EQ(st[0], NodeStatus::kExcluded);
  EXPECT_EQ(st[1], NodeStatus::kIncluded);
  EXPECT_EQ(st[2], NodeStatus::kIncluded);
  EXPECT_EQ(st[3], NodeStatus::kExcluded);
  EXPECT_EQ(st[4], NodeStatus::kDisconnected);
  EXPECT_EQ(st[5], NodeStatus::kExcluded);
}

TEST(ClassifyTest, FullDomainConnectedGraph) {
  const GridMap map(4, 4);
  for (NodeStatus s : classify(build_g1(map), ConstrainedDomain::full(16))) {
    EXPECT_EQ(s, NodeStatus::kIncluded);
  }
}

TEST(ClassifyTest, NodeWithoutPolicyNeighborsIsNotDisconnected) {
  PolicyGraph g(3);
  g.add_edge(0, 1);
  const auto st = classify(g, ConstrainedDomain(3, {0, 2}));
  EXPECT_EQ(st[0], NodeStatus::kDisconnected);
  EXPECT_EQ(st[1], NodeStatus::kExcluded);
  EXPECT_EQ(st[2], NodeStatus::kIncluded);
}

TEST(IsIsolatedTest, DisconnectedButNotIsolated) {
  const NotIsolatedLayout f;
  EXPECT_EQ(classify(f.g, f.c)[f.s2], NodeStatus::kDisconnected);
  const ConvexPolygon k = constrained_hull(f.map, f.g, f.c);
  const Point fs2 = f.map.center(Location{f.s2});
  EXPECT_TRUE(contains(k, f.map.center(Location{f.s4}) - fs2));
  EXPECT_TRUE(contains(k, f.map.center(Location{f.s5}) - fs2));
  EXPECT_FALSE(contains(k, f.map.center(Location{f.s6}) - fs2));
  EXPECT_FALSE(is_isolated(f.map, f.g, f.c, Location{f.s2}));
  EXPECT_FALSE(oracle::is_isolated(f.map, f.g, f.c, f.s2));
}

TEST(IsIsolatedTest, Fig3DisconnectedNodeIsIsolated) {
  const Fig3Layout f;
  // K(G^C) is the segment [(-1,0), (1,0)]; s5 - s2 = (0,1), s5 - s3 = (-1,1).
  EXPECT_TRUE(is_isolated(f.map, f.g, f.c, Location{4}));
  EXPECT_TRUE(oracle::is_isolated(f.map, f.g, f.c, 4));
}

TEST(IsIsolatedTest, BottomRowLayoutAgreesWithOracle) {
  // Policy edges s4-s5, s5-s6 on the bottom row of a 3x2 map (indices 0..2
  // after flipping rows), s1 above s4 linked only to s2 outside C.
  const GridMap map(3, 2);
  PolicyGraph g(6);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(3, 4);
  const ConstrainedDomain c(6, {0, 1, 2, 3});
  ASSERT_EQ(classify(g, c)[3], NodeStatus::kDisconnected);
  EXPECT_EQ(is_isolated(map, g, c, Location{3}), oracle::is_isolated(map, g, c, 3));
}

TEST(IsIsolatedTest, EdgelessConstrainedGraphIsolates) {
  const GridMap map(3, 1);
  PolicyGraph g(3);
  g.add_edge(0, 1);
  const ConstrainedDomain c(3, {0, 2});
  EXPECT_TRUE(is_isolated(map, g, c, Location{0}));
}

TEST(IsIsolatedTest, InteriorDifferenceProtects) {
  // K from a 3x3 block; the disconnected node sits next to the block.
  const GridMap map(5, 3);
  PolicyGraph g = build_block(map, 3);
  g.add_edge(map.at(3, 1).index, map.at(4, 1).index);
  const ConstrainedDomain c(15, {0, 1, 2, 5, 6, 7, 10, 11, 12, map.at(3, 1).index});
  const std::size_t s = map.at(3, 1).index;
  ASSERT_EQ(classify(g, c)[s], NodeStatus::kDisconnected);
  EXPECT_FALSE(is_isolated(map, g, c, Location{s}));
}

TEST(IsIsolatedTest, PreconditionsAreChecked) {
  const Fig3Layout f;
  EXPECT_THROW(is_isolated(f.map, f.g, f.c, Location{1}), DomainError);
  EXPECT_THROW(is_isolated(f.map, f.g, f.c, Location{0}), DomainError);
}

TEST(RepairTest, Fig3RepairAddsOneEdgeAndProtects) {
  const Fig3Layout f;
  const Repair r = repair_min_area(f.map, restrict_to(f.g, f.c), f.c, Location{4});
  const auto want = oracle::min_area_partner(f.map, restrict_to(f.g, f.c), f.c, 4);
  EXPECT_EQ(r.partner.index, want.first);
  EXPECT_NEAR(r.area_after, want.second, 1e-12);
  EXPECT_EQ(r.graph.edge_count(), 2u);
  EXPECT_TRUE(r.graph.has_edge(4, r.partner.index));
  EXPECT_FALSE(internal::unprotected(f.map, r.graph, f.c, Location{4}));
}

TEST(RepairTest, InteriorCandidateKeepsTheArea) {
  const GridMap map(5, 5);
  PolicyGraph g(25);
  // K: square of half-side 2 from the corners of a 3x3 block.
  g.add_edge(map.at(0, 0).index, map.at(2, 2).index);
  g.add_edge(map.at(2, 0).index, map.at(0, 2).index);
  const ConstrainedDomain c(25, {map.at(0, 0).index, map.at(2, 2).index, map.at(2, 0).index,
                                 map.at(0, 2).index, map.at(4, 4).index});
  const Repair r = repair_min_area(map, g, c, map.at(4, 4));
  EXPECT_DOUBLE_EQ(r.area_after, r.area_before);
  EXPECT_EQ(r.partner, map.at(2, 2));
}

TEST(RepairTest, TieGoesToLowerIndex) {
  // Two mirror-image candidates at equal area.
  const GridMap map(3, 3);
  PolicyGraph g(9);
  g.add_edge(map.at(0, 0).index, map.at(2, 0).index);
  const ConstrainedDomain c(9, {map.at(0, 0).index, map.at(2, 0).index, map.at(1, 2).index});
  const Repair r = repair_min_area(map, g, c, map.at(1, 2));
  EXPECT_EQ(r.partner, map.at(0, 0));
  const Repair n = repair_nearest(map, g, c, map.at(1, 2));
  EXPECT_EQ(n.partner, map.at(0, 0));
}

TEST(RepairTest, NearestBaseline) {
  const GridMap map(4, 1);
  PolicyGraph g(4);
  g.add_edge(0, 1);
  const ConstrainedDomain c(4, {0, 1, 3});
  EXPECT_EQ(repair_nearest(map, g, c, Location{3}).partner, Location{1});
}

TEST(RepairTest, SingletonDomainIsUnrepairable) {
  const GridMap map(2, 1);
  PolicyGraph g(2);
  g.add_edge(0, 1);
  const ConstrainedDomain c(2, {0});
  EXPECT_THROW(repair_min_area(map, g, c, Location{0}), UnrepairableError);
  EXPECT_THROW(repair_nearest(map, g, c, Location{0}), UnrepairableError);
  EXPECT_THROW(analyze_and_repair(map, g, c), UnrepairableError);
}

TEST(AnalyzeAndRepairTest, NoIsolatedNodeRemains) {
  Rng gen(17);
  const GridMap map(6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    PolicyGraph g(36);
    for (std::size_t u = 0; u < 36; ++u) {
      for (std::size_t v = u + 1; v < 36; ++v) {
        if (uniform_open01(gen) < 0.06) g.add_edge(u, v);
      }
    }
    std::vector<std::size_t> members;
    for (std::size_t s = 0; s < 36; ++s) {
      if (uniform_open01(gen) < 0.4) members.push_back(s);
    }
    if (members.size() < 2) continue;
    const ConstrainedDomain c(36, members);
    const ExposureReport report = analyze_and_repair(map, g, c);
    for (std::size_t s : c.members()) {
      if (report.status[s] == NodeStatus::kIsolated || report.status[s] == NodeStatus::kDisconnected) {
        EXPECT_FALSE(internal::unprotected(map, report.graph, c, Location{s}))
            << "trial " << trial << " node " << s;
      }
    }
    // Repaired graph = G^C plus exactly the reported edges.
    EXPECT_EQ(report.graph.edge_count(), restrict_to(g, c).edge_count() + report.repairs.size());
  }
}

}  // namespace
}  // namespace pglp
