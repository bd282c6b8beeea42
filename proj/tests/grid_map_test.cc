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


#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "pglp/grid_map.hpp"
#include "pglp/partition.hpp"

namespace pglp {
namespace {

TEST(GridMapTest, LocationQueryMatchesRowColumnArithmetic) {
  const GridMap map(3, 3);
  EXPECT_EQ(location_query(map, Location{0}), (Point{0.0, 0.0}));
  EXPECT_EQ(location_query(map, Location{4}), (Point{1.0, 1.0}));

  const GridMap fine(20, 20, 0.27);
  const Point p = location_query(fine, Location{21});
  EXPECT_NEAR(p.x, 0.27, 1e-12);
  EXPECT_NEAR(p.y, 0.27, 1e-12);
}

TEST(GridMapTest, OriginShiftsEveryCenter) {
  const GridMap map(4, 2, 0.5, {10.0, -3.0});
  EXPECT_EQ(map.center(Location{0}), (Point{10.0, -3.0}));
  EXPECT_EQ(map.center(Location{5}), (Point{10.5, -2.5}));
}

TEST(GridMapTest, RejectsInvalidConstruction) {
  EXPECT_THROW(GridMap(0, 3), DomainError);
  EXPECT_THROW(GridMap(3, 0), DomainError);
  EXPECT_THROW(GridMap(3, 3, 0.0), DomainError);
  EXPECT_THROW(GridMap(3, 3, -1.0), DomainError);
  EXPECT_THROW(GridMap(3, 3, std::nan("")), DomainError);
}

TEST(GridMapTest, OutOfRangeIndexIsDomainError) {
  const GridMap map(3, 3);
  EXPECT_THROW(map.center(Location{9}), DomainError);
  EXPECT_THROW(map.at(3, 0), DomainError);
  EXPECT_EQ(map.at(2, 1), Location{5});
}

TEST(GridMapTest, SnapExactCenter) {
  const GridMap map(5, 4, 0.34);
  for (std::size_t i = 0; i < map.size(); ++i) {
    EXPECT_EQ(snap(map, map.center(Location{i})), Location{i});
  }
}

TEST(GridMapTest, SnapClampsOutsideTheGrid) {
  const GridMap map(3, 3);
  EXPECT_EQ(map.snap({-50.0, -50.0}), Location{0});
  EXPECT_EQ(map.snap({50.0, 1.0}), Location{5});
  EXPECT_EQ(map.snap({1.2, 99.0}), Location{7});
}

TEST(GridMapTest, SnapTieGoesToSmallerIndex) {
  // Cells 3 and 4 of a 3x3 map are (0,1) and (1,1).
  const GridMap map(3, 3);
  EXPECT_EQ(map.snap({0.5, 1.0}), Location{3});
  // Four-way tie between 0, 1, 3, 4.
  EXPECT_EQ(map.snap({0.5, 0.5}), Location{0});
}

TEST(GridMapTest, SnapRejectsNonFinite) {
  const GridMap map(2, 2);
  EXPECT_THROW(map.snap({std::numeric_limits<double>::infinity(), 0.0}), DomainError);
  EXPECT_THROW(map.snap({0.0, std::nan("")}), DomainError);
}

TEST(GridMapTest, SnapAgreesWithBruteForceNearest) {
  const GridMap map(7, 5, 0.3, {1.0, 2.0});
  for (int i = -10; i <= 40; ++i) {
    for (int j = -10; j <= 30; ++j) {
      const Point p{1.0 + 0.071 * i, 2.0 + 0.067 * j};
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < map.size(); ++c) {
        const double d = norm2(map.center(Location{c}) - p);
        if (d < best_d - 1e-12) {
          best_d = d;
          best = c;
        }
      }
      EXPECT_EQ(map.snap(p).index, best) << p.x << "," << p.y;
    }
  }
}

TEST(GridMapTest, EuclideanDistance) {
  const GridMap map(5, 5);
  EXPECT_DOUBLE_EQ(euclidean_distance(map, Location{7}, Location{7}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_distance(map, map.at(0, 0), map.at(3, 1)), std::sqrt(10.0));
  const GridMap geolife(5, 5, 0.34);
  EXPECT_NEAR(euclidean_distance(geolife, Location{0}, Location{1}), 0.34, 1e-12);
}

TEST(GridMapTest, LocationQueryIsInjective) {
  const GridMap map(9, 6, 0.27);
  std::set<std::pair<double, double>> seen;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Point p = map.center(Location{i});
    EXPECT_TRUE(seen.insert({p.x, p.y}).second);
  }
}

TEST(GridMapTest, VoronoiCellsAreOpenAtTheBorder) {
  const GridMap map(3, 3);
  const Rect corner = map.voronoi_cell(Location{0});
  EXPECT_TRUE(std::isinf(corner.x_min));
  EXPECT_TRUE(std::isinf(corner.y_min));
  EXPECT_DOUBLE_EQ(corner.x_max, 0.5);
  const Rect mid = map.voronoi_cell(Location{4});
  EXPECT_DOUBLE_EQ(mid.x_min, 0.5);
  EXPECT_DOUBLE_EQ(mid.x_max, 1.5);
  EXPECT_DOUBLE_EQ(mid.y_min, 0.5);
  EXPECT_DOUBLE_EQ(mid.y_max, 1.5);
}

TEST(PartitionTest, RegionsTileFromTheOrigin) {
  const GridMap map(10, 10);
  const RegionPartition regions(map, 5);
  EXPECT_EQ(regions.region_count(), 4u);
  EXPECT_EQ(regions.region(map.at(0, 0)), regions.region(map.at(4, 4)));
  EXPECT_NE(regions.region(map.at(4, 0)), regions.region(map.at(5, 0)));
  EXPECT_EQ(regions.region(map.at(9, 9)), 3u);
  EXPECT_THROW(RegionPartition(map, 0), DomainError);
}

TEST(PartitionTest, CategoryMapIsTotal) {
  CategoryMap cats(4);
  EXPECT_EQ(cats.category(Location{2}), CategoryMap::kUncategorized);
  cats.set(Location{2}, "restaurant");
  EXPECT_EQ(cats.category(Location{2}), "restaurant");
  EXPECT_THROW(cats.category(Location{4}), DomainError);
}

TEST(OffsetSetTest, CountsEachOffsetOnce) {
  const GridMap map(4, 3);
  OffsetSet set(map);
  EXPECT_TRUE(set.insert(map.at(0, 0), map.at(1, 0)));
  EXPECT_FALSE(set.insert(map.at(2, 1), map.at(3, 1)));
  EXPECT_TRUE(set.insert(map.at(1, 0), map.at(0, 0)));
  EXPECT_TRUE(set.insert(map.at(3, 2), map.at(0, 0)));
  EXPECT_TRUE(set.insert(map.at(0, 0), map.at(3, 2)));
  EXPECT_FALSE(set.insert(map.at(0, 0), map.at(3, 2)));
}

}  // namespace
}  // namespace pglp
