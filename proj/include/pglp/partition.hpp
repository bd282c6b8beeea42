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

// Region and category labelings of the grid, shared by the block/POI policy
// builders and the utility metrics.

#ifndef PGLP_PARTITION_HPP_
#define PGLP_PARTITION_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pglp/grid_map.hpp"
#include "pglp/status.hpp"

namespace pglp {

// Tiling of the grid into side x side blocks anchored at cell (0, 0).
// Blocks on the right and top borders may be partial.
class RegionPartition {
 public:
  RegionPartition(const GridMap& map, std::size_t side)
      : width_(map.width()), height_(map.height()), side_(side) {
    if (side < 1) throw DomainError("region side must be at least 1");
    blocks_across_ = (width_ + side_ - 1) / side_;
  }

  std::size_t side() const { return side_; }
  std::size_t region_count() const {
    return blocks_across_ * ((height_ + side_ - 1) / side_);
  }

  // The region query R(.).
  std::size_t region(Location loc) const {
    if (loc.index >= width_ * height_) {
      throw DomainError("region: location outside the map");
    }
    const std::size_t c = loc.index % width_;
    const std::size_t r = loc.index / width_;
    return (r / side_) * blocks_across_ + c / side_;
  }

 private:
  std::size_t width_;
  std::size_t height_;
  std::size_t side_;
  std::size_t blocks_across_;
};

// Total labeling cell -> category; cells without a category carry
// kUncategorized.
class CategoryMap {
 public:
  static constexpr const char* kUncategorized = "__none__";

  explicit CategoryMap(std::size_t cell_count)
      : labels_(cell_count, kUncategorized) {}
  explicit CategoryMap(std::vector<std::string> labels)
      : labels_(std::move(labels)) {}

  std::size_t size() const { return labels_.size(); }

  const std::string& category(Location loc) const {
    if (loc.index >= labels_.size()) {
      throw DomainError("category: location outside the map");
    }
    return labels_[loc.index];
  }

  void set(Location loc, std::string label) {
    if (loc.index >= labels_.size()) {
      throw DomainError("category: location outside the map");
    }
    labels_[loc.index] = std::move(label);
  }

  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

}  // namespace pglp

#endif  // PGLP_PARTITION_HPP_
