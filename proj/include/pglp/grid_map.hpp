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

#ifndef PGLP_GRID_MAP_HPP_
#define PGLP_GRID_MAP_HPP_

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "pglp/geometry.hpp"
#include "pglp/status.hpp"

namespace pglp {

// A cell of the location domain, identified by its row-major index.
struct Location {
  std::size_t index = 0;

  friend constexpr auto operator<=>(Location, Location) = default;
};

// The location domain: width x height square cells of side `cell_size` km.
// Cell 0 is centered at `origin`; index = row * width + column.
class GridMap {
 public:
  GridMap(std::size_t width, std::size_t height, double cell_size = 1.0,
          Point origin = {})
      : width_(width), height_(height), cell_size_(cell_size), origin_(origin) {
    if (width == 0 || height == 0) {
      throw DomainError("grid map needs at least one cell");
    }
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
      throw DomainError("cell size must be positive and finite");
    }
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
      throw DomainError("map origin must be finite");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return width_ * height_; }
  double cell_size() const { return cell_size_; }
  Point origin() const { return origin_; }

  bool contains(Location loc) const { return loc.index < size(); }

  std::size_t column(Location loc) const { return checked(loc).index % width_; }
  std::size_t row(Location loc) const { return checked(loc).index / width_; }

  Location at(std::size_t column, std::size_t row) const {
    if (column >= width_ || row >= height_) {
      throw DomainError("cell (" + std::to_string(column) + ", " +
                        std::to_string(row) + ") outside the map");
    }
    return Location{row * width_ + column};
  }

  // The location query: center of the cell in planar km.
  Point center(Location loc) const {
    checked(loc);
    return {origin_.x + cell_size_ * static_cast<double>(loc.index % width_),
            origin_.y + cell_size_ * static_cast<double>(loc.index / width_)};
  }

  // Nearest cell center; points outside the grid clamp to the border.
  // Ties go to the smaller column and smaller row, hence the smaller index.
  Location snap(Point p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError("snap: non-finite coordinates");
    }
    return Location{axis_cell(p.y - origin_.y, height_) * width_ +
                    axis_cell(p.x - origin_.x, width_)};
  }

  // Bounds of the set of points that snap to `loc`; border cells extend to
  // infinity on their outer sides.
  Rect voronoi_cell(Location loc) const {
    const std::size_t c = column(loc);
    const std::size_t r = row(loc);
    const double half = 0.5 * cell_size_;
    const Point mid = center(loc);
    Rect rect;
    if (c > 0) rect.x_min = mid.x - half;
    if (c + 1 < width_) rect.x_max = mid.x + half;
    if (r > 0) rect.y_min = mid.y - half;
    if (r + 1 < height_) rect.y_max = mid.y + half;
    return rect;
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  const Location& checked(const Location& loc) const {
    if (!contains(loc)) {
      throw DomainError("location index " + std::to_string(loc.index) +
                        " outside map of " + std::to_string(size()) + " cells");
    }
    return loc;
  }

  std::size_t axis_cell(double offset, std::size_t extent) const {
    // ceil(t - 1/2) rounds half-way values down.
    const double t = std::ceil(offset / cell_size_ - 0.5);
    if (t <= 0.0) return 0;
    const double last = static_cast<double>(extent - 1);
    return static_cast<std::size_t>(std::min(t, last));
  }

  std::size_t width_;
  std::size_t height_;
  double cell_size_;
  Point origin_;
};

inline Point location_query(const GridMap& map, Location loc) {
  return map.center(loc);
}

inline Location snap(const GridMap& map, Point p) { return map.snap(p); }

inline double euclidean_distance(const GridMap& map, Location a, Location b) {
  return norm2(map.center(a) - map.center(b));
}

// Set of distinct cell offsets (b - a) on a map.
class OffsetSet {
 public:
  explicit OffsetSet(const GridMap& map)
      : width_(map.width()), height_(map.height()),
        seen_((2 * width_ - 1) * (2 * height_ - 1), false) {}

  // True when the offset from a to b was not yet present.
  bool insert(Location a, Location b) {
    const std::size_t slot = (b.index / width_ + height_ - 1 - a.index / width_) * (2 * width_ - 1) +
                             (b.index % width_ + width_ - 1 - a.index % width_);
    if (seen_[slot]) return false;
    seen_[slot] = true;
    return true;
  }

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<bool> seen_;
};

}  // namespace pglp

#endif  // PGLP_GRID_MAP_HPP_
