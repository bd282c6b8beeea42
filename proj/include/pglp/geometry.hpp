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

// Planar convex geometry: hulls, the Minkowski gauge of a convex body,
// containment, area, clipping and uniform sampling.

#ifndef PGLP_GEOMETRY_HPP_
#define PGLP_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "pglp/random.hpp"
#include "pglp/status.hpp"

namespace pglp {

// Absolute tolerance (km) of every geometric predicate. Inputs are
// differences of cell centers, so exact values are multiples of the cell
// size and the tolerance only absorbs rounding.
inline constexpr double kGeometryTolerance = 1e-9;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point, Point) = default;
};

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Point a) { return std::hypot(a.x, a.y); }
inline double norm1(Point a) { return std::abs(a.x) + std::abs(a.y); }

// Axis-aligned rectangle; any bound may be infinite.
struct Rect {
  double x_min = -std::numeric_limits<double>::infinity();
  double x_max = std::numeric_limits<double>::infinity();
  double y_min = -std::numeric_limits<double>::infinity();
  double y_max = std::numeric_limits<double>::infinity();
};

class ConvexPolygon;
ConvexPolygon convex_hull(std::span<const Point> points);

// Convex polygon in canonical form: counter-clockwise, strictly convex (no
// collinear triples), starting at the lexicographically smallest vertex.
// Bodies with fewer than three vertices (a point or a segment) are flagged
// degenerate and have zero area.
class ConvexPolygon {
 public:
  ConvexPolygon() = default;

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool degenerate() const { return vertices_.size() < 3; }
  double area() const { return area_; }

  // Half-plane representation {x : normal . x <= offset}, one per edge, with
  // unit outward normals. Empty for degenerate bodies.
  struct Facet {
    Point normal;
    double offset;
  };
  std::span<const Facet> facets() const { return facets_; }

  // True iff the origin lies strictly inside (all offsets positive).
  bool origin_interior() const {
    if (degenerate()) return false;
    return std::all_of(facets_.begin(), facets_.end(), [](const Facet& f) {
      return f.offset > kGeometryTolerance;
    });
  }

  // Polygon scaled about the origin by `factor` > 0.
  ConvexPolygon scaled(double factor) const {
    std::vector<Point> pts;
    pts.reserve(vertices_.size());
    for (Point v : vertices_) pts.push_back(factor * v);
    return convex_hull(pts);
  }

  // Uniform point inside a non-degenerate polygon: pick a fan triangle from
  // vertex 0 with probability proportional to its area, then a uniform
  // barycentric point in it.
  template <BitGenerator64 G>
  Point sample_uniform(G& gen) const {
    if (degenerate()) {
      throw DomainError("cannot sample uniformly from a degenerate polygon");
    }
    const double target = uniform_open01(gen) * fan_cdf_.back();
    const auto it = std::upper_bound(fan_cdf_.begin(), fan_cdf_.end(), target);
    std::size_t tri = static_cast<std::size_t>(it - fan_cdf_.begin());
    if (tri >= fan_cdf_.size()) tri = fan_cdf_.size() - 1;
    double a = uniform_open01(gen);
    double b = uniform_open01(gen);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    const Point o = vertices_[0];
    return o + a * (vertices_[tri + 1] - o) + b * (vertices_[tri + 2] - o);
  }

 private:
  friend ConvexPolygon convex_hull(std::span<const Point> points);

  void finalize() {
    area_ = 0.0;
    facets_.clear();
    fan_cdf_.clear();
    if (degenerate()) return;
    const std::size_t n = vertices_.size();
    double twice_area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      twice_area += cross(vertices_[i], vertices_[(i + 1) % n]);
    }
    area_ = 0.5 * std::abs(twice_area);
    facets_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = vertices_[i];
      const Point d = vertices_[(i + 1) % n] - a;
      const double len = norm2(d);
      const Point normal{d.y / len, -d.x / len};
      facets_.push_back({normal, dot(normal, a)});
    }
    fan_cdf_.reserve(n - 2);
    double acc = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      acc += 0.5 * cross(vertices_[i] - vertices_[0], vertices_[i + 1] - vertices_[0]);
      fan_cdf_.push_back(acc);
    }
  }

  std::vector<Point> vertices_;
  std::vector<Facet> facets_;
  std::vector<double> fan_cdf_;
  double area_ = 0.0;
};

namespace internal {

// Orientation of (o, a, b) with collinearity decided relative to the
// lengths involved.
inline double turn(Point o, Point a, Point b) {
  const Point u = a - o;
  const Point v = b - o;
  const double c = cross(u, v);
  const double scale = norm2(u) * norm2(v);
  if (std::abs(c) <= 1e-9 * scale) return 0.0;
  return c;
}

}  // namespace internal

// Andrew's monotone chain, O(n log n). Near-duplicate points (within the
// geometry tolerance) are merged and collinear points are dropped.
inline ConvexPolygon convex_hull(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  for (const Point& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DomainError("convex_hull: non-finite point");
    }
  }
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  // Abscissas within the tolerance count as equal, so rounding noise cannot
  // break the lexicographic order the chain needs.
  std::vector<std::pair<double, Point>> keyed;
  keyed.reserve(pts.size());
  for (const Point& p : pts) {
    const double key = keyed.empty() || p.x - keyed.back().first > kGeometryTolerance
                           ? p.x
                           : keyed.back().first;
    keyed.push_back({key, p});
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second.y < b.second.y);
  });
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = keyed[i].second;
  std::vector<Point> unique;
  unique.reserve(pts.size());
  for (Point p : pts) {
    bool dup = false;
    for (auto q = unique.rbegin(); q != unique.rend() && p.x - q->x <= kGeometryTolerance; ++q) {
      if (norm2(p - *q) <= kGeometryTolerance) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(p);
  }

  ConvexPolygon hull;
  if (unique.size() <= 2) {
    hull.vertices_ = std::move(unique);
    hull.finalize();
    return hull;
  }

  std::vector<Point> chain(2 * unique.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < unique.size(); ++i) {
    while (k >= 2 && internal::turn(chain[k - 2], chain[k - 1], unique[i]) <= 0) --k;
    chain[k++] = unique[i];
  }
  for (std::size_t i = unique.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && internal::turn(chain[k - 2], chain[k - 1], unique[i]) <= 0) --k;
    chain[k++] = unique[i];
  }
  chain.resize(k - 1);  // last point repeats the first
  hull.vertices_ = std::move(chain);
  hull.finalize();
  return hull;
}

inline ConvexPolygon convex_hull(std::initializer_list<Point> points) {
  return convex_hull(std::span<const Point>(points.begin(), points.size()));
}

// Shoelace area, half-normalized: 1/2 |sum det(v_i, v_{i+1})|.
inline double polygon_area(const ConvexPolygon& p) { return p.area(); }

// Minkowski gauge min{lambda >= 0 : v in lambda * p}. Requires the origin
// strictly inside p.
inline double k_norm(const ConvexPolygon& p, Point v) {
  if (!p.origin_interior()) {
    throw DomainError("k_norm: origin is not interior to the polygon");
  }
  double gauge = 0.0;
  for (const auto& f : p.facets()) {
    gauge = std::max(gauge, dot(f.normal, v) / f.offset);
  }
  return gauge;
}

// Inside or on the boundary, within the geometry tolerance.
inline bool contains(const ConvexPolygon& p, Point v) {
  const auto verts = p.vertices();
  switch (verts.size()) {
    case 0:
      return false;
    case 1:
      return norm2(v - verts[0]) <= kGeometryTolerance;
    case 2: {
      const Point d = verts[1] - verts[0];
      const double t = std::clamp(dot(v - verts[0], d) / dot(d, d), 0.0, 1.0);
      return norm2(v - (verts[0] + t * d)) <= kGeometryTolerance;
    }
    default:
      return std::all_of(p.facets().begin(), p.facets().end(), [&](const auto& f) {
        return dot(f.normal, v) - f.offset <=
               kGeometryTolerance * std::max(1.0, std::abs(f.offset));
      });
  }
}

// Same vertex cycle, coordinates compared with the absolute tolerance. Any
// rotation is accepted so that near-ties in the canonical start vertex do
// not matter.
inline bool hulls_equal(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto va = a.vertices();
  const auto vb = b.vertices();
  if (va.size() != vb.size()) return false;
  const std::size_t n = va.size();
  if (n == 0) return true;
  for (std::size_t shift = 0; shift < n; ++shift) {
    bool same = true;
    for (std::size_t i = 0; i < n && same; ++i) {
      const Point d = va[i] - vb[(i + shift) % n];
      same = std::abs(d.x) <= kGeometryTolerance && std::abs(d.y) <= kGeometryTolerance;
    }
    if (same) return true;
  }
  return false;
}

template <BitGenerator64 G>
Point sample_uniform(const ConvexPolygon& p, G& gen) {
  return p.sample_uniform(gen);
}

// Area of p intersected with an axis-aligned rectangle (Sutherland-Hodgman
// against the finite sides).
inline double clipped_area(const ConvexPolygon& p, const Rect& r) {
  if (p.degenerate()) return 0.0;
  std::vector<Point> poly(p.vertices().begin(), p.vertices().end());
  std::vector<Point> next;
  // Keeps points with sign * coord(axis) <= sign * bound.
  auto clip = [&](bool x_axis, double bound, double sign) {
    if (!std::isfinite(bound) || poly.empty()) return;
    next.clear();
    auto coord = [&](Point q) { return x_axis ? q.x : q.y; };
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point cur = poly[i];
      const Point nxt = poly[(i + 1) % n];
      const bool in_cur = sign * coord(cur) <= sign * bound;
      const bool in_nxt = sign * coord(nxt) <= sign * bound;
      if (in_cur) next.push_back(cur);
      if (in_cur != in_nxt) {
        const double t = (bound - coord(cur)) / (coord(nxt) - coord(cur));
        next.push_back(cur + t * (nxt - cur));
      }
    }
    poly.swap(next);
  };
  clip(true, r.x_max, 1.0);
  clip(true, r.x_min, -1.0);
  clip(false, r.y_max, 1.0);
  clip(false, r.y_min, -1.0);
  if (poly.size() < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    twice += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * std::abs(twice);
}

}  // namespace pglp

#endif  // PGLP_GEOMETRY_HPP_
