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

// Policy graphs under a constrained domain C.
//
// A node outside C is excluded. A node in C whose policy neighbors all lie
// outside C is disconnected; it is isolated when the planar isotropic
// mechanism calibrated on the constrained graph does not make it
// indistinguishable from any other node of C, i.e. when f(s) + K contains
// no other center of C. Isolated nodes are repaired by adding one edge.
//
// Nothing here reads the true location.

#ifndef PGLP_EXPOSURE_HPP_
#define PGLP_EXPOSURE_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "pglp/geometry.hpp"
#include "pglp/grid_map.hpp"
#include "pglp/policy_graph.hpp"
#include "pglp/status.hpp"

namespace pglp {

enum class NodeStatus { kIncluded, kExcluded, kDisconnected, kIsolated };

inline std::string_view status_name(NodeStatus s) {
  switch (s) {
    case NodeStatus::kIncluded: return "included";
    case NodeStatus::kExcluded: return "excluded";
    case NodeStatus::kDisconnected: return "disconnected";
    case NodeStatus::kIsolated: return "isolated";
  }
  return "?";
}

inline bool is_disconnected(const PolicyGraph& g, const ConstrainedDomain& c, std::size_t s) {
  if (!c.contains(s)) return false;
  const auto nbrs = g.neighbors(s);
  if (nbrs.empty()) return false;
  for (std::size_t v : nbrs) {
    if (c.contains(v)) return false;
  }
  return true;
}

// Structural tags only; isolation needs geometry (is_isolated).
inline std::vector<NodeStatus> classify(const PolicyGraph& g, const ConstrainedDomain& c) {
  if (c.node_count() != g.node_count()) {
    throw DomainError("classify: domain and graph sizes differ");
  }
  std::vector<NodeStatus> out(g.node_count(), NodeStatus::kIncluded);
  for (std::size_t s = 0; s < g.node_count(); ++s) {
    if (!c.contains(s)) {
      out[s] = NodeStatus::kExcluded;
    } else if (is_disconnected(g, c, s)) {
      out[s] = NodeStatus::kDisconnected;
    }
  }
  return out;
}

// K(G^C): hull of the +/- difference vectors of every edge inside C. Empty
// when G^C has no edges.
inline ConvexPolygon constrained_hull(const GridMap& map, const PolicyGraph& g,
                                      const ConstrainedDomain& c) {
  std::vector<Point> diffs;
  OffsetSet offsets(map);
  for (std::size_t u : c.members()) {
    for (std::size_t v : g.neighbors(u)) {
      if (v <= u || !c.contains(v)) continue;
      if (!offsets.insert(Location{v}, Location{u})) continue;
      const Point d = map.center(Location{u}) - map.center(Location{v});
      diffs.push_back(d);
      diffs.push_back(-d);
    }
  }
  if (diffs.empty()) return ConvexPolygon{};
  return convex_hull(diffs);
}

namespace internal {

// Hull of K's vertices plus +/- v. Equal to Conv(Delta f u {+/- v}) since K
// is the hull of Delta f.
inline ConvexPolygon extended_hull(const ConvexPolygon& k, Point v) {
  std::vector<Point> pts(k.vertices().begin(), k.vertices().end());
  pts.push_back(v);
  pts.push_back(-v);
  return convex_hull(pts);
}

inline void check_inputs(const GridMap& map, const PolicyGraph& g, const ConstrainedDomain& c,
                         Location s) {
  if (g.node_count() != map.size() || c.node_count() != map.size()) {
    throw DomainError("map, policy graph and domain sizes differ");
  }
  if (!c.contains(s.index)) {
    throw DomainError("node " + std::to_string(s.index) + " is not in the constrained domain");
  }
}

// Hull test of is_isolated without the disconnection precondition.
inline bool unprotected(const GridMap& map, const PolicyGraph& g, const ConstrainedDomain& c,
                        Location s) {
  const ConvexPolygon k = constrained_hull(map, g, c);
  if (k.empty()) return true;
  const Point fs = map.center(s);
  for (std::size_t j : c.members()) {
    if (j == s.index) continue;
    const Point v = map.center(Location{j}) - fs;
    if (hulls_equal(extended_hull(k, v), k)) return false;
  }
  return true;
}

}  // namespace internal

// True iff no other node s_j of C leaves the hull unchanged when +/-(f(s_j) -
// f(s)) is added to K(G^C). An edgeless G^C protects nothing: true.
inline bool is_isolated(const GridMap& map, const PolicyGraph& g, const ConstrainedDomain& c,
                        Location s) {
  internal::check_inputs(map, g, c, s);
  if (!is_disconnected(g, c, s.index)) {
    throw DomainError("is_isolated: node " + std::to_string(s.index) +
                      " is not disconnected under the domain");
  }
  return internal::unprotected(map, g, c, s);
}

struct Repair {
  PolicyGraph graph;     // input graph plus the chosen edge
  Edge edge;
  Location partner;      // the node linked to the repaired one
  double area_before = 0.0;
  double area_after = 0.0;
};

namespace internal {

inline bool strictly_less(double a, double b) {
  if (!std::isfinite(b)) return a < b;
  return a < b - 1e-9 * std::max(1.0, std::abs(b));
}

inline Repair make_repair(const PolicyGraph& g, const ConvexPolygon& k, const GridMap& map,
                          Location s, Location partner) {
  Repair r;
  r.partner = partner;
  r.edge = Edge::between(s.index, partner.index);
  r.graph = g.with_edge(s.index, partner.index);
  r.area_before = k.area();
  r.area_after = extended_hull(k, map.center(partner) - map.center(s)).area();
  return r;
}

}  // namespace internal

// Links s to the node of C whose edge yields the smallest hull area; ties go
// to the smaller index.
inline Repair repair_min_area(const GridMap& map, const PolicyGraph& g, const ConstrainedDomain& c,
                              Location s) {
  internal::check_inputs(map, g, c, s);
  if (c.size() < 2) {
    throw UnrepairableError("cannot repair node " + std::to_string(s.index) +
                            ": constrained domain has no other node");
  }
  const ConvexPolygon k = constrained_hull(map, g, c);
  const Point fs = map.center(s);
  double best_area = std::numeric_limits<double>::infinity();
  Location best{};
  for (std::size_t j : c.members()) {
    if (j == s.index) continue;
    const double area = internal::extended_hull(k, map.center(Location{j}) - fs).area();
    if (internal::strictly_less(area, best_area)) {
      best_area = area;
      best = Location{j};
    }
  }
  return internal::make_repair(g, k, map, s, best);
}

// Baseline: links s to its Euclidean-nearest node of C; ties to the smaller
// index.
inline Repair repair_nearest(const GridMap& map, const PolicyGraph& g, const ConstrainedDomain& c,
                             Location s) {
  internal::check_inputs(map, g, c, s);
  if (c.size() < 2) {
    throw UnrepairableError("cannot repair node " + std::to_string(s.index) +
                            ": constrained domain has no other node");
  }
  double best_dist = std::numeric_limits<double>::infinity();
  Location best{};
  for (std::size_t j : c.members()) {
    if (j == s.index) continue;
    const double d = euclidean_distance(map, s, Location{j});
    if (internal::strictly_less(d, best_dist)) {
      best_dist = d;
      best = Location{j};
    }
  }
  return internal::make_repair(g, constrained_hull(map, g, c), map, s, best);
}

enum class RepairStrategy { kMinArea, kNearest };

struct RepairStep {
  Location node;
  Edge edge;
  double area_before = 0.0;
  double area_after = 0.0;
};

// Exposure analysis of (g, C) with every isolated node repaired.
struct ExposureReport {
  std::vector<NodeStatus> status;   // isolation as detected before its repair
  PolicyGraph graph;                // G^C plus the repair edges
  std::vector<RepairStep> repairs;
};

// Processes disconnected nodes in ascending order against the graph repaired
// so far; a node that an earlier repair already linked into C is skipped.
inline ExposureReport analyze_and_repair(const GridMap& map, const PolicyGraph& g,
                                         const ConstrainedDomain& c,
                                         RepairStrategy strategy = RepairStrategy::kMinArea) {
  ExposureReport report;
  report.status = classify(g, c);
  // Disconnection is judged on the base policy; repairs happen on G^C.
  PolicyGraph current = restrict_to(g, c);
  for (std::size_t s = 0; s < g.node_count(); ++s) {
    if (report.status[s] != NodeStatus::kDisconnected) continue;
    if (current.degree(s) > 0) continue;
    if (!internal::unprotected(map, current, c, Location{s})) continue;
    report.status[s] = NodeStatus::kIsolated;
    Repair r = strategy == RepairStrategy::kMinArea
                   ? repair_min_area(map, current, c, Location{s})
                   : repair_nearest(map, current, c, Location{s});
    report.repairs.push_back({Location{s}, r.edge, r.area_before, r.area_after});
    current = std::move(r.graph);
  }
  report.graph = std::move(current);
  return report;
}

}  // namespace pglp

#endif  // PGLP_EXPOSURE_HPP_
