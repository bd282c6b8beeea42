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

// Location policy graphs. An edge (u, v) demands that the release mechanism
// make u and v epsilon-indistinguishable.

#ifndef PGLP_POLICY_GRAPH_HPP_
#define PGLP_POLICY_GRAPH_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <iterator>
#include <limits>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pglp/grid_map.hpp"
#include "pglp/partition.hpp"
#include "pglp/status.hpp"

namespace pglp {

// Undirected edge, stored with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;

  static Edge between(std::size_t a, std::size_t b) {
    return a < b ? Edge{a, b} : Edge{b, a};
  }
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Undirected simple graph over cell indices [0, node_count). Adjacency lists
// are kept sorted, which makes equality, intersection and iteration order
// deterministic.
class PolicyGraph {
 public:
  PolicyGraph() = default;
  explicit PolicyGraph(std::size_t node_count) : adjacency_(node_count) {}
  PolicyGraph(std::size_t node_count, std::span<const Edge> edges)
      : adjacency_(node_count) {
    for (const Edge& e : edges) add_edge(e.u, e.v);
  }

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  // Returns false if the edge was already present.
  bool add_edge(std::size_t a, std::size_t b) {
    check_node(a);
    check_node(b);
    if (a == b) throw DomainError("policy graph: self-loop on " + std::to_string(a));
    auto& la = adjacency_[a];
    const auto it = std::lower_bound(la.begin(), la.end(), b);
    if (it != la.end() && *it == b) return false;
    la.insert(it, b);
    auto& lb = adjacency_[b];
    lb.insert(std::lower_bound(lb.begin(), lb.end(), a), a);
    ++edge_count_;
    return true;
  }

  // Copy of this graph with one more edge.
  PolicyGraph with_edge(std::size_t a, std::size_t b) const {
    PolicyGraph g = *this;
    g.add_edge(a, b);
    return g;
  }

  bool has_edge(std::size_t a, std::size_t b) const {
    if (a >= node_count() || b >= node_count()) return false;
    const auto& la = adjacency_[a];
    return std::binary_search(la.begin(), la.end(), b);
  }

  std::span<const std::size_t> neighbors(std::size_t s) const {
    check_node(s);
    return adjacency_[s];
  }
  std::size_t degree(std::size_t s) const { return neighbors(s).size(); }

  // All edges in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (std::size_t u = 0; u < adjacency_.size(); ++u) {
      for (std::size_t v : adjacency_[u]) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  friend bool operator==(const PolicyGraph& a, const PolicyGraph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  void check_node(std::size_t s) const {
    if (s >= node_count()) {
      throw DomainError("policy graph: node " + std::to_string(s) +
                        " outside [0, " + std::to_string(node_count()) + ")");
    }
  }

  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edge_count_ = 0;
};

// The set of locations with non-zero adversarial probability.
class ConstrainedDomain {
 public:
  ConstrainedDomain(std::size_t node_count, std::vector<std::size_t> members)
      : in_domain_(node_count, false) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.empty()) throw DomainError("constrained domain is empty");
    if (members.back() >= node_count) {
      throw DomainError("constrained domain member " + std::to_string(members.back()) +
                        " outside [0, " + std::to_string(node_count) + ")");
    }
    for (std::size_t m : members) in_domain_[m] = true;
    members_ = std::move(members);
  }

  static ConstrainedDomain full(std::size_t node_count) {
    std::vector<std::size_t> all(node_count);
    for (std::size_t i = 0; i < node_count; ++i) all[i] = i;
    return ConstrainedDomain(node_count, std::move(all));
  }

  std::size_t node_count() const { return in_domain_.size(); }
  std::span<const std::size_t> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool contains(std::size_t s) const { return s < in_domain_.size() && in_domain_[s]; }

  friend bool operator==(const ConstrainedDomain& a, const ConstrainedDomain& b) {
    return a.members_ == b.members_ && a.node_count() == b.node_count();
  }

 private:
  std::vector<bool> in_domain_;
  std::vector<std::size_t> members_;
};

inline std::vector<Location> neighbors(const PolicyGraph& g, Location s) {
  std::vector<Location> out;
  for (std::size_t v : g.neighbors(s.index)) out.push_back(Location{v});
  return out;
}

// Shortest-path hop count; kUnreachable when disconnected.
inline std::size_t graph_distance(const PolicyGraph& g, Location a, Location b) {
  if (a.index >= g.node_count() || b.index >= g.node_count()) {
    throw DomainError("graph_distance: node outside the graph");
  }
  if (a == b) return 0;
  std::vector<std::size_t> dist(g.node_count(), kUnreachable);
  std::queue<std::size_t> frontier;
  dist[a.index] = 0;
  frontier.push(a.index);
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : g.neighbors(u)) {
      if (dist[v] != kUnreachable) continue;
      dist[v] = dist[u] + 1;
      if (v == b.index) return dist[v];
      frontier.push(v);
    }
  }
  return kUnreachable;
}

// N^P(s): every node reachable from s, including s, in ascending order.
inline std::vector<Location> connected_component(const PolicyGraph& g, Location s) {
  if (s.index >= g.node_count()) {
    throw DomainError("connected_component: node outside the graph");
  }
  std::vector<bool> seen(g.node_count(), false);
  std::vector<std::size_t> stack{s.index};
  std::vector<Location> out;
  seen[s.index] = true;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    out.push_back(Location{u});
    for (std::size_t v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Component label of every node; labels are assigned in order of each
// component's smallest node.
inline std::vector<std::size_t> component_labels(const PolicyGraph& g) {
  std::vector<std::size_t> label(g.node_count(), kUnreachable);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.node_count(); ++s) {
    if (label[s] != kUnreachable) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v : g.neighbors(u)) {
        if (label[v] == kUnreachable) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

// G^C: keeps only edges with both endpoints in C. Nodes keep their indices
// so restricted graphs stay comparable with the base policy.
inline PolicyGraph restrict_to(const PolicyGraph& g, const ConstrainedDomain& c) {
  if (c.node_count() != g.node_count()) {
    throw DomainError("restrict_to: domain and graph sizes differ");
  }
  PolicyGraph out(g.node_count());
  for (std::size_t u : c.members()) {
    for (std::size_t v : g.neighbors(u)) {
      if (u < v && c.contains(v)) out.add_edge(u, v);
    }
  }
  return out;
}

// Edge-set intersection G1 ^ G2.
inline PolicyGraph intersect(const PolicyGraph& a, const PolicyGraph& b) {
  if (a.node_count() != b.node_count()) {
    throw DomainError("intersect: node counts differ (" + std::to_string(a.node_count()) +
                      " vs " + std::to_string(b.node_count()) + ")");
  }
  PolicyGraph out(a.node_count());
  for (std::size_t u = 0; u < a.node_count(); ++u) {
    const auto na = a.neighbors(u);
    const auto nb = b.neighbors(u);
    std::vector<std::size_t> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                          std::back_inserter(common));
    for (std::size_t v : common) {
      if (u < v) out.add_edge(u, v);
    }
  }
  return out;
}

// --- Builders ---------------------------------------------------------------

// G1: every cell linked to its (up to) eight surrounding cells.
inline PolicyGraph build_g1(const GridMap& map) {
  PolicyGraph g(map.size());
  for (std::size_t r = 0; r < map.height(); ++r) {
    for (std::size_t c = 0; c < map.width(); ++c) {
      const std::size_t u = map.at(c, r).index;
      // Forward half of the 8-neighborhood; the rest is added from the other side.
      const int offsets[4][2] = {{1, 0}, {-1, 1}, {0, 1}, {1, 1}};
      for (const auto& o : offsets) {
        const long nc = static_cast<long>(c) + o[0];
        const long nr = static_cast<long>(r) + o[1];
        if (nc < 0 || nr < 0 || nc >= static_cast<long>(map.width()) ||
            nr >= static_cast<long>(map.height())) {
          continue;
        }
        g.add_edge(u, map.at(static_cast<std::size_t>(nc), static_cast<std::size_t>(nr)).index);
      }
    }
  }
  return g;
}

// G2: complete graph over `members`.
inline PolicyGraph build_g2(std::size_t node_count, std::span<const Location> members) {
  PolicyGraph g(node_count);
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (members[i] != members[j]) g.add_edge(members[i].index, members[j].index);
    }
  }
  return g;
}

// G2 over the whole map.
inline PolicyGraph build_g2(const GridMap& map) {
  std::vector<Location> all(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) all[i].index = i;
  return build_g2(map.size(), all);
}

namespace internal {

// Complete graph inside every class of `key`.
template <class KeyFn>
PolicyGraph complete_within_classes(std::size_t node_count, KeyFn key) {
  using Key = decltype(key(std::size_t{}));
  std::map<Key, std::vector<std::size_t>> classes;
  for (std::size_t s = 0; s < node_count; ++s) classes[key(s)].push_back(s);
  PolicyGraph g(node_count);
  for (const auto& [_, cells] : classes) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (std::size_t j = i + 1; j < cells.size(); ++j) g.add_edge(cells[i], cells[j]);
    }
  }
  return g;
}

}  // namespace internal

// Complete graph inside each k x k block of the origin-anchored tiling
// (G_k9, G_k16, G_k25 for k = 3, 4, 5).
inline PolicyGraph build_block(const GridMap& map, std::size_t k) {
  if (k < 1) throw DomainError("build_block: block side must be at least 1");
  const RegionPartition blocks(map, k);
  return internal::complete_within_classes(
      map.size(), [&](std::size_t s) { return blocks.region(Location{s}); });
}

// G_poi: complete graph among cells sharing both category and region.
inline PolicyGraph build_poi(const GridMap& map, const CategoryMap& categories,
                             std::size_t region_side) {
  if (categories.size() != map.size()) {
    throw DomainError("build_poi: category map does not cover the grid");
  }
  const RegionPartition regions(map, region_side);
  return internal::complete_within_classes(map.size(), [&](std::size_t s) {
    return std::pair<std::size_t, std::string>(regions.region(Location{s}),
                                               categories.category(Location{s}));
  });
}

}  // namespace pglp

#endif  // PGLP_POLICY_GRAPH_HPP_
