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

// Policy-calibrated location release mechanisms.
//
// Both mechanisms perturb the cell center f(s) of the true location s and
// snap the result back onto the map. Their noise is calibrated on the policy
// edges inside the connected component of s:
//
//   * policy Laplace (plm): i.i.d. Laplace(S / epsilon) on each axis, where S
//     is the largest l1 length of an edge difference vector f(u) - f(v);
//   * policy planar isotropic (ppim): K-norm noise with density
//     epsilon^2 / (2 Area(K)) * exp(-epsilon ||y||_K), where K is the convex
//     hull of all edge difference vectors (both signs).
//
// Every edge difference vector lies in K (gauge <= 1) and has l1 length at
// most S, so the output densities of two policy neighbors differ by at most
// a factor e^epsilon at every point.

#ifndef PGLP_MECHANISMS_HPP_
#define PGLP_MECHANISMS_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pglp/geometry.hpp"
#include "pglp/grid_map.hpp"
#include "pglp/policy_graph.hpp"
#include "pglp/random.hpp"
#include "pglp/status.hpp"

namespace pglp {

enum class MechanismId { kPlm, kPpim };

inline std::string_view mechanism_name(MechanismId id) {
  return id == MechanismId::kPlm ? "plm" : "ppim";
}

inline MechanismId parse_mechanism(std::string_view name) {
  if (name == "plm" || name == "P-LM") return MechanismId::kPlm;
  if (name == "ppim" || name == "P-PIM") return MechanismId::kPpim;
  throw ConfigError("unknown mechanism '" + std::string(name) + "' (expected plm or ppim)");
}

// Privacy budget of one release.
class PrivacyParams {
 public:
  explicit PrivacyParams(double epsilon) : epsilon_(epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      throw DomainError("epsilon must be positive and finite");
    }
  }
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

// Graph-calibrated sensitivity of one policy component.
struct Sensitivity {
  double l1_scalar = 0.0;             // max l1 length of an edge difference
  ConvexPolygon hull;                 // K: hull of +/- edge differences
  std::vector<Location> component;    // the component it was computed for
  bool degenerate = true;             // hull is a segment (collinear edges)
};

namespace internal {

// Sensitivity over every edge incident to `nodes` (each edge counted once).
inline Sensitivity sensitivity_over(const GridMap& map, const PolicyGraph& g,
                                    std::vector<Location> nodes) {
  Sensitivity out;
  std::vector<Point> diffs;
  OffsetSet offsets(map);
  bool any = false;
  for (Location u : nodes) {
    const Point fu = map.center(u);
    for (std::size_t v : g.neighbors(u.index)) {
      if (v < u.index) continue;
      any = true;
      if (!offsets.insert(Location{v}, u)) continue;
      const Point d = fu - map.center(Location{v});
      out.l1_scalar = std::max(out.l1_scalar, norm1(d));
      diffs.push_back(d);
      diffs.push_back(-d);
    }
  }
  if (!any) {
    throw NoSensitivityError("policy component has no edges");
  }
  out.hull = convex_hull(diffs);
  out.degenerate = out.hull.degenerate();
  out.component = std::move(nodes);
  return out;
}

inline double laplace_cdf(double x, double scale) {
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  return x < 0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
}

// Probability that Laplace(scale) falls in [lo, hi].
inline double laplace_interval(double lo, double hi, double scale) {
  if (!(hi > lo)) return 0.0;
  // Evaluate the far tail on the side where it does not cancel.
  if (lo >= 0) return laplace_cdf(-lo, scale) - laplace_cdf(-hi, scale);
  return laplace_cdf(hi, scale) - laplace_cdf(lo, scale);
}

// Parameter range {t : t * dir in rect}.
inline std::pair<double, double> line_slab(Point dir, const Rect& r) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  auto axis = [&](double d, double a, double b) {
    if (std::abs(d) < 1e-15) {
      if (!(a <= 0.0 && 0.0 <= b)) hi = lo = 0.0;
      return;
    }
    double t0 = a / d;
    double t1 = b / d;
    if (t0 > t1) std::swap(t0, t1);
    lo = std::max(lo, t0);
    hi = std::min(hi, t1);
  };
  axis(dir.x, r.x_min, r.x_max);
  axis(dir.y, r.y_min, r.y_max);
  return {lo, hi};
}

inline Rect scale_rect(const Rect& r, double f) {
  return {r.x_min * f, r.x_max * f, r.y_min * f, r.y_max * f};
}

inline Rect shift_rect(const Rect& r, Point by) {
  return {r.x_min + by.x, r.x_max + by.x, r.y_min + by.y, r.y_max + by.y};
}

}  // namespace internal

// compute_sensitivity: l1 scalar and hull of the policy edges inside the
// connected component of s.
inline Sensitivity compute_sensitivity(const GridMap& map, const PolicyGraph& g, Location s) {
  if (g.node_count() != map.size()) {
    throw DomainError("policy graph does not match the map size");
  }
  return internal::sensitivity_over(map, g, connected_component(g, s));
}

// Additive planar noise of a release mechanism.
class NoiseModel {
 public:
  enum class Kind {
    kNone,       // no perturbation
    kLaplace2d,  // i.i.d. Laplace(scale) on both axes
    kKNorm,      // density proportional to exp(-epsilon ||y||_K)
    kLine,       // Laplace(scale) along a unit direction
  };

  static NoiseModel none() { return NoiseModel(Kind::kNone); }

  static NoiseModel laplace(double scale) {
    NoiseModel m(Kind::kLaplace2d);
    m.scale_ = scale;
    return m;
  }

  static NoiseModel k_norm(ConvexPolygon hull, double epsilon) {
    if (!hull.origin_interior()) {
      throw DomainError("K-norm noise needs the origin inside the hull");
    }
    NoiseModel m(Kind::kKNorm);
    m.epsilon_ = epsilon;
    m.hull_ = std::move(hull);
    return m;
  }

  static NoiseModel line(Point unit_direction, double scale) {
    NoiseModel m(Kind::kLine);
    m.direction_ = unit_direction;
    m.scale_ = scale;
    return m;
  }

  Kind kind() const { return kind_; }
  double scale() const { return scale_; }
  double epsilon() const { return epsilon_; }
  const ConvexPolygon& hull() const { return hull_; }
  Point direction() const { return direction_; }

  // K-norm noise is sampled as r * u with r ~ Gamma(3, 1/epsilon) and u
  // uniform in K; the product has exactly the density above.
  template <BitGenerator64 G>
  Point sample(G& gen) const {
    switch (kind_) {
      case Kind::kNone:
        return {};
      case Kind::kLaplace2d: {
        const double x = sample_laplace(scale_, gen);
        const double y = sample_laplace(scale_, gen);
        return {x, y};
      }
      case Kind::kKNorm: {
        const double radius = sample_gamma_int(3, 1.0 / epsilon_, gen);
        return radius * hull_.sample_uniform(gen);
      }
      case Kind::kLine:
        return sample_laplace(scale_, gen) * direction_;
    }
    return {};
  }

  // Planar density at `offset`. Infinite or zero for the singular kinds.
  double density(Point offset) const {
    switch (kind_) {
      case Kind::kNone:
        return offset == Point{} ? std::numeric_limits<double>::infinity() : 0.0;
      case Kind::kLaplace2d:
        return std::exp(-norm1(offset) / scale_) / (4.0 * scale_ * scale_);
      case Kind::kKNorm:
        return epsilon_ * epsilon_ / (2.0 * hull_.area()) *
               std::exp(-epsilon_ * pglp::k_norm(hull_, offset));
      case Kind::kLine: {
        const double along = dot(offset, direction_);
        if (norm2(offset - along * direction_) > kGeometryTolerance) return 0.0;
        return std::numeric_limits<double>::infinity();
      }
    }
    return 0.0;
  }

  // Density of the signed offset along the direction (kLine only).
  double line_density(double t) const {
    return std::exp(-std::abs(t) / scale_) / (2.0 * scale_);
  }

  // Exact probability that the noise falls in `r`.
  double mass(const Rect& r) const {
    switch (kind_) {
      case Kind::kNone:
        return (r.x_min <= 0 && 0 <= r.x_max && r.y_min <= 0 && 0 <= r.y_max) ? 1.0 : 0.0;
      case Kind::kLaplace2d:
        return internal::laplace_interval(r.x_min, r.x_max, scale_) *
               internal::laplace_interval(r.y_min, r.y_max, scale_);
      case Kind::kLine: {
        const auto [lo, hi] = internal::line_slab(direction_, r);
        return internal::laplace_interval(lo, hi, scale_);
      }
      case Kind::kKNorm:
        return k_norm_mass(r);
    }
    return 0.0;
  }

 private:
  explicit NoiseModel(Kind kind) : kind_(kind) {}

  // P(r u in R) = int Gamma3(t) Area(K n R eps / t) / Area(K) dt, t = eps r,
  // by composite 5-point Gauss-Legendre on [0, 40] (tail mass < 1e-14).
  double k_norm_mass(const Rect& r) const {
    static constexpr std::array<double, 5> kNodes = {
        -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
        0.9061798459386640};
    static constexpr std::array<double, 5> kWeights = {
        0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
        0.4786286704993665, 0.2369268850561891};
    constexpr double kUpper = 40.0;
    constexpr int kPanels = 320;
    constexpr double kWidth = kUpper / kPanels;
    const double area = hull_.area();
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
      const double mid = (p + 0.5) * kWidth;
      for (std::size_t i = 0; i < kNodes.size(); ++i) {
        const double t = mid + 0.5 * kWidth * kNodes[i];
        const double gamma_pdf = 0.5 * t * t * std::exp(-t);
        const double frac =
            clipped_area(hull_, internal::scale_rect(r, epsilon_ / t)) / area;
        total += 0.5 * kWidth * kWeights[i] * gamma_pdf * frac;
      }
    }
    return total;
  }

  Kind kind_;
  double scale_ = 0.0;
  double epsilon_ = 0.0;
  ConvexPolygon hull_;
  Point direction_;
};

// Noise of `id` for a sensitivity. A degenerate hull (all policy edges
// collinear) has no planar K-norm law; ppim then perturbs along the segment
// with Laplace(half-length / epsilon).
inline NoiseModel noise_for(MechanismId id, const Sensitivity& sens, PrivacyParams params) {
  const double eps = params.epsilon();
  if (id == MechanismId::kPlm) return NoiseModel::laplace(sens.l1_scalar / eps);
  if (!sens.degenerate) return NoiseModel::k_norm(sens.hull, eps);
  const auto v = sens.hull.vertices();
  const Point half = 0.5 * (v[1] - v[0]);
  const double half_length = norm2(half);
  return NoiseModel::line((1.0 / half_length) * half, half_length / eps);
}

// Where perturbed points are snapped.
enum class SnapMode {
  kMap,        // nearest cell of the whole map
  kComponent,  // nearest cell of the policy component of the true location
};

// How output likelihoods Pr(z | s) are evaluated.
enum class LikelihoodModel {
  kCenterDensity,  // noise density at f(z) - f(s), renormalized over cells
  kCellMass,       // exact probability of the snapped cell (SnapMode::kMap)
};

// Treatment of a node whose component has no edges.
enum class EdgelessPolicy {
  kReject,      // NoSensitivityError
  kWholeGraph,  // calibrate on every edge of the graph; exact release if none
};

struct MechanismOptions {
  SnapMode snap = SnapMode::kMap;
  LikelihoodModel likelihood = LikelihoodModel::kCenterDensity;
  EdgelessPolicy edgeless = EdgelessPolicy::kReject;
};

// A release mechanism bound to a map, a policy graph and a budget.
// Sensitivities are computed once per component; release and likelihood
// evaluation for s only touch the component of s.
class Mechanism {
 public:
  Mechanism(GridMap map, const PolicyGraph& graph, MechanismId id, PrivacyParams params,
            MechanismOptions options = {})
      : map_(std::move(map)), id_(id), params_(params), options_(options) {
    if (graph.node_count() != map_.size()) {
      throw DomainError("policy graph does not match the map size");
    }
    const auto labels = component_labels(graph);
    std::size_t count = 0;
    for (std::size_t l : labels) count = std::max(count, l + 1);
    components_.resize(count);
    component_of_ = labels;
    for (std::size_t s = 0; s < labels.size(); ++s) {
      components_[labels[s]].cells.push_back(Location{s});
    }
    std::optional<NoiseModel> whole_graph;
    for (auto& comp : components_) {
      const bool has_edges = graph.degree(comp.cells.front().index) > 0;
      if (has_edges) {
        comp.sensitivity = internal::sensitivity_over(map_, graph, comp.cells);
        comp.noise = noise_for(id_, comp.sensitivity, params_);
        continue;
      }
      comp.edgeless = true;
      if (options_.edgeless == EdgelessPolicy::kReject) continue;
      if (!whole_graph) {
        if (graph.edge_count() == 0) {
          whole_graph = NoiseModel::none();
        } else {
          std::vector<Location> all(map_.size());
          for (std::size_t i = 0; i < all.size(); ++i) all[i].index = i;
          whole_graph_sensitivity_ = internal::sensitivity_over(map_, graph, std::move(all));
          whole_graph = noise_for(id_, *whole_graph_sensitivity_, params_);
        }
      }
      comp.noise = *whole_graph;
    }
  }

  const GridMap& map() const { return map_; }
  MechanismId id() const { return id_; }
  PrivacyParams params() const { return params_; }
  const MechanismOptions& options() const { return options_; }

  // Noise applied when the true location is s.
  const NoiseModel& noise(Location s) const { return component(s).noise; }

  // Cells that releases for s may snap to.
  std::span<const Location> component_cells(Location s) const { return component(s).cells; }

  const Sensitivity& sensitivity(Location s) const {
    const auto& comp = component(s);
    if (!comp.edgeless) return comp.sensitivity;
    if (whole_graph_sensitivity_) return *whole_graph_sensitivity_;
    throw NoSensitivityError("node " + std::to_string(s.index) + " has no policy sensitivity");
  }

  // Releases a perturbed location for true location s.
  template <BitGenerator64 G>
  Location release(Location s, G& gen) const {
    const auto& comp = component(s);
    const Point released = map_.center(s) + comp.noise.sample(gen);
    if (options_.snap == SnapMode::kMap) return map_.snap(released);
    return nearest_in(comp.cells, released);
  }

  // Pr(z | s) under the configured likelihood model.
  double likelihood(Location s, Location z) const {
    const auto& comp = component(s);
    const NoiseModel& noise = comp.noise;
    if (options_.snap == SnapMode::kComponent) {
      if (!std::binary_search(comp.cells.begin(), comp.cells.end(), z)) return 0.0;
      if (noise.kind() == NoiseModel::Kind::kNone) return z == s ? 1.0 : 0.0;
      if (noise.kind() == NoiseModel::Kind::kLine) return line_mass_in_set(comp.cells, s, z);
      return center_density(comp.cells, s, z);
    }
    map_.center(z);  // validates z
    if (options_.likelihood == LikelihoodModel::kCellMass ||
        noise.kind() == NoiseModel::Kind::kNone || noise.kind() == NoiseModel::Kind::kLine) {
      return noise.mass(internal::shift_rect(map_.voronoi_cell(z), -map_.center(s)));
    }
    return center_density(all_cells(), s, z);
  }

  // Pr(. | s) over every cell of the map.
  std::vector<double> output_distribution(Location s) const {
    std::vector<double> out(map_.size());
    for (std::size_t z = 0; z < out.size(); ++z) out[z] = likelihood(s, Location{z});
    return out;
  }

 private:
  struct Component {
    std::vector<Location> cells;
    Sensitivity sensitivity;
    NoiseModel noise = NoiseModel::none();
    bool edgeless = false;
  };

  const Component& component(Location s) const {
    if (!map_.contains(s)) {
      throw DomainError("location " + std::to_string(s.index) + " outside the map");
    }
    const Component& comp = components_[component_of_[s.index]];
    if (comp.edgeless && options_.edgeless == EdgelessPolicy::kReject) {
      throw NoSensitivityError("node " + std::to_string(s.index) +
                               " has no policy edges in its component");
    }
    return comp;
  }

  std::span<const Location> all_cells() const {
    if (all_cells_.empty()) {
      all_cells_.resize(map_.size());
      for (std::size_t i = 0; i < all_cells_.size(); ++i) all_cells_[i].index = i;
    }
    return all_cells_;
  }

  // Nearest cell of `cells` (ascending), ties to the smaller index.
  Location nearest_in(std::span<const Location> cells, Point p) const {
    Location best = cells.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (Location c : cells) {
      const Point d = map_.center(c) - p;
      const double d2 = dot(d, d);
      if (d2 < best_d) {
        best_d = d2;
        best = c;
      }
    }
    return best;
  }

  double center_density(std::span<const Location> support, Location s, Location z) const {
    const NoiseModel& noise = component(s).noise;
    const Point fs = map_.center(s);
    double total = 0.0;
    for (Location c : support) total += noise.density(map_.center(c) - fs);
    return noise.density(map_.center(z) - fs) / total;
  }

  // Exact mass of the parameter interval along the line that snaps to z
  // among `cells`. Nearest-cell regions along a line are intervals whose
  // endpoints lie on pairwise bisectors.
  double line_mass_in_set(std::span<const Location> cells, Location s, Location z) const {
    const NoiseModel& noise = component(s).noise;
    const Point fs = map_.center(s);
    const Point dir = noise.direction();
    std::vector<double> cuts;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const Point a = map_.center(cells[i]) - fs;
      for (std::size_t j = i + 1; j < cells.size(); ++j) {
        const Point b = map_.center(cells[j]) - fs;
        // |t d - a|^2 = |t d - b|^2  <=>  2 t d.(b - a) = |b|^2 - |a|^2
        const double denom = 2.0 * dot(dir, b - a);
        if (std::abs(denom) < 1e-15) continue;
        cuts.push_back((dot(b, b) - dot(a, a)) / denom);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double inf = std::numeric_limits<double>::infinity();
    double mass = 0.0;
    for (std::size_t k = 0; k <= cuts.size(); ++k) {
      const double lo = k == 0 ? -inf : cuts[k - 1];
      const double hi = k == cuts.size() ? inf : cuts[k];
      double probe;
      if (k == 0) probe = cuts.empty() ? 0.0 : hi - 1.0;
      else if (k == cuts.size()) probe = lo + 1.0;
      else probe = 0.5 * (lo + hi);
      if (nearest_in(cells, fs + probe * dir) == z) {
        mass += internal::laplace_interval(lo, hi, noise.scale());
      }
    }
    return mass;
  }

  GridMap map_;
  MechanismId id_;
  PrivacyParams params_;
  MechanismOptions options_;
  std::vector<std::size_t> component_of_;
  std::vector<Component> components_;
  std::optional<Sensitivity> whole_graph_sensitivity_;
  mutable std::vector<Location> all_cells_;
};

// Policy Laplace release of s under (epsilon, g).
template <BitGenerator64 G>
Location release_plm(const GridMap& map, const PolicyGraph& g, Location s,
                     PrivacyParams params, G& gen) {
  const Sensitivity sens = compute_sensitivity(map, g, s);
  const NoiseModel noise = noise_for(MechanismId::kPlm, sens, params);
  return map.snap(map.center(s) + noise.sample(gen));
}

// Policy planar isotropic release of s under (epsilon, g).
template <BitGenerator64 G>
Location release_ppim(const GridMap& map, const PolicyGraph& g, Location s,
                      PrivacyParams params, G& gen) {
  const Sensitivity sens = compute_sensitivity(map, g, s);
  const NoiseModel noise = noise_for(MechanismId::kPpim, sens, params);
  return map.snap(map.center(s) + noise.sample(gen));
}

// Pr(z | s): noise density at f(z) - f(s), normalized over all cells.
inline double output_likelihood(const GridMap& map, MechanismId id, const PolicyGraph& g,
                                Location s, Location z, PrivacyParams params) {
  const Sensitivity sens = compute_sensitivity(map, g, s);
  const NoiseModel noise = noise_for(id, sens, params);
  if (noise.kind() == NoiseModel::Kind::kLine) {
    return noise.mass(internal::shift_rect(map.voronoi_cell(z), -map.center(s)));
  }
  const Point fs = map.center(s);
  double total = 0.0;
  for (std::size_t c = 0; c < map.size(); ++c) {
    total += noise.density(map.center(Location{c}) - fs);
  }
  return noise.density(map.center(z) - fs) / total;
}

}  // namespace pglp

#endif  // PGLP_MECHANISMS_HPP_
