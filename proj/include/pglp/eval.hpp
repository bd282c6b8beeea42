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

// Utility metrics, synthetic mobility data and the experiment harness.

#ifndef PGLP_EVAL_HPP_
#define PGLP_EVAL_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pglp/grid_map.hpp"
#include "pglp/mechanisms.hpp"
#include "pglp/partition.hpp"
#include "pglp/policy_graph.hpp"
#include "pglp/random.hpp"
#include "pglp/status.hpp"
#include "pglp/trace.hpp"

namespace pglp {

// E_eu: distance (km) between true and released cell centers.
inline double metric_eeu(const GridMap& map, Location truth, Location released) {
  return euclidean_distance(map, truth, released);
}

// E_r: 0 iff both cells fall in the same region.
inline int metric_er(const RegionPartition& regions, Location truth, Location released) {
  return regions.region(truth) == regions.region(released) ? 0 : 1;
}

// E_poi: 0 iff both cells carry the same category.
inline int metric_epoi(const CategoryMap& categories, Location truth, Location released) {
  return categories.category(truth) == categories.category(released) ? 0 : 1;
}

// Maximum-likelihood transition estimate with add-alpha smoothing. Rows
// without observations (and alpha == 0) fall back to uniform.
inline MarkovModel learn_markov(std::span<const std::vector<Location>> trajectories,
                                std::size_t state_count, double alpha = 0.0) {
  if (state_count == 0) throw DomainError("learn_markov: no states");
  if (!(alpha >= 0.0)) throw DomainError("learn_markov: alpha must be non-negative");
  std::vector<std::vector<double>> counts(state_count, std::vector<double>(state_count, alpha));
  std::size_t transitions = 0;
  for (const auto& traj : trajectories) {
    for (std::size_t t = 1; t < traj.size(); ++t) {
      const std::size_t from = traj[t - 1].index;
      const std::size_t to = traj[t].index;
      if (from >= state_count || to >= state_count) {
        throw DomainError("learn_markov: trajectory cell outside the state space");
      }
      counts[from][to] += 1.0;
      ++transitions;
    }
  }
  if (transitions == 0) throw DomainError("learn_markov: no transitions observed");
  for (auto& row : counts) {
    double sum = 0.0;
    for (double c : row) sum += c;
    if (sum == 0.0) std::fill(row.begin(), row.end(), 1.0);
  }
  return MarkovModel(counts);
}

// s_1 ~ initial, s_{t+1} ~ row s_t.
template <BitGenerator64 G>
std::vector<Location> simulate_trajectory(const MarkovModel& model, const BeliefVector& initial,
                                          std::size_t length, G& gen) {
  if (initial.size() != model.size()) {
    throw DomainError("simulate_trajectory: model and initial belief sizes differ");
  }
  std::vector<Location> out;
  out.reserve(length);
  if (length == 0) return out;
  out.push_back(Location{sample_discrete(initial.probs(), gen)});
  while (out.size() < length) {
    out.push_back(Location{sample_discrete(model.row(out.back().index), gen)});
  }
  return out;
}

// Lazy random walk on the grid: stay with probability `stay`, otherwise move
// to a uniformly chosen cell of the 8-neighborhood.
inline MarkovModel random_walk_model(const GridMap& map, double stay = 0.2) {
  if (!(stay >= 0.0 && stay <= 1.0)) throw DomainError("random_walk_model: stay not in [0, 1]");
  const PolicyGraph moves = build_g1(map);
  std::vector<std::vector<double>> rows(map.size(), std::vector<double>(map.size(), 0.0));
  for (std::size_t s = 0; s < map.size(); ++s) {
    const auto nbrs = moves.neighbors(s);
    rows[s][s] = nbrs.empty() ? 1.0 : stay;
    for (std::size_t v : nbrs) rows[s][v] = (1.0 - stay) / static_cast<double>(nbrs.size());
  }
  return MarkovModel(rows);
}

// Each cell independently gets label i with probability fractions[i] (the
// remainder stays uncategorized).
template <BitGenerator64 G>
CategoryMap synthetic_categories(const GridMap& map, const std::vector<std::string>& labels,
                                 const std::vector<double>& fractions, G& gen) {
  if (labels.size() != fractions.size()) {
    throw DomainError("synthetic_categories: labels and fractions differ in length");
  }
  CategoryMap out(map.size());
  for (std::size_t s = 0; s < map.size(); ++s) {
    double u = uniform_open01(gen);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (u < fractions[i]) {
        out.set(Location{s}, labels[i]);
        break;
      }
      u -= fractions[i];
    }
  }
  return out;
}

enum class Pipeline {
  kSingle,  // independent per-location releases with the base policy
  kTrace,   // full trajectory release against the Markov adversary
};

struct NamedPolicy {
  std::string name;
  PolicyGraph graph;
};

struct ExperimentConfig {
  GridMap map{20, 20};
  std::vector<NamedPolicy> policies;
  std::vector<MechanismId> mechanisms{MechanismId::kPlm, MechanismId::kPpim};
  std::vector<double> epsilons{1.0};
  std::size_t repetitions = 200;
  std::uint64_t seed = 0;
  std::size_t users = 20;
  std::size_t timestamps = 100;
  std::size_t region_side = 5;
  std::optional<CategoryMap> categories;  // E_poi is reported only when set
  SnapMode snap = SnapMode::kMap;
  Pipeline pipeline = Pipeline::kSingle;
  std::optional<MarkovModel> mobility;     // default: random_walk_model(map)
  std::optional<BeliefVector> initial;     // default: uniform
  bool timing = false;                     // wall-clock runtime_ms column
};

struct ResultRow {
  std::string policy;
  MechanismId mechanism = MechanismId::kPlm;
  double epsilon = 0.0;
  std::string metric;  // "E_eu", "E_r" or "E_poi"
  double mean = 0.0;
  double stderr_ = 0.0;
  std::optional<double> runtime_ms;
};

// Stream purposes for derive_seed.
inline constexpr std::uint64_t kStreamTrajectories = 1;
inline constexpr std::uint64_t kStreamReleases = 2;

inline void validate(const ExperimentConfig& config) {
  if (config.policies.empty()) throw ConfigError("experiment: no policies");
  if (config.mechanisms.empty()) throw ConfigError("experiment: no mechanisms");
  if (config.epsilons.empty()) throw ConfigError("experiment: no epsilon values");
  for (double e : config.epsilons) {
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("experiment: epsilon must be positive");
  }
  if (config.repetitions == 0) throw ConfigError("experiment: repetitions must be positive");
  if (config.users == 0 || config.timestamps == 0) {
    throw ConfigError("experiment: users and timestamps must be positive");
  }
  for (const auto& p : config.policies) {
    if (p.graph.node_count() != config.map.size()) {
      throw ConfigError("experiment: policy '" + p.name + "' does not match the map size");
    }
  }
  if (config.categories && config.categories->size() != config.map.size()) {
    throw ConfigError("experiment: category map does not match the map size");
  }
  if (config.mobility && config.mobility->size() != config.map.size()) {
    throw ConfigError("experiment: mobility model does not match the map size");
  }
  if (config.initial && config.initial->size() != config.map.size()) {
    throw ConfigError("experiment: initial belief does not match the map size");
  }
}

// Synthetic test trajectories, one stream per user.
inline std::vector<std::vector<Location>> experiment_trajectories(const ExperimentConfig& config) {
  const MarkovModel mobility = config.mobility ? *config.mobility : random_walk_model(config.map);
  const BeliefVector initial = config.initial ? *config.initial : BeliefVector::uniform(config.map.size());
  std::vector<std::vector<Location>> out;
  for (std::size_t u = 0; u < config.users; ++u) {
    Rng gen = make_stream(config.seed, kStreamTrajectories, u);
    out.push_back(simulate_trajectory(mobility, initial, config.timestamps, gen));
  }
  return out;
}

// Mean metrics per (policy, mechanism, epsilon). Each repetition releases
// every point of every synthetic trajectory once and averages the errors;
// rows report the mean over repetitions and its standard error.
// Repetition r uses stream derive_seed(seed, kStreamReleases, key(r)), so
// results do not depend on evaluation order.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto trajectories = experiment_trajectories(config);
  const RegionPartition regions(config.map, config.region_side);
  const MarkovModel mobility = config.mobility ? *config.mobility : random_walk_model(config.map);
  const BeliefVector initial = config.initial ? *config.initial : BeliefVector::uniform(config.map.size());

  std::vector<ResultRow> rows;
  for (std::size_t pi = 0; pi < config.policies.size(); ++pi) {
    const NamedPolicy& policy = config.policies[pi];
    for (std::size_t mi = 0; mi < config.mechanisms.size(); ++mi) {
      const MechanismId mech = config.mechanisms[mi];
      for (std::size_t ei = 0; ei < config.epsilons.size(); ++ei) {
        const double eps = config.epsilons[ei];
        const auto start = std::chrono::steady_clock::now();

        MechanismOptions mopts;
        mopts.snap = config.snap;
        mopts.edgeless = EdgelessPolicy::kWholeGraph;
        std::optional<Mechanism> single;
        if (config.pipeline == Pipeline::kSingle) {
          single.emplace(config.map, policy.graph, mech, PrivacyParams(eps), mopts);
        }

        std::vector<double> eeu(config.repetitions), er(config.repetitions),
            epoi(config.repetitions);
        for (std::size_t r = 0; r < config.repetitions; ++r) {
          const std::uint64_t key =
              ((static_cast<std::uint64_t>(pi) * 64 + mi) * 4096 + ei) * (1ULL << 32) + r;
          Rng gen = make_stream(config.seed, kStreamReleases, key);
          double sum_eeu = 0.0, sum_er = 0.0, sum_epoi = 0.0;
          std::size_t count = 0;
          for (const auto& traj : trajectories) {
            std::optional<TraceSession> session;
            if (config.pipeline == Pipeline::kTrace) {
              TraceOptions topts;
              topts.mechanism = mech;
              topts.epsilon = eps;
              topts.snap = config.snap;
              session.emplace(config.map, policy.graph, mobility, initial, topts);
            }
            for (Location truth : traj) {
              const Location z = session ? session->release_step(SecretLocation(truth), gen).released
                                         : single->release(truth, gen);
              sum_eeu += metric_eeu(config.map, truth, z);
              sum_er += metric_er(regions, truth, z);
              if (config.categories) sum_epoi += metric_epoi(*config.categories, truth, z);
              ++count;
            }
          }
          eeu[r] = sum_eeu / static_cast<double>(count);
          er[r] = sum_er / static_cast<double>(count);
          epoi[r] = sum_epoi / static_cast<double>(count);
        }
        const auto elapsed = std::chrono::steady_clock::now() - start;
        const double ms = std::chrono::duration<double, std::milli>(elapsed).count();

        auto summarize = [&](const char* metric, const std::vector<double>& v) {
          double mean = 0.0;
          for (double x : v) mean += x;
          mean /= static_cast<double>(v.size());
          double var = 0.0;
          for (double x : v) var += (x - mean) * (x - mean);
          const double n = static_cast<double>(v.size());
          const double se = v.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
          ResultRow row{policy.name, mech, eps, metric, mean, se, std::nullopt};
          if (config.timing) row.runtime_ms = ms;
          rows.push_back(std::move(row));
        };
        summarize("E_eu", eeu);
        summarize("E_r", er);
        if (config.categories) summarize("E_poi", epoi);
      }
    }
  }
  return rows;
}

}  // namespace pglp

#endif  // PGLP_EVAL_HPP_
