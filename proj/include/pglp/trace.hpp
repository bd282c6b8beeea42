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

// Private trajectory release against a Markov adversary.
//
// At each timestamp the adversary's prior over the true cell is propagated
// through the transition matrix; its support is the constrained domain C_t.
// The base policy is restricted to C_t, isolated nodes are repaired, one
// location is released with the resulting graph, and the prior is updated
// with the likelihood of the released cell under that exact mechanism.

#ifndef PGLP_TRACE_HPP_
#define PGLP_TRACE_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pglp/exposure.hpp"
#include "pglp/grid_map.hpp"
#include "pglp/mechanisms.hpp"
#include "pglp/policy_graph.hpp"
#include "pglp/random.hpp"
#include "pglp/status.hpp"

namespace pglp {

// Probabilities at or below this are treated as impossible.
inline constexpr double kPossibilityThreshold = 1e-12;

// Row-stochastic N x N transition matrix, stored densely.
class MarkovModel {
 public:
  // Rows are renormalized; each needs a positive sum.
  explicit MarkovModel(const std::vector<std::vector<double>>& rows) : n_(rows.size()) {
    if (n_ == 0) throw DomainError("Markov model needs at least one state");
    entries_.reserve(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (rows[i].size() != n_) {
        throw DomainError("Markov row " + std::to_string(i) + " has " +
                          std::to_string(rows[i].size()) + " entries, expected " +
                          std::to_string(n_));
      }
      double sum = 0.0;
      for (double p : rows[i]) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
          throw DomainError("Markov row " + std::to_string(i) + " has an invalid entry");
        }
        sum += p;
      }
      if (!(sum > 0.0)) throw DomainError("Markov row " + std::to_string(i) + " sums to zero");
      for (double p : rows[i]) entries_.push_back(p / sum);
    }
  }

  static MarkovModel identity(std::size_t n) {
    std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) rows[i][i] = 1.0;
    return MarkovModel(rows);
  }

  std::size_t size() const { return n_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(entries_).subspan(i * n_, n_);
  }
  double at(std::size_t from, std::size_t to) const { return entries_[from * n_ + to]; }

  std::vector<std::vector<double>> rows() const {
    std::vector<std::vector<double>> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
  }

 private:
  std::size_t n_;
  std::vector<double> entries_;
};

// Adversary's distribution over the true cell.
class BeliefVector {
 public:
  explicit BeliefVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw DomainError("belief vector is empty");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw DomainError("belief entry is invalid");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      throw DomainError("belief vector sums to " + std::to_string(sum));
    }
    for (double& p : probs_) p /= sum;
  }

  static BeliefVector uniform(std::size_t n) {
    return BeliefVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }
  static BeliefVector point_mass(std::size_t n, Location at) {
    std::vector<double> p(n, 0.0);
    if (at.index >= n) throw DomainError("point mass outside the domain");
    p[at.index] = 1.0;
    return BeliefVector(std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

// p^- = p^+ M, renormalized against rounding drift.
inline BeliefVector propagate(const MarkovModel& model, const BeliefVector& posterior) {
  if (model.size() != posterior.size()) {
    throw DomainError("propagate: model and belief sizes differ");
  }
  const std::size_t n = model.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = posterior[i];
    if (p == 0.0) continue;
    const auto row = model.row(i);
    for (std::size_t j = 0; j < n; ++j) out[j] += p * row[j];
  }
  const double sum = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v /= sum;
  return BeliefVector(std::move(out));
}

// C = {i : p[i] > threshold}.
inline ConstrainedDomain constrained_domain(const BeliefVector& prior,
                                            double threshold = kPossibilityThreshold) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    if (prior[i] > threshold) members.push_back(i);
  }
  if (members.empty()) {
    throw InconsistencyError("no location has positive probability");
  }
  return ConstrainedDomain(prior.size(), std::move(members));
}

// Bayes rule: p^+[i] = L[i] p^-[i] / sum_j L[j] p^-[j].
inline BeliefVector posterior_update(const BeliefVector& prior, std::span<const double> likelihoods) {
  if (likelihoods.size() != prior.size()) {
    throw DomainError("posterior_update: likelihood vector has the wrong size");
  }
  std::vector<double> out(prior.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(likelihoods[i] >= 0.0)) throw DomainError("posterior_update: negative likelihood");
    out[i] = likelihoods[i] * prior[i];
    denom += out[i];
  }
  if (!(denom > 0.0)) {
    throw InconsistencyError("observation has zero probability under the prior");
  }
  for (double& v : out) v /= denom;
  return BeliefVector(std::move(out));
}

// Per-release privacy accounting: (sum of epsilons, intersection of the
// graphs actually achieved).
class PrivacyLedger {
 public:
  struct Entry {
    std::size_t t = 0;
    double epsilon = 0.0;
    PolicyGraph graph;
  };

  void record(std::size_t t, double epsilon, PolicyGraph graph) {
    if (entries_.empty()) {
      composed_ = graph;
    } else {
      composed_ = intersect(composed_, graph);
    }
    total_epsilon_ += epsilon;
    entries_.push_back({t, epsilon, std::move(graph)});
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  double total_epsilon() const { return total_epsilon_; }
  const PolicyGraph& composed_graph() const { return composed_; }

 private:
  std::vector<Entry> entries_;
  double total_epsilon_ = 0.0;
  PolicyGraph composed_;
};

struct Composition {
  double total_epsilon = 0.0;
  PolicyGraph graph;
};

// Folds the ledger from its records: (sum eps_t, G_1 ^ ... ^ G_T).
inline Composition compose(const PrivacyLedger& ledger) {
  if (ledger.empty()) throw DomainError("compose: ledger has no releases");
  Composition out;
  out.graph = ledger.entries().front().graph;
  for (const auto& e : ledger.entries()) {
    out.total_epsilon += e.epsilon;
    out.graph = intersect(out.graph, e.graph);
  }
  return out;
}

// The user's true location. It can only be consumed by a mechanism release,
// and every read is counted.
class SecretLocation {
 public:
  explicit SecretLocation(Location loc) : loc_(loc) {}

  // Fails with InconsistencyError when the location lies outside `support`.
  template <BitGenerator64 G>
  Location release_with(const Mechanism& mechanism, const ConstrainedDomain& support,
                        G& gen) const {
    ++reads_;
    if (!support.contains(loc_.index)) {
      throw InconsistencyError("true location " + std::to_string(loc_.index) +
                               " has zero probability under the Markov model");
    }
    return mechanism.release(loc_, gen);
  }

  std::size_t reads() const { return reads_; }

 private:
  Location loc_;
  mutable std::size_t reads_ = 0;
};

struct TraceOptions {
  MechanismId mechanism = MechanismId::kPpim;
  double epsilon = 1.0;
  SnapMode snap = SnapMode::kMap;
  LikelihoodModel likelihood = LikelihoodModel::kCenterDensity;
  RepairStrategy repair = RepairStrategy::kMinArea;
  double threshold = kPossibilityThreshold;
};

struct ReleaseRecord {
  std::size_t t = 0;
  Location released;
  ConstrainedDomain domain = ConstrainedDomain(1, {0});
  PolicyGraph graph;               // the achieved graph G_t^C
  std::vector<RepairStep> repairs;
  std::vector<Location> disconnected;  // disconnected nodes of C_t
  double epsilon = 0.0;
};

// One user's release session; a strictly sequential state machine.
class TraceSession {
 public:
  TraceSession(GridMap map, PolicyGraph policy, MarkovModel model, BeliefVector initial,
               TraceOptions options)
      : map_(std::move(map)),
        policy_(std::move(policy)),
        model_(std::move(model)),
        posterior_(std::move(initial)),
        options_(options) {
    if (policy_.node_count() != map_.size() || model_.size() != map_.size() ||
        posterior_.size() != map_.size()) {
      throw DomainError("map, policy, Markov model and belief sizes differ");
    }
    (void)PrivacyParams(options_.epsilon);
  }

  // The first step uses the initial belief as its prior; later steps
  // propagate the previous posterior.
  template <BitGenerator64 G>
  ReleaseRecord release_step(const SecretLocation& truth, G& gen) {
    BeliefVector prior = steps_ == 0 ? posterior_ : propagate(model_, posterior_);
    ConstrainedDomain domain = constrained_domain(prior, options_.threshold);

    // The base policy is re-restricted every step; repairs do not persist.
    // A singleton domain has no other node to be indistinguishable from, so
    // there is nothing to repair: its release is exact.
    ExposureReport exposure;
    if (domain.size() < 2) {
      exposure.status = classify(policy_, domain);
      exposure.graph = restrict_to(policy_, domain);
    } else {
      exposure = analyze_and_repair(map_, policy_, domain, options_.repair);
    }

    MechanismOptions mopts;
    mopts.snap = options_.snap;
    mopts.likelihood = options_.likelihood;
    mopts.edgeless = EdgelessPolicy::kWholeGraph;
    const Mechanism mechanism(map_, exposure.graph, options_.mechanism,
                              PrivacyParams(options_.epsilon), mopts);

    const Location released = truth.release_with(mechanism, domain, gen);

    std::vector<double> likelihoods(map_.size(), 0.0);
    for (std::size_t s : domain.members()) {
      likelihoods[s] = mechanism.likelihood(Location{s}, released);
    }
    posterior_ = posterior_update(prior, likelihoods);
    prior_ = std::move(prior);

    ++steps_;
    ReleaseRecord rec;
    rec.t = steps_;
    rec.released = released;
    rec.epsilon = options_.epsilon;
    rec.repairs = exposure.repairs;
    for (std::size_t s = 0; s < exposure.status.size(); ++s) {
      if (exposure.status[s] == NodeStatus::kDisconnected ||
          exposure.status[s] == NodeStatus::kIsolated) {
        rec.disconnected.push_back(Location{s});
      }
    }
    ledger_.record(rec.t, options_.epsilon, exposure.graph);
    rec.graph = std::move(exposure.graph);
    rec.domain = std::move(domain);
    return rec;
  }

  const GridMap& map() const { return map_; }
  const PolicyGraph& policy() const { return policy_; }
  const MarkovModel& model() const { return model_; }
  const TraceOptions& options() const { return options_; }
  const BeliefVector& posterior() const { return posterior_; }
  const std::optional<BeliefVector>& last_prior() const { return prior_; }
  const PrivacyLedger& ledger() const { return ledger_; }
  std::size_t steps() const { return steps_; }

 private:
  GridMap map_;
  PolicyGraph policy_;
  MarkovModel model_;
  BeliefVector posterior_;
  std::optional<BeliefVector> prior_;
  TraceOptions options_;
  PrivacyLedger ledger_;
  std::size_t steps_ = 0;
};

}  // namespace pglp

#endif  // PGLP_TRACE_HPP_
