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

// pglp: command-line front end.
//
// Exit codes: 0 ok, 1 usage/config, 2 model or data inconsistency,
// 3 unrepairable policy. Errors go to stderr as {"code", "message"}.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pglp/pglp.hpp"

namespace {

using pglp::io::Json;

struct Globals {
  std::string map_path;
  std::string policy_path;
  std::string mechanism = "ppim";
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  bool seed_set = false;
  bool epsilon_set = false;
  bool mechanism_set = false;
};

class UsageError : public pglp::Error {
 public:
  explicit UsageError(const std::string& message) : Error("usage", message) {}
};

int exit_code_for(const std::string& code) {
  if (code == "unrepairable") return 3;
  if (code == "model-inconsistency" || code == "domain" || code == "no-sensitivity") return 2;
  return 1;
}

int report_error(const std::string& code, const std::string& message) {
  std::cerr << Json{{"code", code}, {"message", message}}.dump() << "\n";
  return exit_code_for(code);
}

std::string dir_of(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw pglp::ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw pglp::ConfigError("failed writing '" + path + "'");
}

pglp::GridMap load_map(const Globals& g) {
  if (g.map_path.empty()) throw UsageError("--map is required");
  return pglp::io::map_from_json(pglp::io::read_json(g.map_path));
}

pglp::PolicyGraph load_policy(const Globals& g, const pglp::GridMap& map) {
  if (g.policy_path.empty()) throw UsageError("--policy is required");
  return pglp::io::policy_from_json(pglp::io::read_json(g.policy_path), map,
                                    dir_of(g.policy_path));
}

pglp::ConstrainedDomain load_domain(const std::string& path, const pglp::GridMap& map) {
  if (path.empty()) return pglp::ConstrainedDomain::full(map.size());
  return pglp::io::domain_from_json(pglp::io::read_json(path), map.size());
}

pglp::SnapMode parse_snap(const std::string& s) {
  if (s == "map") return pglp::SnapMode::kMap;
  if (s == "component") return pglp::SnapMode::kComponent;
  throw UsageError("--snap must be 'map' or 'component'");
}

struct ReleaseArgs {
  std::string trajectory;
  std::string markov;
  std::string ledger;
  std::string snap = "map";
  std::string likelihood = "center";
};

int cmd_release(const Globals& g, const ReleaseArgs& a) {
  const pglp::GridMap map = load_map(g);
  const pglp::PolicyGraph policy = load_policy(g, map);
  const pglp::MarkovModel model =
      a.markov.empty() ? pglp::random_walk_model(map)
                       : pglp::io::markov_from_json(pglp::io::read_json(a.markov));
  if (model.size() != map.size()) {
    throw pglp::InconsistencyError("Markov model size does not match the map");
  }
  const auto traj = pglp::io::trajectory_from_csv(pglp::io::read_text(a.trajectory), map.size());

  pglp::TraceOptions opts;
  opts.mechanism = pglp::parse_mechanism(g.mechanism);
  opts.epsilon = g.epsilon;
  opts.snap = parse_snap(a.snap);
  if (a.likelihood == "center") {
    opts.likelihood = pglp::LikelihoodModel::kCenterDensity;
  } else if (a.likelihood == "cell") {
    opts.likelihood = pglp::LikelihoodModel::kCellMass;
  } else {
    throw UsageError("--likelihood must be 'center' or 'cell'");
  }
  pglp::TraceSession session(map, policy, model, pglp::BeliefVector::uniform(map.size()), opts);
  pglp::Rng gen = pglp::make_stream(g.seed, 0, 0);

  std::string jsonl;
  for (pglp::Location truth : traj) {
    const pglp::ReleaseRecord rec = session.release_step(pglp::SecretLocation(truth), gen);
    jsonl += pglp::io::release_to_json(rec).dump() + "\n";
  }
  write_output(g.out, jsonl);
  if (!a.ledger.empty()) {
    write_output(a.ledger, pglp::io::ledger_to_json(session.ledger()).dump(2) + "\n");
  }
  return 0;
}

int cmd_exposure(const Globals& g, const std::string& domain_path, const std::string& strategy,
                 bool repair) {
  const pglp::GridMap map = load_map(g);
  const pglp::PolicyGraph policy = load_policy(g, map);
  const pglp::ConstrainedDomain domain = load_domain(domain_path, map);
  pglp::RepairStrategy st = pglp::RepairStrategy::kMinArea;
  if (strategy == "nearest") {
    st = pglp::RepairStrategy::kNearest;
  } else if (strategy != "min-area") {
    throw UsageError("--strategy must be 'min-area' or 'nearest'");
  }
  const auto report = pglp::analyze_and_repair(map, policy, domain, st);
  const auto restricted = pglp::restrict_to(policy, domain);
  write_output(g.out,
               pglp::io::exposure_to_json(map, restricted, domain, report, repair).dump(2) + "\n");
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string json_out;
  bool timing = false;
};

int cmd_experiment(const Globals& g, const ExperimentArgs& a) {
  pglp::ExperimentConfig cfg =
      pglp::io::experiment_from_json(pglp::io::read_json(a.config), dir_of(a.config));
  if (!g.map_path.empty()) {
    const pglp::GridMap map = load_map(g);
    if (map.size() != cfg.map.size() || g.policy_path.empty()) {
      throw UsageError("--map in experiment mode requires a matching --policy");
    }
  }
  if (!g.policy_path.empty()) {
    cfg.policies = {{"policy", load_policy(g, cfg.map)}};
  }
  if (g.seed_set) cfg.seed = g.seed;
  if (g.epsilon_set) cfg.epsilons = {g.epsilon};
  if (g.mechanism_set) cfg.mechanisms = {pglp::parse_mechanism(g.mechanism)};
  cfg.timing = a.timing;
  const auto rows = pglp::run_experiment(cfg);
  write_output(g.out, pglp::io::results_to_csv(rows));
  if (!a.json_out.empty()) write_output(a.json_out, pglp::io::results_to_json(rows).dump(2) + "\n");
  return 0;
}

struct SimulateArgs {
  std::string markov;
  std::size_t length = 100;
  std::optional<std::size_t> start;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
  std::optional<pglp::GridMap> map;
  if (!g.map_path.empty()) map = load_map(g);
  if (a.markov.empty() && !map) throw UsageError("simulate needs --markov or --map");
  const pglp::MarkovModel model = a.markov.empty()
                                      ? pglp::random_walk_model(*map)
                                      : pglp::io::markov_from_json(pglp::io::read_json(a.markov));
  if (map && map->size() != model.size()) {
    throw pglp::InconsistencyError("Markov model size does not match the map");
  }
  pglp::BeliefVector initial = pglp::BeliefVector::uniform(model.size());
  if (a.start) {
    if (*a.start >= model.size()) throw pglp::DomainError("--start outside the state space");
    initial = pglp::BeliefVector::point_mass(model.size(), pglp::Location{*a.start});
  }
  pglp::Rng gen = pglp::make_stream(g.seed, pglp::kStreamTrajectories, 0);
  write_output(g.out, pglp::io::trajectory_to_csv(
                          pglp::simulate_trajectory(model, initial, a.length, gen)));
  return 0;
}

struct LearnArgs {
  std::vector<std::string> trajectories;
  double alpha = 0.0;
  std::optional<std::size_t> states;
};

int cmd_learn(const Globals& g, const LearnArgs& a) {
  std::size_t n = 0;
  if (a.states) {
    n = *a.states;
  } else if (!g.map_path.empty()) {
    n = load_map(g).size();
  } else {
    throw UsageError("learn-markov needs --map or --states");
  }
  std::vector<std::vector<pglp::Location>> corpus;
  for (const auto& path : a.trajectories) {
    corpus.push_back(pglp::io::trajectory_from_csv(pglp::io::read_text(path), n));
  }
  const auto model = pglp::learn_markov(corpus, n, a.alpha);
  write_output(g.out, pglp::io::markov_to_json(model).dump() + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-graph location privacy: release, exposure analysis and experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--map", g.map_path, "Map descriptor JSON");
  app.add_option("--policy", g.policy_path, "Policy descriptor JSON");
  auto* mech_opt = app.add_option("--mechanism", g.mechanism, "plm or ppim");
  auto* eps_opt = app.add_option("--epsilon", g.epsilon, "Privacy budget per release")
                      ->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", g.seed, "Master RNG seed (64-bit unsigned)");
  app.add_option("--out", g.out, "Output path (default stdout)");

  ReleaseArgs release;
  auto* rel = app.add_subcommand("release", "Release a trajectory");
  rel->add_option("--trajectory", release.trajectory, "Trajectory CSV (t,cell_index)")->required();
  rel->add_option("--markov", release.markov, "Markov model JSON (default: lazy random walk)");
  rel->add_option("--ledger", release.ledger, "Write the ledger summary JSON here");
  rel->add_option("--snap", release.snap, "map or component");
  rel->add_option("--likelihood", release.likelihood, "center or cell");

  std::string detect_domain;
  auto* det = app.add_subcommand("detect", "Classify nodes under a constrained domain");
  det->add_option("--domain", detect_domain, "Domain JSON {\"members\": [...]} (default: all cells)");

  std::string repair_domain;
  std::string strategy = "min-area";
  auto* rep = app.add_subcommand("repair", "Detect and repair isolated nodes");
  rep->add_option("--domain", repair_domain, "Domain JSON {\"members\": [...]} (default: all cells)");
  rep->add_option("--strategy", strategy, "min-area or nearest");

  ExperimentArgs experiment;
  auto* exp = app.add_subcommand("experiment", "Run the utility experiment harness");
  exp->add_option("--config", experiment.config, "Experiment config JSON")->required();
  exp->add_option("--json", experiment.json_out, "Also write results as JSON here");
  exp->add_flag("--timing", experiment.timing, "Fill the runtime_ms column");

  SimulateArgs simulate;
  auto* sim = app.add_subcommand("simulate", "Sample a trajectory from a Markov model");
  sim->add_option("--markov", simulate.markov, "Markov model JSON (default: random walk on --map)");
  sim->add_option("--length", simulate.length, "Number of timestamps");
  sim->add_option("--start", simulate.start, "Start cell (default: uniform)");

  LearnArgs learn;
  auto* lrn = app.add_subcommand("learn-markov", "Estimate a Markov model from trajectories");
  lrn->add_option("--trajectory", learn.trajectories, "Trajectory CSV files")->required();
  lrn->add_option("--alpha", learn.alpha, "Add-alpha smoothing")->check(CLI::NonNegativeNumber);
  lrn->add_option("--states", learn.states, "Number of cells (default: from --map)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what());
  }
  g.seed_set = seed_opt->count() > 0;
  g.epsilon_set = eps_opt->count() > 0;
  g.mechanism_set = mech_opt->count() > 0;

  try {
    pglp::parse_mechanism(g.mechanism);
    if (*rel) return cmd_release(g, release);
    if (*det) return cmd_exposure(g, detect_domain, strategy, false);
    if (*rep) return cmd_exposure(g, repair_domain, strategy, true);
    if (*exp) return cmd_experiment(g, experiment);
    if (*sim) return cmd_simulate(g, simulate);
    if (*lrn) return cmd_learn(g, learn);
  } catch (const pglp::Error& e) {
    return report_error(e.code(), e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
  return report_error("usage", "no subcommand");
}
