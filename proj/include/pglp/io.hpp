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

// File formats: map/policy/category/domain/Markov/experiment JSON,
// trajectory CSV, release JSONL and reports.

#ifndef PGLP_IO_HPP_
#define PGLP_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pglp/eval.hpp"
#include "pglp/exposure.hpp"
#include "pglp/grid_map.hpp"
#include "pglp/mechanisms.hpp"
#include "pglp/partition.hpp"
#include "pglp/policy_graph.hpp"
#include "pglp/status.hpp"
#include "pglp/trace.hpp"

namespace pglp::io {

using Json = nlohmann::json;

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(what + ": invalid JSON: " + e.what());
  }
}

inline Json read_json(const std::string& path) { return parse_json(read_text(path), path); }

namespace internal {

template <typename T>
T get(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(what + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(what + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key, what);
}

inline std::size_t cell_index(const Json& v, std::size_t n, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(what + ": cell indices must be non-negative integers");
  }
  const auto i = v.get<std::size_t>();
  if (i >= n) throw InconsistencyError(what + ": cell " + std::to_string(i) + " outside the map");
  return i;
}

}  // namespace internal

// {"width", "height", "cell_size_km", "origin": [x, y]}
inline GridMap map_from_json(const Json& j) {
  const std::string what = "map";
  const auto w = internal::get<long long>(j, "width", what);
  const auto h = internal::get<long long>(j, "height", what);
  if (w < 1 || h < 1) throw ConfigError("map: width and height must be positive");
  const double cell = internal::get_or<double>(j, "cell_size_km", 1.0, what);
  Point origin{};
  if (j.contains("origin")) {
    const auto o = internal::get<std::vector<double>>(j, "origin", what);
    if (o.size() != 2) throw ConfigError("map: origin must be [x, y]");
    origin = {o[0], o[1]};
  }
  try {
    return GridMap(static_cast<std::size_t>(w), static_cast<std::size_t>(h), cell, origin);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("map: ") + e.what());
  }
}

inline Json map_to_json(const GridMap& map) {
  return {{"width", map.width()},
          {"height", map.height()},
          {"cell_size_km", map.cell_size()},
          {"origin", {map.origin().x, map.origin().y}}};
}

// {"cell_index": "label", ...}; unlisted cells are uncategorized.
inline CategoryMap categories_from_json(const Json& j, std::size_t cell_count) {
  if (!j.is_object()) throw ConfigError("categories: expected an object");
  CategoryMap out(cell_count);
  for (const auto& [key, value] : j.items()) {
    std::size_t idx = 0;
    try {
      std::size_t pos = 0;
      idx = std::stoul(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ConfigError("categories: key '" + key + "' is not a cell index");
    }
    if (idx >= cell_count) {
      throw InconsistencyError("categories: cell " + key + " outside the map");
    }
    if (!value.is_string()) throw ConfigError("categories: labels must be strings");
    out.set(Location{idx}, value.get<std::string>());
  }
  return out;
}

// Builder form {"builder": "g1"|"g2"|"block"|"poi", "k", "region",
// "categories"} or explicit {"edges": [[u, v], ...]}. Relative category
// paths resolve against `base_dir`.
inline PolicyGraph policy_from_json(const Json& j, const GridMap& map,
                                    const std::string& base_dir = "") {
  const std::string what = "policy";
  if (!j.is_object()) throw ConfigError("policy: expected an object");
  if (j.contains("edges")) {
    PolicyGraph g(map.size());
    const Json& edges = j.at("edges");
    if (!edges.is_array()) throw ConfigError("policy: 'edges' must be an array");
    for (const auto& e : edges) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("policy: each edge must be [u, v]");
      const auto u = internal::cell_index(e[0], map.size(), what);
      const auto v = internal::cell_index(e[1], map.size(), what);
      if (u == v) throw ConfigError("policy: self-loop at " + std::to_string(u));
      g.add_edge(u, v);
    }
    return g;
  }
  const auto builder = internal::get<std::string>(j, "builder", what);
  if (builder == "g1") return build_g1(map);
  if (builder == "g2") return build_g2(map);
  if (builder == "block") {
    const auto k = internal::get<long long>(j, "k", what);
    if (k < 1) throw ConfigError("policy: block side k must be positive");
    return build_block(map, static_cast<std::size_t>(k));
  }
  if (builder == "poi") {
    const auto region = internal::get_or<long long>(j, "region", 5, what);
    if (region < 1) throw ConfigError("policy: region side must be positive");
    const Json& cats = j.contains("categories") ? j.at("categories") : Json::object();
    CategoryMap cm(map.size());
    if (cats.is_string()) {
      std::string path = cats.get<std::string>();
      if (!base_dir.empty() && !path.empty() && path.front() != '/') path = base_dir + "/" + path;
      cm = categories_from_json(read_json(path), map.size());
    } else {
      cm = categories_from_json(cats, map.size());
    }
    return build_poi(map, cm, static_cast<std::size_t>(region));
  }
  throw ConfigError("policy: unknown builder '" + builder + "'");
}

inline Json policy_to_json(const PolicyGraph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u, e.v});
  return {{"nodes", g.node_count()}, {"edges", std::move(edges)}};
}

// {"n": N, "rows": [[...], ...]}
inline MarkovModel markov_from_json(const Json& j) {
  const std::string what = "markov";
  const auto n = internal::get<long long>(j, "n", what);
  const auto rows = internal::get<std::vector<std::vector<double>>>(j, "rows", what);
  if (n < 1 || rows.size() != static_cast<std::size_t>(n)) {
    throw ConfigError("markov: 'rows' must have n rows");
  }
  try {
    return MarkovModel(rows);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("markov: ") + e.what());
  }
}

inline Json markov_to_json(const MarkovModel& m) {
  return {{"n", m.size()}, {"rows", m.rows()}};
}

// {"members": [...]}
inline ConstrainedDomain domain_from_json(const Json& j, std::size_t cell_count) {
  const std::string what = "domain";
  if (!j.is_object() || !j.contains("members") || !j.at("members").is_array()) {
    throw ConfigError("domain: missing array 'members'");
  }
  std::vector<std::size_t> members;
  for (const auto& v : j.at("members")) members.push_back(internal::cell_index(v, cell_count, what));
  if (members.empty()) throw InconsistencyError("domain: no members");
  return ConstrainedDomain(cell_count, std::move(members));
}

// Trajectory CSV with header `t,cell_index`, rows ordered by t.
inline std::vector<Location> trajectory_from_csv(const std::string& text, std::size_t cell_count) {
  std::istringstream in(text);
  std::string line;
  std::vector<Location> out;
  bool header = true;
  long long last_t = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line != "t,cell_index") throw ConfigError("trajectory: expected header 't,cell_index'");
      continue;
    }
    const auto comma = line.find(',');
    long long t = 0;
    long long cell = 0;
    try {
      if (comma == std::string::npos) throw std::invalid_argument(line);
      std::size_t p1 = 0, p2 = 0;
      const std::string ts = line.substr(0, comma);
      const std::string cs = line.substr(comma + 1);
      t = std::stoll(ts, &p1);
      cell = std::stoll(cs, &p2);
      if (p1 != ts.size() || p2 != cs.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw ConfigError("trajectory: malformed line " + std::to_string(line_no));
    }
    if (!out.empty() && t <= last_t) {
      throw ConfigError("trajectory: timestamps must increase (line " + std::to_string(line_no) + ")");
    }
    if (cell < 0 || static_cast<std::size_t>(cell) >= cell_count) {
      throw InconsistencyError("trajectory: cell " + std::to_string(cell) + " outside the map");
    }
    last_t = t;
    out.push_back(Location{static_cast<std::size_t>(cell)});
  }
  if (header && !text.empty() && text.find_first_not_of(" \r\n\t") != std::string::npos) {
    throw ConfigError("trajectory: expected header 't,cell_index'");
  }
  return out;
}

inline std::string trajectory_to_csv(const std::vector<Location>& traj) {
  std::string out = "t,cell_index\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    out += std::to_string(t + 1) + "," + std::to_string(traj[t].index) + "\n";
  }
  return out;
}

// One release per line; the true location is never written.
inline Json release_to_json(const ReleaseRecord& rec) {
  Json repairs = Json::array();
  for (const auto& r : rec.repairs) {
    repairs.push_back({{"node", r.node.index},
                       {"edge", {r.edge.u, r.edge.v}},
                       {"area_before", r.area_before},
                       {"area_after", r.area_after}});
  }
  Json disconnected = Json::array();
  for (Location s : rec.disconnected) disconnected.push_back(s.index);
  return {{"t", rec.t},
          {"released", rec.released.index},
          {"epsilon", rec.epsilon},
          {"domain", rec.domain.members()},
          {"graph_edges", policy_to_json(rec.graph)["edges"]},
          {"disconnected", std::move(disconnected)},
          {"repairs", std::move(repairs)}};
}

inline Json ledger_to_json(const PrivacyLedger& ledger) {
  Json steps = Json::array();
  for (const auto& e : ledger.entries()) {
    steps.push_back({{"t", e.t}, {"epsilon", e.epsilon}, {"edge_count", e.graph.edge_count()}});
  }
  Json out = {{"releases", ledger.size()}, {"total_epsilon", ledger.total_epsilon()},
              {"steps", std::move(steps)}};
  if (!ledger.empty()) out["composed_graph_edges"] = policy_to_json(ledger.composed_graph())["edges"];
  return out;
}

inline Json exposure_to_json(const GridMap& map, const PolicyGraph& g, const ConstrainedDomain& c,
                             const ExposureReport& report, bool repaired) {
  Json nodes = Json::array();
  for (std::size_t s = 0; s < report.status.size(); ++s) {
    nodes.push_back({{"node", s}, {"status", status_name(report.status[s])}});
  }
  Json repairs = Json::array();
  for (const auto& r : report.repairs) {
    repairs.push_back({{"node", r.node.index},
                       {"edge", {r.edge.u, r.edge.v}},
                       {"area_before", r.area_before},
                       {"area_after", r.area_after}});
  }
  Json out = {{"nodes", std::move(nodes)},
              {"hull_area", constrained_hull(map, g, c).area()}};
  std::vector<std::size_t> disconnected, isolated;
  for (std::size_t s = 0; s < report.status.size(); ++s) {
    if (report.status[s] == NodeStatus::kIsolated) isolated.push_back(s);
    if (report.status[s] == NodeStatus::kIsolated || report.status[s] == NodeStatus::kDisconnected) {
      disconnected.push_back(s);
    }
  }
  out["disconnected"] = disconnected;
  out["isolated"] = isolated;
  if (repaired) {
    out["repairs"] = std::move(repairs);
    out["hull_area_after"] = constrained_hull(map, report.graph, c).area();
    out["graph_edges"] = policy_to_json(report.graph)["edges"];
  }
  return out;
}

// Shortest round-trip decimal form; identical on every IEEE-754 platform.
inline std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  double back = 0.0;
  for (int prec = 1; prec <= 17; ++prec) {
    std::ostringstream t;
    t << std::setprecision(prec) << v;
    back = std::stod(t.str());
    if (back == v) return t.str();
  }
  return ss.str();
}

inline const char* kResultsHeader = "policy,mechanism,epsilon,metric,mean,stderr,runtime_ms";

inline std::string results_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const auto& r : rows) {
    out += r.policy + "," + std::string(mechanism_name(r.mechanism)) + "," +
           format_double(r.epsilon) + "," + r.metric + "," + format_double(r.mean) + "," +
           format_double(r.stderr_) + "," + (r.runtime_ms ? format_double(*r.runtime_ms) : "") +
           "\n";
  }
  return out;
}

inline Json results_to_json(const std::vector<ResultRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json row = {{"policy", r.policy},
                {"mechanism", mechanism_name(r.mechanism)},
                {"epsilon", r.epsilon},
                {"metric", r.metric},
                {"mean", r.mean},
                {"stderr", r.stderr_}};
    row["runtime_ms"] = r.runtime_ms ? Json(*r.runtime_ms) : Json(nullptr);
    out.push_back(std::move(row));
  }
  return out;
}

// Experiment config:
// {"map": {...}, "policies": [{"name", ...policy descriptor}],
//  "mechanisms": ["plm", "ppim"], "epsilons": [...], "repetitions",
//  "seed", "users", "timestamps", "region", "categories",
//  "snap": "map"|"component", "pipeline": "single"|"trace", "markov"}
inline ExperimentConfig experiment_from_json(const Json& j, const std::string& base_dir = "") {
  const std::string what = "experiment";
  if (!j.is_object()) throw ConfigError("experiment: expected an object");
  ExperimentConfig cfg;
  if (!j.contains("map")) throw ConfigError("experiment: missing field 'map'");
  cfg.map = map_from_json(j.at("map"));
  auto resolve = [&](std::string p) {
    if (!base_dir.empty() && !p.empty() && p.front() != '/') p = base_dir + "/" + p;
    return p;
  };
  if (j.contains("categories")) {
    const Json& cats = j.at("categories");
    cfg.categories = cats.is_string()
                         ? categories_from_json(read_json(resolve(cats.get<std::string>())), cfg.map.size())
                         : categories_from_json(cats, cfg.map.size());
  }
  if (!j.contains("policies") || !j.at("policies").is_array()) {
    throw ConfigError("experiment: missing array 'policies'");
  }
  for (const auto& p : j.at("policies")) {
    Json desc = p.is_string() ? read_json(resolve(p.get<std::string>())) : p;
    std::string name = internal::get_or<std::string>(desc, "name", "", what);
    if (name.empty()) name = internal::get_or<std::string>(desc, "builder", "explicit", what);
    if (name == "block" && desc.contains("k")) name = "k" + std::to_string(desc.at("k").get<long long>() * desc.at("k").get<long long>());
    if (desc.value("builder", "") == "poi" && !desc.contains("categories") && j.contains("categories")) {
      desc["categories"] = j.at("categories");
    }
    cfg.policies.push_back({name, policy_from_json(desc, cfg.map, base_dir)});
  }
  if (j.contains("mechanisms")) {
    cfg.mechanisms.clear();
    for (const auto& m : internal::get<std::vector<std::string>>(j, "mechanisms", what)) {
      cfg.mechanisms.push_back(parse_mechanism(m));
    }
  }
  if (j.contains("epsilons")) cfg.epsilons = internal::get<std::vector<double>>(j, "epsilons", what);
  const auto reps = internal::get_or<long long>(j, "repetitions", 200, what);
  const auto users = internal::get_or<long long>(j, "users", 20, what);
  const auto stamps = internal::get_or<long long>(j, "timestamps", 100, what);
  const auto region = internal::get_or<long long>(j, "region", 5, what);
  if (reps < 1 || users < 1 || stamps < 1 || region < 1) {
    throw ConfigError("experiment: repetitions, users, timestamps and region must be positive");
  }
  cfg.repetitions = static_cast<std::size_t>(reps);
  cfg.users = static_cast<std::size_t>(users);
  cfg.timestamps = static_cast<std::size_t>(stamps);
  cfg.region_side = static_cast<std::size_t>(region);
  cfg.seed = internal::get_or<std::uint64_t>(j, "seed", 0, what);
  const auto snap = internal::get_or<std::string>(j, "snap", "map", what);
  if (snap == "map") {
    cfg.snap = SnapMode::kMap;
  } else if (snap == "component") {
    cfg.snap = SnapMode::kComponent;
  } else {
    throw ConfigError("experiment: snap must be 'map' or 'component'");
  }
  const auto pipeline = internal::get_or<std::string>(j, "pipeline", "single", what);
  if (pipeline == "single") {
    cfg.pipeline = Pipeline::kSingle;
  } else if (pipeline == "trace") {
    cfg.pipeline = Pipeline::kTrace;
  } else {
    throw ConfigError("experiment: pipeline must be 'single' or 'trace'");
  }
  if (j.contains("markov")) {
    const Json& m = j.at("markov");
    cfg.mobility = markov_from_json(m.is_string() ? read_json(resolve(m.get<std::string>())) : m);
  }
  return cfg;
}

}  // namespace pglp::io

#endif  // PGLP_IO_HPP_
