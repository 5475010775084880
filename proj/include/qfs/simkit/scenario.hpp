// Copyright 2026 The qfs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file scenario.hpp
 * @brief Scenario and job-file schemas and their loaders.
 *
 * A scenario file has the sections [config], [policy], one [fleet.<qpu_id>]
 * per device and one [workload.<name>] per job template. See
 * docs/example_scenario.toml for every key.
 */

#pragma once

#include "qfs/common.hpp"
#include "qfs/distribution.hpp"
#include "qfs/fleet.hpp"
#include "qfs/gateway.hpp"
#include "qfs/scheduler.hpp"
#include "qfs/simkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qfs {

struct SimConfig {
  double coherence_factor = 0.5;
  double ema_beta = 0.2;
  std::vector<double> zne_lambdas{1.0, 3.0};
  Micros recal_duration = 1'000'000;
  Micros poll_interval = 10'000;
  Micros drift_interval = 10'000;
  Micros recal_interval = 0;  ///< periodic recalibration, 0 = off
  DriftParams drift;
  int max_pending = kDefaultMaxPending;
  std::map<std::string, int> tenant_max_pending;
  std::size_t health_window = 20;
  std::size_t health_min_observations = 10;
  double flag_threshold = 0.15;
  Micros aging_quantum = 100'000;
  bool trial_transpile = true;
  std::size_t trial_cap = 8;
};

template <typename T>
struct Range {
  T lo{};
  T hi{};
};

enum class CircuitFamily { Ghz, Random, Qasm };
enum class ArrivalLaw { Poisson, Fixed };

struct WorkloadTemplate {
  std::string name = "default";
  CircuitFamily family = CircuitFamily::Ghz;
  int qubits = 2;
  int depth = 10;
  double two_qubit_fraction = 0.3;
  std::string qasm;                                 ///< Qasm family
  std::optional<OutcomeDistribution> declared_ideal;  ///< Qasm family
  int count = 1;
  ArrivalLaw arrival = ArrivalLaw::Fixed;
  double rate_per_s = 1000.0;
  Micros start = 0;
  std::vector<Micros> schedule;  ///< Fixed law; cycled when shorter than count
  Range<std::int64_t> shots{1000, 1000};
  Range<double> min_fidelity{0.9, 0.9};
  std::optional<int> required_qubits;  ///< default: circuit width
  std::optional<Range<Micros>> max_wait;  ///< nullopt = unbounded
  Range<int> priority{0, 0};
  std::vector<std::string> tenants{"tenant0"};
  bool mitigate = true;
};

struct Scenario {
  std::optional<std::uint64_t> seed;
  std::vector<QpuDescriptor> fleet;
  std::vector<WorkloadTemplate> workload;
  std::vector<JobSpec> jobs;  ///< explicit jobs, in addition to the templates
  Policy policy = Policy::Sjf;
  SimConfig config;
};

// ---------------------------------------------------------------------------
// Topologies
// ---------------------------------------------------------------------------

inline std::vector<Edge> line_edges(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

inline std::vector<Edge> ring_edges(int n) {
  auto e = line_edges(n);
  if (n > 2) e.emplace_back(0, n - 1);
  return e;
}

inline std::vector<Edge> full_edges(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  }
  return e;
}

inline std::vector<Edge> star_edges(int n) {
  std::vector<Edge> e;
  for (int i = 1; i < n; ++i) e.emplace_back(0, i);
  return e;
}

inline std::vector<Edge> grid_edges(int rows, int cols) {
  std::vector<Edge> e;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int q = r * cols + c;
      if (c + 1 < cols) e.emplace_back(q, q + 1);
      if (r + 1 < rows) e.emplace_back(q, q + cols);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline void validate_scenario(const Scenario& s) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::ScenarioInvalid, msg); };
  if (!s.seed) fail("[config] seed: missing required key");
  if (s.fleet.empty()) fail("[fleet] at least one QPU is required");
  std::int64_t jobs = static_cast<std::int64_t>(s.jobs.size());
  for (const auto& t : s.workload) jobs += t.count;
  if (jobs == 0) fail("[workload] empty workload: at least one job is required");
  for (std::size_t i = 0; i < s.fleet.size(); ++i) {
    for (std::size_t j = i + 1; j < s.fleet.size(); ++j) {
      if (s.fleet[i].qpu_id == s.fleet[j].qpu_id) fail("[fleet] duplicate qpu id " + s.fleet[i].qpu_id);
    }
  }
  const auto& c = s.config;
  if (c.zne_lambdas.empty() || c.zne_lambdas.front() != 1.0) {
    fail("[config] zne_lambdas: must start with 1.0");
  }
  for (std::size_t i = 1; i < c.zne_lambdas.size(); ++i) {
    if (!(c.zne_lambdas[i] > c.zne_lambdas[i - 1])) fail("[config] zne_lambdas: must be strictly ascending");
  }
  if (c.poll_interval <= 0) fail("[config] poll_interval: must be positive");
  if (c.drift_interval <= 0) fail("[config] drift_interval: must be positive");
  if (c.recal_duration <= 0) fail("[config] recal_duration: must be positive");
  if (c.recal_interval < 0) fail("[config] recal_interval: must be >= 0");
  if (!(c.ema_beta > 0.0 && c.ema_beta <= 1.0)) fail("[config] ema_beta: must lie in (0,1]");
  if (c.aging_quantum <= 0) fail("[config] aging_quantum: must be positive");
  if (c.health_window == 0) fail("[config] health_window: must be positive");
  if (c.max_pending < 1) fail("[config] max_pending: must be positive");
  for (const auto& t : s.workload) {
    const std::string where = "[workload." + t.name + "] ";
    if (t.count < 0) fail(where + "count: must be >= 0");
    if (t.qubits < 1) fail(where + "qubits: must be positive");
    if (t.family == CircuitFamily::Qasm && t.qasm.empty()) fail(where + "qasm: required for family qasm");
    if (t.arrival == ArrivalLaw::Poisson && !(t.rate_per_s > 0)) fail(where + "rate: must be positive");
    if (t.arrival == ArrivalLaw::Fixed && t.schedule.empty() && t.count > 0) {
      fail(where + "schedule: fixed arrivals need at least one time");
    }
    if (t.shots.lo < 1 || t.shots.hi < t.shots.lo) fail(where + "shots: invalid range");
    if (t.tenants.empty()) fail(where + "tenants: at least one tenant");
  }
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace detail {

inline std::optional<QpuState> state_from_string(const std::string& s) {
  if (s == "online") return QpuState::Online;
  if (s == "offline") return QpuState::Offline;
  return std::nullopt;
}

/// Per-index overrides given as [[index, value], ...].
inline void apply_overrides(const config::Section& sec, const std::string& key, std::vector<double>& target) {
  const config::Value* v = sec.find(key);
  if (!v) return;
  if (v->kind != config::Value::Kind::Array) sec.fail(key, "expected [[index, value], ...]");
  for (const auto& item : v->items) {
    if (item.kind != config::Value::Kind::Array || item.items.size() != 2 ||
        item.items[0].kind != config::Value::Kind::Integer || !item.items[1].is_number()) {
      sec.fail(key, item.line, "expected [index, value]");
    }
    const auto idx = item.items[0].integer;
    if (idx < 0 || idx >= static_cast<std::int64_t>(target.size())) sec.fail(key, item.line, "index out of range");
    target[static_cast<std::size_t>(idx)] = item.items[1].as_double();
  }
}

inline QpuDescriptor load_qpu(const config::Section& sec) {
  const std::string id = sec.name().substr(std::string("fleet.").size());
  const auto n64 = sec.get_int("num_qubits");
  if (n64 < 1 || n64 > 1024) sec.fail("num_qubits", "must lie in 1..1024");
  const int n = static_cast<int>(n64);

  std::vector<Edge> edges;
  if (sec.has("edges")) {
    const config::Value& v = sec.require("edges");
    if (v.kind != config::Value::Kind::Array) sec.fail("edges", "expected [[a, b], ...]");
    for (const auto& item : v.items) {
      if (item.kind != config::Value::Kind::Array || item.items.size() != 2 ||
          item.items[0].kind != config::Value::Kind::Integer || item.items[1].kind != config::Value::Kind::Integer) {
        sec.fail("edges", item.line, "expected [a, b]");
      }
      edges.emplace_back(static_cast<int>(item.items[0].integer), static_cast<int>(item.items[1].integer));
    }
  } else {
    const std::string topo = sec.get_string("topology", "line");
    if (topo == "line") {
      edges = line_edges(n);
    } else if (topo == "ring") {
      edges = ring_edges(n);
    } else if (topo == "full") {
      edges = full_edges(n);
    } else if (topo == "star") {
      edges = star_edges(n);
    } else if (topo.rfind("grid", 0) == 0) {
      const auto rows = sec.get_int("grid_rows");
      if (rows < 1 || n % rows != 0) sec.fail("grid_rows", "must divide num_qubits");
      edges = grid_edges(static_cast<int>(rows), n / static_cast<int>(rows));
    } else {
      sec.fail("topology", "unknown topology '" + topo + "'");
    }
  }

  CouplingGraph graph;
  try {
    graph = CouplingGraph(n, edges);
  } catch (const Error& e) {
    sec.fail(sec.has("edges") ? "edges" : "topology", e.detail());
  }

  CalibrationData cal = CalibrationData::uniform(
      n, graph.edges().size(), sec.get_double("f1q", 0.999), sec.get_double("f2q", 0.99),
      sec.get_double("t1", 100.0), sec.get_double("t2", 80.0), sec.get_double("readout_eps0", 0.02),
      sec.get_double("readout_eps1", 0.02));
  cal.t_1q = sec.get_double("t_1q", 0.05);
  cal.t_2q = sec.get_double("t_2q", 0.3);
  cal.t_ro = sec.get_double("t_ro", 1.0);
  apply_overrides(sec, "f1q_qubits", cal.f1q);
  apply_overrides(sec, "t1_qubits", cal.t1);
  apply_overrides(sec, "t2_qubits", cal.t2);
  apply_overrides(sec, "eps0_qubits", cal.readout_eps0);
  apply_overrides(sec, "eps1_qubits", cal.readout_eps1);
  if (const config::Value* v = sec.find("f2q_edges")) {
    if (v->kind != config::Value::Kind::Array) sec.fail("f2q_edges", "expected [[a, b, f], ...]");
    for (const auto& item : v->items) {
      if (item.kind != config::Value::Kind::Array || item.items.size() != 3 || !item.items[2].is_number() ||
          item.items[0].kind != config::Value::Kind::Integer || item.items[1].kind != config::Value::Kind::Integer) {
        sec.fail("f2q_edges", item.line, "expected [a, b, f]");
      }
      const int a = static_cast<int>(item.items[0].integer);
      const int b = static_cast<int>(item.items[1].integer);
      if (a < 0 || b < 0 || a >= n || b >= n || !graph.adjacent(a, b)) {
        sec.fail("f2q_edges", item.line, "no such edge");
      }
      cal.f2q[static_cast<std::size_t>(graph.edge_index(a, b))] = item.items[2].as_double();
    }
  }
  QpuDescriptor d{id, std::move(graph), std::move(cal), QpuState::Online};
  try {
    validate_calibration(d.baseline, n, d.coupling.edges().size());
  } catch (const Error& e) {
    sec.fail("calibration", e.detail());
  }
  const std::string state = sec.get_string("state", "online");
  const auto st = state_from_string(state);
  if (!st) sec.fail("state", "expected online or offline");
  d.state = *st;
  sec.reject_unknown_keys();
  return d;
}

template <typename T>
Range<T> get_range(const config::Section& sec, const std::string& key, Range<T> fallback) {
  const config::Value* v = sec.find(key);
  if (!v) return fallback;
  auto scalar = [&](const config::Value& x) -> T {
    if constexpr (std::is_integral_v<T>) {
      if (x.kind != config::Value::Kind::Integer) sec.fail(key, x.line, "expected an integer");
      return static_cast<T>(x.integer);
    } else {
      if (!x.is_number()) sec.fail(key, x.line, "expected a number");
      return static_cast<T>(x.as_double());
    }
  };
  if (v->kind == config::Value::Kind::Array) {
    if (v->items.size() != 2) sec.fail(key, "expected a value or [min, max]");
    Range<T> r{scalar(v->items[0]), scalar(v->items[1])};
    if (r.hi < r.lo) sec.fail(key, "max below min");
    return r;
  }
  const T x = scalar(*v);
  return {x, x};
}

inline OutcomeDistribution load_distribution(const config::Section& sec, const std::string& key) {
  const config::Value& v = sec.require(key);
  if (v.kind != config::Value::Kind::Array) sec.fail(key, "expected [[\"bits\", p], ...]");
  OutcomeDistribution d;
  d.num_bits = -1;
  for (const auto& item : v.items) {
    if (item.kind != config::Value::Kind::Array || item.items.size() != 2 ||
        item.items[0].kind != config::Value::Kind::String || !item.items[1].is_number()) {
      sec.fail(key, item.line, "expected [\"bits\", p]");
    }
    const auto& bits = item.items[0].text;
    if (d.num_bits < 0) d.num_bits = static_cast<int>(bits.size());
    d.probabilities[bits] += item.items[1].as_double();
  }
  if (d.num_bits < 0) sec.fail(key, "empty distribution");
  const auto problem = distribution_problem(d);
  if (!problem.empty()) sec.fail(key, problem);
  return d;
}

inline WorkloadTemplate load_template(const config::Section& sec) {
  WorkloadTemplate t;
  t.name = sec.name() == "workload" ? "default" : sec.name().substr(std::string("workload.").size());
  const std::string family = sec.get_string("family", "ghz");
  if (family == "ghz") {
    t.family = CircuitFamily::Ghz;
  } else if (family == "random") {
    t.family = CircuitFamily::Random;
  } else if (family == "qasm") {
    t.family = CircuitFamily::Qasm;
    t.qasm = sec.get_string("qasm");
    if (sec.has("declared_ideal")) t.declared_ideal = load_distribution(sec, "declared_ideal");
  } else {
    sec.fail("family", "expected ghz, random or qasm");
  }
  if (t.family != CircuitFamily::Qasm) {
    t.qubits = static_cast<int>(sec.get_int("qubits", 2));
    if (t.qubits < 1 || t.qubits > kMaxMeasuredBits) sec.fail("qubits", "must lie in 1..16");
  }
  if (t.family == CircuitFamily::Random) {
    t.depth = static_cast<int>(sec.get_int("depth", 10));
    t.two_qubit_fraction = sec.get_double("two_qubit_fraction", 0.3);
    if (t.depth < 1) sec.fail("depth", "must be positive");
    if (t.two_qubit_fraction < 0 || t.two_qubit_fraction > 1) sec.fail("two_qubit_fraction", "must lie in [0,1]");
  }
  t.count = static_cast<int>(sec.get_int("count", 1));
  if (t.count < 0) sec.fail("count", "must be >= 0");
  const std::string arrival = sec.get_string("arrival", "fixed");
  if (arrival == "poisson") {
    t.arrival = ArrivalLaw::Poisson;
    t.rate_per_s = sec.get_double("rate");
    if (!(t.rate_per_s > 0)) sec.fail("rate", "must be positive");
    t.start = sec.get_int("start", 0);
  } else if (arrival == "fixed") {
    t.arrival = ArrivalLaw::Fixed;
    if (sec.has("schedule")) {
      for (double x : sec.get_doubles("schedule")) {
        if (x < 0 || x != std::floor(x)) sec.fail("schedule", "times must be non-negative integers (µs)");
        t.schedule.push_back(static_cast<Micros>(x));
      }
    } else {
      t.schedule = {sec.get_int("start", 0)};
    }
  } else {
    sec.fail("arrival", "expected poisson or fixed");
  }
  t.shots = get_range<std::int64_t>(sec, "shots", t.shots);
  if (t.shots.lo < 1) sec.fail("shots", "must be >= 1");
  t.min_fidelity = get_range<double>(sec, "min_fidelity", t.min_fidelity);
  if (sec.has("required_qubits")) t.required_qubits = static_cast<int>(sec.get_int("required_qubits"));
  if (sec.has("max_wait")) {
    const config::Value& v = sec.require("max_wait");
    if (!(v.kind == config::Value::Kind::String && v.text == "unbounded")) {
      t.max_wait = get_range<Micros>(sec, "max_wait", {});
      if (t.max_wait->lo < 0) sec.fail("max_wait", "must be >= 0");
    }
  }
  t.priority = get_range<int>(sec, "priority", t.priority);
  if (t.priority.lo < 0 || t.priority.hi > 9) sec.fail("priority", "must lie in 0..9");
  if (sec.has("tenants")) {
    const config::Value& v = sec.require("tenants");
    if (v.kind != config::Value::Kind::Array || v.items.empty()) sec.fail("tenants", "expected [\"name\", ...]");
    t.tenants.clear();
    for (const auto& item : v.items) {
      if (item.kind != config::Value::Kind::String) sec.fail("tenants", item.line, "expected a string");
      t.tenants.push_back(item.text);
    }
  }
  t.mitigate = sec.get_bool("mitigate", true);
  sec.reject_unknown_keys();
  return t;
}

inline void load_config(const config::Section& sec, Scenario& s) {
  const config::Value* seed = sec.find("seed");
  if (!seed) sec.fail("seed", "missing required key");
  if (seed->kind != config::Value::Kind::Integer || seed->integer < 0) sec.fail("seed", "expected a non-negative integer");
  s.seed = static_cast<std::uint64_t>(seed->integer);
  auto& c = s.config;
  c.coherence_factor = sec.get_double("coherence_factor", c.coherence_factor);
  c.ema_beta = sec.get_double("ema_beta", c.ema_beta);
  if (sec.has("zne_lambdas")) c.zne_lambdas = sec.get_doubles("zne_lambdas");
  c.recal_duration = sec.get_int("recal_duration", c.recal_duration);
  c.poll_interval = sec.get_int("poll_interval", c.poll_interval);
  c.drift_interval = sec.get_int("drift_interval", c.poll_interval);
  c.recal_interval = sec.get_int("recal_interval", c.recal_interval);
  c.drift.rate_per_ms = sec.get_double("drift_rate", c.drift.rate_per_ms);
  c.drift.sigma = sec.get_double("drift_sigma", c.drift.sigma);
  c.drift.floor = sec.get_double("fidelity_floor", c.drift.floor);
  c.drift.readout_rate_per_ms = sec.get_double("readout_drift_rate", c.drift.readout_rate_per_ms);
  c.drift.readout_sigma = sec.get_double("readout_drift_sigma", c.drift.readout_sigma);
  c.max_pending = static_cast<int>(sec.get_int("max_pending", c.max_pending));
  c.health_window = static_cast<std::size_t>(sec.get_int("health_window", static_cast<std::int64_t>(c.health_window)));
  c.health_min_observations = static_cast<std::size_t>(
      sec.get_int("health_min_observations", static_cast<std::int64_t>(c.health_min_observations)));
  c.flag_threshold = sec.get_double("flag_threshold", c.flag_threshold);
  c.aging_quantum = sec.get_int("aging_quantum", c.aging_quantum);
  c.trial_transpile = sec.get_bool("trial_transpile", c.trial_transpile);
  c.trial_cap = static_cast<std::size_t>(sec.get_int("trial_cap", static_cast<std::int64_t>(c.trial_cap)));
  sec.reject_unknown_keys();
}

}  // namespace detail

inline Scenario load_scenario_text(std::string_view text) {
  const config::Document doc = config::parse(text);
  Scenario s;
  if (!doc.root().keys().empty()) doc.root().fail(doc.root().keys().front(), "keys must live inside a section");
  for (const auto& sec : doc.sections) {
    const auto& name = sec.name();
    if (name.empty() || name == "config" || name == "policy" || name == "workload" || name == "quotas" ||
        name.rfind("fleet.", 0) == 0 || name.rfind("workload.", 0) == 0) {
      continue;
    }
    throw Error(ErrorCode::ScenarioInvalid, "[" + name + "] unknown section (line " + std::to_string(sec.line()) + ")");
  }
  const config::Section* cfg = doc.find("config");
  if (!cfg) throw Error(ErrorCode::ScenarioInvalid, "[config] seed: missing required section");
  detail::load_config(*cfg, s);
  if (const auto* quotas = doc.find("quotas")) {
    for (const auto& tenant : quotas->keys()) {
      const auto limit = quotas->get_int(tenant);
      if (limit < 1) quotas->fail(tenant, "quota must be positive");
      s.config.tenant_max_pending[tenant] = static_cast<int>(limit);
    }
  }
  if (const auto* pol = doc.find("policy")) {
    const std::string name = pol->get_string("name", "sjf");
    const auto p = policy_from_string(name);
    if (!p) pol->fail("name", "expected sjf, rr, bff or prio");
    s.policy = *p;
    pol->reject_unknown_keys();
  }
  for (const auto* sec : doc.children("fleet")) s.fleet.push_back(detail::load_qpu(*sec));
  std::sort(s.fleet.begin(), s.fleet.end(),
            [](const QpuDescriptor& a, const QpuDescriptor& b) { return a.qpu_id < b.qpu_id; });
  if (const auto* w = doc.find("workload")) s.workload.push_back(detail::load_template(*w));
  for (const auto* sec : doc.children("workload")) s.workload.push_back(detail::load_template(*sec));
  validate_scenario(s);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  try {
    return load_scenario_text(config::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

// ---------------------------------------------------------------------------
// Job files
// ---------------------------------------------------------------------------

/// Top-level keys job_id, tenant_id, shots, submit_time, mitigate and
/// qasm_source; a [constraints] section with the four JobConstraints fields;
/// an optional [declared_ideal] section mapping bitstrings to probabilities.
inline JobSpec load_job_text(std::string_view text) {
  const config::Document doc = config::parse(text);
  for (const auto& sec : doc.sections) {
    if (!sec.name().empty() && sec.name() != "constraints" && sec.name() != "declared_ideal") {
      throw Error(ErrorCode::ScenarioInvalid, "[" + sec.name() + "] unknown section");
    }
  }
  const auto& root = doc.root();
  JobSpec spec;
  spec.job_id = root.get_string("job_id");
  spec.tenant_id = root.get_string("tenant_id");
  spec.qasm_source = root.get_string("qasm_source");
  spec.shots = root.get_int("shots");
  spec.submit_time = root.get_int("submit_time", 0);
  spec.mitigate = root.get_bool("mitigate", true);
  root.reject_unknown_keys();

  const config::Section* c = doc.find("constraints");
  if (!c) throw Error(ErrorCode::ScenarioInvalid, "[constraints] missing required section");
  spec.constraints.min_two_qubit_fidelity = c->get_double("min_two_qubit_fidelity");
  spec.constraints.required_qubits = static_cast<int>(c->get_int("required_qubits"));
  const config::Value& wait = c->require("max_queue_wait");
  if (wait.kind == config::Value::Kind::String) {
    if (wait.text != "unbounded") c->fail("max_queue_wait", "expected microseconds or \"unbounded\"");
    spec.constraints.max_queue_wait = kUnbounded;
  } else {
    spec.constraints.max_queue_wait = c->get_int("max_queue_wait");
  }
  spec.constraints.priority = static_cast<int>(c->get_int("priority"));
  c->reject_unknown_keys();

  if (const config::Section* ideal = doc.find("declared_ideal")) {
    OutcomeDistribution d;
    d.num_bits = -1;
    for (const auto& key : ideal->keys()) {
      if (d.num_bits < 0) d.num_bits = static_cast<int>(key.size());
      d.probabilities[key] = ideal->get_double(key);
    }
    if (d.num_bits < 0) d.num_bits = 0;
    spec.declared_ideal = d;
  }
  return spec;
}

inline JobSpec load_job_file(const std::string& path) {
  try {
    return load_job_text(config::read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

}  // namespace qfs
