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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Tolerances are fixed here.

#include "qfs/executor.hpp"
#include "qfs/simkit/engine.hpp"
#include "qfs/simkit/export.hpp"
#include "qfs/simkit/scenario.hpp"
#include "qfs/simkit/validator.hpp"
#include "qfs/simkit/workload.hpp"
#include "qfs/transpiler.hpp"

#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

using namespace qfs;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

JobSpec make_job(const std::string& id, const std::string& qasm, int qubits, std::int64_t shots, Micros submit,
                 double min_fid, bool mitigate) {
  JobSpec s;
  s.job_id = id;
  s.tenant_id = "t";
  s.qasm_source = qasm;
  s.shots = shots;
  s.submit_time = submit;
  s.mitigate = mitigate;
  s.constraints = {min_fid, qubits, kUnbounded, 0};
  return s;
}

void still(Scenario& s) {
  s.config.drift.rate_per_ms = 0;
  s.config.drift.sigma = 0;
  s.config.drift.readout_rate_per_ms = 0;
  s.config.drift.readout_sigma = 0;
}

QpuDescriptor qpu_with(const std::string& id, int n, std::vector<Edge> edges, double f2q, double t1q, double t2q,
                       double tro) {
  auto q = testing::uniform_qpu(id, n, std::move(edges), f2q);
  q.baseline.t_1q = t1q;
  q.baseline.t_2q = t2q;
  q.baseline.t_ro = tro;
  return q;
}

// ---------------------------------------------------------------------------

Outcome sjf_optimality() {
  // Per-shot durations worked out by hand for t_1q = 1, t_2q = 2, t_ro = 3:
  // layer maxima h | cx | measure = 1 + 2 + 3, h | measure = 1 + 3,
  // cx | cx | measure = 2 + 2 + 3.
  struct Menu {
    std::string qasm;
    int qubits;
    std::int64_t per_shot;
  };
  const std::vector<Menu> menu{
      {ghz_qasm(2), 2, 6},
      {"OPENQASM 2.0; qreg q[1]; creg c[1]; h q[0]; measure q[0] -> c[0];", 1, 4},
      {"OPENQASM 2.0; qreg q[2]; creg c[2]; cx q[0],q[1]; cx q[1],q[0]; measure q[0] -> c[0]; measure q[1] -> c[1];",
       2, 7},
  };
  Rng rng(derive_seed(1, "acceptance", 1));
  int exact = 0;
  double worst_gap = 0.0;
  const int trials = 200;
  for (int t = 0; t < trials; ++t) {
    Scenario s;
    s.seed = 100 + static_cast<std::uint64_t>(t);
    s.policy = Policy::Sjf;
    s.fleet.push_back(qpu_with("solo", 2, {{0, 1}}, 0.99, 1, 2, 3));
    still(s);
    const int n = 1 + static_cast<int>(rng.below(6));
    std::vector<std::int64_t> busy;
    for (int k = 0; k < n; ++k) {
      const Menu& m = menu[rng.below(menu.size())];
      const std::int64_t shots = 1 + static_cast<std::int64_t>(rng.below(50));
      s.jobs.push_back(make_job("job" + std::to_string(k), m.qasm, m.qubits, shots, 0, 0.9, false));
      busy.push_back(shots * m.per_shot);
    }
    const RunLog log = run(s);
    double sim = 0.0;
    for (const auto& m : log.jobs) sim += static_cast<double>(m.wait_time);
    sim /= n;

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    double best = 1e300;
    do {
      double acc = 0.0, total = 0.0;
      for (int idx : order) {
        total += acc;
        acc += static_cast<double>(busy[static_cast<std::size_t>(idx)]);
      }
      best = std::min(best, total / n);
    } while (std::next_permutation(order.begin(), order.end()));
    if (sim == best) ++exact;
    worst_gap = std::max(worst_gap, std::abs(sim - best));
  }
  return {exact == trials, fmt("%d/%d workloads at the permutation minimum, worst gap %.3g us", exact, trials,
                               worst_gap)};
}

// ---------------------------------------------------------------------------

TranspileResult bell_routing(double fidelity) {
  TranspileResult tr;
  tr.physical = parse_qasm(ghz_qasm(2));
  tr.predicted_fidelity = fidelity;
  return tr;
}

Outcome zne_recovery() {
  const auto cal = CalibrationData::uniform(2, 1, 1, 1, 100, 80, 0, 0);
  const TranspileResult tr = bell_routing(0.8);
  JobSpec spec = make_job("ghz2", ghz_qasm(2), 2, 100000, 0, 0.9, true);
  spec.declared_ideal = ghz_ideal(2);
  ScheduleDecision d{"ghz2", "q", "sjf", 0, 1, 0.8, 0};
  int within = 0;
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(derive_seed(2026, "execution", trial));
    std::vector<ExecutionRecord> recs;
    for (double lambda : {1.0, 3.0}) {
      recs.push_back(execute(d, tr, spec, lambda, {QpuState::Online, false, &cal}, rng, 0, 1));
    }
    const auto res = collect_results(recs, cal, true);
    const double err = std::abs(*res.zne_estimate - 1.0);
    worst = std::max(worst, err);
    if (err <= 0.02) ++within;
  }
  return {within >= 95, fmt("%d/100 trials within 0.02 (need 95), worst error %.4f", within, worst)};
}

// ---------------------------------------------------------------------------

Outcome readout_mitigation() {
  const auto cal = CalibrationData::uniform(2, 1, 1, 1, 100, 80, 0.1, 0.1);
  const TranspileResult tr = bell_routing(1.0);
  JobSpec spec = make_job("ro", ghz_qasm(2), 2, 100000, 0, 0.9, true);
  spec.declared_ideal = ghz_ideal(2);
  ScheduleDecision d{"ro", "q", "sjf", 0, 1, 1.0, 0};
  Rng rng(derive_seed(2026, "execution", fnv1a64("ro")));
  const auto rec = execute(d, tr, spec, 1.0, {QpuState::Online, false, &cal}, rng, 0, 1);
  const double raw_tv = total_variation(empirical(rec.raw_counts, 2), ghz_ideal(2));
  const double tv = total_variation(mitigate_readout(rec, cal).mitigated_distribution, ghz_ideal(2));
  return {tv <= 0.02 && raw_tv >= 0.08, fmt("mitigated TV %.4f (limit 0.02), unmitigated TV %.4f (expect >= 0.08)",
                                            tv, raw_tv)};
}

// ---------------------------------------------------------------------------

Outcome routing_oracle() {
  bool paths_ok = true;
  std::string path_detail;
  for (int n = 3; n <= 10; ++n) {
    const CouplingGraph g(n, testing::path_edges(n));
    const auto cal = CalibrationData::uniform(n, static_cast<std::size_t>(n - 1), 1, 0.99, 100, 80, 0, 0);
    Circuit c;
    c.num_qubits = 2;
    c.gates.push_back(Gate::two(GateKind::Cx, 0, 1));
    const auto r = route(c, Layout{{0, n - 1}}, g, cal);
    if (r.swap_count != n - 2) {
      paths_ok = false;
      path_detail += fmt(" P%d:%d", n, r.swap_count);
    }
  }
  Rng rng(derive_seed(4, "acceptance", 4));
  std::int64_t gates = 0, legal = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(rng.below(10));
    const auto edges = testing::random_connected_edges(rng, n, 0.1);
    const auto qpu = testing::uniform_qpu("r", n, edges, 0.99);
    const Circuit c = testing::random_circuit(rng, n, 60);
    const auto r = transpile(c, qpu, qpu.baseline);
    for (const Gate& g : r.physical.gates) {
      if (!is_two_qubit(g.kind)) continue;
      ++gates;
      if (qpu.coupling.adjacent(g.qubits[0], g.qubits[1])) ++legal;
    }
  }
  const bool ok = paths_ok && legal == gates;
  return {ok, fmt("paths P3..P10 %s%s; %lld/%lld routed 2q gates on edges over 50 topologies",
                  paths_ok ? "all n-2 swaps" : "mismatch:", path_detail.c_str(), static_cast<long long>(legal),
                  static_cast<long long>(gates))};
}

// ---------------------------------------------------------------------------

WorkloadTemplate random_template(const std::string& name, int qubits, int depth, int count, double rate) {
  WorkloadTemplate t;
  t.name = name;
  t.family = CircuitFamily::Random;
  t.qubits = qubits;
  t.depth = depth;
  t.two_qubit_fraction = 0.35;
  t.count = count;
  t.arrival = ArrivalLaw::Poisson;
  t.rate_per_s = rate;
  t.shots = {50, 300};
  t.priority = {0, 9};
  t.tenants = {"ana", "ben", "cho", "dev"};
  return t;
}

/// Four drifting devices and a mixed random workload of `jobs` jobs.
Scenario drifting_fleet(int jobs, std::uint64_t seed) {
  Scenario s;
  s.seed = seed;
  auto line = testing::uniform_qpu("line5", 5, line_edges(5), 0.985, 0.02, 0.999);
  auto ring = testing::uniform_qpu("ring6", 6, ring_edges(6), 0.99, 0.015, 0.999);
  auto grid = testing::uniform_qpu("grid8", 8, grid_edges(2, 4), 0.995, 0.01, 0.9995);
  auto full = testing::uniform_qpu("full4", 4, full_edges(4), 0.999, 0.01, 0.9999);
  s.fleet = {full, grid, line, ring};
  s.config.drift.rate_per_ms = 2e-5;
  s.config.drift.sigma = 2e-4;
  s.config.drift.readout_rate_per_ms = 1e-5;
  s.config.max_pending = 100000;

  auto ghz = random_template("ghz", 3, 0, jobs * 4 / 10, 800);
  ghz.family = CircuitFamily::Ghz;
  ghz.min_fidelity = {0.95, 0.998};
  auto mid = random_template("mid", 4, 12, jobs * 4 / 10, 800);
  mid.min_fidelity = {0.95, 0.995};
  auto wide = random_template("wide", 6, 10, jobs - ghz.count - mid.count, 400);
  wide.min_fidelity = {0.95, 0.99};
  wide.max_wait = Range<Micros>{2000, 60000};
  s.workload = {ghz, mid, wide};
  return s;
}

Outcome constraint_safety() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (Policy p : {Policy::Sjf, Policy::RoundRobin, Policy::BestFit, Policy::PriorityAging}) {
    Scenario s = drifting_fleet(10000, 55);
    s.policy = p;
    const RunLog log = run(s);
    const LogCheck c = validate_log_text(events_jsonl(log));
    ok = ok && c.ok() && c.feasibility_violations == 0 && c.overlap_violations == 0 && c.arrivals + c.rejections == 10000;
    detail += fmt("%s: %lld starts, %lld cancelled, %lld rejected, %zu violations; ", std::string(to_string(p)).c_str(),
                  static_cast<long long>(c.starts), static_cast<long long>(c.cancellations),
                  static_cast<long long>(c.rejections), c.violations.size());
    if (!c.ok()) detail += "first: " + c.violations.front() + "; ";
  }
  detail += fmt("%.1fs", seconds_since(t0));
  return {ok, detail};
}

// ---------------------------------------------------------------------------

Scenario best_fit_scenario(Policy p) {
  Scenario s;
  s.seed = 66;
  s.policy = p;
  s.fleet = {testing::uniform_qpu("common", 3, line_edges(3), 0.985),
             testing::uniform_qpu("premium", 3, line_edges(3), 0.999)};
  still(s);
  s.config.poll_interval = 100000;
  s.config.drift_interval = 100000;
  WorkloadTemplate low;
  low.name = "low";
  low.family = CircuitFamily::Ghz;
  low.qubits = 2;
  low.count = 1800;
  low.arrival = ArrivalLaw::Poisson;
  low.rate_per_s = 9;
  low.shots = {1000, 1000};
  low.min_fidelity = {0.97, 0.97};
  WorkloadTemplate high = low;
  high.name = "high";
  high.count = 200;
  high.rate_per_s = 1;
  high.min_fidelity = {0.995, 0.995};
  s.workload = {low, high};
  return s;
}

Outcome best_fit_conservation() {
  const RunLog bff = run(best_fit_scenario(Policy::BestFit));
  const RunLog sjf = run(best_fit_scenario(Policy::Sjf));
  const auto jobs = materialize_jobs(best_fit_scenario(Policy::BestFit));
  std::set<std::string> high_ids;
  for (const auto& j : jobs) {
    if (j.constraints.min_two_qubit_fidelity > 0.99) high_ids.insert(j.job_id);
  }
  auto tally = [&](const RunLog& log, std::int64_t& low_total, std::int64_t& low_common, double& high_wait) {
    std::int64_t high_n = 0;
    high_wait = 0.0;
    for (const auto& m : log.jobs) {
      if (m.status != JobStatus::Completed) continue;
      if (high_ids.count(m.job_id)) {
        high_wait += static_cast<double>(m.wait_time);
        ++high_n;
      } else {
        ++low_total;
        if (m.qpu_id == "common") ++low_common;
      }
    }
    if (high_n) high_wait /= static_cast<double>(high_n);
  };
  std::int64_t bt = 0, bc = 0, st = 0, sc = 0;
  double bw = 0, sw = 0;
  tally(bff, bt, bc, bw);
  tally(sjf, st, sc, sw);
  const double share = bt ? static_cast<double>(bc) / static_cast<double>(bt) : 0.0;
  const bool ok = share >= 0.95 && bw <= sw && bt > 0;
  return {ok, fmt("bff sends %.1f%% of low jobs to the 0.985 device (need 95%%); high-requirement mean wait "
                  "bff %.1f us vs sjf %.1f us (sjf sends %.1f%% low to 0.985)",
                  100 * share, bw, sw, st ? 100.0 * static_cast<double>(sc) / static_cast<double>(st) : 0.0)};
}

// ---------------------------------------------------------------------------

std::map<std::string, std::set<std::string>> payload_schema(const RunLog& log) {
  std::map<std::string, std::set<std::string>> schema;
  for (const auto& e : log.events) {
    auto& keys = schema[e.kind];
    for (const auto& [k, v] : e.payload.items()) keys.insert(k);
  }
  return schema;
}

Outcome determinism() {
  Scenario base = load_scenario(QFS_DOCS_DIR "/example_scenario.toml");
  Scenario other = base;
  other.seed = *base.seed + 1;
  Scenario fleet = drifting_fleet(2000, 7);
  const std::string a = events_jsonl(run(base));
  const std::string b = events_jsonl(run(base));
  const std::string fa = events_jsonl(run(fleet));
  const std::string fb = events_jsonl(run(fleet));
  const RunLog l1 = run(base);
  const RunLog l2 = run(other);

  std::set<std::string> d1, d2;
  for (const auto& e : l1.events) {
    if (e.kind == "JobComplete") d1.insert(e.payload.at("counts_digest").get<std::string>());
  }
  for (const auto& e : l2.events) {
    if (e.kind == "JobComplete") d2.insert(e.payload.at("counts_digest").get<std::string>());
  }
  const bool counts_changed = d1 != d2 && results_jsonl(l1) != results_jsonl(l2);
  const bool still_valid = validate_log_text(events_jsonl(l2)).ok() && validate_log_text(a).ok();
  auto s1 = payload_schema(l1);
  auto s2 = payload_schema(l2);
  bool same_schema = true;
  for (const auto& [kind, keys] : s2) {
    if (s1.count(kind) && s1[kind] != keys) same_schema = false;
  }
  const bool ok = a == b && fa == fb && counts_changed && still_valid && same_schema;
  return {ok, fmt("replay identical: example %s, fleet %s (%zu bytes); new seed changes counts %s, "
                  "validator %s, payload keys %s",
                  a == b ? "yes" : "no", fa == fb ? "yes" : "no", fa.size(), counts_changed ? "yes" : "no",
                  still_valid ? "ok" : "FAILED", same_schema ? "unchanged" : "changed")};
}

// ---------------------------------------------------------------------------

Outcome estimator_convergence() {
  // One device, one circuit class, jobs run one at a time. The first job
  // runs a single shot, whose busy time rounds up to a whole microsecond;
  // the other 19 run 1000 shots at a constant per-shot duration.
  Scenario s;
  s.seed = 8;
  s.fleet.push_back(testing::uniform_qpu("solo", 2, {{0, 1}}, 0.99));
  still(s);
  s.config.ema_beta = 0.2;
  for (int k = 0; k < 20; ++k) {
    s.jobs.push_back(make_job(fmt("e%02d", k), ghz_qasm(2), 2, k == 0 ? 1 : 1000, static_cast<Micros>(k) * 100000,
                              0.9, true));
  }
  const RunLog log = run(s);

  std::vector<double> observed;
  std::vector<std::int64_t> shots;
  for (const auto& e : log.events) {
    if (e.kind != "JobComplete") continue;
    const auto id = e.payload.at("job_id").get<std::string>();
    const std::int64_t n = id == "e00" ? 1 : 1000;
    observed.push_back(static_cast<double>(e.payload.at("exec_time").get<std::int64_t>()) / (2.0 * n));
  }
  if (observed.size() != 20) return {false, fmt("%zu of 20 jobs completed", observed.size())};
  const double d = observed.back();
  for (std::size_t k = 1; k < observed.size(); ++k) {
    if (observed[k] != d) return {false, "later jobs did not share one per-shot duration"};
  }
  const double initial = std::abs(observed.front() - d);
  if (initial == 0.0) return {false, "first observation matched the steady state; the check would be vacuous"};
  if (log.estimator.cells().size() != 1) return {false, "expected a single estimator cell"};
  const double ema = log.estimator.cells().begin()->second.ema;
  const double ratio = std::abs(ema - d) / initial;
  const double bound = std::pow(0.8, 19);
  const bool ok = std::abs(ratio - bound) <= 1e-9 * bound && log.estimator.cells().begin()->second.observations == 20;
  return {ok, fmt("initial error %.4f us/shot, error ratio after 20 completions %.12e vs 0.8^19 = %.12e", initial, ratio,
                  bound)};
}

// ---------------------------------------------------------------------------

Outcome desk_scale() {
  Scenario s = drifting_fleet(10000, 99);
  s.fleet.push_back(testing::uniform_qpu("grid9", 9, grid_edges(3, 3), 0.993, 0.012, 0.999));
  s.fleet.push_back(testing::uniform_qpu("line7", 7, line_edges(7), 0.988, 0.02, 0.999));
  s.fleet.push_back(testing::uniform_qpu("ring8", 8, ring_edges(8), 0.991, 0.015, 0.999));
  s.fleet.push_back(testing::uniform_qpu("star5", 5, star_edges(5), 0.997, 0.01, 0.9995));
  std::sort(s.fleet.begin(), s.fleet.end(),
            [](const QpuDescriptor& a, const QpuDescriptor& b) { return a.qpu_id < b.qpu_id; });
  const auto dir = std::filesystem::temp_directory_path() / "qfs_acceptance_desk";
  std::filesystem::remove_all(dir);
  const auto t0 = Clock::now();
  const RunLog log = run(s);
  export_run(log, dir);
  const double secs = seconds_since(t0);
  const bool files = std::filesystem::file_size(dir / "events.jsonl") > 0 &&
                     std::filesystem::file_size(dir / "jobs.csv") > 0;
  std::filesystem::remove_all(dir);
  return {secs < 60.0 && files && log.jobs.size() == 10000 && s.fleet.size() == 8,
          fmt("10000 jobs on %zu QPUs, %zu events, simulate+export %.2fs (limit 60s)", s.fleet.size(),
              log.events.size(), secs)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> all{
      {1, "sjf-optimality", sjf_optimality},
      {2, "zne-recovery", zne_recovery},
      {3, "readout-mitigation", readout_mitigation},
      {4, "routing-oracle", routing_oracle},
      {5, "constraint-safety", constraint_safety},
      {6, "best-fit-conservation", best_fit_conservation},
      {7, "determinism-replay", determinism},
      {8, "estimator-convergence", estimator_convergence},
      {9, "desk-scale-performance", desk_scale},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
