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
 * @file engine.hpp
 * @brief Discrete-event engine wiring gateway, monitor, scheduler,
 *        transpiler, executor and QoS feedback into one pipeline.
 *
 * Events at the same timestamp are processed as a batch; one scheduling pass
 * runs after any batch that contained an arrival, completion, recalibration
 * end or queue deadline. Within a timestamp, drift precedes polling, which
 * precedes recalibration ends, completions, arrivals and deadlines.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/executor.hpp"
#include "qfs/fleet.hpp"
#include "qfs/gateway.hpp"
#include "qfs/qos.hpp"
#include "qfs/scheduler.hpp"
#include "qfs/simkit/scenario.hpp"
#include "qfs/simkit/workload.hpp"
#include "qfs/transpiler.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace qfs {

using Json = nlohmann::ordered_json;

struct LogEvent {
  std::int64_t seq = 0;
  Micros time = 0;
  std::string kind;
  Json payload;
};

struct JobResult {
  std::string job_id;
  std::string qpu_id;
  std::vector<ExecutionRecord> records;  ///< ascending noise factor
  MitigatedResult mitigated;
};

struct RunLog {
  std::string policy;
  std::uint64_t seed = 0;
  std::vector<LogEvent> events;
  std::vector<JobMetrics> jobs;     ///< submission order
  std::vector<JobResult> results;   ///< completion order
  SummaryReport summary;
  EstimatorState estimator;
};

inline Json snapshot_json(const CalibrationSnapshot& s) {
  Json j;
  j["qpu_id"] = s.qpu_id;
  j["time"] = s.time;
  j["state"] = std::string(to_string(s.state));
  j["num_qubits"] = s.num_qubits;
  j["mean_f2q"] = s.mean_f2q;
  return j;
}

/// Canonical digest of a histogram, so the event log changes with the counts
/// without carrying them.
inline std::string counts_digest(const Counts& counts) {
  std::string canon;
  for (const auto& [k, n] : counts) canon += k + ":" + std::to_string(n) + ";";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canon)));
  return buf;
}

class Simulation {
 public:
  explicit Simulation(Scenario scenario) : sc_(std::move(scenario)) { validate_scenario(sc_); }

  RunLog run() {
    init();
    while (terminal_ < jobs_.size()) {
      if (queue_.empty()) throw Error(ErrorCode::InvalidArgument, "event queue drained with live jobs");
      const Micros now = queue_.top().time;
      bool pass = false;
      while (!queue_.empty() && queue_.top().time == now) {
        const Pending ev = queue_.top();
        queue_.pop();
        pass = dispatch(ev) || pass;
      }
      if (pass) schedule(now);
    }
    finish();
    return std::move(log_);
  }

 private:
  enum class Kind { Drift, Poll, RecalEnd, Complete, Arrival, Deadline, PeriodicRecal };

  struct Pending {
    Micros time;
    Kind kind;
    std::uint64_t order;
    std::size_t index;

    bool operator>(const Pending& o) const {
      if (time != o.time) return time > o.time;
      if (kind != o.kind) return kind > o.kind;
      return order > o.order;
    }
  };

  struct Running {
    QueueEntry entry;
    TranspileResult transpiled;
    ScheduleDecision decision;
    CalibrationData calibration;  ///< live calibration at start
    std::vector<ExecutionRecord> records;
    Micros snapshot_time = 0;
  };

  struct Device {
    Qpu qpu;
    Rng drift_rng;
    QpuHealth health;
    std::optional<Running> running;
    std::optional<std::string> pending_recal;  ///< reason, started when idle
    Micros busy_time = 0;
  };

  // ---- setup ---------------------------------------------------------------

  void init() {
    const std::uint64_t seed = *sc_.seed;
    const auto& c = sc_.config;
    log_.policy = std::string(to_string(sc_.policy));
    log_.seed = seed;
    log_.estimator = EstimatorState(c.ema_beta);
    scheduler_ = Scheduler(sc_.policy, c.aging_quantum);
    nominal_ = fleet_nominal(sc_.fleet, c.coherence_factor);
    lambdas_ = c.zne_lambdas;

    std::vector<DeviceCapability> caps;
    for (const auto& d : sc_.fleet) {
      devices_.push_back(Device{Qpu(d), Rng(derive_seed(seed, "drift", fnv1a64(d.qpu_id))),
                                QpuHealth{d.qpu_id, c.health_window, {}, false}, std::nullopt, std::nullopt, 0});
      if (d.state != QpuState::Offline) caps.push_back({d.num_qubits(), mean_two_qubit_fidelity(d.baseline)});
      durations_.t_1q = std::max(durations_.t_1q, d.baseline.t_1q);
      durations_.t_2q = std::max(durations_.t_2q, d.baseline.t_2q);
      durations_.t_ro = std::max(durations_.t_ro, d.baseline.t_ro);
    }
    gateway_ = Gateway(c.max_pending, c.tenant_max_pending, caps);

    jobs_ = materialize_jobs(sc_);
    log_.jobs.resize(jobs_.size());
    for (std::size_t i = 0; i < jobs_.size(); ++i) {
      log_.jobs[i].job_id = jobs_[i].job_id;
      log_.jobs[i].tenant_id = jobs_[i].tenant_id;
      log_.jobs[i].submit_time = jobs_[i].submit_time;
      index_of_.emplace(jobs_[i].job_id, i);  // the gateway rejects later duplicates
    }

    Json polled = Json::array();
    for (auto& d : devices_) polled.push_back(snapshot_json(monitor_.publish(d.qpu.poll(0))));
    emit(0, "MonitorPoll", Json{{"snapshots", polled}});

    for (std::size_t i = 0; i < jobs_.size(); ++i) push(jobs_[i].submit_time, Kind::Arrival, i);
    push(c.drift_interval, Kind::Drift, 0);
    push(c.poll_interval, Kind::Poll, 0);
    if (c.recal_interval > 0) push(c.recal_interval, Kind::PeriodicRecal, 0);
  }

  void push(Micros t, Kind k, std::size_t index) { queue_.push(Pending{t, k, order_++, index}); }

  void emit(Micros t, std::string kind, Json payload) {
    log_.events.push_back(
        LogEvent{static_cast<std::int64_t>(log_.events.size()), t, std::move(kind), std::move(payload)});
    clock_ = t;
  }

  // ---- dispatch ------------------------------------------------------------

  /// Returns true when the event should trigger a scheduling pass.
  bool dispatch(const Pending& ev) {
    switch (ev.kind) {
      case Kind::Drift: on_drift(ev.time); return false;
      case Kind::Poll: on_poll(ev.time); return false;
      case Kind::RecalEnd: on_recal_end(ev.time, ev.index); return true;
      case Kind::Complete: on_complete(ev.time, ev.index); return true;
      case Kind::Arrival: on_arrival(ev.time, ev.index); return true;
      case Kind::Deadline: return queued_.count(jobs_[ev.index].job_id) > 0;
      case Kind::PeriodicRecal:
        for (std::size_t i = 0; i < devices_.size(); ++i) request_recal(ev.time, i, "periodic");
        push(ev.time + sc_.config.recal_interval, Kind::PeriodicRecal, 0);
        return false;
    }
    return false;
  }

  void on_drift(Micros now) {
    const Micros dt = sc_.config.drift_interval;
    for (auto& d : devices_) d.qpu.drift_step(dt, sc_.config.drift, d.drift_rng);
    emit(now, "DriftStep", Json{{"dt", dt}});
    push(now + dt, Kind::Drift, 0);
  }

  void on_poll(Micros now) {
    Json polled = Json::array();
    for (auto& d : devices_) polled.push_back(snapshot_json(monitor_.publish(d.qpu.poll(now))));
    emit(now, "MonitorPoll", Json{{"snapshots", polled}});
    push(now + sc_.config.poll_interval, Kind::Poll, 0);
  }

  void on_arrival(Micros now, std::size_t i) {
    const JobSpec& spec = jobs_[i];
    JobMetrics& m = log_.jobs[i];
    const auto outcome = gateway_.submit(spec);
    if (!outcome.admission.admitted) {
      m.status = JobStatus::Rejected;
      m.reason = std::string(to_string(*outcome.admission.error));
      ++terminal_;
      emit(now, "JobRejected",
           Json{{"job_id", spec.job_id},
                {"tenant_id", spec.tenant_id},
                {"error", m.reason},
                {"detail", outcome.admission.detail}});
      return;
    }
    QueueEntry e;
    e.spec = std::make_shared<const JobSpec>(spec);
    e.circuit = std::make_shared<const Circuit>(*outcome.report.circuit);
    e.profile = profile(*e.circuit, durations_);
    tag(e.profile, spec.constraints.min_two_qubit_fidelity, nominal_);
    e.enqueue_time = outcome.admission.enqueue_time;
    e.estimated_duration = estimate_busy(e);
    e.effective_priority = spec.constraints.priority;

    Json tags = Json::array();
    for (const auto& t : e.profile.tags) tags.push_back(t);
    Json p;
    p["job_id"] = spec.job_id;
    p["tenant_id"] = spec.tenant_id;
    p["shots"] = spec.shots;
    p["required_qubits"] = spec.constraints.required_qubits;
    p["min_two_qubit_fidelity"] = spec.constraints.min_two_qubit_fidelity;
    p["max_queue_wait"] =
        spec.constraints.max_queue_wait == kUnbounded ? Json(nullptr) : Json(spec.constraints.max_queue_wait);
    p["priority"] = spec.constraints.priority;
    p["depth"] = e.profile.depth;
    p["two_qubit_gates"] = e.profile.two_qubit_gate_count;
    p["estimated_duration"] = e.estimated_duration;
    p["tags"] = tags;
    emit(now, "JobArrival", std::move(p));

    if (spec.constraints.max_queue_wait != kUnbounded) {
      push(e.enqueue_time + spec.constraints.max_queue_wait + 1, Kind::Deadline, i);
    }
    queued_.insert(spec.job_id);
    scheduler_.enqueue(std::move(e));
  }

  std::size_t noise_levels(const JobSpec& spec) const { return spec.mitigate ? lambdas_.size() : 1; }

  static Micros busy_for(double per_shot, std::int64_t shots, std::size_t levels) {
    const auto one = static_cast<Micros>(std::ceil(per_shot * static_cast<double>(shots)));
    return static_cast<Micros>(levels) * std::max<Micros>(1, one);
  }

  Micros estimate_busy(const QueueEntry& e) const {
    const double per_shot =
        log_.estimator
            .best_estimate(pow2_bucket(e.profile.depth), pow2_bucket(e.profile.two_qubit_gate_count))
            .value_or(e.profile.estimated_duration);
    return busy_for(per_shot, e.spec->shots, noise_levels(*e.spec));
  }

  // ---- scheduling ----------------------------------------------------------

  std::vector<QpuSlot> slots() const {
    std::vector<QpuSlot> out;
    out.reserve(devices_.size());
    for (const auto& d : devices_) {
      out.push_back(QpuSlot{monitor_.latest(d.qpu.id()), d.running.has_value() || d.pending_recal.has_value()});
    }
    return out;
  }

  void schedule(Micros now) {
    for (const auto& id : expire_stale(scheduler_.queue(), now)) cancel(now, id);

    std::optional<TranspileResult> placed;
    std::size_t placed_slot = 0;
    std::vector<QpuSlot> current;
    const Placer placer = [&](const QueueEntry& e, std::span<const std::size_t> feasible) {
      placed.reset();
      if (!sc_.config.trial_transpile) return place_lowest_id(e, feasible);
      if (feasible.size() > sc_.config.trial_cap) {
        std::size_t best = feasible.front();
        for (std::size_t s : feasible) {
          if (current[s].snapshot->mean_f2q > current[best].snapshot->mean_f2q) best = s;
        }
        return best;
      }
      std::vector<TrialCandidate> cands;
      for (std::size_t s : feasible) {
        cands.push_back({&devices_[s].qpu.descriptor(), &current[s].snapshot->calibration});
      }
      auto ranked = trial_transpile(*e.circuit, cands);
      for (std::size_t s : feasible) {
        if (devices_[s].qpu.id() == ranked.front().qpu_id) {
          placed = std::move(ranked.front().result);
          placed_slot = s;
          return s;
        }
      }
      return feasible.front();
    };

    for (;;) {
      current = slots();
      const auto sel = scheduler_.select(now, current, placer);
      if (!sel) break;
      QueueEntry entry = scheduler_.take(sel->entry);
      std::optional<TranspileResult> tr;
      if (placed && placed_slot == sel->slot) tr = std::move(placed);
      placed.reset();
      start(now, std::move(entry), sel->slot, std::move(tr));
    }
    relieve_starvation(now);
  }

  void start(Micros now, QueueEntry entry, std::size_t slot, std::optional<TranspileResult> tr) {
    Device& d = devices_[slot];
    const CalibrationSnapshot& snap = *monitor_.latest(d.qpu.id());
    if (!tr) tr = transpile(*entry.circuit, d.qpu.descriptor(), snap.calibration);
    const JobSpec& spec = *entry.spec;
    const std::size_t levels = noise_levels(spec);
    const Micros total = busy_for(tr->predicted_duration, spec.shots, levels);
    const Micros per_level = total / static_cast<Micros>(levels);

    Running r;
    r.decision = ScheduleDecision{spec.job_id, d.qpu.id(), log_.policy, now, total, tr->predicted_fidelity,
                                  tr->swap_count};
    r.calibration = d.qpu.calibration();
    r.snapshot_time = snap.time;
    Rng rng(derive_seed(log_.seed, "execution", fnv1a64(spec.job_id)));
    const ExecutionTarget target{d.qpu.state(), false, &r.calibration};
    for (std::size_t k = 0; k < levels; ++k) {
      r.records.push_back(execute(r.decision, *tr, spec, lambdas_[k], target, rng,
                                  now + static_cast<Micros>(k) * per_level, per_level));
    }

    Json lambdas = Json::array();
    for (std::size_t k = 0; k < levels; ++k) lambdas.push_back(lambdas_[k]);
    Json p;
    p["job_id"] = spec.job_id;
    p["qpu_id"] = d.qpu.id();
    p["policy"] = log_.policy;
    p["predicted_duration"] = total;
    p["predicted_fidelity"] = tr->predicted_fidelity;
    p["swap_overhead"] = tr->swap_count;
    p["noise_factors"] = lambdas;
    p["snapshot_time"] = snap.time;
    p["snapshot_age"] = now - snap.time;
    p["snapshot_mean_f2q"] = snap.mean_f2q;
    emit(now, "JobStart", std::move(p));

    r.entry = std::move(entry);
    r.transpiled = std::move(*tr);
    queued_.erase(spec.job_id);
    gateway_.release(spec.tenant_id);
    d.running = std::move(r);
    push(now + total, Kind::Complete, slot);
  }

  void cancel(Micros now, const std::string& job_id) {
    const std::size_t i = index_of_.at(job_id);
    JobMetrics& m = log_.jobs[i];
    m.status = JobStatus::Cancelled;
    m.reason = "WaitExceeded";
    m.wait_time = now - jobs_[i].submit_time;
    queued_.erase(job_id);
    gateway_.release(jobs_[i].tenant_id);
    ++terminal_;
    emit(now, "JobCancelled", Json{{"job_id", job_id}, {"reason", m.reason}, {"waited", m.wait_time}});
  }

  /// A queued job that no current snapshot can serve, while some idle device
  /// would serve it at baseline, gets that device recalibrated.
  void relieve_starvation(Micros now) {
    const auto& queue = scheduler_.queue();
    if (queue.empty()) return;
    std::vector<std::size_t> order(queue.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return fifo_before(queue[a], queue[b]); });
    for (std::size_t qi : order) {
      const JobConstraints& c = queue[qi].constraints();
      bool servable = false;
      std::optional<std::size_t> candidate;
      for (std::size_t s = 0; s < devices_.size(); ++s) {
        const Device& d = devices_[s];
        const CalibrationSnapshot& snap = *monitor_.latest(d.qpu.id());
        const bool fits_baseline = d.qpu.descriptor().num_qubits() >= c.required_qubits &&
                                   mean_two_qubit_fidelity(d.qpu.descriptor().baseline) >= c.min_two_qubit_fidelity;
        if (snap.state == QpuState::Online && snap.num_qubits >= c.required_qubits &&
            snap.mean_f2q >= c.min_two_qubit_fidelity) {
          servable = true;
          break;
        }
        if (!fits_baseline) continue;
        if (d.qpu.state() == QpuState::Recalibrating || d.pending_recal) {
          servable = true;
          break;
        }
        if (d.qpu.state() == QpuState::Online && !d.running && !candidate) candidate = s;
      }
      if (!servable && candidate) request_recal(now, *candidate, "starvation");
    }
  }

  // ---- completion and feedback --------------------------------------------

  void on_complete(Micros now, std::size_t slot) {
    Device& d = devices_[slot];
    Running r = std::move(*d.running);
    d.running.reset();
    const JobSpec& spec = *r.entry.spec;
    const std::size_t i = index_of_.at(spec.job_id);

    MitigatedResult mr = collect_results(r.records, r.calibration, spec.mitigate);
    const OutcomeDistribution ideal =
        spec.declared_ideal ? *spec.declared_ideal : OutcomeDistribution::all_zeros(r.records.front().num_bits);
    const double achieved = mr.zne_estimate ? *mr.zne_estimate : parity_expectation(mr.mitigated_distribution);
    const double parity_error = std::abs(achieved - parity_expectation(ideal));

    const Micros exec = now - r.decision.start_time;
    d.busy_time += exec;
    JobMetrics& m = log_.jobs[i];
    m.status = JobStatus::Completed;
    m.qpu_id = d.qpu.id();
    m.start_time = r.decision.start_time;
    m.end_time = now;
    m.wait_time = r.decision.start_time - spec.submit_time;
    m.turnaround = now - spec.submit_time;
    m.queue_time = r.decision.start_time - r.entry.enqueue_time;
    m.exec_time = exec;
    m.predicted_vs_actual_duration_ratio =
        static_cast<double>(r.entry.estimated_duration) / static_cast<double>(std::max<Micros>(1, exec));
    m.predicted_fidelity = r.decision.predicted_fidelity;
    m.achieved_parity_error = parity_error;
    m.swap_overhead = r.decision.swap_overhead;
    m.zne_estimate = mr.zne_estimate;
    ++terminal_;

    const double per_shot =
        static_cast<double>(exec) / (static_cast<double>(spec.shots) * static_cast<double>(r.records.size()));
    log_.estimator.update(estimator_key(r.entry.profile, d.qpu.id()), per_shot);

    Json p;
    p["job_id"] = spec.job_id;
    p["qpu_id"] = d.qpu.id();
    p["start_time"] = r.decision.start_time;
    p["exec_time"] = exec;
    p["parity_error"] = parity_error;
    p["zne_estimate"] = mr.zne_estimate ? Json(*mr.zne_estimate) : Json(nullptr);
    p["counts_digest"] = counts_digest(r.records.front().raw_counts);
    emit(now, "JobComplete", std::move(p));

    d.health.observe(parity_error);
    if (!d.pending_recal && d.qpu.state() == QpuState::Online) {
      const auto flagged = flag_qpu(d.health, sc_.config.flag_threshold, sc_.config.health_min_observations);
      if (flagged && *flagged) {
        emit(now, "QpuFlagged",
             Json{{"qpu_id", d.qpu.id()},
                  {"rolling_parity_error", d.health.rolling_parity_error()},
                  {"threshold", sc_.config.flag_threshold},
                  {"observations", d.health.errors.size()}});
        d.pending_recal = "flagged";
      }
    }
    if (d.pending_recal) begin_recal(now, slot);

    log_.results.push_back(JobResult{spec.job_id, d.qpu.id(), std::move(r.records), std::move(mr)});
  }

  void request_recal(Micros now, std::size_t slot, const std::string& reason) {
    Device& d = devices_[slot];
    if (d.qpu.state() == QpuState::Recalibrating || d.pending_recal) return;
    d.pending_recal = reason;
    if (!d.running) begin_recal(now, slot);
  }

  void begin_recal(Micros now, std::size_t slot) {
    Device& d = devices_[slot];
    const std::string reason = *d.pending_recal;
    const Micros end = d.qpu.recalibrate(now, sc_.config.recal_duration);
    d.pending_recal.reset();
    const auto& snap = monitor_.publish(d.qpu.poll(now));
    emit(now, "RecalStart",
         Json{{"qpu_id", d.qpu.id()}, {"reason", reason}, {"end_time", end}, {"snapshot", snapshot_json(snap)}});
    push(end, Kind::RecalEnd, slot);
  }

  void on_recal_end(Micros now, std::size_t slot) {
    Device& d = devices_[slot];
    d.qpu.complete_recalibration(now);
    d.health.reset();
    const auto& snap = monitor_.publish(d.qpu.poll(now));
    emit(now, "RecalEnd", Json{{"qpu_id", d.qpu.id()}, {"snapshot", snapshot_json(snap)}});
  }

  void finish() {
    std::map<std::string, Micros> busy;
    for (const auto& d : devices_) busy[d.qpu.id()] = d.busy_time;
    log_.summary = summarize(log_.policy, log_.jobs, busy, clock_);
  }

  Scenario sc_;
  RunLog log_;
  Scheduler scheduler_{Policy::Sjf, 1};
  Gateway gateway_;
  HardwareMonitor monitor_;
  FleetNominal nominal_;
  GateDurations durations_{0.0, 0.0, 0.0};
  std::vector<double> lambdas_;
  std::vector<Device> devices_;
  std::vector<JobSpec> jobs_;
  std::map<std::string, std::size_t> index_of_;
  std::set<std::string> queued_;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
  std::uint64_t order_ = 0;
  std::size_t terminal_ = 0;
  Micros clock_ = 0;
};

inline RunLog run(const Scenario& scenario) { return Simulation(scenario).run(); }

}  // namespace qfs
