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
 * @file qos.hpp
 * @brief QoS monitor: per-job metrics, execution-time estimator feedback and
 *        QPU health flagging.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/fleet.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace qfs {

enum class JobStatus { Completed, Cancelled, Rejected };

inline constexpr std::string_view to_string(JobStatus s) {
  switch (s) {
    case JobStatus::Completed: return "completed";
    case JobStatus::Cancelled: return "cancelled";
    case JobStatus::Rejected: return "rejected";
  }
  return "?";
}

struct JobMetrics {
  std::string job_id;
  std::string tenant_id;
  JobStatus status = JobStatus::Completed;
  std::string reason;       ///< cancellation / rejection cause
  std::string qpu_id;       ///< empty unless started
  Micros submit_time = 0;
  std::optional<Micros> start_time;
  std::optional<Micros> end_time;
  Micros wait_time = 0;     ///< start - submit (or cancel - submit)
  Micros turnaround = 0;    ///< complete - submit
  Micros queue_time = 0;    ///< start - enqueue
  Micros exec_time = 0;
  double predicted_vs_actual_duration_ratio = 0.0;
  double predicted_fidelity = 0.0;
  double achieved_parity_error = 0.0;
  int swap_overhead = 0;
  std::optional<double> zne_estimate;
};

// ---------------------------------------------------------------------------
// Execution-time estimator
// ---------------------------------------------------------------------------

/// Power-of-two bucket: 0 -> 0, otherwise the largest power of two <= n.
inline int pow2_bucket(int n) {
  return n <= 0 ? 0 : static_cast<int>(std::bit_floor(static_cast<unsigned>(n)));
}

struct EstimatorKey {
  int depth_bucket = 0;
  int two_qubit_bucket = 0;
  std::string qpu_id;

  auto operator<=>(const EstimatorKey&) const = default;
};

inline EstimatorKey estimator_key(const CircuitProfile& p, std::string qpu_id) {
  return {pow2_bucket(p.depth), pow2_bucket(p.two_qubit_gate_count), std::move(qpu_id)};
}

struct EmaCell {
  double ema = 0.0;
  std::int64_t observations = 0;
};

/// Exponential moving average per (circuit class, QPU). The first observation
/// initialises the average; later ones blend in with weight beta.
class EstimatorState {
 public:
  explicit EstimatorState(double beta = 0.2) : beta_(beta) {
    if (!(beta > 0.0 && beta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "beta must lie in (0,1]");
  }

  double beta() const { return beta_; }

  const EmaCell& update(const EstimatorKey& key, double observed) {
    if (!(observed > 0.0)) throw Error(ErrorCode::NonPositiveDuration, "observed duration must be positive");
    EmaCell& cell = cells_[key];
    cell.ema = cell.observations == 0 ? observed : beta_ * observed + (1.0 - beta_) * cell.ema;
    ++cell.observations;
    return cell;
  }

  std::optional<double> estimate(const EstimatorKey& key) const {
    auto it = cells_.find(key);
    if (it == cells_.end()) return std::nullopt;
    return it->second.ema;
  }

  /// Smallest learned value for this circuit class over all QPUs.
  std::optional<double> best_estimate(int depth_bucket, int two_qubit_bucket) const {
    std::optional<double> best;
    auto it = cells_.lower_bound(EstimatorKey{depth_bucket, two_qubit_bucket, {}});
    for (; it != cells_.end() && it->first.depth_bucket == depth_bucket &&
           it->first.two_qubit_bucket == two_qubit_bucket;
         ++it) {
      if (!best || it->second.ema < *best) best = it->second.ema;
    }
    return best;
  }

  const std::map<EstimatorKey, EmaCell>& cells() const { return cells_; }

 private:
  double beta_;
  std::map<EstimatorKey, EmaCell> cells_;
};

// ---------------------------------------------------------------------------
// QPU health
// ---------------------------------------------------------------------------

struct QpuHealth {
  std::string qpu_id;
  std::size_t window = 20;
  std::deque<double> errors;
  bool flagged = false;

  void observe(double parity_error) {
    errors.push_back(parity_error);
    while (errors.size() > window) errors.pop_front();
  }

  double rolling_parity_error() const {
    if (errors.empty()) return 0.0;
    return std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
  }

  /// Drops the window after a recalibration.
  void reset() {
    errors.clear();
    flagged = false;
  }
};

/// nullopt when the window holds fewer than `min_observations` entries.
inline std::optional<bool> flag_qpu(QpuHealth& health, double threshold, std::size_t min_observations = 10) {
  if (health.errors.size() < min_observations) return std::nullopt;
  health.flagged = health.rolling_parity_error() > threshold;
  return health.flagged;
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

struct QpuUsage {
  std::string qpu_id;
  Micros busy_time = 0;
  double utilization = 0.0;
  std::int64_t jobs = 0;
};

struct SummaryReport {
  std::string policy;
  std::int64_t jobs_total = 0;
  std::int64_t jobs_completed = 0;
  std::int64_t jobs_cancelled = 0;
  std::int64_t jobs_rejected = 0;
  double mean_wait = 0.0;
  double p95_wait = 0.0;
  double mean_turnaround = 0.0;
  double throughput_per_s = 0.0;
  double mean_predicted_fidelity = 0.0;
  Micros total_time = 0;
  std::vector<QpuUsage> qpus;
};

/// Aggregates over completed jobs; utilization = busy / total_time.
inline SummaryReport summarize(std::string policy, const std::vector<JobMetrics>& jobs,
                               const std::map<std::string, Micros>& busy_by_qpu, Micros total_time) {
  SummaryReport r;
  r.policy = std::move(policy);
  r.total_time = total_time;
  r.jobs_total = static_cast<std::int64_t>(jobs.size());
  std::vector<double> waits;
  double turnaround = 0.0;
  double fidelity = 0.0;
  std::map<std::string, std::int64_t> jobs_by_qpu;
  for (const auto& j : jobs) {
    switch (j.status) {
      case JobStatus::Completed:
        ++r.jobs_completed;
        waits.push_back(static_cast<double>(j.wait_time));
        turnaround += static_cast<double>(j.turnaround);
        fidelity += j.predicted_fidelity;
        ++jobs_by_qpu[j.qpu_id];
        break;
      case JobStatus::Cancelled: ++r.jobs_cancelled; break;
      case JobStatus::Rejected: ++r.jobs_rejected; break;
    }
  }
  if (!waits.empty()) {
    const double n = static_cast<double>(waits.size());
    r.mean_wait = std::accumulate(waits.begin(), waits.end(), 0.0) / n;
    r.p95_wait = nearest_rank_percentile(waits, 0.95);
    r.mean_turnaround = turnaround / n;
    r.mean_predicted_fidelity = fidelity / n;
  }
  if (total_time > 0) {
    r.throughput_per_s = static_cast<double>(r.jobs_completed) / (static_cast<double>(total_time) / 1e6);
  }
  for (const auto& [id, busy] : busy_by_qpu) {
    QpuUsage u{id, busy, 0.0, 0};
    if (total_time > 0) u.utilization = static_cast<double>(busy) / static_cast<double>(total_time);
    auto it = jobs_by_qpu.find(id);
    if (it != jobs_by_qpu.end()) u.jobs = it->second;
    r.qpus.push_back(u);
  }
  return r;
}

}  // namespace qfs
