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
 * @file fleet.hpp
 * @brief QPU fleet model: coupling topology, calibration data, drift,
 *        the Online/Offline/Recalibrating state machine and the hardware
 *        monitor that publishes immutable calibration snapshots.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qfs {

using Edge = std::pair<int, int>;

inline Edge normalized(Edge e) { return e.first < e.second ? e : Edge{e.second, e.first}; }

/// Undirected coupling graph with precomputed all-pairs hop distances.
class CouplingGraph {
 public:
  CouplingGraph() = default;

  /// Throws InvalidTopology for out-of-range endpoints, self loops or a
  /// disconnected graph.
  CouplingGraph(int num_qubits, std::vector<Edge> edges) : n_(num_qubits) {
    if (num_qubits < 1) throw Error(ErrorCode::InvalidTopology, "QPU needs at least one qubit");
    for (Edge& e : edges) {
      if (e.first < 0 || e.second < 0 || e.first >= n_ || e.second >= n_) {
        throw Error(ErrorCode::InvalidTopology, "edge (" + std::to_string(e.first) + "," +
                                                    std::to_string(e.second) +
                                                    ") references a missing qubit");
      }
      if (e.first == e.second) {
        throw Error(ErrorCode::InvalidTopology, "self-loop on qubit " + std::to_string(e.first));
      }
      e = normalized(e);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    const auto n = static_cast<std::size_t>(n_);
    adjacency_.assign(n, {});
    edge_id_.assign(n * n, -1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const auto [a, b] = edges_[i];
      adjacency_[static_cast<std::size_t>(a)].push_back(b);
      adjacency_[static_cast<std::size_t>(b)].push_back(a);
      edge_id_[static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)] = static_cast<int>(i);
      edge_id_[static_cast<std::size_t>(b) * n + static_cast<std::size_t>(a)] = static_cast<int>(i);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    dist_.assign(n * n, -1);
    for (int src = 0; src < n_; ++src) {
      std::deque<int> frontier{src};
      dist_[index(src, src)] = 0;
      while (!frontier.empty()) {
        const int u = frontier.front();
        frontier.pop_front();
        for (int v : adjacency_[static_cast<std::size_t>(u)]) {
          if (dist_[index(src, v)] < 0) {
            dist_[index(src, v)] = dist_[index(src, u)] + 1;
            frontier.push_back(v);
          }
        }
      }
    }
    if (std::find(dist_.begin(), dist_.end(), -1) != dist_.end()) {
      throw Error(ErrorCode::InvalidTopology, "coupling graph is not connected");
    }
  }

  int num_qubits() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int q) const { return adjacency_[static_cast<std::size_t>(q)]; }
  int degree(int q) const { return static_cast<int>(neighbors(q).size()); }

  /// Index into edges() or -1 when a and b are not coupled.
  int edge_index(int a, int b) const { return edge_id_[index(a, b)]; }
  bool adjacent(int a, int b) const { return edge_index(a, b) >= 0; }
  int distance(int a, int b) const { return dist_[index(a, b)]; }

 private:
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> edge_id_;
  std::vector<int> dist_;
};

/// Per-qubit and per-edge calibration. f2q is aligned with
/// CouplingGraph::edges(). Times in µs.
struct CalibrationData {
  std::vector<double> f1q;
  std::vector<double> f2q;
  double t_1q = 0.05;
  double t_2q = 0.3;
  double t_ro = 1.0;
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<double> readout_eps0;  ///< P(read 1 | prepared 0)
  std::vector<double> readout_eps1;  ///< P(read 0 | prepared 1)

  GateDurations durations() const { return {t_1q, t_2q, t_ro}; }

  bool operator==(const CalibrationData&) const = default;

  /// Uniform calibration for a QPU with the given shape.
  static CalibrationData uniform(int num_qubits, std::size_t num_edges, double f1q, double f2q,
                                 double t1, double t2, double eps0, double eps1) {
    CalibrationData c;
    const auto n = static_cast<std::size_t>(num_qubits);
    c.f1q.assign(n, f1q);
    c.f2q.assign(num_edges, f2q);
    c.t1.assign(n, t1);
    c.t2.assign(n, t2);
    c.readout_eps0.assign(n, eps0);
    c.readout_eps1.assign(n, eps1);
    return c;
  }
};

inline void validate_calibration(const CalibrationData& c, int num_qubits, std::size_t num_edges) {
  const auto n = static_cast<std::size_t>(num_qubits);
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (c.f1q.size() != n || c.t1.size() != n || c.t2.size() != n || c.readout_eps0.size() != n ||
      c.readout_eps1.size() != n) {
    fail("per-qubit calibration vectors must have one entry per qubit");
  }
  if (c.f2q.size() != num_edges) fail("f2q must have one entry per coupling edge");
  auto fidelity_ok = [](double f) { return f > 0.0 && f <= 1.0; };
  if (!std::all_of(c.f1q.begin(), c.f1q.end(), fidelity_ok)) fail("f1q must lie in (0,1]");
  if (!std::all_of(c.f2q.begin(), c.f2q.end(), fidelity_ok)) fail("f2q must lie in (0,1]");
  if (!(c.t_1q > 0 && c.t_2q > 0 && c.t_ro > 0)) fail("gate durations must be positive");
  for (std::size_t q = 0; q < n; ++q) {
    if (!(c.t1[q] > 0 && c.t2[q] > 0)) fail("T1/T2 must be positive");
    if (c.t2[q] > 2.0 * c.t1[q]) fail("T2 must not exceed 2*T1 on qubit " + std::to_string(q));
    for (double e : {c.readout_eps0[q], c.readout_eps1[q]}) {
      if (!(e >= 0.0 && e < 0.5)) fail("readout error must lie in [0,0.5)");
    }
  }
}

/// Arithmetic mean over coupling edges; 1.0 for an edgeless (single-qubit) device.
inline double mean_two_qubit_fidelity(const CalibrationData& c) {
  if (c.f2q.empty()) return 1.0;
  return std::accumulate(c.f2q.begin(), c.f2q.end(), 0.0) / static_cast<double>(c.f2q.size());
}

enum class QpuState { Online, Offline, Recalibrating };

inline constexpr std::string_view to_string(QpuState s) {
  switch (s) {
    case QpuState::Online: return "online";
    case QpuState::Offline: return "offline";
    case QpuState::Recalibrating: return "recalibrating";
  }
  return "?";
}

/// Online<->Offline, {Online,Offline}->Recalibrating, Recalibrating->Online.
inline constexpr bool transition_allowed(QpuState from, QpuState to) {
  switch (from) {
    case QpuState::Online: return to == QpuState::Offline || to == QpuState::Recalibrating;
    case QpuState::Offline: return to == QpuState::Online || to == QpuState::Recalibrating;
    case QpuState::Recalibrating: return to == QpuState::Online;
  }
  return false;
}

struct QpuDescriptor {
  std::string qpu_id;
  CouplingGraph coupling;
  CalibrationData baseline;
  QpuState state = QpuState::Online;

  int num_qubits() const { return coupling.num_qubits(); }
};

inline QpuDescriptor make_qpu(std::string id, int num_qubits, std::vector<Edge> edges,
                              CalibrationData baseline) {
  QpuDescriptor d{std::move(id), CouplingGraph(num_qubits, std::move(edges)), std::move(baseline),
                  QpuState::Online};
  validate_calibration(d.baseline, num_qubits, d.coupling.edges().size());
  return d;
}

struct CalibrationSnapshot {
  std::string qpu_id;
  Micros time = 0;
  CalibrationData calibration;
  QpuState state = QpuState::Online;
  int num_qubits = 0;
  double mean_f2q = 1.0;

  bool operator==(const CalibrationSnapshot&) const = default;
};

/// Drift law parameters. Rates are per millisecond, sigma per sqrt(ms).
struct DriftParams {
  double rate_per_ms = 1e-5;
  double sigma = 1e-4;
  double floor = 0.5;
  double readout_rate_per_ms = 1e-5;
  double readout_sigma = 0.0;
  double readout_cap = 0.49;
};

/// One drift step: every gate fidelity decays linearly with Brownian jitter,
/// clamped to [floor, baseline]; each qubit's readout errors rise by one
/// shared increment, clamped to [baseline, cap].
inline CalibrationData drift(const CalibrationData& current, const CalibrationData& baseline,
                             Micros dt, const DriftParams& p, Rng& rng) {
  if (dt <= 0) throw Error(ErrorCode::InvalidArgument, "drift step needs dt > 0");
  const double dt_ms = static_cast<double>(dt) / 1000.0;
  const double jitter_scale = p.sigma * std::sqrt(dt_ms);
  auto step = [&](double f, double base) {
    double next = f - dt_ms * p.rate_per_ms;
    if (p.sigma > 0.0) next += jitter_scale * rng.normal();
    return std::clamp(next, std::min(p.floor, base), base);
  };
  CalibrationData out = current;
  for (std::size_t i = 0; i < out.f1q.size(); ++i) out.f1q[i] = step(current.f1q[i], baseline.f1q[i]);
  for (std::size_t i = 0; i < out.f2q.size(); ++i) out.f2q[i] = step(current.f2q[i], baseline.f2q[i]);
  const double ro_scale = p.readout_sigma * std::sqrt(dt_ms);
  for (std::size_t q = 0; q < out.readout_eps0.size(); ++q) {
    double inc = dt_ms * p.readout_rate_per_ms;
    if (p.readout_sigma > 0.0) inc += ro_scale * rng.normal();
    out.readout_eps0[q] = std::clamp(current.readout_eps0[q] + inc, baseline.readout_eps0[q],
                                     std::max(p.readout_cap, baseline.readout_eps0[q]));
    out.readout_eps1[q] = std::clamp(current.readout_eps1[q] + inc, baseline.readout_eps1[q],
                                     std::max(p.readout_cap, baseline.readout_eps1[q]));
  }
  return out;
}

/// Live state of one QPU: the static descriptor plus drifted calibration and
/// the operational state machine.
class Qpu {
 public:
  explicit Qpu(QpuDescriptor descriptor)
      : desc_(std::move(descriptor)), calibration_(desc_.baseline), state_(desc_.state) {}

  const QpuDescriptor& descriptor() const { return desc_; }
  const std::string& id() const { return desc_.qpu_id; }
  const CalibrationData& calibration() const { return calibration_; }
  QpuState state() const { return state_; }
  std::optional<Micros> recalibration_end() const { return recal_end_; }

  CalibrationSnapshot poll(Micros now) const {
    return CalibrationSnapshot{desc_.qpu_id, now, calibration_, state_, desc_.num_qubits(),
                               mean_two_qubit_fidelity(calibration_)};
  }

  /// Calibration is frozen while the device is recalibrating.
  const CalibrationData& drift_step(Micros dt, const DriftParams& params, Rng& rng) {
    if (state_ != QpuState::Recalibrating) {
      calibration_ = drift(calibration_, desc_.baseline, dt, params, rng);
    }
    return calibration_;
  }

  void set_state(QpuState to) {
    if (!transition_allowed(state_, to)) {
      throw Error(ErrorCode::InvalidTransition, std::string(to_string(state_)) + " -> " +
                                                    std::string(to_string(to)) + " on " + id());
    }
    state_ = to;
  }

  /// Enters Recalibrating until now + duration. Throws AlreadyRecalibrating.
  Micros recalibrate(Micros now, Micros duration) {
    if (state_ == QpuState::Recalibrating) {
      throw Error(ErrorCode::AlreadyRecalibrating, id() + " is already recalibrating");
    }
    set_state(QpuState::Recalibrating);
    recal_end_ = now + duration;
    return *recal_end_;
  }

  /// Restores baseline calibration and returns to Online once the window ends.
  bool complete_recalibration(Micros now) {
    if (state_ != QpuState::Recalibrating || !recal_end_ || now < *recal_end_) return false;
    calibration_ = desc_.baseline;
    set_state(QpuState::Online);
    recal_end_.reset();
    return true;
  }

 private:
  QpuDescriptor desc_;
  CalibrationData calibration_;
  QpuState state_;
  std::optional<Micros> recal_end_;
};

/// Holds the latest published snapshot per QPU. Publication times must be
/// non-decreasing per QPU.
class HardwareMonitor {
 public:
  const CalibrationSnapshot& publish(CalibrationSnapshot snap) {
    auto it = latest_.find(snap.qpu_id);
    if (it != latest_.end()) {
      if (snap.time < it->second.time) {
        throw Error(ErrorCode::InvalidArgument, "snapshot time went backwards for " + snap.qpu_id);
      }
      it->second = std::move(snap);
      return it->second;
    }
    return latest_.emplace(snap.qpu_id, std::move(snap)).first->second;
  }

  const CalibrationSnapshot* latest(const std::string& qpu_id) const {
    auto it = latest_.find(qpu_id);
    return it == latest_.end() ? nullptr : &it->second;
  }

 private:
  std::map<std::string, CalibrationSnapshot> latest_;
};

/// Nearest-rank percentile (q in (0,1]) of an unsorted sample.
inline double nearest_rank_percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

inline FleetNominal fleet_nominal(const std::vector<QpuDescriptor>& fleet, double coherence_factor) {
  FleetNominal nominal;
  nominal.coherence_factor = coherence_factor;
  nominal.min_t2 = std::numeric_limits<double>::infinity();
  std::vector<double> means;
  for (const auto& q : fleet) {
    for (double t2 : q.baseline.t2) nominal.min_t2 = std::min(nominal.min_t2, t2);
    means.push_back(mean_two_qubit_fidelity(q.baseline));
  }
  nominal.p90_mean_f2q = nearest_rank_percentile(means, 0.9);
  return nominal;
}

}  // namespace qfs
