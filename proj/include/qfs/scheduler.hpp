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
 * @file scheduler.hpp
 * @brief Job queue, feasibility filter and the non-preemptive selection
 *        policies (shortest job first, round robin, best-fit fidelity and
 *        priority with aging).
 *
 * Every policy breaks ties with a total order ending in job_id / qpu_id, so
 * a given queue and fleet view always produce the same decision.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/fleet.hpp"
#include "qfs/gateway.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfs {

struct QueueEntry {
  std::shared_ptr<const JobSpec> spec;
  std::shared_ptr<const Circuit> circuit;
  CircuitProfile profile;  ///< includes tags
  Micros enqueue_time = 0;
  Micros estimated_duration = 1;  ///< total busy time estimate, µs
  int effective_priority = 0;

  const std::string& job_id() const { return spec->job_id; }
  const JobConstraints& constraints() const { return spec->constraints; }
};

struct ScheduleDecision {
  std::string job_id;
  std::string qpu_id;
  std::string policy_name;
  Micros start_time = 0;
  Micros predicted_duration = 0;
  double predicted_fidelity = 1.0;
  int swap_overhead = 0;
};

/// A QPU as the scheduler sees it at decision time.
struct QpuSlot {
  const CalibrationSnapshot* snapshot = nullptr;
  bool busy = false;
};

inline bool is_feasible(const QueueEntry& e, const QpuSlot& slot) {
  const auto& s = *slot.snapshot;
  return s.state == QpuState::Online && !slot.busy &&
         s.num_qubits >= e.constraints().required_qubits &&
         s.mean_f2q >= e.constraints().min_two_qubit_fidelity;
}

/// Indices into `slots` (callers keep slots in qpu_id order).
inline std::vector<std::size_t> feasibility_filter(const QueueEntry& e, std::span<const QpuSlot> slots) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (is_feasible(e, slots[i])) out.push_back(i);
  }
  return out;
}

using FeasibleMap = std::vector<std::vector<std::size_t>>;

inline FeasibleMap build_feasible_map(std::span<const QueueEntry> queue, std::span<const QpuSlot> slots) {
  FeasibleMap map(queue.size());
  const bool any_idle = std::any_of(slots.begin(), slots.end(), [](const QpuSlot& s) { return !s.busy; });
  if (!any_idle) return map;
  for (std::size_t i = 0; i < queue.size(); ++i) map[i] = feasibility_filter(queue[i], slots);
  return map;
}

struct Selection {
  std::size_t entry = 0;  ///< index into the queue
  std::size_t slot = 0;   ///< index into the slots
};

/// Chooses a slot among a non-empty feasible set.
using Placer = std::function<std::size_t(const QueueEntry&, std::span<const std::size_t>)>;

inline std::size_t place_lowest_id(const QueueEntry&, std::span<const std::size_t> feasible) {
  return feasible.front();
}

inline bool fifo_before(const QueueEntry& a, const QueueEntry& b) {
  if (a.enqueue_time != b.enqueue_time) return a.enqueue_time < b.enqueue_time;
  return a.job_id() < b.job_id();
}

/// Earliest-enqueued entry with at least one feasible QPU.
inline std::optional<std::size_t> first_schedulable_fifo(std::span<const QueueEntry> queue,
                                                         const FeasibleMap& feasible) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (feasible[i].empty()) continue;
    if (!best || fifo_before(queue[i], queue[*best])) best = i;
  }
  return best;
}

inline std::optional<Selection> select_sjf(std::span<const QueueEntry> queue, const FeasibleMap& feasible,
                                           const Placer& place = place_lowest_id) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (feasible[i].empty()) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& a = queue[i];
    const auto& b = queue[*best];
    if (a.estimated_duration < b.estimated_duration ||
        (a.estimated_duration == b.estimated_duration && a.job_id() < b.job_id())) {
      best = i;
    }
  }
  if (!best) return std::nullopt;
  return Selection{*best, place(queue[*best], feasible[*best])};
}

struct FidelityCandidate {
  std::string qpu_id;
  double mean_f2q = 1.0;
};

/// Smallest non-negative fidelity surplus over the requirement, ties by qpu_id.
/// Returns an index into `candidates`.
inline std::size_t select_best_fit_fidelity(double required, std::span<const FidelityCandidate> candidates) {
  if (candidates.empty()) throw Error(ErrorCode::InvalidArgument, "best-fit needs candidates");
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double surplus = candidates[i].mean_f2q - required;
    if (surplus < 0.0) continue;
    if (!best) {
      best = i;
      continue;
    }
    const double best_surplus = candidates[*best].mean_f2q - required;
    if (surplus < best_surplus ||
        (surplus == best_surplus && candidates[i].qpu_id < candidates[*best].qpu_id)) {
      best = i;
    }
  }
  if (!best) throw Error(ErrorCode::InvalidArgument, "no candidate meets the required fidelity");
  return *best;
}

/// FIFO job order, best-fit QPU choice.
inline std::optional<Selection> select_best_fit(std::span<const QueueEntry> queue, const FeasibleMap& feasible,
                                                std::span<const QpuSlot> slots) {
  const auto head = first_schedulable_fifo(queue, feasible);
  if (!head) return std::nullopt;
  std::vector<FidelityCandidate> cands;
  for (std::size_t s : feasible[*head]) {
    cands.push_back({slots[s].snapshot->qpu_id, slots[s].snapshot->mean_f2q});
  }
  const std::size_t pick =
      select_best_fit_fidelity(queue[*head].constraints().min_two_qubit_fidelity, cands);
  return Selection{*head, feasible[*head][pick]};
}

/// FIFO job order; QPUs are tried cyclically from `cursor`, which then moves
/// past the chosen slot.
inline std::optional<Selection> select_round_robin(std::span<const QueueEntry> queue,
                                                   const FeasibleMap& feasible, std::size_t num_slots,
                                                   std::size_t& cursor) {
  const auto head = first_schedulable_fifo(queue, feasible);
  if (!head || num_slots == 0) return std::nullopt;
  const auto& options = feasible[*head];
  for (std::size_t k = 0; k < num_slots; ++k) {
    const std::size_t slot = (cursor + k) % num_slots;
    if (std::find(options.begin(), options.end(), slot) != options.end()) {
      cursor = (slot + 1) % num_slots;
      return Selection{*head, slot};
    }
  }
  return std::nullopt;
}

inline int effective_priority(const QueueEntry& e, Micros now, Micros aging_quantum) {
  const Micros waited = std::max<Micros>(0, now - e.enqueue_time);
  return e.constraints().priority + static_cast<int>(waited / std::max<Micros>(1, aging_quantum));
}

inline std::optional<Selection> select_priority_aging(std::span<const QueueEntry> queue,
                                                      const FeasibleMap& feasible, Micros now,
                                                      Micros aging_quantum,
                                                      const Placer& place = place_lowest_id) {
  std::optional<std::size_t> best;
  int best_prio = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (feasible[i].empty()) continue;
    const int prio = effective_priority(queue[i], now, aging_quantum);
    if (!best || prio > best_prio || (prio == best_prio && fifo_before(queue[i], queue[*best]))) {
      best = i;
      best_prio = prio;
    }
  }
  if (!best) return std::nullopt;
  return Selection{*best, place(queue[*best], feasible[*best])};
}

/// Removes entries whose wait strictly exceeds their max_queue_wait and
/// returns their ids in queue order.
inline std::vector<std::string> expire_stale(std::vector<QueueEntry>& queue, Micros now) {
  std::vector<std::string> cancelled;
  std::erase_if(queue, [&](const QueueEntry& e) {
    const Micros limit = e.constraints().max_queue_wait;
    if (limit != kUnbounded && now - e.enqueue_time > limit) {
      cancelled.push_back(e.job_id());
      return true;
    }
    return false;
  });
  return cancelled;
}

enum class Policy { Sjf, RoundRobin, BestFit, PriorityAging };

inline constexpr std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::Sjf: return "sjf";
    case Policy::RoundRobin: return "rr";
    case Policy::BestFit: return "bff";
    case Policy::PriorityAging: return "prio";
  }
  return "?";
}

inline std::optional<Policy> policy_from_string(std::string_view name) {
  for (Policy p : {Policy::Sjf, Policy::RoundRobin, Policy::BestFit, Policy::PriorityAging}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

/// Owns the job queue and the round-robin cursor.
class Scheduler {
 public:
  Scheduler(Policy policy, Micros aging_quantum) : policy_(policy), aging_quantum_(aging_quantum) {}

  Policy policy() const { return policy_; }
  std::vector<QueueEntry>& queue() { return queue_; }
  const std::vector<QueueEntry>& queue() const { return queue_; }

  void enqueue(QueueEntry e) { queue_.push_back(std::move(e)); }

  QueueEntry take(std::size_t index) {
    QueueEntry e = std::move(queue_[index]);
    queue_.erase(queue_.begin() + static_cast<std::ptrdiff_t>(index));
    return e;
  }

  std::optional<Selection> select(Micros now, std::span<const QpuSlot> slots, const Placer& place) {
    if (queue_.empty()) return std::nullopt;
    const FeasibleMap feasible = build_feasible_map(queue_, slots);
    switch (policy_) {
      case Policy::Sjf: return select_sjf(queue_, feasible, place);
      case Policy::RoundRobin: return select_round_robin(queue_, feasible, slots.size(), cursor_);
      case Policy::BestFit: return select_best_fit(queue_, feasible, slots);
      case Policy::PriorityAging: {
        for (auto& e : queue_) e.effective_priority = effective_priority(e, now, aging_quantum_);
        return select_priority_aging(queue_, feasible, now, aging_quantum_, place);
      }
    }
    return std::nullopt;
  }

 private:
  Policy policy_;
  Micros aging_quantum_;
  std::vector<QueueEntry> queue_;
  std::size_t cursor_ = 0;
};

}  // namespace qfs
