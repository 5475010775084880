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
 * @file transpiler.hpp
 * @brief Logical-to-physical mapping: degree-matched initial layout, greedy
 *        shortest-path SWAP routing, and fidelity/duration estimates of the
 *        routed circuit.
 *
 * Routing handles one gate at a time. For a two-qubit gate on non-adjacent
 * physical qubits, the first operand is swapped along the lexicographically
 * smallest shortest path until it neighbours the second operand, so a gate
 * at hop distance d costs exactly d - 1 SWAPs.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/fleet.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace qfs {

/// Injective map from logical to physical qubits.
struct Layout {
  std::vector<int> to_physical;

  int physical(int logical) const { return to_physical[static_cast<std::size_t>(logical)]; }
  bool operator==(const Layout&) const = default;
};

struct TranspileResult {
  Circuit physical;                  ///< over physical indices, SWAPs included
  std::vector<bool> inserted_swap;   ///< parallel to physical.gates
  Layout initial_layout;
  Layout final_layout;
  int swap_count = 0;
  int physical_depth = 0;
  double predicted_fidelity = 1.0;
  double predicted_duration = 0.0;  ///< µs per shot
};

/// Logical qubits ranked by two-qubit interaction count go to physical qubits
/// ranked by coupling degree; ties break on the lower index.
inline Layout initial_layout(const Circuit& ir, const CouplingGraph& coupling) {
  if (ir.num_qubits > coupling.num_qubits()) {
    throw Error(ErrorCode::TooManyQubits, "circuit needs " + std::to_string(ir.num_qubits) +
                                              " qubits, device has " +
                                              std::to_string(coupling.num_qubits()));
  }
  std::vector<int> interactions(static_cast<std::size_t>(ir.num_qubits), 0);
  for (const Gate& g : ir.gates) {
    if (is_two_qubit(g.kind)) {
      ++interactions[static_cast<std::size_t>(g.qubits[0])];
      ++interactions[static_cast<std::size_t>(g.qubits[1])];
    }
  }
  std::vector<int> logical(static_cast<std::size_t>(ir.num_qubits));
  std::iota(logical.begin(), logical.end(), 0);
  std::stable_sort(logical.begin(), logical.end(), [&](int a, int b) {
    return interactions[static_cast<std::size_t>(a)] > interactions[static_cast<std::size_t>(b)];
  });
  std::vector<int> physical(static_cast<std::size_t>(coupling.num_qubits()));
  std::iota(physical.begin(), physical.end(), 0);
  std::stable_sort(physical.begin(), physical.end(),
                   [&](int a, int b) { return coupling.degree(a) > coupling.degree(b); });

  Layout layout;
  layout.to_physical.assign(static_cast<std::size_t>(ir.num_qubits), -1);
  for (std::size_t i = 0; i < logical.size(); ++i) {
    layout.to_physical[static_cast<std::size_t>(logical[i])] = physical[i];
  }
  return layout;
}

inline Layout initial_layout(const Circuit& ir, const QpuDescriptor& qpu) {
  return initial_layout(ir, qpu.coupling);
}

/// Lexicographically smallest shortest path from a to b (inclusive).
inline std::vector<int> shortest_path(const CouplingGraph& g, int a, int b) {
  std::vector<int> path{a};
  int cur = a;
  while (cur != b) {
    const int want = g.distance(cur, b) - 1;
    int step = -1;
    for (int v : g.neighbors(cur)) {  // sorted ascending
      if (g.distance(v, b) == want) {
        step = v;
        break;
      }
    }
    if (step < 0) {
      throw Error(ErrorCode::DisconnectedTarget,
                  "no path from " + std::to_string(a) + " to " + std::to_string(b));
    }
    path.push_back(step);
    cur = step;
  }
  return path;
}

/// Product fidelity model: 1q gates, 2q gates (a SWAP counts as three), and
/// a symmetric readout factor per measurement.
inline double estimate_fidelity(const Circuit& physical, const CouplingGraph& coupling,
                                const CalibrationData& cal) {
  double f = 1.0;
  for (const Gate& g : physical.gates) {
    if (g.kind == GateKind::Barrier) continue;
    const auto q0 = static_cast<std::size_t>(g.qubits[0]);
    if (g.kind == GateKind::Measure) {
      f *= 1.0 - 0.5 * (cal.readout_eps0[q0] + cal.readout_eps1[q0]);
    } else if (is_two_qubit(g.kind)) {
      const int e = coupling.edge_index(g.qubits[0], g.qubits[1]);
      if (e < 0) {
        throw Error(ErrorCode::InvalidArgument, "two-qubit gate on uncoupled pair (" +
                                                    std::to_string(g.qubits[0]) + "," +
                                                    std::to_string(g.qubits[1]) + ")");
      }
      const double fe = cal.f2q[static_cast<std::size_t>(e)];
      f *= g.kind == GateKind::Swap ? fe * fe * fe : fe;
    } else {
      f *= cal.f1q[q0];
    }
  }
  return f;
}

inline double estimate_fidelity(const TranspileResult& r, const CouplingGraph& coupling,
                                const CalibrationData& cal) {
  return estimate_fidelity(r.physical, coupling, cal);
}

/// True when every two-qubit gate sits on a coupling edge.
inline bool is_legal(const Circuit& physical, const CouplingGraph& coupling) {
  return std::all_of(physical.gates.begin(), physical.gates.end(), [&](const Gate& g) {
    return !is_two_qubit(g.kind) || coupling.adjacent(g.qubits[0], g.qubits[1]);
  });
}

/// Fills depth, fidelity and duration of an already-routed circuit.
inline void annotate(TranspileResult& r, const CouplingGraph& coupling, const CalibrationData& cal) {
  const auto layers = build_layers(r.physical);
  r.physical_depth = static_cast<int>(layers.size());
  r.predicted_duration = layered_duration(r.physical, layers, cal.durations());
  r.predicted_fidelity = estimate_fidelity(r.physical, coupling, cal);
}

inline TranspileResult route(const Circuit& ir, const Layout& layout, const CouplingGraph& coupling,
                             const CalibrationData& cal) {
  const int n_phys = coupling.num_qubits();
  TranspileResult r;
  r.initial_layout = layout;
  r.physical.num_qubits = n_phys;
  r.physical.num_cbits = ir.num_cbits;
  r.physical.gates.reserve(ir.gates.size());

  std::vector<int> l2p = layout.to_physical;
  std::vector<int> p2l(static_cast<std::size_t>(n_phys), -1);
  for (std::size_t l = 0; l < l2p.size(); ++l) p2l[static_cast<std::size_t>(l2p[l])] = static_cast<int>(l);

  auto emit = [&](Gate g, bool inserted) {
    r.physical.gates.push_back(g);
    r.inserted_swap.push_back(inserted);
  };

  for (const Gate& g : ir.gates) {
    Gate pg = g;
    if (g.kind == GateKind::Barrier) {
      emit(pg, false);
      continue;
    }
    if (!is_two_qubit(g.kind)) {
      pg.qubits[0] = l2p[static_cast<std::size_t>(g.qubits[0])];
      emit(pg, false);
      continue;
    }
    const int a = l2p[static_cast<std::size_t>(g.qubits[0])];
    const int b = l2p[static_cast<std::size_t>(g.qubits[1])];
    if (!coupling.adjacent(a, b)) {
      const auto path = shortest_path(coupling, a, b);
      for (std::size_t i = 0; i + 2 < path.size(); ++i) {
        const int u = path[i];
        const int v = path[i + 1];
        emit(Gate::two(GateKind::Swap, u, v), true);
        ++r.swap_count;
        const int lu = p2l[static_cast<std::size_t>(u)];
        const int lv = p2l[static_cast<std::size_t>(v)];
        std::swap(p2l[static_cast<std::size_t>(u)], p2l[static_cast<std::size_t>(v)]);
        if (lu >= 0) l2p[static_cast<std::size_t>(lu)] = v;
        if (lv >= 0) l2p[static_cast<std::size_t>(lv)] = u;
      }
    }
    pg.qubits = {l2p[static_cast<std::size_t>(g.qubits[0])], l2p[static_cast<std::size_t>(g.qubits[1])]};
    emit(pg, false);
  }
  r.final_layout.to_physical = l2p;
  annotate(r, coupling, cal);
  return r;
}

inline TranspileResult route(const Circuit& ir, const Layout& layout, const QpuDescriptor& qpu) {
  return route(ir, layout, qpu.coupling, qpu.baseline);
}

/// Layout plus routing against the given calibration.
inline TranspileResult transpile(const Circuit& ir, const QpuDescriptor& qpu,
                                 const CalibrationData& cal) {
  return route(ir, initial_layout(ir, qpu.coupling), qpu.coupling, cal);
}

struct TrialCandidate {
  const QpuDescriptor* qpu = nullptr;
  const CalibrationData* calibration = nullptr;
};

struct RankedTranspile {
  std::string qpu_id;
  TranspileResult result;
};

/// Strict ranking: fewer SWAPs, then higher predicted fidelity, then lower id.
inline bool ranks_before(const RankedTranspile& a, const RankedTranspile& b) {
  if (a.result.swap_count != b.result.swap_count) return a.result.swap_count < b.result.swap_count;
  if (a.result.predicted_fidelity != b.result.predicted_fidelity) {
    return a.result.predicted_fidelity > b.result.predicted_fidelity;
  }
  return a.qpu_id < b.qpu_id;
}

inline std::vector<RankedTranspile> trial_transpile(const Circuit& ir,
                                                    std::span<const TrialCandidate> candidates) {
  std::vector<RankedTranspile> ranked;
  ranked.reserve(candidates.size());
  for (const auto& c : candidates) {
    ranked.push_back({c.qpu->qpu_id, transpile(ir, *c.qpu, *c.calibration)});
  }
  std::sort(ranked.begin(), ranked.end(), ranks_before);
  return ranked;
}

}  // namespace qfs
