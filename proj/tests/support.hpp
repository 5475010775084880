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

// Shared generators for the test suites.

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/fleet.hpp"

#include <array>
#include <string>
#include <vector>

namespace qfs::testing {

/// Random circuit over the full gate set, with occasional barriers.
inline Circuit random_circuit(Rng& rng, int max_qubits, int max_gates, bool measures = true) {
  static constexpr std::array<GateKind, 11> kOne{GateKind::H,  GateKind::X,   GateKind::Y,  GateKind::Z,
                                                 GateKind::S,  GateKind::Sdg, GateKind::T,  GateKind::Tdg,
                                                 GateKind::Rx, GateKind::Ry,  GateKind::Rz};
  static constexpr std::array<GateKind, 3> kTwo{GateKind::Cx, GateKind::Cz, GateKind::Swap};
  Circuit c;
  c.num_qubits = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_qubits)));
  c.num_cbits = measures ? c.num_qubits : 0;
  const int gates = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_gates) + 1));
  for (int k = 0; k < gates; ++k) {
    const double u = rng.uniform();
    if (u < 0.05) {
      c.gates.push_back(Gate::barrier());
    } else if (u < 0.4 && c.num_qubits >= 2) {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_qubits)));
      int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_qubits - 1)));
      if (b >= a) ++b;
      c.gates.push_back(Gate::two(kTwo[rng.below(kTwo.size())], a, b));
    } else if (u < 0.5 && measures) {
      const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_qubits)));
      c.gates.push_back(Gate::measure(q, q));
    } else {
      const GateKind kind = kOne[rng.below(kOne.size())];
      const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.num_qubits)));
      if (is_rotation(kind)) {
        c.gates.push_back(Gate::one(kind, q, rng.uniform() * 6.0 - 3.0));
      } else {
        c.gates.push_back(Gate::one(kind, q));
      }
    }
  }
  return c;
}

/// Random spanning tree plus extra random edges.
inline std::vector<Edge> random_connected_edges(Rng& rng, int n, double extra_density) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> has(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (int v = 1; v < n; ++v) {
    const int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(v)));
    edges.emplace_back(u, v);
    has[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] && rng.bernoulli(extra_density)) {
        edges.emplace_back(a, b);
      }
    }
  }
  return edges;
}

inline std::vector<Edge> path_edges(int n) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

inline QpuDescriptor uniform_qpu(const std::string& id, int n, std::vector<Edge> edges, double f2q,
                                 double eps = 0.0, double f1q = 1.0) {
  const std::size_t m = edges.size();
  return make_qpu(id, n, std::move(edges), CalibrationData::uniform(n, m, f1q, f2q, 100.0, 80.0, eps, eps));
}

}  // namespace qfs::testing
