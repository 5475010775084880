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

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/distribution.hpp"
#include "qfs/gateway.hpp"
#include "qfs/simkit/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace qfs {

inline std::string ghz_qasm(int n) {
  std::string s = "OPENQASM 2.0;\nqreg q[" + std::to_string(n) + "];\ncreg c[" + std::to_string(n) + "];\n";
  s += "h q[0];\n";
  for (int i = 0; i + 1 < n; ++i) {
    s += "cx q[" + std::to_string(i) + "],q[" + std::to_string(i + 1) + "];\n";
  }
  for (int i = 0; i < n; ++i) {
    s += "measure q[" + std::to_string(i) + "] -> c[" + std::to_string(i) + "];\n";
  }
  return s;
}

inline OutcomeDistribution ghz_ideal(int n) {
  OutcomeDistribution d;
  d.num_bits = n;
  d.probabilities[std::string(static_cast<std::size_t>(n), '0')] = 0.5;
  d.probabilities[std::string(static_cast<std::size_t>(n), '1')] = 0.5;
  return d;
}

/// `depth` gate draws; each is a cx on a random pair with probability
/// `two_qubit_fraction`, otherwise a random one-qubit gate. Measures all.
inline std::string random_qasm(int n, int depth, double two_qubit_fraction, Rng& rng) {
  static constexpr std::array<GateKind, 9> kOneQubit{GateKind::H, GateKind::X, GateKind::Y,
                                                     GateKind::Z, GateKind::S, GateKind::T,
                                                     GateKind::Rx, GateKind::Ry, GateKind::Rz};
  Circuit c;
  c.num_qubits = n;
  c.num_cbits = n;
  for (int k = 0; k < depth; ++k) {
    if (n >= 2 && rng.bernoulli(two_qubit_fraction)) {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (b >= a) ++b;
      c.gates.push_back(Gate::two(GateKind::Cx, a, b));
    } else {
      const GateKind kind = kOneQubit[rng.below(kOneQubit.size())];
      const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
      if (is_rotation(kind)) {
        const double angle = std::round(rng.uniform() * 2.0 * std::numbers::pi * 1e4) / 1e4;
        c.gates.push_back(Gate::one(kind, q, angle));
      } else {
        c.gates.push_back(Gate::one(kind, q));
      }
    }
  }
  for (int i = 0; i < n; ++i) c.gates.push_back(Gate::measure(i, i));
  return print_qasm(c);
}

namespace detail {

template <typename T>
T draw(const Range<T>& r, Rng& rng) {
  if constexpr (std::is_integral_v<T>) {
    const auto span = static_cast<std::uint64_t>(r.hi - r.lo) + 1;
    return static_cast<T>(r.lo + static_cast<T>(rng.below(span)));
  } else {
    return r.lo + (r.hi - r.lo) * rng.uniform();
  }
}

inline std::vector<Micros> arrival_times(const WorkloadTemplate& t, Rng& rng) {
  std::vector<Micros> times;
  times.reserve(static_cast<std::size_t>(t.count));
  if (t.arrival == ArrivalLaw::Poisson) {
    const double rate_per_us = t.rate_per_s / 1e6;
    double acc = 0.0;
    for (int k = 0; k < t.count; ++k) {
      acc += rng.exponential(rate_per_us);
      times.push_back(t.start + static_cast<Micros>(std::floor(acc)));
    }
  } else {
    for (int k = 0; k < t.count; ++k) times.push_back(t.schedule[static_cast<std::size_t>(k) % t.schedule.size()]);
    std::sort(times.begin(), times.end());
  }
  return times;
}

}  // namespace detail

inline std::string format_job_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "j%06zu", index);
  return buf;
}

/// Expands every template, merges by arrival time (stable on template order)
/// and assigns ids j000000, j000001, ... in that order.
inline std::vector<JobSpec> generate_workload(const std::vector<WorkloadTemplate>& templates, std::uint64_t seed) {
  struct Pending {
    Micros time;
    JobSpec spec;
  };
  std::vector<Pending> all;
  for (std::size_t ti = 0; ti < templates.size(); ++ti) {
    const WorkloadTemplate& t = templates[ti];
    Rng arrivals(derive_seed(seed, "arrivals", ti));
    Rng params(derive_seed(seed, "workload", ti));
    const auto times = detail::arrival_times(t, arrivals);
    for (int k = 0; k < t.count; ++k) {
      JobSpec s;
      s.submit_time = times[static_cast<std::size_t>(k)];
      s.tenant_id = t.tenants[params.below(t.tenants.size())];
      s.shots = detail::draw(t.shots, params);
      int width = t.qubits;
      switch (t.family) {
        case CircuitFamily::Ghz:
          s.qasm_source = ghz_qasm(t.qubits);
          s.declared_ideal = ghz_ideal(t.qubits);
          break;
        case CircuitFamily::Random:
          s.qasm_source = random_qasm(t.qubits, t.depth, t.two_qubit_fraction, params);
          s.declared_ideal = OutcomeDistribution::all_zeros(t.qubits);
          break;
        case CircuitFamily::Qasm: {
          s.qasm_source = t.qasm;
          s.declared_ideal = t.declared_ideal;
          try {
            width = parse_qasm(t.qasm).num_qubits;
          } catch (const Error&) {
            width = 1;  // the gateway rejects it with a located diagnostic
          }
          break;
        }
      }
      s.constraints.min_two_qubit_fidelity = detail::draw(t.min_fidelity, params);
      s.constraints.required_qubits = t.required_qubits.value_or(width);
      s.constraints.max_queue_wait = t.max_wait ? detail::draw(*t.max_wait, params) : kUnbounded;
      s.constraints.priority = detail::draw(t.priority, params);
      s.mitigate = t.mitigate;
      all.push_back({s.submit_time, std::move(s)});
    }
  }
  std::stable_sort(all.begin(), all.end(), [](const Pending& a, const Pending& b) { return a.time < b.time; });
  std::vector<JobSpec> out;
  out.reserve(all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    all[i].spec.job_id = format_job_id(i);
    out.push_back(std::move(all[i].spec));
  }
  return out;
}

/// Generated jobs plus the scenario's explicit jobs, ordered by submit time.
inline std::vector<JobSpec> materialize_jobs(const Scenario& s) {
  std::vector<JobSpec> jobs = generate_workload(s.workload, s.seed.value_or(0));
  jobs.insert(jobs.end(), s.jobs.begin(), s.jobs.end());
  std::stable_sort(jobs.begin(), jobs.end(),
                   [](const JobSpec& a, const JobSpec& b) { return a.submit_time < b.submit_time; });
  return jobs;
}

}  // namespace qfs
