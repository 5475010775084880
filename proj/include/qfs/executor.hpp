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
 * @file executor.hpp
 * @brief Job dispatch under the declared-distribution execution model and
 *        the results collector's error mitigation.
 *
 * Execution model: each shot succeeds with probability
 * F(lambda) = max(0, 1 - lambda * (1 - predicted_fidelity)) and then draws
 * from the job's declared ideal distribution; otherwise it draws a uniformly
 * random bitstring. Every measured bit is then misread with the per-qubit
 * readout error of the physical qubit it was measured on.
 *
 * Mitigation: per-qubit confusion-matrix inversion (tensor-product model),
 * followed by zero-noise extrapolation E(0) ~ sum_i c_i E(lambda_i) with
 * Richardson coefficients (sum_i c_i = 1, higher moments cancelled).
 */

#pragma once

#include "qfs/common.hpp"
#include "qfs/distribution.hpp"
#include "qfs/fleet.hpp"
#include "qfs/gateway.hpp"
#include "qfs/scheduler.hpp"
#include "qfs/transpiler.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qfs {

struct ExecutionRecord {
  std::string job_id;
  std::string qpu_id;
  std::int64_t shots = 0;
  int num_bits = 0;
  Counts raw_counts;
  Micros start_time = 0;
  Micros end_time = 0;
  double noise_factor = 1.0;
  double applied_fidelity = 1.0;
  std::vector<int> readout_qubits;  ///< physical qubit behind each classical bit, -1 if unmeasured
};

struct MitigatedResult {
  std::string job_id;
  OutcomeDistribution mitigated_distribution;
  std::optional<double> zne_estimate;
  std::set<std::string> method_tags;
};

/// What the dispatcher sees of the target device when it connects.
struct ExecutionTarget {
  QpuState state = QpuState::Online;
  bool busy = false;
  const CalibrationData* calibration = nullptr;
};

inline double amplified_fidelity(double fidelity, double lambda) {
  return std::max(0.0, 1.0 - lambda * (1.0 - fidelity));
}

/// Physical qubit last measured into each classical bit.
inline std::vector<int> readout_map(const Circuit& physical) {
  std::vector<int> map(static_cast<std::size_t>(physical.num_cbits), -1);
  for (const Gate& g : physical.gates) {
    if (g.kind == GateKind::Measure) map[static_cast<std::size_t>(*g.cbit)] = g.qubits[0];
  }
  return map;
}

/// Runs `spec.shots` shots at noise factor `lambda`. The record spans
/// [start, start + duration). Throws QpuBusy / QpuNotOnline.
inline ExecutionRecord execute(const ScheduleDecision& decision, const TranspileResult& tr,
                               const JobSpec& spec, double lambda, const ExecutionTarget& target,
                               Rng& rng, Micros start, Micros duration) {
  if (target.busy) throw Error(ErrorCode::QpuBusy, decision.qpu_id + " is busy");
  if (target.state != QpuState::Online) {
    throw Error(ErrorCode::QpuNotOnline, decision.qpu_id + " is " + std::string(to_string(target.state)));
  }
  if (lambda < 1.0) throw Error(ErrorCode::InvalidArgument, "noise factor must be >= 1");

  ExecutionRecord rec;
  rec.job_id = spec.job_id;
  rec.qpu_id = decision.qpu_id;
  rec.shots = spec.shots;
  rec.num_bits = tr.physical.num_cbits;
  rec.start_time = start;
  rec.end_time = start + duration;
  rec.noise_factor = lambda;
  rec.applied_fidelity = amplified_fidelity(tr.predicted_fidelity, lambda);
  rec.readout_qubits = readout_map(tr.physical);

  const int width = rec.num_bits;
  const OutcomeDistribution ideal =
      spec.declared_ideal ? *spec.declared_ideal : OutcomeDistribution::all_zeros(width);
  std::vector<std::uint32_t> outcomes;
  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto& [key, p] : ideal.probabilities) {
    acc += p;
    outcomes.push_back(from_bitstring(key));
    cumulative.push_back(acc);
  }

  std::vector<double> eps0(static_cast<std::size_t>(width), 0.0);
  std::vector<double> eps1(static_cast<std::size_t>(width), 0.0);
  if (target.calibration) {
    for (int b = 0; b < width; ++b) {
      const int q = rec.readout_qubits[static_cast<std::size_t>(b)];
      if (q < 0) continue;
      eps0[static_cast<std::size_t>(b)] = target.calibration->readout_eps0[static_cast<std::size_t>(q)];
      eps1[static_cast<std::size_t>(b)] = target.calibration->readout_eps1[static_cast<std::size_t>(q)];
    }
  }

  std::unordered_map<std::uint32_t, std::int64_t> tally;
  const std::uint64_t space = width >= 32 ? 0 : (std::uint64_t{1} << width);
  for (std::int64_t s = 0; s < spec.shots; ++s) {
    std::uint32_t bits = 0;
    if (rng.bernoulli(rec.applied_fidelity)) {
      const double u = rng.uniform() * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      bits = outcomes[static_cast<std::size_t>(it - cumulative.begin())];
    } else {
      bits = static_cast<std::uint32_t>(rng.below(space));
    }
    for (int b = 0; b < width; ++b) {
      const bool one = (bits >> b) & 1U;
      const double flip = one ? eps1[static_cast<std::size_t>(b)] : eps0[static_cast<std::size_t>(b)];
      if (flip > 0.0 && rng.bernoulli(flip)) bits ^= (1U << b);
    }
    ++tally[bits];
  }
  for (const auto& [bits, n] : tally) rec.raw_counts[to_bitstring(bits, width)] = n;
  return rec;
}

// ---------------------------------------------------------------------------
// Readout mitigation
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> dense(const OutcomeDistribution& d) {
  std::vector<double> v(std::size_t{1} << d.num_bits, 0.0);
  for (const auto& [k, p] : d.probabilities) v[from_bitstring(k)] = p;
  return v;
}

/// Applies the 2x2 matrix [[a, b], [c, d]] along bit axis `bit`.
inline void apply_axis(std::vector<double>& v, int bit, double a, double b, double c, double d) {
  const std::size_t stride = std::size_t{1} << bit;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i & stride) continue;
    const double x0 = v[i];
    const double x1 = v[i | stride];
    v[i] = a * x0 + b * x1;
    v[i | stride] = c * x0 + d * x1;
  }
}

inline OutcomeDistribution sparse(const std::vector<double>& v, int width) {
  OutcomeDistribution d{width, {}};
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) d.probabilities[to_bitstring(static_cast<std::uint32_t>(i), width)] = v[i];
  }
  return d;
}

}  // namespace detail

/// Forward readout channel: what an ideal distribution looks like after
/// per-bit misclassification.
inline OutcomeDistribution apply_confusion(const OutcomeDistribution& p, std::span<const double> eps0,
                                           std::span<const double> eps1) {
  auto v = detail::dense(p);
  for (int b = 0; b < p.num_bits; ++b) {
    const double e0 = eps0[static_cast<std::size_t>(b)];
    const double e1 = eps1[static_cast<std::size_t>(b)];
    detail::apply_axis(v, b, 1.0 - e0, e1, e0, 1.0 - e1);
  }
  return detail::sparse(v, p.num_bits);
}

/// Raw A^-1 p along every bit axis, before clipping.
inline std::vector<double> invert_confusion(const OutcomeDistribution& observed, std::span<const double> eps0,
                                            std::span<const double> eps1) {
  auto v = detail::dense(observed);
  for (int b = 0; b < observed.num_bits; ++b) {
    const double e0 = eps0[static_cast<std::size_t>(b)];
    const double e1 = eps1[static_cast<std::size_t>(b)];
    const double det = 1.0 - e0 - e1;
    if (std::abs(det) < 1e-12) {
      throw Error(ErrorCode::SingularConfusion, "confusion matrix of bit " + std::to_string(b) + " is singular");
    }
    detail::apply_axis(v, b, (1.0 - e1) / det, -e1 / det, -e0 / det, (1.0 - e0) / det);
  }
  return v;
}

/// Clips negative quasi-probabilities to zero and renormalises.
inline OutcomeDistribution clip_and_normalize(std::vector<double> v, int width) {
  double sum = 0.0;
  for (double& x : v) {
    x = std::max(0.0, x);
    sum += x;
  }
  if (sum > 0.0) {
    for (double& x : v) x /= sum;
  }
  return detail::sparse(v, width);
}

inline OutcomeDistribution mitigate_distribution(const OutcomeDistribution& observed,
                                                 std::span<const double> eps0, std::span<const double> eps1) {
  return clip_and_normalize(invert_confusion(observed, eps0, eps1), observed.num_bits);
}

/// Per-bit (eps0, eps1) for a record, read from the calibration of the
/// physical qubits it was measured on.
inline std::pair<std::vector<double>, std::vector<double>> readout_errors(const ExecutionRecord& rec,
                                                                          const CalibrationData& cal) {
  std::vector<double> e0(static_cast<std::size_t>(rec.num_bits), 0.0);
  std::vector<double> e1(static_cast<std::size_t>(rec.num_bits), 0.0);
  for (std::size_t b = 0; b < e0.size(); ++b) {
    const int q = rec.readout_qubits.empty() ? static_cast<int>(b) : rec.readout_qubits[b];
    if (q < 0) continue;
    e0[b] = cal.readout_eps0[static_cast<std::size_t>(q)];
    e1[b] = cal.readout_eps1[static_cast<std::size_t>(q)];
  }
  return {e0, e1};
}

inline MitigatedResult mitigate_readout(const ExecutionRecord& rec, const CalibrationData& cal) {
  const auto [e0, e1] = readout_errors(rec, cal);
  MitigatedResult out;
  out.job_id = rec.job_id;
  out.mitigated_distribution = mitigate_distribution(empirical(rec.raw_counts, rec.num_bits), e0, e1);
  out.method_tags.insert("readout");
  return out;
}

// ---------------------------------------------------------------------------
// Zero-noise extrapolation
// ---------------------------------------------------------------------------

/// Richardson coefficients: solves sum_i c_i lambda_i^k = [k == 0] for
/// k = 0..order with order = lambdas.size() - 1.
inline std::vector<double> zne_coefficients(std::span<const double> lambdas, int order) {
  const std::size_t m = lambdas.size();
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "ZNE needs at least two noise factors");
  if (order != static_cast<int>(m) - 1) {
    throw Error(ErrorCode::InvalidArgument, "Richardson order must equal the number of factors minus one");
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (lambdas[i] == lambdas[j]) {
        throw Error(ErrorCode::DegenerateLambdas, "noise factor " + format_real(lambdas[i]) + " repeated");
      }
    }
  }
  // Augmented Vandermonde system, Gaussian elimination with partial pivoting.
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) a[k][i] = std::pow(lambdas[i], static_cast<double>(k));
    a[k][m] = k == 0 ? 1.0 : 0.0;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) throw Error(ErrorCode::DegenerateLambdas, "singular Vandermonde system");
    std::swap(a[col], a[pivot]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = a[i][m] / a[i][i];
  return c;
}

struct NoisyEstimate {
  double lambda = 1.0;
  double value = 0.0;
};

inline double zne_extrapolate(std::span<const NoisyEstimate> estimates, std::span<const double> coefficients) {
  if (estimates.size() != coefficients.size()) {
    throw Error(ErrorCode::InvalidArgument, "estimate and coefficient counts differ");
  }
  double e0 = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) e0 += coefficients[i] * estimates[i].value;
  return e0;
}

/// Results collector: readout mitigation of every record, then ZNE over the
/// parity expectations when more than one noise factor was run. `records`
/// are ordered by ascending noise factor and the first one is lambda = 1.
inline MitigatedResult collect_results(std::span<const ExecutionRecord> records, const CalibrationData& cal,
                                       bool mitigate) {
  MitigatedResult out;
  if (records.empty()) return out;
  out.job_id = records.front().job_id;
  if (!mitigate) {
    out.mitigated_distribution = empirical(records.front().raw_counts, records.front().num_bits);
    return out;
  }
  std::vector<NoisyEstimate> estimates;
  std::vector<double> lambdas;
  for (const auto& rec : records) {
    const MitigatedResult m = mitigate_readout(rec, cal);
    if (estimates.empty()) out.mitigated_distribution = m.mitigated_distribution;
    estimates.push_back({rec.noise_factor, parity_expectation(m.mitigated_distribution)});
    lambdas.push_back(rec.noise_factor);
  }
  out.method_tags.insert("readout");
  if (records.size() >= 2) {
    const auto coeffs = zne_coefficients(lambdas, static_cast<int>(lambdas.size()) - 1);
    out.zne_estimate = zne_extrapolate(estimates, coeffs);
    out.method_tags.insert("zne");
  }
  return out;
}

}  // namespace qfs
