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
 * @file gateway.hpp
 * @brief Job intake: validation of quantum metadata and per-tenant quotas.
 *
 * Tenants are identified by an opaque string; there is no authentication.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/common.hpp"
#include "qfs/distribution.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qfs {

inline constexpr int kMaxMeasuredBits = 16;
inline constexpr int kDefaultMaxPending = 100;

struct JobConstraints {
  double min_two_qubit_fidelity = 0.9;
  int required_qubits = 1;
  Micros max_queue_wait = kUnbounded;
  int priority = 0;  ///< 0..9, 9 highest
};

struct JobSpec {
  std::string job_id;
  std::string tenant_id;
  std::string qasm_source;
  std::int64_t shots = 1;
  JobConstraints constraints;
  std::optional<OutcomeDistribution> declared_ideal;
  Micros submit_time = 0;
  bool mitigate = true;
};

struct Violation {
  ErrorCode code = ErrorCode::InvalidConstraint;
  std::string field;
  std::string message;
  int line = 0;    ///< source position for MalformedCircuit, else 0
  int column = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::optional<Circuit> circuit;  ///< parsed IR when the source parses

  bool ok() const { return violations.empty(); }
};

inline ValidationReport validate_job(const JobSpec& spec) {
  ValidationReport report;
  auto invalid = [&](std::string field, std::string msg) {
    report.violations.push_back({ErrorCode::InvalidConstraint, std::move(field), std::move(msg)});
  };
  if (spec.job_id.empty()) invalid("job_id", "job_id must be non-empty");
  if (spec.tenant_id.empty()) invalid("tenant_id", "tenant_id must be non-empty");
  if (spec.shots < 1) invalid("shots", "shots must be >= 1");
  if (spec.submit_time < 0) invalid("submit_time", "submit_time must be >= 0");

  const auto& c = spec.constraints;
  if (!(c.min_two_qubit_fidelity > 0.0 && c.min_two_qubit_fidelity <= 1.0)) {
    invalid("min_two_qubit_fidelity", "must lie in (0,1]");
  }
  if (c.required_qubits < 1) invalid("required_qubits", "must be >= 1");
  if (c.max_queue_wait < 0) invalid("max_queue_wait", "must be >= 0 or unbounded");
  if (c.priority < 0 || c.priority > 9) invalid("priority", "must lie in 0..9");

  if (spec.qasm_source.empty()) {
    report.violations.push_back(
        {ErrorCode::MalformedCircuit, "qasm_source", "circuit source is empty"});
    return report;
  }
  try {
    report.circuit = parse_qasm(spec.qasm_source);
  } catch (const CircuitError& e) {
    report.violations.push_back(
        {ErrorCode::MalformedCircuit, "qasm_source", e.message(), e.line(), e.column()});
    return report;
  }
  const Circuit& ir = *report.circuit;
  if (c.required_qubits >= 1 && c.required_qubits < ir.num_qubits) {
    invalid("required_qubits", "circuit uses " + std::to_string(ir.num_qubits) +
                                   " qubits but only " + std::to_string(c.required_qubits) +
                                   " were requested");
  }
  if (ir.num_cbits > kMaxMeasuredBits) {
    invalid("qasm_source", "at most " + std::to_string(kMaxMeasuredBits) + " classical bits supported");
  }
  if (spec.declared_ideal) {
    const std::string problem = distribution_problem(*spec.declared_ideal);
    if (!problem.empty()) {
      invalid("declared_ideal", problem);
    } else if (spec.declared_ideal->num_bits != ir.num_cbits) {
      invalid("declared_ideal", "width " + std::to_string(spec.declared_ideal->num_bits) +
                                    " does not match " + std::to_string(ir.num_cbits) +
                                    " classical bits");
    }
  }
  return report;
}

struct TenantQuota {
  std::string tenant_id;
  int max_pending = kDefaultMaxPending;
  int pending_count = 0;
};

struct AdmissionResult {
  bool admitted = false;
  std::optional<ErrorCode> error;
  std::string detail;
  Micros enqueue_time = 0;
};

/// Quota and uniqueness gate. Callers validate first.
inline AdmissionResult admit(const JobSpec& spec, TenantQuota& quota, std::set<std::string>& seen_ids) {
  AdmissionResult r;
  if (seen_ids.count(spec.job_id)) {
    r.error = ErrorCode::DuplicateJobId;
    r.detail = "job_id '" + spec.job_id + "' already submitted";
    return r;
  }
  if (quota.pending_count >= quota.max_pending) {
    r.error = ErrorCode::QuotaExceeded;
    r.detail = "tenant '" + quota.tenant_id + "' has " + std::to_string(quota.pending_count) +
               " pending jobs (max " + std::to_string(quota.max_pending) + ")";
    return r;
  }
  seen_ids.insert(spec.job_id);
  ++quota.pending_count;
  r.admitted = true;
  r.enqueue_time = spec.submit_time;
  return r;
}

/// Upper bound on what any device can offer: qubit count and baseline mean
/// two-qubit fidelity. Drift only degrades calibration, so a job that no
/// baseline satisfies can never run.
struct DeviceCapability {
  int num_qubits = 0;
  double baseline_mean_f2q = 1.0;
};

/// Front door: validation, uniqueness, quotas and fleet capability.
class Gateway {
 public:
  explicit Gateway(int default_max_pending = kDefaultMaxPending,
                   std::map<std::string, int> per_tenant_max = {},
                   std::vector<DeviceCapability> fleet = {})
      : default_max_(default_max_pending), per_tenant_max_(std::move(per_tenant_max)),
        fleet_(std::move(fleet)) {}

  struct Outcome {
    AdmissionResult admission;
    ValidationReport report;
  };

  Outcome submit(const JobSpec& spec) {
    Outcome out;
    out.report = validate_job(spec);
    if (!out.report.ok()) {
      out.admission.error = out.report.violations.front().code;
      out.admission.detail = out.report.violations.front().field + ": " +
                             out.report.violations.front().message;
      return out;
    }
    if (!fleet_.empty() && !any_device_fits(spec.constraints)) {
      out.admission.error = ErrorCode::Unschedulable;
      out.admission.detail = "no device can satisfy the requested qubits and fidelity";
      return out;
    }
    out.admission = admit(spec, quota(spec.tenant_id), seen_);
    return out;
  }

  /// Called when a job leaves the queue (started or cancelled).
  void release(const std::string& tenant_id) {
    auto& q = quota(tenant_id);
    if (q.pending_count > 0) --q.pending_count;
  }

  TenantQuota& quota(const std::string& tenant_id) {
    auto it = quotas_.find(tenant_id);
    if (it == quotas_.end()) {
      auto limit = per_tenant_max_.find(tenant_id);
      it = quotas_.emplace(tenant_id, TenantQuota{tenant_id,
                                                   limit == per_tenant_max_.end() ? default_max_
                                                                                  : limit->second,
                                                   0})
               .first;
    }
    return it->second;
  }

  int total_pending() const {
    int sum = 0;
    for (const auto& [id, q] : quotas_) sum += q.pending_count;
    return sum;
  }

 private:
  bool any_device_fits(const JobConstraints& c) const {
    for (const auto& d : fleet_) {
      if (d.num_qubits >= c.required_qubits && d.baseline_mean_f2q >= c.min_two_qubit_fidelity) {
        return true;
      }
    }
    return false;
  }

  int default_max_;
  std::map<std::string, int> per_tenant_max_;
  std::vector<DeviceCapability> fleet_;
  std::map<std::string, TenantQuota> quotas_;
  std::set<std::string> seen_;
};

}  // namespace qfs
