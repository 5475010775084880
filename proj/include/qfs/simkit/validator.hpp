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
 * @file validator.hpp
 * @brief Independent checker over the serialized event log.
 *
 * Works from events.jsonl text alone: it rebuilds the latest snapshot per
 * QPU, the queue and every busy and recalibration interval, then reports
 * each rule broken. It shares no state with the engine.
 */

#pragma once

#include "json.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qfs {

struct LogCheck {
  std::vector<std::string> violations;
  std::int64_t events = 0;
  std::int64_t arrivals = 0;
  std::int64_t starts = 0;
  std::int64_t completions = 0;
  std::int64_t cancellations = 0;
  std::int64_t rejections = 0;
  std::int64_t feasibility_violations = 0;
  std::int64_t overlap_violations = 0;

  bool ok() const { return violations.empty(); }
};

inline LogCheck validate_log(std::istream& in) {
  using nlohmann::json;
  struct Snap {
    std::string state;
    std::int64_t num_qubits = 0;
    double mean_f2q = 0.0;
  };
  struct Job {
    std::int64_t arrival = 0;
    std::int64_t required_qubits = 0;
    double min_fidelity = 0.0;
    std::optional<std::int64_t> max_wait;
    enum { Queued, Running, Done, Cancelled } phase = Queued;
  };
  struct Device {
    std::optional<std::string> running;
    std::int64_t busy_since = 0;
    bool recalibrating = false;
  };

  LogCheck r;
  std::map<std::string, Snap> snaps;
  std::map<std::string, Job> jobs;
  std::map<std::string, Device> devices;
  std::int64_t last_time = 0;
  std::string line;
  std::int64_t lineno = 0;

  auto fail = [&](const std::string& msg) {
    r.violations.push_back("line " + std::to_string(lineno) + ": " + msg);
  };
  auto take_snapshot = [&](const json& s) {
    snaps[s.at("qpu_id").get<std::string>()] =
        Snap{s.at("state").get<std::string>(), s.at("num_qubits").get<std::int64_t>(), s.at("mean_f2q").get<double>()};
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json e;
    try {
      e = json::parse(line);
    } catch (const json::exception& ex) {
      fail(std::string("unparseable event: ") + ex.what());
      continue;
    }
    try {
      const auto seq = e.at("seq").get<std::int64_t>();
      const auto t = e.at("time").get<std::int64_t>();
      const auto kind = e.at("kind").get<std::string>();
      const json& p = e.at("payload");
      if (seq != r.events) fail("seq " + std::to_string(seq) + " out of order");
      if (t < last_time) fail("time went backwards");
      last_time = t;
      ++r.events;

      if (kind == "MonitorPoll") {
        for (const auto& s : p.at("snapshots")) take_snapshot(s);
      } else if (kind == "JobArrival") {
        ++r.arrivals;
        const auto id = p.at("job_id").get<std::string>();
        if (jobs.count(id)) fail("job " + id + " arrived twice");
        Job j;
        j.arrival = t;
        j.required_qubits = p.at("required_qubits").get<std::int64_t>();
        j.min_fidelity = p.at("min_two_qubit_fidelity").get<double>();
        if (!p.at("max_queue_wait").is_null()) j.max_wait = p.at("max_queue_wait").get<std::int64_t>();
        jobs[id] = j;
      } else if (kind == "JobRejected") {
        ++r.rejections;
      } else if (kind == "JobStart") {
        ++r.starts;
        const auto id = p.at("job_id").get<std::string>();
        const auto qpu = p.at("qpu_id").get<std::string>();
        auto it = jobs.find(id);
        if (it == jobs.end() || it->second.phase != Job::Queued) {
          fail("job " + id + " started without being queued");
          continue;
        }
        Job& j = it->second;
        auto sit = snaps.find(qpu);
        if (sit == snaps.end()) {
          ++r.feasibility_violations;
          fail("job " + id + " started on " + qpu + " with no snapshot");
        } else {
          const Snap& s = sit->second;
          if (s.state != "online" || s.num_qubits < j.required_qubits || s.mean_f2q < j.min_fidelity) {
            ++r.feasibility_violations;
            fail("job " + id + " infeasible on " + qpu);
          }
        }
        if (j.max_wait && t - j.arrival > *j.max_wait) fail("job " + id + " started after its max wait");
        Device& d = devices[qpu];
        if (d.running || d.recalibrating) {
          ++r.overlap_violations;
          fail("job " + id + " overlaps work on " + qpu);
        }
        d.running = id;
        d.busy_since = t;
        j.phase = Job::Running;
      } else if (kind == "JobComplete") {
        ++r.completions;
        const auto id = p.at("job_id").get<std::string>();
        const auto qpu = p.at("qpu_id").get<std::string>();
        Device& d = devices[qpu];
        if (d.running != id) {
          fail("job " + id + " completed on " + qpu + " without running there");
        } else if (t - d.busy_since != p.at("exec_time").get<std::int64_t>()) {
          fail("job " + id + " exec_time disagrees with its interval");
        }
        d.running.reset();
        auto it = jobs.find(id);
        if (it != jobs.end()) it->second.phase = Job::Done;
      } else if (kind == "JobCancelled") {
        ++r.cancellations;
        const auto id = p.at("job_id").get<std::string>();
        auto it = jobs.find(id);
        if (it == jobs.end() || it->second.phase != Job::Queued) {
          fail("job " + id + " cancelled while not queued");
          continue;
        }
        if (!it->second.max_wait || t - it->second.arrival <= *it->second.max_wait) {
          fail("job " + id + " cancelled before exceeding its max wait");
        }
        it->second.phase = Job::Cancelled;
      } else if (kind == "RecalStart") {
        const auto qpu = p.at("qpu_id").get<std::string>();
        Device& d = devices[qpu];
        if (d.running || d.recalibrating) {
          ++r.overlap_violations;
          fail("recalibration overlaps work on " + qpu);
        }
        d.recalibrating = true;
        take_snapshot(p.at("snapshot"));
      } else if (kind == "RecalEnd") {
        const auto qpu = p.at("qpu_id").get<std::string>();
        Device& d = devices[qpu];
        if (!d.recalibrating) fail("recalibration ended on " + qpu + " without starting");
        d.recalibrating = false;
        take_snapshot(p.at("snapshot"));
      } else if (kind == "DriftStep" || kind == "QpuFlagged") {
      } else {
        fail("unknown event kind '" + kind + "'");
      }
    } catch (const json::exception& ex) {
      fail(std::string("malformed event: ") + ex.what());
    }
  }

  for (const auto& [id, j] : jobs) {
    if (j.phase == Job::Queued || j.phase == Job::Running) r.violations.push_back("job " + id + " never terminated");
  }
  if (r.arrivals != r.completions + r.cancellations) {
    r.violations.push_back("conservation: " + std::to_string(r.arrivals) + " admitted vs " +
                           std::to_string(r.completions) + " completed + " + std::to_string(r.cancellations) +
                           " cancelled");
  }
  return r;
}

inline LogCheck validate_log_text(const std::string& text) {
  std::istringstream in(text);
  return validate_log(in);
}

}  // namespace qfs
