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
 * @file export.hpp
 * @brief Writes a RunLog as events.jsonl, jobs.csv, results.jsonl,
 *        summary.json and summary.csv, and reads summaries back.
 */

#pragma once

#include "qfs/circuit.hpp"
#include "qfs/simkit/engine.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace qfs {

inline std::string event_line(const LogEvent& e) {
  Json j;
  j["seq"] = e.seq;
  j["time"] = e.time;
  j["kind"] = e.kind;
  j["payload"] = e.payload;
  return j.dump();
}

inline std::string events_jsonl(const RunLog& log) {
  std::string out;
  for (const auto& e : log.events) {
    out += event_line(e);
    out += '\n';
  }
  return out;
}

inline const char* kJobsCsvHeader =
    "job_id,tenant_id,status,reason,qpu_id,submit_time,start_time,end_time,wait_time,turnaround,"
    "queue_time,exec_time,predicted_vs_actual_duration_ratio,predicted_fidelity,achieved_parity_error,"
    "swap_overhead,zne_estimate";

/// Cancelled and rejected rows leave every execution column empty.
inline std::string jobs_csv(const RunLog& log) {
  std::ostringstream out;
  out << kJobsCsvHeader << '\n';
  for (const auto& m : log.jobs) {
    out << m.job_id << ',' << m.tenant_id << ',' << to_string(m.status) << ',' << m.reason << ',';
    if (m.status != JobStatus::Completed) {
      out << ',' << m.submit_time << ",,,";
      if (m.status == JobStatus::Cancelled) out << m.wait_time;
      out << ",,,,,,,,\n";
      continue;
    }
    out << m.qpu_id << ',' << m.submit_time << ',' << *m.start_time << ',' << *m.end_time << ',' << m.wait_time
        << ',' << m.turnaround << ',' << m.queue_time << ',' << m.exec_time << ','
        << format_real(m.predicted_vs_actual_duration_ratio) << ',' << format_real(m.predicted_fidelity) << ','
        << format_real(m.achieved_parity_error) << ',' << m.swap_overhead << ','
        << (m.zne_estimate ? format_real(*m.zne_estimate) : "") << '\n';
  }
  return out.str();
}

inline Json distribution_json(const OutcomeDistribution& d) {
  Json j = Json::object();
  for (const auto& [k, p] : d.probabilities) j[k] = p;
  return j;
}

inline std::string results_jsonl(const RunLog& log) {
  std::string out;
  for (const auto& r : log.results) {
    Json j;
    j["job_id"] = r.job_id;
    j["qpu_id"] = r.qpu_id;
    Json recs = Json::array();
    for (const auto& rec : r.records) {
      Json counts = Json::object();
      for (const auto& [k, n] : rec.raw_counts) counts[k] = n;
      recs.push_back(Json{{"noise_factor", rec.noise_factor},
                          {"applied_fidelity", rec.applied_fidelity},
                          {"start_time", rec.start_time},
                          {"end_time", rec.end_time},
                          {"shots", rec.shots},
                          {"raw_counts", counts}});
    }
    j["records"] = recs;
    j["mitigated_distribution"] = distribution_json(r.mitigated.mitigated_distribution);
    j["zne_estimate"] = r.mitigated.zne_estimate ? Json(*r.mitigated.zne_estimate) : Json(nullptr);
    Json tags = Json::array();
    for (const auto& t : r.mitigated.method_tags) tags.push_back(t);
    j["method_tags"] = tags;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline Json summary_json(const SummaryReport& s) {
  Json j;
  j["policy"] = s.policy;
  j["jobs_total"] = s.jobs_total;
  j["jobs_completed"] = s.jobs_completed;
  j["jobs_cancelled"] = s.jobs_cancelled;
  j["jobs_rejected"] = s.jobs_rejected;
  j["mean_wait"] = s.mean_wait;
  j["p95_wait"] = s.p95_wait;
  j["mean_turnaround"] = s.mean_turnaround;
  j["throughput_per_s"] = s.throughput_per_s;
  j["mean_predicted_fidelity"] = s.mean_predicted_fidelity;
  j["total_time"] = s.total_time;
  Json qpus = Json::array();
  for (const auto& q : s.qpus) {
    qpus.push_back(Json{{"qpu_id", q.qpu_id}, {"busy_time", q.busy_time}, {"utilization", q.utilization},
                        {"jobs", q.jobs}});
  }
  j["qpus"] = qpus;
  return j;
}

/// One row per QPU; the policy aggregates repeat on every row.
inline std::string summary_csv(const SummaryReport& s) {
  std::ostringstream out;
  out << "policy,qpu_id,jobs_total,jobs_completed,jobs_cancelled,jobs_rejected,mean_wait,p95_wait,"
         "mean_turnaround,throughput_per_s,mean_predicted_fidelity,total_time,busy_time,utilization,qpu_jobs\n";
  for (const auto& q : s.qpus) {
    out << s.policy << ',' << q.qpu_id << ',' << s.jobs_total << ',' << s.jobs_completed << ','
        << s.jobs_cancelled << ',' << s.jobs_rejected << ',' << format_real(s.mean_wait) << ','
        << format_real(s.p95_wait) << ',' << format_real(s.mean_turnaround) << ','
        << format_real(s.throughput_per_s) << ',' << format_real(s.mean_predicted_fidelity) << ','
        << s.total_time << ',' << q.busy_time << ',' << format_real(q.utilization) << ',' << q.jobs << '\n';
  }
  return out.str();
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

inline void export_run(const RunLog& log, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + dir.string() + "': " + ec.message());
  write_text(dir / "events.jsonl", events_jsonl(log));
  write_text(dir / "jobs.csv", jobs_csv(log));
  write_text(dir / "results.jsonl", results_jsonl(log));
  write_text(dir / "summary.json", summary_json(log.summary).dump(2) + "\n");
  write_text(dir / "summary.csv", summary_csv(log.summary));
}

inline SummaryReport read_summary(const std::filesystem::path& dir) {
  const auto path = dir / "summary.json";
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
    SummaryReport s;
    s.policy = j.at("policy").get<std::string>();
    s.jobs_total = j.at("jobs_total").get<std::int64_t>();
    s.jobs_completed = j.at("jobs_completed").get<std::int64_t>();
    s.jobs_cancelled = j.at("jobs_cancelled").get<std::int64_t>();
    s.jobs_rejected = j.at("jobs_rejected").get<std::int64_t>();
    s.mean_wait = j.at("mean_wait").get<double>();
    s.p95_wait = j.at("p95_wait").get<double>();
    s.mean_turnaround = j.at("mean_turnaround").get<double>();
    s.throughput_per_s = j.at("throughput_per_s").get<double>();
    s.mean_predicted_fidelity = j.at("mean_predicted_fidelity").get<double>();
    s.total_time = j.at("total_time").get<Micros>();
    for (const auto& q : j.at("qpus")) {
      s.qpus.push_back(QpuUsage{q.at("qpu_id").get<std::string>(), q.at("busy_time").get<Micros>(),
                                q.at("utilization").get<double>(), q.at("jobs").get<std::int64_t>()});
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, path.string() + ": " + e.what());
  }
}

}  // namespace qfs
