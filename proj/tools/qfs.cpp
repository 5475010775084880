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

// qfs: command-line front end.
//
//   qfs run --scenario FILE --out DIR [--policy P] [--seed N] [--sweep N,M,...]
//   qfs submit --job FILE
//   qfs report --in DIR
//   qfs validate --in DIR
//
// Exit codes: 0 success, 1 validation failure, 2 runtime error.

#include "qfs/simkit/export.hpp"
#include "qfs/simkit/scenario.hpp"
#include "qfs/simkit/validator.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kRuntime = 2;

void configure_logging() {
  const char* env = std::getenv("QFS_LOG_LEVEL");
  const std::string level = env ? env : "info";
  if (level == "error") {
    spdlog::set_level(spdlog::level::err);
  } else if (level == "debug") {
    spdlog::set_level(spdlog::level::debug);
  } else {
    spdlog::set_level(spdlog::level::info);
    if (level != "info") spdlog::warn("QFS_LOG_LEVEL '{}' not one of error|info|debug; using info", level);
  }
  spdlog::set_pattern("[%l] %v");
}

int exit_code_for(const qfs::Error& e) {
  switch (e.code()) {
    case qfs::ErrorCode::ScenarioInvalid:
    case qfs::ErrorCode::InvalidConstraint:
    case qfs::ErrorCode::MalformedCircuit:
    case qfs::ErrorCode::ParseError:
    case qfs::ErrorCode::SemanticError:
    case qfs::ErrorCode::InvalidTopology:
      return kInvalid;
    default:
      return kRuntime;
  }
}

int run_one(qfs::Scenario scenario, const std::filesystem::path& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const qfs::RunLog log = qfs::run(scenario);
  qfs::export_run(log, out);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& s = log.summary;
  spdlog::info("seed {} policy {}: {} jobs, {} completed, {} cancelled, {} rejected, {} events in {:.2f}s -> {}",
               log.seed, log.policy, s.jobs_total, s.jobs_completed, s.jobs_cancelled, s.jobs_rejected,
               log.events.size(), secs, out.string());
  return kOk;
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw qfs::Error(qfs::ErrorCode::ScenarioInvalid, "--sweep: '" + item + "' is not a seed");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

int cmd_run(const std::string& scenario_path, const std::string& policy, const std::optional<std::uint64_t>& seed,
            const std::string& sweep, const std::string& out) {
  qfs::Scenario scenario = qfs::load_scenario(scenario_path);
  if (!policy.empty()) {
    const auto p = qfs::policy_from_string(policy);
    if (!p) throw qfs::Error(qfs::ErrorCode::ScenarioInvalid, "--policy: expected sjf, rr, bff or prio");
    scenario.policy = *p;
  }
  if (seed) scenario.seed = *seed;
  if (sweep.empty()) return run_one(std::move(scenario), out);

  const auto seeds = parse_seeds(sweep);
  std::vector<std::future<int>> runs;
  for (std::uint64_t s : seeds) {
    qfs::Scenario copy = scenario;
    copy.seed = s;
    const auto dir = std::filesystem::path(out) / ("seed-" + std::to_string(s));
    runs.push_back(std::async(std::launch::async, [copy = std::move(copy), dir]() { return run_one(copy, dir); }));
  }
  int rc = kOk;
  for (auto& f : runs) rc = std::max(rc, f.get());
  return rc;
}

int cmd_submit(const std::string& path) {
  qfs::JobSpec spec;
  try {
    spec = qfs::load_job_file(path);
  } catch (const qfs::Error& e) {
    if (e.code() == qfs::ErrorCode::Io) throw;
    std::cout << "invalid: " << e.detail() << "\n";
    return kInvalid;
  }
  const auto report = qfs::validate_job(spec);
  if (report.ok()) {
    const auto& ir = *report.circuit;
    std::cout << "valid: " << spec.job_id << " (" << ir.num_qubits << " qubits, " << ir.gates.size()
              << " gates, " << spec.shots << " shots)\n";
    return kOk;
  }
  for (const auto& v : report.violations) {
    std::cout << "invalid: " << qfs::to_string(v.code) << " " << v.field << ": " << v.message;
    if (v.line > 0) std::cout << " (line " << v.line << ", column " << v.column << ")";
    std::cout << "\n";
  }
  return kInvalid;
}

int cmd_report(const std::string& dir) {
  const qfs::SummaryReport s = qfs::read_summary(dir);
  std::cout << "policy            " << s.policy << "\n"
            << "jobs              " << s.jobs_total << " (" << s.jobs_completed << " completed, " << s.jobs_cancelled
            << " cancelled, " << s.jobs_rejected << " rejected)\n"
            << "mean wait         " << s.mean_wait << " us\n"
            << "p95 wait          " << s.p95_wait << " us\n"
            << "mean turnaround   " << s.mean_turnaround << " us\n"
            << "throughput        " << s.throughput_per_s << " jobs/s\n"
            << "mean pred. fid.   " << s.mean_predicted_fidelity << "\n"
            << "simulated time    " << s.total_time << " us\n\n";
  std::printf("%-12s %14s %12s %8s\n", "qpu", "busy_us", "utilization", "jobs");
  for (const auto& q : s.qpus) {
    std::printf("%-12s %14lld %12.4f %8lld\n", q.qpu_id.c_str(), static_cast<long long>(q.busy_time), q.utilization,
                static_cast<long long>(q.jobs));
  }
  return kOk;
}

int cmd_validate(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "events.jsonl";
  std::ifstream in(path);
  if (!in) throw qfs::Error(qfs::ErrorCode::Io, "cannot open '" + path.string() + "'");
  const qfs::LogCheck check = qfs::validate_log(in);
  for (const auto& v : check.violations) std::cout << "violation: " << v << "\n";
  std::cout << check.events << " events, " << check.starts << " starts, " << check.completions << " completions, "
            << check.cancellations << " cancellations: " << (check.ok() ? "ok" : "FAILED") << "\n";
  return check.ok() ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"qfs: quantum cloud scheduling simulator"};
  app.require_subcommand(1);

  std::string scenario_path, policy, sweep, out, job_path, in_dir;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "simulate a scenario and export the run");
  run->add_option("--scenario", scenario_path, "scenario file")->required();
  run->add_option("--policy", policy, "sjf, rr, bff or prio (overrides the scenario)");
  run->add_option("--seed", seed, "master seed (overrides the scenario)");
  run->add_option("--sweep", sweep, "comma-separated seeds, run concurrently into <out>/seed-<n>");
  run->add_option("--out", out, "output directory")->required();

  auto* submit = app.add_subcommand("submit", "validate a job file");
  submit->add_option("--job", job_path, "job file")->required();

  auto* report = app.add_subcommand("report", "print the summary of an exported run");
  report->add_option("--in", in_dir, "run directory")->required();

  auto* validate = app.add_subcommand("validate", "check an exported event log");
  validate->add_option("--in", in_dir, "run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*run) return cmd_run(scenario_path, policy, seed, sweep, out);
    if (*submit) return cmd_submit(job_path);
    if (*report) return cmd_report(in_dir);
    if (*validate) return cmd_validate(in_dir);
  } catch (const qfs::Error& e) {
    spdlog::error("{}", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kRuntime;
  }
  return kRuntime;
}
