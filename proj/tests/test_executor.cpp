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

#include "qfs/executor.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

using namespace qfs;
using Catch::Approx;

namespace {

/// Identity-routed circuit with `n` measured bits and a fixed fidelity.
TranspileResult routed(int n, double fidelity) {
  TranspileResult tr;
  tr.physical.num_qubits = n;
  tr.physical.num_cbits = n;
  for (int q = 0; q < n; ++q) tr.physical.gates.push_back(Gate::measure(q, q));
  tr.predicted_fidelity = fidelity;
  return tr;
}

JobSpec job(std::int64_t shots, std::optional<OutcomeDistribution> ideal = std::nullopt) {
  JobSpec s;
  s.job_id = "j";
  s.tenant_id = "t";
  s.shots = shots;
  s.declared_ideal = std::move(ideal);
  return s;
}

ScheduleDecision decision() {
  ScheduleDecision d;
  d.job_id = "j";
  d.qpu_id = "q";
  return d;
}

std::int64_t total(const Counts& c) {
  std::int64_t s = 0;
  for (const auto& [k, n] : c) s += n;
  return s;
}

/// Lagrange basis evaluated at zero.
std::vector<double> lagrange_at_zero(const std::vector<double>& xs) {
  std::vector<double> c(xs.size(), 1.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i != j) c[i] *= (0.0 - xs[j]) / (xs[i] - xs[j]);
    }
  }
  return c;
}

}  // namespace

TEST_CASE("amplified fidelity is linear and floored at zero") {
  CHECK(amplified_fidelity(0.8, 2) == Approx(0.6));
  CHECK(amplified_fidelity(0.8, 1) == Approx(0.8));
  CHECK(amplified_fidelity(0.5, 3) == 0.0);
}

TEST_CASE("a noiseless run returns the ideal outcome every shot") {
  const auto cal = CalibrationData::uniform(2, 1, 1, 1, 100, 80, 0, 0);
  Rng rng(61);
  const auto rec = execute(decision(), routed(2, 1.0), job(1000), 1.0, {QpuState::Online, false, &cal}, rng, 0, 10);
  REQUIRE(rec.raw_counts.size() == 1);
  CHECK(rec.raw_counts.at("00") == 1000);
  CHECK(rec.end_time - rec.start_time == 10);
}

TEST_CASE("a zero-fidelity run is uniform within three sigma") {
  Rng rng(62);
  const std::int64_t shots = 1000000;
  const auto rec = execute(decision(), routed(1, 0.0), job(shots), 1.0, {QpuState::Online, false, nullptr}, rng, 0, 1);
  const double ones = static_cast<double>(rec.raw_counts.count("1") ? rec.raw_counts.at("1") : 0);
  const double sigma = std::sqrt(shots * 0.25);
  CHECK(std::abs(ones - shots / 2.0) <= 3 * sigma);
}

TEST_CASE("counts always add up to the shots") {
  Rng rng(63);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng.below(5));
    const auto cal = CalibrationData::uniform(n, 0, 1, 1, 100, 80, 0.2 * rng.uniform(), 0.2 * rng.uniform());
    const std::int64_t shots = 1 + static_cast<std::int64_t>(rng.below(3000));
    const double lambda = 1 + 3 * rng.uniform();
    const auto rec = execute(decision(), routed(n, rng.uniform()), job(shots), lambda,
                             {QpuState::Online, false, &cal}, rng, 0, 1);
    REQUIRE(total(rec.raw_counts) == shots);
    for (const auto& [k, c] : rec.raw_counts) REQUIRE(static_cast<int>(k.size()) == n);
  }
}

TEST_CASE("dispatch refuses busy or unavailable devices") {
  Rng rng(64);
  auto code = [&](ExecutionTarget t, double lambda = 1.0) {
    try {
      execute(decision(), routed(1, 1.0), job(1), lambda, t, rng, 0, 1);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code({QpuState::Online, true, nullptr}) == ErrorCode::QpuBusy);
  CHECK(code({QpuState::Recalibrating, false, nullptr}) == ErrorCode::QpuNotOnline);
  CHECK(code({QpuState::Offline, false, nullptr}) == ErrorCode::QpuNotOnline);
  CHECK(code({QpuState::Online, false, nullptr}, 0.5) == ErrorCode::InvalidArgument);
}

TEST_CASE("same seed gives the same counts") {
  const auto cal = CalibrationData::uniform(3, 0, 1, 1, 100, 80, 0.05, 0.08);
  Rng a(65);
  Rng b(65);
  const auto ra = execute(decision(), routed(3, 0.7), job(5000), 2.0, {QpuState::Online, false, &cal}, a, 0, 1);
  const auto rb = execute(decision(), routed(3, 0.7), job(5000), 2.0, {QpuState::Online, false, &cal}, b, 0, 1);
  CHECK(ra.raw_counts == rb.raw_counts);
  Rng c(66);
  const auto rc = execute(decision(), routed(3, 0.7), job(5000), 2.0, {QpuState::Online, false, &cal}, c, 0, 1);
  CHECK(ra.raw_counts != rc.raw_counts);
}

TEST_CASE("readout mitigation examples") {
  const std::vector<double> zero{0.0};
  const std::vector<double> tenth{0.1};
  const OutcomeDistribution p{1, {{"0", 0.82}, {"1", 0.18}}};
  CHECK(mitigate_distribution(p, zero, zero) == p);

  const auto m = mitigate_distribution(p, tenth, tenth);
  CHECK(m.probability("0") == Approx(0.9));
  CHECK(m.probability("1") == Approx(0.1));

  const OutcomeDistribution pure{1, {{"0", 1.0}}};
  const auto raw = invert_confusion(pure, tenth, tenth);
  CHECK(raw[0] == Approx(1.125));
  CHECK(raw[1] == Approx(-0.125));
  const auto clipped = clip_and_normalize(raw, 1);
  CHECK(clipped.probability("0") == Approx(1.0));
  CHECK(clipped.probability("1") == 0.0);

  const std::vector<double> half{0.5};
  CHECK_THROWS_AS(invert_confusion(pure, half, half), Error);
}

TEST_CASE("inverting the confusion channel recovers the input") {
  Rng rng(67);
  for (int i = 0; i < 300; ++i) {
    const int n = 1 + static_cast<int>(rng.below(4));
    OutcomeDistribution d{n, {}};
    double sum = 0.0;
    std::vector<double> w(std::size_t{1} << n);
    for (auto& x : w) sum += (x = rng.uniform());
    for (std::size_t k = 0; k < w.size(); ++k) d.probabilities[to_bitstring(static_cast<std::uint32_t>(k), n)] = w[k] / sum;
    std::vector<double> e0(static_cast<std::size_t>(n)), e1(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
      e0[static_cast<std::size_t>(b)] = 0.3 * rng.uniform();
      e1[static_cast<std::size_t>(b)] = 0.3 * rng.uniform();
    }
    const auto back = mitigate_distribution(apply_confusion(d, e0, e1), e0, e1);
    REQUIRE(total_variation(back, d) < 1e-9);
  }
}

TEST_CASE("mitigated distributions are proper") {
  Rng rng(68);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng.below(3));
    const auto cal = CalibrationData::uniform(n, 0, 1, 1, 100, 80, 0.15 * rng.uniform(), 0.15 * rng.uniform());
    const auto rec = execute(decision(), routed(n, rng.uniform()), job(200), 1.0, {QpuState::Online, false, &cal},
                             rng, 0, 1);
    const auto m = mitigate_readout(rec, cal);
    REQUIRE(distribution_problem(m.mitigated_distribution).empty());
  }
}

TEST_CASE("Richardson coefficients") {
  const std::vector<double> l13{1, 3};
  const auto c = zne_coefficients(l13, 1);
  CHECK(c[0] == Approx(1.5));
  CHECK(c[1] == Approx(-0.5));

  const std::vector<double> l123{1, 2, 3};
  const auto q = zne_coefficients(l123, 2);
  CHECK(q[0] == Approx(3));
  CHECK(q[1] == Approx(-3));
  CHECK(q[2] == Approx(1));

  const std::vector<double> dup{1, 1};
  CHECK_THROWS_MATCHES(zne_coefficients(dup, 1), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::DegenerateLambdas;
                       }));
}

TEST_CASE("Richardson coefficients match the Lagrange basis at zero") {
  Rng rng(69);
  for (int i = 0; i < 200; ++i) {
    const std::size_t m = 2 + rng.below(3);
    std::vector<double> xs{1.0};
    while (xs.size() < m) xs.push_back(xs.back() + 0.5 + 2 * rng.uniform());
    const auto c = zne_coefficients(xs, static_cast<int>(m) - 1);
    const auto oracle = lagrange_at_zero(xs);
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      REQUIRE(c[k] == Approx(oracle[k]).margin(1e-9));
      sum += c[k];
    }
    REQUIRE(sum == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("extrapolation examples") {
  const std::vector<NoisyEstimate> e{{1, 0.8}, {3, 0.4}};
  const std::vector<double> c{1.5, -0.5};
  CHECK(zne_extrapolate(e, c) == Approx(1.0));
  const std::vector<NoisyEstimate> flat{{1, 0.37}, {3, 0.37}};
  CHECK(zne_extrapolate(flat, c) == Approx(0.37));
  const std::vector<NoisyEstimate> half{{1, 0.5}, {2, 0.25}};
  const std::vector<double> c2{2, -1};
  CHECK(zne_extrapolate(half, c2) == Approx(0.75));
}

TEST_CASE("ZNE recovers the ideal parity within statistical error") {
  const auto cal = CalibrationData::uniform(2, 1, 1, 1, 100, 80, 0.03, 0.03);
  const OutcomeDistribution ghz{2, {{"00", 0.5}, {"11", 0.5}}};
  const std::int64_t shots = 40000;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(derive_seed(70, "zne", seed));
    std::vector<ExecutionRecord> recs;
    for (double lambda : {1.0, 3.0}) {
      recs.push_back(execute(decision(), routed(2, 0.85), job(shots, ghz), lambda, {QpuState::Online, false, &cal},
                             rng, 0, 1));
    }
    const auto res = collect_results(recs, cal, true);
    REQUIRE(res.zne_estimate);
    REQUIRE(std::abs(*res.zne_estimate - 1.0) <= 4.0 / std::sqrt(static_cast<double>(shots)) * 2.0);
    CHECK(res.method_tags.count("zne") == 1);
  }
}

TEST_CASE("collection without mitigation returns raw frequencies") {
  const auto cal = CalibrationData::uniform(1, 0, 1, 1, 100, 80, 0.1, 0.1);
  Rng rng(71);
  const auto rec = execute(decision(), routed(1, 1.0), job(1000), 1.0, {QpuState::Online, false, &cal}, rng, 0, 1);
  const std::vector<ExecutionRecord> one{rec};
  const auto raw = collect_results(one, cal, false);
  CHECK(raw.mitigated_distribution == empirical(rec.raw_counts, 1));
  CHECK_FALSE(raw.zne_estimate);
  CHECK(raw.method_tags.empty());
}
