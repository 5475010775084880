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

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qfs {

/// Simulated time and durations, in integer microseconds.
using Micros = std::int64_t;

inline constexpr Micros kUnbounded = std::numeric_limits<Micros>::max();

enum class ErrorCode {
  ParseError,
  SemanticError,
  MalformedCircuit,
  InvalidConstraint,
  QuotaExceeded,
  DuplicateJobId,
  Unschedulable,
  AlreadyRecalibrating,
  InvalidTransition,
  InvalidTopology,
  TooManyQubits,
  DisconnectedTarget,
  QpuBusy,
  QpuNotOnline,
  SingularConfusion,
  DegenerateLambdas,
  NonPositiveDuration,
  InvalidArgument,
  ScenarioInvalid,
  Io,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::MalformedCircuit: return "MalformedCircuit";
    case ErrorCode::InvalidConstraint: return "InvalidConstraint";
    case ErrorCode::QuotaExceeded: return "QuotaExceeded";
    case ErrorCode::DuplicateJobId: return "DuplicateJobId";
    case ErrorCode::Unschedulable: return "Unschedulable";
    case ErrorCode::AlreadyRecalibrating: return "AlreadyRecalibrating";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::InvalidTopology: return "InvalidTopology";
    case ErrorCode::TooManyQubits: return "TooManyQubits";
    case ErrorCode::DisconnectedTarget: return "DisconnectedTarget";
    case ErrorCode::QpuBusy: return "QpuBusy";
    case ErrorCode::QpuNotOnline: return "QpuNotOnline";
    case ErrorCode::SingularConfusion: return "SingularConfusion";
    case ErrorCode::DegenerateLambdas: return "DegenerateLambdas";
    case ErrorCode::NonPositiveDuration: return "NonPositiveDuration";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Exception type used throughout the library. Every failure carries a code
/// so callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

// ---------------------------------------------------------------------------
// Random streams
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x00000100000001b3ULL;
  }
  return hash;
}

/// Counter-based substream derivation: (master seed, subsystem tag, index)
/// maps to an independent seed. Adding a new tag never perturbs other streams.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view tag,
                                           std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(master ^ fnv1a64(tag)) + splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Seeded generator. The engine is std::mt19937_64 (fully specified by the
/// standard); the variate conversions are written out here because the
/// standard distributions are implementation-defined and would break replay
/// across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); rejection sampling removes modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  /// Standard normal via Box-Muller (one value per call; no cached spare so
  /// the stream position is a pure function of the call count).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential(double rate) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(u) / rate;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qfs
