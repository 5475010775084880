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

#include "qfs/common.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

namespace qfs {

/// Bitstrings are written with classical bit 0 as the leftmost character.
using Bitstring = std::string;
using Counts = std::map<Bitstring, std::int64_t>;

inline Bitstring to_bitstring(std::uint32_t bits, int width) {
  Bitstring s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((bits >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

inline std::uint32_t from_bitstring(const Bitstring& s) {
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1') bits |= (1U << i);
  }
  return bits;
}

struct OutcomeDistribution {
  int num_bits = 0;
  std::map<Bitstring, double> probabilities;

  bool operator==(const OutcomeDistribution&) const = default;

  /// Point mass on the all-zeros string.
  static OutcomeDistribution all_zeros(int num_bits) {
    return {num_bits, {{Bitstring(static_cast<std::size_t>(num_bits), '0'), 1.0}}};
  }

  double probability(const Bitstring& b) const {
    auto it = probabilities.find(b);
    return it == probabilities.end() ? 0.0 : it->second;
  }
};

/// Empty string when valid, otherwise the first problem found.
inline std::string distribution_problem(const OutcomeDistribution& d) {
  if (d.num_bits < 0) return "num_bits must be non-negative";
  if (d.probabilities.empty()) return "distribution is empty";
  double sum = 0.0;
  for (const auto& [key, p] : d.probabilities) {
    if (static_cast<int>(key.size()) != d.num_bits) {
      return "key '" + key + "' does not have " + std::to_string(d.num_bits) + " bits";
    }
    if (key.find_first_not_of("01") != std::string::npos) return "key '" + key + "' is not binary";
    if (!(p >= 0.0 && p <= 1.0)) return "probability of '" + key + "' outside [0,1]";
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) return "probabilities sum to " + std::to_string(sum);
  return {};
}

inline OutcomeDistribution empirical(const Counts& counts, int num_bits) {
  OutcomeDistribution d{num_bits, {}};
  std::int64_t total = 0;
  for (const auto& [k, n] : counts) total += n;
  if (total == 0) return d;
  for (const auto& [k, n] : counts) {
    if (n > 0) d.probabilities[k] = static_cast<double>(n) / static_cast<double>(total);
  }
  return d;
}

/// Z-parity expectation: sum_b p(b) * (-1)^popcount(b).
inline double parity_expectation(const OutcomeDistribution& d) {
  double e = 0.0;
  for (const auto& [key, p] : d.probabilities) {
    const auto ones = std::count(key.begin(), key.end(), '1');
    e += (ones % 2 == 0) ? p : -p;
  }
  return e;
}

inline double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  double tv = 0.0;
  for (const auto& [k, p] : a.probabilities) tv += std::abs(p - b.probability(k));
  for (const auto& [k, p] : b.probabilities) {
    if (!a.probabilities.count(k)) tv += p;
  }
  return 0.5 * tv;
}

}  // namespace qfs
