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

#include "qfs/circuit.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace qfs;
using Catch::Approx;

namespace {

ErrorCode code_of(const std::string& src) {
  try {
    parse_qasm(src);
  } catch (const CircuitError& e) {
    return e.code();
  }
  FAIL("expected a parse failure for: " << src);
  return ErrorCode::InvalidArgument;
}

/// Longest path in the explicit dependency DAG: an edge joins consecutive
/// gates on the same qubit, and every gate before a barrier precedes every
/// gate after it.
int dag_depth(const Circuit& c) {
  const std::size_t n = c.gates.size();
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<long> last_on(static_cast<std::size_t>(c.num_qubits), -1);
  std::vector<std::size_t> before_barrier;
  std::vector<std::size_t> since_barrier;
  for (std::size_t i = 0; i < n; ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::Barrier) {
      before_barrier.insert(before_barrier.end(), since_barrier.begin(), since_barrier.end());
      since_barrier.clear();
      continue;
    }
    for (int k = 0; k < g.num_qubits(); ++k) {
      const long p = last_on[static_cast<std::size_t>(g.qubits[k])];
      if (p >= 0) preds[i].push_back(static_cast<std::size_t>(p));
      last_on[static_cast<std::size_t>(g.qubits[k])] = static_cast<long>(i);
    }
    for (std::size_t b : before_barrier) preds[i].push_back(b);
    since_barrier.push_back(i);
  }
  std::vector<int> longest(n, 0);
  int best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (c.gates[i].kind == GateKind::Barrier) continue;
    int l = 1;
    for (std::size_t p : preds[i]) l = std::max(l, longest[p] + 1);
    longest[i] = l;
    best = std::max(best, l);
  }
  return best;
}

}  // namespace

TEST_CASE("parse_qasm builds the flat IR") {
  const Circuit c = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; cx q[0],q[1];");
  CHECK(c.num_qubits == 2);
  CHECK(c.num_cbits == 0);
  REQUIRE(c.gates.size() == 2);
  CHECK(c.gates[0] == Gate::one(GateKind::H, 0));
  CHECK(c.gates[1] == Gate::two(GateKind::Cx, 0, 1));
}

TEST_CASE("an empty program parses") {
  const Circuit c = parse_qasm("OPENQASM 2.0; qreg q[1];");
  CHECK(c.num_qubits == 1);
  CHECK(c.gates.empty());
}

TEST_CASE("registers flatten in declaration order") {
  const Circuit c = parse_qasm(R"(OPENQASM 2.0;
include "qelib1.inc";
qreg a[2];
qreg b[3];
creg m[1];
creg n[2];
// comment
cx a[1],b[2];
rz(-0.25) b[0];
measure b[2] -> n[1];
barrier a[0],b[1];
)");
  CHECK(c.num_qubits == 5);
  CHECK(c.num_cbits == 3);
  REQUIRE(c.gates.size() == 4);
  CHECK(c.gates[0] == Gate::two(GateKind::Cx, 1, 4));
  CHECK(c.gates[1] == Gate::one(GateKind::Rz, 2, -0.25));
  CHECK(c.gates[2] == Gate::measure(4, 2));
  CHECK(c.gates[3].kind == GateKind::Barrier);
}

TEST_CASE("out-of-range index is a semantic error with position") {
  try {
    parse_qasm("OPENQASM 2.0; qreg q[2]; rz(0.5) q[3];");
    FAIL("no error");
  } catch (const CircuitError& e) {
    CHECK(e.code() == ErrorCode::SemanticError);
    CHECK(e.line() == 1);
    CHECK(e.column() > 20);
  }
}

TEST_CASE("malformed sources are rejected with the right category") {
  CHECK(code_of("qreg q[2];") == ErrorCode::ParseError);
  CHECK(code_of("OPENQASM 3.0; qreg q[1];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; h q[0]") == ErrorCode::ParseError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; foo q[0];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; h r[0];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; cx q[0];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; cx q[0],q[0];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; rx q[0];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; h(0.1) q[0];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; creg c[1]; measure q[0] -> c[1];") == ErrorCode::SemanticError);
  CHECK(code_of("OPENQASM 2.0; qreg q[2]; qreg q[1];") == ErrorCode::SemanticError);
}

TEST_CASE("error positions count lines and columns from one") {
  try {
    parse_qasm("OPENQASM 2.0;\nqreg q[2];\n  cx q[0],q[5];\n");
    FAIL("no error");
  } catch (const CircuitError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
}

TEST_CASE("print then parse is the identity on random circuits") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Circuit c = testing::random_circuit(rng, 8, 40);
    const Circuit back = parse_qasm(print_qasm(c));
    REQUIRE(back == c);
  }
}

TEST_CASE("layering matches the hand-worked cases") {
  const Circuit a = parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; h q[1]; cx q[0],q[1];");
  const auto la = build_layers(a);
  REQUIRE(la.size() == 2);
  CHECK(la[0] == Layer{0, 1});
  CHECK(la[1] == Layer{2});

  CHECK(build_layers(parse_qasm("OPENQASM 2.0; qreg q[1]; h q[0];")).size() == 1);
  CHECK(build_layers(parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; barrier q[0],q[1]; h q[1];")).size() == 2);
  CHECK(build_layers(parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; h q[1];")).size() == 1);
}

TEST_CASE("layer depth equals the dependency-DAG longest path") {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Circuit c = testing::random_circuit(rng, 8, 40);
    REQUIRE(static_cast<int>(build_layers(c).size()) == dag_depth(c));
  }
}

TEST_CASE("layers hold disjoint operands") {
  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    const Circuit c = testing::random_circuit(rng, 6, 30);
    for (const auto& layer : build_layers(c)) {
      std::vector<int> used;
      for (std::size_t g : layer) {
        for (int k = 0; k < c.gates[g].num_qubits(); ++k) used.push_back(c.gates[g].qubits[k]);
      }
      std::sort(used.begin(), used.end());
      REQUIRE(std::adjacent_find(used.begin(), used.end()) == used.end());
    }
  }
}

TEST_CASE("profile uses layer maxima for duration") {
  const GateDurations d{0.05, 0.3, 1.0};
  const CircuitProfile p = profile(parse_qasm("OPENQASM 2.0; qreg q[2]; h q[0]; h q[1]; cx q[0],q[1];"), d);
  CHECK(p.depth == 2);
  CHECK(p.estimated_duration == Approx(0.35));
  CHECK(p.one_qubit_gate_count == 2);
  CHECK(p.two_qubit_gate_count == 1);
  CHECK(p.measure_count == 0);

  const CircuitProfile m = profile(parse_qasm("OPENQASM 2.0; qreg q[1]; creg c[1]; measure q[0] -> c[0];"), d);
  CHECK(m.estimated_duration == Approx(1.0));

  const CircuitProfile chain =
      profile(parse_qasm("OPENQASM 2.0; qreg q[2]; cx q[0],q[1]; cx q[0],q[1]; cx q[0],q[1];"), d);
  CHECK(chain.depth == 3);
  CHECK(chain.estimated_duration == Approx(0.9));
}

TEST_CASE("profile counts add up and depth is bounded by gate count") {
  Rng rng(14);
  const GateDurations d;
  for (int i = 0; i < 500; ++i) {
    const Circuit c = testing::random_circuit(rng, 6, 30);
    const CircuitProfile p = profile(c, d);
    const auto barriers = std::count_if(c.gates.begin(), c.gates.end(),
                                        [](const Gate& g) { return g.kind == GateKind::Barrier; });
    REQUIRE(p.one_qubit_gate_count + p.two_qubit_gate_count + p.measure_count ==
            static_cast<int>(c.gates.size() - static_cast<std::size_t>(barriers)));
    REQUIRE(p.depth <= static_cast<int>(c.gates.size()));
    if (p.depth > 0) REQUIRE(p.estimated_duration > 0.0);
  }
}

TEST_CASE("appending a gate never shortens the estimated duration") {
  Rng rng(15);
  const GateDurations d;
  for (int i = 0; i < 300; ++i) {
    Circuit c = testing::random_circuit(rng, 5, 25);
    double prev = profile(c, d).estimated_duration;
    for (int k = 0; k < 10; ++k) {
      const Circuit extra = testing::random_circuit(rng, c.num_qubits, 1);
      if (extra.gates.empty()) continue;
      Gate g = extra.gates.front();
      if (g.kind == GateKind::Measure) g.cbit = std::min(*g.cbit, c.num_cbits - 1);
      c.gates.push_back(g);
      const double now = profile(c, d).estimated_duration;
      REQUIRE(now >= prev);
      prev = now;
    }
  }
}

TEST_CASE("tags follow the coherence and fidelity thresholds") {
  FleetNominal fleet{100.0, 0.5, 0.99};
  CircuitProfile deep;
  deep.estimated_duration = 120.0;
  tag(deep, 0.9, fleet);
  CHECK(deep.tags.count(std::string(kTagDeepCircuit)) == 1);

  CircuitProfile shallow;
  shallow.estimated_duration = 10.0;
  tag(shallow, 0.9, fleet);
  CHECK(shallow.tags.empty());

  CircuitProfile strict;
  strict.estimated_duration = 10.0;
  tag(strict, 0.999, fleet);
  CHECK(strict.tags.count(std::string(kTagHighFidelity)) == 1);

  CircuitProfile edge;
  edge.estimated_duration = 50.0;
  tag(edge, 0.99, fleet);
  CHECK(edge.tags.count(std::string(kTagDeepCircuit)) == 0);
  CHECK(edge.tags.count(std::string(kTagHighFidelity)) == 1);
}
