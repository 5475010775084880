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
 * @file circuit.hpp
 * @brief Circuit IR, OpenQASM 2.0 subset reader/printer and static profiling.
 *
 * Accepted language:
 *
 *   program  := "OPENQASM" "2.0" ";" include* stmt*
 *   include  := "include" STRING ";"
 *   stmt     := qreg | creg | gate | measure | barrier
 *   qreg     := "qreg" ID "[" INT "]" ";"    creg := "creg" ID "[" INT "]" ";"
 *   gate     := GATENAME params? arglist ";" params := "(" REAL ")"
 *   arglist  := qubit ("," qubit)*           qubit := ID "[" INT "]"
 *   measure  := "measure" qubit "->" cbit ";" barrier := "barrier" arglist? ";"
 *
 * Registers are flattened to global indices in declaration order. Barriers
 * keep no operands; they are global ordering fences.
 */

#pragma once

#include "qfs/common.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qfs {

enum class GateKind : std::uint8_t {
  H, X, Y, Z, S, Sdg, T, Tdg, Rx, Ry, Rz, Cx, Cz, Swap, Measure, Barrier
};

inline constexpr std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Y: return "y";
    case GateKind::Z: return "z";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::Rx: return "rx";
    case GateKind::Ry: return "ry";
    case GateKind::Rz: return "rz";
    case GateKind::Cx: return "cx";
    case GateKind::Cz: return "cz";
    case GateKind::Swap: return "swap";
    case GateKind::Measure: return "measure";
    case GateKind::Barrier: return "barrier";
  }
  return "?";
}

/// Unitary gate names accepted in gate statements (measure/barrier are keywords).
inline std::optional<GateKind> gate_from_name(std::string_view name) {
  static constexpr std::array<GateKind, 14> kUnitary = {
      GateKind::H,  GateKind::X,  GateKind::Y,  GateKind::Z,  GateKind::S,
      GateKind::Sdg, GateKind::T, GateKind::Tdg, GateKind::Rx, GateKind::Ry,
      GateKind::Rz, GateKind::Cx, GateKind::Cz, GateKind::Swap};
  for (GateKind k : kUnitary) {
    if (gate_name(k) == name) return k;
  }
  return std::nullopt;
}

inline constexpr int arity(GateKind kind) {
  switch (kind) {
    case GateKind::Cx:
    case GateKind::Cz:
    case GateKind::Swap: return 2;
    case GateKind::Barrier: return 0;
    default: return 1;
  }
}

inline constexpr bool is_rotation(GateKind kind) {
  return kind == GateKind::Rx || kind == GateKind::Ry || kind == GateKind::Rz;
}

inline constexpr bool is_two_qubit(GateKind kind) { return arity(kind) == 2; }

inline constexpr bool is_one_qubit_unitary(GateKind kind) {
  return arity(kind) == 1 && kind != GateKind::Measure;
}

struct Gate {
  GateKind kind = GateKind::H;
  std::array<int, 2> qubits{-1, -1};
  std::optional<double> param;
  std::optional<int> cbit;

  static Gate one(GateKind k, int q, std::optional<double> p = std::nullopt) {
    return Gate{k, {q, -1}, p, std::nullopt};
  }
  static Gate two(GateKind k, int a, int b) { return Gate{k, {a, b}, std::nullopt, std::nullopt}; }
  static Gate measure(int q, int c) { return Gate{GateKind::Measure, {q, -1}, std::nullopt, c}; }
  static Gate barrier() { return Gate{GateKind::Barrier, {-1, -1}, std::nullopt, std::nullopt}; }

  int num_qubits() const { return arity(kind); }

  bool operator==(const Gate&) const = default;
};

struct Circuit {
  int num_qubits = 0;
  int num_cbits = 0;
  std::vector<Gate> gates;

  bool operator==(const Circuit&) const = default;
};

/// Parse or semantic failure with a 1-based source position.
class CircuitError : public Error {
 public:
  CircuitError(ErrorCode code, int line, int column, const std::string& message)
      : Error(code, "line " + std::to_string(line) + ", column " + std::to_string(column) +
                        ": " + message),
        line_(line), column_(column), message_(message) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

namespace detail {

enum class TokKind { Ident, Number, String, Symbol, End };

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token tok;
      tok.line = line_;
      tok.column = col_;
      if (pos_ >= src_.size()) {
        tok.kind = TokKind::End;
        out.push_back(tok);
        return out;
      }
      const char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = TokKind::Ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
          tok.text.push_back(take());
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        tok.kind = TokKind::Number;
        lex_number(tok.text);
      } else if (c == '"') {
        tok.kind = TokKind::String;
        take();
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
          tok.text.push_back(take());
        }
        if (pos_ >= src_.size() || src_[pos_] != '"') {
          throw CircuitError(ErrorCode::ParseError, tok.line, tok.column,
                             "unterminated string literal");
        }
        take();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        tok.kind = TokKind::Symbol;
        tok.text = "->";
        take();
        take();
      } else if (std::string_view(";,[]()+-").find(c) != std::string_view::npos) {
        tok.kind = TokKind::Symbol;
        tok.text = std::string(1, take());
      } else {
        throw CircuitError(ErrorCode::ParseError, tok.line, tok.column,
                           std::string("unexpected character '") + c + "'");
      }
      out.push_back(std::move(tok));
    }
  }

 private:
  char take() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        take();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
      } else {
        break;
      }
    }
  }

  void lex_number(std::string& text) {
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        text.push_back(take());
      }
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      text.push_back(take());
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      text.push_back(take());
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) text.push_back(take());
      digits();
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct Register {
  int offset = 0;
  int size = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Circuit run() {
    expect_ident("OPENQASM");
    const Token& version = expect(TokKind::Number, "version number");
    if (version.text != "2.0") {
      fail_semantic(version, "unsupported OPENQASM version '" + version.text + "'");
    }
    expect_symbol(";");
    while (peek_ident("include")) {
      next();
      expect(TokKind::String, "include file name");
      expect_symbol(";");
    }
    while (peek().kind != TokKind::End) statement();
    return std::move(circuit_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  bool peek_ident(std::string_view word) const {
    return peek().kind == TokKind::Ident && peek().text == word;
  }
  bool peek_symbol(std::string_view sym) const {
    return peek().kind == TokKind::Symbol && peek().text == sym;
  }

  [[noreturn]] static void fail_parse(const Token& at, const std::string& msg) {
    throw CircuitError(ErrorCode::ParseError, at.line, at.column, msg);
  }
  [[noreturn]] static void fail_semantic(const Token& at, const std::string& msg) {
    throw CircuitError(ErrorCode::SemanticError, at.line, at.column, msg);
  }

  static std::string describe(const Token& t) {
    return t.kind == TokKind::End ? std::string("end of input") : "'" + t.text + "'";
  }

  const Token& expect(TokKind kind, std::string_view what) {
    if (peek().kind != kind) {
      fail_parse(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    }
    return next();
  }
  void expect_symbol(std::string_view sym) {
    if (!peek_symbol(sym)) {
      fail_parse(peek(), "expected '" + std::string(sym) + "', found " + describe(peek()));
    }
    next();
  }
  void expect_ident(std::string_view word) {
    if (!peek_ident(word)) {
      fail_parse(peek(), "expected '" + std::string(word) + "', found " + describe(peek()));
    }
    next();
  }

  int parse_int() {
    const Token& t = expect(TokKind::Number, "integer");
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      fail_parse(t, "expected integer, found '" + t.text + "'");
    }
    return value;
  }

  double parse_real() {
    double sign = 1.0;
    if (peek_symbol("-") || peek_symbol("+")) {
      if (next().text == "-") sign = -1.0;
    }
    const Token& t = expect(TokKind::Number, "real number");
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      fail_parse(t, "malformed number '" + t.text + "'");
    }
    return sign * value;
  }

  void declare(std::map<std::string, Register, std::less<>>& regs, int& total) {
    const Token& name = expect(TokKind::Ident, "register name");
    expect_symbol("[");
    const Token& size_tok = peek();
    const int size = parse_int();
    expect_symbol("]");
    expect_symbol(";");
    if (qregs_.count(name.text) || cregs_.count(name.text)) {
      fail_semantic(name, "register '" + name.text + "' already declared");
    }
    if (size < 1) fail_semantic(size_tok, "register size must be positive");
    regs.emplace(name.text, Register{total, size});
    total += size;
  }

  int operand(const std::map<std::string, Register, std::less<>>& regs, std::string_view kind) {
    const Token& name = expect(TokKind::Ident, std::string(kind) + " register");
    expect_symbol("[");
    const Token& idx_tok = peek();
    const int idx = parse_int();
    expect_symbol("]");
    auto it = regs.find(name.text);
    if (it == regs.end()) {
      fail_semantic(name, "undeclared " + std::string(kind) + " register '" + name.text + "'");
    }
    if (idx < 0 || idx >= it->second.size) {
      fail_semantic(idx_tok, "index " + std::to_string(idx) + " out of range for register '" +
                                 name.text + "' of size " + std::to_string(it->second.size));
    }
    return it->second.offset + idx;
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != TokKind::Ident) fail_parse(head, "expected statement, found " + describe(head));
    if (head.text == "include") fail_parse(head, "include must precede all statements");
    if (head.text == "qreg") {
      next();
      declare(qregs_, circuit_.num_qubits);
      return;
    }
    if (head.text == "creg") {
      next();
      declare(cregs_, circuit_.num_cbits);
      return;
    }
    if (head.text == "measure") {
      next();
      const int q = operand(qregs_, "quantum");
      expect_symbol("->");
      const int c = operand(cregs_, "classical");
      expect_symbol(";");
      circuit_.gates.push_back(Gate::measure(q, c));
      return;
    }
    if (head.text == "barrier") {
      next();
      if (!peek_symbol(";")) {
        operand(qregs_, "quantum");
        while (peek_symbol(",")) {
          next();
          operand(qregs_, "quantum");
        }
      }
      expect_symbol(";");
      circuit_.gates.push_back(Gate::barrier());
      return;
    }
    const auto kind = gate_from_name(head.text);
    if (!kind) fail_semantic(head, "unknown gate '" + head.text + "'");
    next();
    Gate gate;
    gate.kind = *kind;
    if (peek_symbol("(")) {
      const Token& open = next();
      if (!is_rotation(*kind)) fail_semantic(open, "gate '" + head.text + "' takes no parameter");
      gate.param = parse_real();
      expect_symbol(")");
    } else if (is_rotation(*kind)) {
      fail_semantic(head, "gate '" + head.text + "' requires a parameter");
    }
    std::vector<int> args;
    args.push_back(operand(qregs_, "quantum"));
    while (peek_symbol(",")) {
      next();
      args.push_back(operand(qregs_, "quantum"));
    }
    expect_symbol(";");
    if (static_cast<int>(args.size()) != arity(*kind)) {
      fail_semantic(head, "gate '" + head.text + "' expects " + std::to_string(arity(*kind)) +
                              " qubit(s), got " + std::to_string(args.size()));
    }
    if (args.size() == 2 && args[0] == args[1]) {
      fail_semantic(head, "gate '" + head.text + "' repeats qubit operand");
    }
    for (std::size_t i = 0; i < args.size(); ++i) gate.qubits[i] = args[i];
    circuit_.gates.push_back(gate);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Circuit circuit_;
  std::map<std::string, Register, std::less<>> qregs_;
  std::map<std::string, Register, std::less<>> cregs_;
};

}  // namespace detail

/// Parses the accepted OpenQASM 2.0 subset. Throws CircuitError.
inline Circuit parse_qasm(std::string_view source) { return detail::Parser(source).run(); }

inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

/// Prints a circuit back to the accepted subset using single registers q and c.
inline std::string print_qasm(const Circuit& c) {
  std::string out = "OPENQASM 2.0;\n";
  out += "qreg q[" + std::to_string(c.num_qubits) + "];\n";
  if (c.num_cbits > 0) out += "creg c[" + std::to_string(c.num_cbits) + "];\n";
  auto q = [](int i) { return "q[" + std::to_string(i) + "]"; };
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::Measure:
        out += "measure " + q(g.qubits[0]) + " -> c[" + std::to_string(*g.cbit) + "];\n";
        break;
      case GateKind::Barrier: {
        out += "barrier";
        for (int i = 0; i < c.num_qubits; ++i) out += (i == 0 ? " " : ",") + q(i);
        out += ";\n";
        break;
      }
      default: {
        out += gate_name(g.kind);
        if (g.param) out += "(" + format_real(*g.param) + ")";
        out += " " + q(g.qubits[0]);
        if (g.num_qubits() == 2) out += "," + q(g.qubits[1]);
        out += ";\n";
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Layering and profiling
// ---------------------------------------------------------------------------

/// One ASAP layer: indices into Circuit::gates, operands pairwise disjoint.
using Layer = std::vector<std::size_t>;

/// Greedy ASAP layering. A gate lands in the first layer after every earlier
/// gate that shares a qubit with it; a barrier moves the floor for all qubits
/// to the current layer count. Barriers themselves occupy no layer.
inline std::vector<Layer> build_layers(const Circuit& c) {
  std::vector<Layer> layers;
  std::vector<std::size_t> next_free(static_cast<std::size_t>(c.num_qubits), 0);
  std::size_t floor = 0;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.kind == GateKind::Barrier) {
      floor = layers.size();
      continue;
    }
    std::size_t layer = floor;
    for (int k = 0; k < g.num_qubits(); ++k) {
      layer = std::max(layer, next_free[static_cast<std::size_t>(g.qubits[k])]);
    }
    if (layer >= layers.size()) layers.resize(layer + 1);
    layers[layer].push_back(i);
    for (int k = 0; k < g.num_qubits(); ++k) next_free[static_cast<std::size_t>(g.qubits[k])] = layer + 1;
  }
  return layers;
}

/// Nominal gate durations in microseconds.
struct GateDurations {
  double t_1q = 0.05;
  double t_2q = 0.3;
  double t_ro = 1.0;
};

/// A swap is costed as three two-qubit gates.
inline double gate_duration(const Gate& g, const GateDurations& d) {
  switch (g.kind) {
    case GateKind::Barrier: return 0.0;
    case GateKind::Measure: return d.t_ro;
    case GateKind::Swap: return 3.0 * d.t_2q;
    case GateKind::Cx:
    case GateKind::Cz: return d.t_2q;
    default: return d.t_1q;
  }
}

/// Critical path under the layer model: sum over layers of the slowest gate.
inline double layered_duration(const Circuit& c, const std::vector<Layer>& layers,
                               const GateDurations& d) {
  double total = 0.0;
  for (const Layer& layer : layers) {
    double slowest = 0.0;
    for (std::size_t idx : layer) slowest = std::max(slowest, gate_duration(c.gates[idx], d));
    total += slowest;
  }
  return total;
}

struct CircuitProfile {
  int depth = 0;
  int num_qubits = 0;
  int one_qubit_gate_count = 0;
  int two_qubit_gate_count = 0;
  int measure_count = 0;
  double estimated_duration = 0.0;  ///< µs, per shot
  std::set<std::string> tags;
};

inline CircuitProfile profile(const Circuit& c, const GateDurations& d) {
  CircuitProfile p;
  const auto layers = build_layers(c);
  p.depth = static_cast<int>(layers.size());
  p.num_qubits = c.num_qubits;
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::Barrier) continue;
    if (g.kind == GateKind::Measure) {
      ++p.measure_count;
    } else if (is_two_qubit(g.kind)) {
      ++p.two_qubit_gate_count;
    } else {
      ++p.one_qubit_gate_count;
    }
  }
  p.estimated_duration = layered_duration(c, layers, d);
  return p;
}

inline constexpr std::string_view kTagDeepCircuit = "deep-circuit";
inline constexpr std::string_view kTagHighFidelity = "requires-high-fidelity";

/// Fleet-wide reference figures used for tagging.
struct FleetNominal {
  double min_t2 = 0.0;          ///< µs, minimum T2 over all fleet qubits
  double coherence_factor = 0.5;
  double p90_mean_f2q = 1.0;    ///< 90th percentile of per-QPU mean 2q fidelity
};

/// Adds coherence and fidelity tags. Returns the resulting tag set.
inline std::set<std::string> tag(CircuitProfile& p, double min_two_qubit_fidelity,
                                 const FleetNominal& fleet) {
  if (p.estimated_duration > fleet.coherence_factor * fleet.min_t2) {
    p.tags.emplace(kTagDeepCircuit);
  }
  if (min_two_qubit_fidelity >= fleet.p90_mean_f2q) p.tags.emplace(kTagHighFidelity);
  return p.tags;
}

}  // namespace qfs
