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
 * @file config.hpp
 * @brief Reader for the small TOML subset used by scenario and job files.
 *
 * Supported: `[section]` and `[section.name]` headers, `key = value` pairs,
 * `#` comments, basic strings, `"""` multi-line strings, integers, floats,
 * booleans and (nested) arrays. Every accessor reports errors as
 * "[section] key: message (line N)".
 */

#pragma once

#include "qfs/common.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qfs::config {

struct Value {
  enum class Kind { String, Integer, Float, Bool, Array };

  Kind kind = Kind::String;
  std::string text;  ///< string payload or the literal for numbers
  std::int64_t integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::vector<Value> items;
  int line = 0;

  bool is_number() const { return kind == Kind::Integer || kind == Kind::Float; }
  double as_double() const { return kind == Kind::Integer ? static_cast<double>(integer) : real; }
};

class Section {
 public:
  Section() = default;
  Section(std::string name, int line) : name_(std::move(name)), line_(line) {}

  const std::string& name() const { return name_; }
  int line() const { return line_; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::vector<std::string>& keys() const { return order_; }

  void set(const std::string& key, Value v) {
    if (values_.count(key)) fail(key, v.line, "duplicate key");
    order_.push_back(key);
    values_.emplace(key, std::move(v));
  }

  [[noreturn]] void fail(const std::string& key, int line, const std::string& msg) const {
    throw Error(ErrorCode::ScenarioInvalid,
                "[" + name_ + "] " + key + ": " + msg + " (line " + std::to_string(line) + ")");
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    const Value* v = find(key);
    fail(key, v ? v->line : line_, msg);
  }

  const Value* find(const std::string& key) const {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
  }

  const Value& require(const std::string& key) const {
    const Value* v = find(key);
    if (!v) fail(key, line_, "missing required key");
    return *v;
  }

  std::string get_string(const std::string& key, std::optional<std::string> fallback = std::nullopt) const {
    const Value* v = find(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(key, line_, "missing required key");
    }
    if (v->kind != Value::Kind::String) fail(key, v->line, "expected a string");
    return v->text;
  }

  double get_double(const std::string& key, std::optional<double> fallback = std::nullopt) const {
    const Value* v = find(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(key, line_, "missing required key");
    }
    if (!v->is_number()) fail(key, v->line, "expected a number");
    return v->as_double();
  }

  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) const {
    const Value* v = find(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(key, line_, "missing required key");
    }
    if (v->kind != Value::Kind::Integer) fail(key, v->line, "expected an integer");
    return v->integer;
  }

  bool get_bool(const std::string& key, std::optional<bool> fallback = std::nullopt) const {
    const Value* v = find(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(key, line_, "missing required key");
    }
    if (v->kind != Value::Kind::Bool) fail(key, v->line, "expected true or false");
    return v->boolean;
  }

  std::vector<double> get_doubles(const std::string& key) const {
    const Value& v = require(key);
    if (v.kind != Value::Kind::Array) fail(key, v.line, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& item : v.items) {
      if (!item.is_number()) fail(key, item.line, "expected an array of numbers");
      out.push_back(item.as_double());
    }
    return out;
  }

  /// Keys that were present but never read; used to reject typos.
  std::vector<std::string> unused_keys() const {
    std::vector<std::string> out;
    for (const auto& k : order_) {
      if (!used_.count(k)) out.push_back(k);
    }
    return out;
  }

  void reject_unknown_keys() const {
    const auto unused = unused_keys();
    if (!unused.empty()) fail(unused.front(), "unknown key");
  }

 private:
  std::string name_;
  int line_ = 0;
  std::vector<std::string> order_;
  std::map<std::string, Value> values_;
  mutable std::set<std::string> used_;
};

struct Document {
  std::vector<Section> sections;  ///< file order; the root section is first

  const Section& root() const { return sections.front(); }

  const Section* find(std::string_view name) const {
    for (const auto& s : sections) {
      if (s.name() == name) return &s;
    }
    return nullptr;
  }

  /// Sections named "<prefix>.<child>" in file order.
  std::vector<const Section*> children(std::string_view prefix) const {
    std::vector<const Section*> out;
    for (const auto& s : sections) {
      if (s.name().size() > prefix.size() + 1 && s.name().compare(0, prefix.size(), prefix) == 0 &&
          s.name()[prefix.size()] == '.') {
        out.push_back(&s);
      }
    }
    return out;
  }
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view text) : src_(text) {}

  Document run() {
    Document doc;
    doc.sections.emplace_back("", 1);
    for (;;) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        const int at = line_;
        advance();
        std::string name;
        while (!eof() && peek() != ']' && peek() != '\n') name.push_back(advance());
        if (eof() || peek() != ']') fail("unterminated section header");
        advance();
        name = trim(name);
        if (name.empty()) fail("empty section name");
        for (const auto& s : doc.sections) {
          if (s.name() == name) fail("duplicate section [" + name + "]");
        }
        doc.sections.emplace_back(name, at);
        end_of_line();
        continue;
      }
      std::string key;
      if (peek() == '"') {
        key = basic_string();
      } else {
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-' ||
                          peek() == '.')) {
          key.push_back(advance());
        }
      }
      if (key.empty()) fail("expected a key");
      skip_inline_space();
      if (eof() || peek() != '=') fail("expected '=' after key '" + key + "'");
      advance();
      skip_inline_space();
      Value v = value();
      doc.sections.back().set(key, std::move(v));
      end_of_line();
    }
    return doc;
  }

 private:
  bool eof() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ScenarioInvalid, "line " + std::to_string(line_) + ": " + msg);
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

  void skip_inline_space() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }

  void skip_comment() {
    if (!eof() && peek() == '#') {
      while (!eof() && peek() != '\n') advance();
    }
  }

  void skip_blank_lines() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (!eof() && peek() == '\n') {
        advance();
        continue;
      }
      return;
    }
  }

  /// Whitespace, newlines and comments inside arrays.
  void skip_array_space() {
    for (;;) {
      skip_inline_space();
      skip_comment();
      if (!eof() && peek() == '\n') {
        advance();
        continue;
      }
      return;
    }
  }

  void end_of_line() {
    skip_inline_space();
    skip_comment();
    if (!eof() && peek() != '\n') fail(std::string("unexpected '") + peek() + "' after value");
  }

  std::string basic_string() {
    advance();  // opening quote
    std::string out;
    while (!eof() && peek() != '"') {
      if (peek() == '\n') fail("unterminated string");
      char c = advance();
      if (c == '\\' && !eof()) {
        const char e = advance();
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unknown escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (eof()) fail("unterminated string");
    advance();
    return out;
  }

  std::string multiline_string() {
    pos_ += 3;
    if (!eof() && peek() == '\n') advance();
    const auto end = src_.find("\"\"\"", pos_);
    if (end == std::string_view::npos) fail("unterminated multi-line string");
    std::string out(src_.substr(pos_, end - pos_));
    while (pos_ < end + 3) advance();
    return out;
  }

  Value value() {
    Value v;
    v.line = line_;
    if (eof()) fail("missing value");
    if (src_.substr(pos_, 3) == "\"\"\"") {
      v.kind = Value::Kind::String;
      v.text = multiline_string();
      return v;
    }
    if (peek() == '"') {
      v.kind = Value::Kind::String;
      v.text = basic_string();
      return v;
    }
    if (peek() == '[') {
      advance();
      v.kind = Value::Kind::Array;
      skip_array_space();
      while (!eof() && peek() != ']') {
        v.items.push_back(value());
        skip_array_space();
        if (!eof() && peek() == ',') {
          advance();
          skip_array_space();
        } else {
          break;
        }
      }
      if (eof() || peek() != ']') fail("unterminated array");
      advance();
      return v;
    }
    std::string word;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == '-' ||
                      peek() == '+' || peek() == '_')) {
      word.push_back(advance());
    }
    if (word == "true" || word == "false") {
      v.kind = Value::Kind::Bool;
      v.boolean = word == "true";
      return v;
    }
    std::string digits;
    for (char c : word) {
      if (c != '_') digits.push_back(c);
    }
    v.text = digits;
    const char* first = digits.data();
    const char* last = digits.data() + digits.size();
    if (!digits.empty() && digits.front() == '+') ++first;
    std::int64_t i = 0;
    auto ri = std::from_chars(first, last, i);
    if (ri.ec == std::errc{} && ri.ptr == last) {
      v.kind = Value::Kind::Integer;
      v.integer = i;
      return v;
    }
    double d = 0.0;
    auto rd = std::from_chars(first, last, d);
    if (rd.ec == std::errc{} && rd.ptr == last && !digits.empty()) {
      v.kind = Value::Kind::Float;
      v.real = d;
      return v;
    }
    fail("cannot parse value '" + word + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace detail

inline Document parse(std::string_view text) { return detail::Reader(text).run(); }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Document parse_file(const std::string& path) {
  try {
    return parse(read_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Io) throw;
    throw Error(e.code(), path + ": " + e.detail());
  }
}

}  // namespace qfs::config
