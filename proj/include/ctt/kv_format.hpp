// Copyright 2026 The ctt Authors.
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

// Canonical key-value text documents:
//   ctt-<kind> v<version>
//   key=value
//   ...
// Keys appear in insertion order, are unique and contain no '=' or newline.
// Blank lines and lines starting with '#' are ignored on input.

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctt/error.hpp"

namespace ctt {

class KvDocument {
 public:
  KvDocument(std::string kind, unsigned version) : kind_(std::move(kind)), version_(version) {}

  const std::string& kind() const { return kind_; }
  unsigned version() const { return version_; }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void set(const std::string& key, std::string value) {
    if (key.empty() || key.find_first_of("=\n") != std::string::npos) throw DomainError("bad key: " + key);
    if (value.find('\n') != std::string::npos) throw DomainError("value for " + key + " spans lines");
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(key, std::move(value));
  }
  void set(const std::string& key, std::uint64_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, bool value) { set(key, std::string(value ? "1" : "0")); }

  bool has(const std::string& key) const {
    for (const auto& e : entries_) {
      if (e.first == key) return true;
    }
    return false;
  }

  const std::string& get(const std::string& key) const {
    for (const auto& e : entries_) {
      if (e.first == key) return e.second;
    }
    throw ParseError("missing key '" + key + "' in " + kind_ + " document");
  }

  std::uint64_t get_uint(const std::string& key) const {
    const std::string& s = get(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("key '" + key + "' is not an integer");
    return v;
  }

  double get_double(const std::string& key) const {
    const std::string& s = get(key);
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ParseError("");
      return v;
    } catch (const std::exception&) {
      throw ParseError("key '" + key + "' is not a number");
    }
  }

  // Round-trip exact: 17 significant digits.
  static std::string format_double(double v) {
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
  }

  std::string to_string() const {
    std::string out = "ctt-" + kind_ + " v" + std::to_string(version_) + "\n";
    for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
    return out;
  }

  static KvDocument parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string kind;
    unsigned version = 0;
    bool have_header = false;
    std::vector<std::pair<std::string, std::string>> entries;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#') continue;
      if (!have_header) {
        const auto space = line.find(" v");
        if (line.rfind("ctt-", 0) != 0 || space == std::string::npos) throw ParseError("missing ctt document header");
        kind = line.substr(4, space - 4);
        try {
          version = static_cast<unsigned>(std::stoul(line.substr(space + 2)));
        } catch (const std::exception&) {
          throw ParseError("bad document version");
        }
        have_header = true;
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got: " + line);
      entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    if (!have_header) throw ParseError("empty document");
    KvDocument doc(kind, version);
    for (auto& [k, v] : entries) {
      if (doc.has(k)) throw ParseError("duplicate key '" + k + "'");
      doc.set(k, std::move(v));
    }
    return doc;
  }

  // Parses and checks the kind and the highest supported version.
  static KvDocument parse_expect(const std::string& text, const std::string& kind, unsigned max_version) {
    KvDocument doc = parse(text);
    if (doc.kind() != kind) throw ParseError("expected a " + kind + " document, got " + doc.kind());
    if (doc.version() == 0 || doc.version() > max_version) throw ParseError("unsupported " + kind + " version");
    return doc;
  }

  static std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  void write_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << to_string();
  }

 private:
  std::string kind_;
  unsigned version_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace ctt
