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

// Message preparation: prefix-code compression with random padding to a fixed
// length l0, then an invertible hash that splits the result into a near-uniform
// l-bit part m and a remainder kept by the client.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ctt/bitstring.hpp"
#include "ctt/entropy.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_field.hpp"
#include "ctt/rng.hpp"

namespace ctt {

// A prefix-free code over messages, plus the fixed compressed length l0.
//
// Three shapes exist: an explicit codeword table (messages are integer ids of
// a fixed bit width), the two-class code where the all-ones message mu0 is
// '1' followed by L padding bits and every other message mu is '0' || mu, and
// the identity code on fixed-width strings.
class PrefixCode {
 public:
  using Outcome = DiscreteDistribution::Outcome;

  static PrefixCode from_table(std::map<Outcome, BitString> table, std::size_t message_width) {
    if (table.empty()) throw DomainError("prefix code needs at least one codeword");
    if (message_width == 0 || message_width > 64) throw DomainError("table message width must be in [1, 64]");
    PrefixCode code;
    code.kind_ = Kind::kTable;
    code.width_ = message_width;
    code.trie_.push_back({});
    for (const auto& [id, word] : table) {
      if (message_width < 64 && (id >> message_width) != 0) throw DomainError("message id wider than the code");
      if (word.empty()) throw DomainError("empty codeword");
      code.ell0_ = std::max(code.ell0_, word.size());
      std::size_t node = 0;
      for (std::size_t i = 0; i < word.size(); ++i) {
        if (code.trie_[node].leaf) throw DomainError("code is not prefix-free");
        const int b = word.get(i) ? 1 : 0;
        if (code.trie_[node].child[b] == 0) {
          code.trie_[node].child[b] = code.trie_.size();
          code.trie_.push_back({});
        }
        node = code.trie_[node].child[b];
      }
      if (code.trie_[node].leaf || code.trie_[node].child[0] != 0 || code.trie_[node].child[1] != 0) {
        throw DomainError("code is not prefix-free");
      }
      code.trie_[node].leaf = true;
      code.trie_[node].id = id;
    }
    code.table_ = std::move(table);
    return code;
  }

  static PrefixCode two_class(std::size_t L) {
    if (L == 0) throw DomainError("example code needs L >= 1");
    PrefixCode code;
    code.kind_ = Kind::kTwoClass;
    code.width_ = L;
    code.ell0_ = L + 1;
    return code;
  }

  static PrefixCode raw(std::size_t width) {
    if (width == 0) throw DomainError("raw code needs a positive width");
    PrefixCode code;
    code.kind_ = Kind::kRaw;
    code.width_ = width;
    code.ell0_ = width;
    return code;
  }

  // Fixed length of every compressed string: the longest codeword.
  std::size_t ell0() const { return ell0_; }
  std::size_t message_width() const { return width_; }

  BitString codeword(const BitString& message) const {
    check_message(message);
    switch (kind_) {
      case Kind::kTable: {
        auto it = table_.find(message.to_uint());
        if (it == table_.end()) throw DomainError("message has no codeword");
        return it->second;
      }
      case Kind::kTwoClass:
        if (message.weight() == width_) return BitString::from_string("1");
        return concat(BitString(1), message);
      case Kind::kRaw:
        return message;
    }
    throw DomainError("unreachable");
  }

  // Codeword followed by uniform padding up to l0 bits.
  BitString compress(const BitString& message, Rng& rng) const {
    BitString out = codeword(message);
    out.append(rng.random_bits(ell0_ - out.size()));
    return out;
  }

  // Parses the unique codeword at the start of m0 and discards the rest.
  BitString decompress(const BitString& m0) const {
    switch (kind_) {
      case Kind::kTable: {
        std::size_t node = 0;
        for (std::size_t i = 0; i < m0.size(); ++i) {
          node = trie_[node].child[m0.get(i) ? 1 : 0];
          if (node == 0) break;
          if (trie_[node].leaf) return BitString::from_uint(trie_[node].id, width_);
        }
        throw ParseError("no codeword is a prefix of the input");
      }
      case Kind::kTwoClass: {
        if (m0.size() < 1) throw ParseError("empty input");
        if (m0.get(0)) {
          BitString mu0(width_);
          for (std::size_t i = 0; i < width_; ++i) mu0.set(i, true);
          return mu0;
        }
        if (m0.size() < width_ + 1) throw ParseError("input shorter than a codeword");
        BitString mu = m0.slice(1, width_);
        if (mu.weight() == width_) throw ParseError("'0' followed by mu0 is not a codeword");
        return mu;
      }
      case Kind::kRaw:
        if (m0.size() < width_) throw ParseError("input shorter than a codeword");
        return m0.prefix(width_);
    }
    throw DomainError("unreachable");
  }

  // Self-contained text form: "raw:<w>", "two_class:<L>" or
  // "table:<w>:<id>=<codeword bits>,...".
  std::string serialize() const {
    switch (kind_) {
      case Kind::kRaw:
        return "raw:" + std::to_string(width_);
      case Kind::kTwoClass:
        return "two_class:" + std::to_string(width_);
      case Kind::kTable: {
        std::string out = "table:" + std::to_string(width_) + ":";
        bool first = true;
        for (const auto& [id, word] : table_) {
          if (!first) out += ',';
          first = false;
          out += std::to_string(id) + "=" + word.to_string();
        }
        return out;
      }
    }
    throw DomainError("unreachable");
  }

  static PrefixCode deserialize(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("prefix code must be <kind>:<args>");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    auto parse_size = [](const std::string& s) {
      if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad number " + s);
      return static_cast<std::size_t>(std::stoull(s));
    };
    if (kind == "raw") return raw(parse_size(rest));
    if (kind == "two_class") return two_class(parse_size(rest));
    if (kind != "table") throw ParseError("unknown prefix code kind " + kind);
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw ParseError("table code needs <width>:<entries>");
    const std::size_t width = parse_size(rest.substr(0, c2));
    std::map<Outcome, BitString> table;
    std::size_t pos = c2 + 1;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string entry = rest.substr(pos, comma - pos);
      const auto eq = entry.find('=');
      if (eq == std::string::npos) throw ParseError("table entry must be <id>=<bits>");
      table.emplace(parse_size(entry.substr(0, eq)), BitString::from_string(entry.substr(eq + 1)));
      pos = comma + 1;
    }
    return from_table(std::move(table), width);
  }

  // One "message-id codeword" line per message, for audit. The two-class code
  // lists its two codeword shapes symbolically.
  std::string audit_text() const {
    switch (kind_) {
      case Kind::kTable: {
        std::string out;
        for (const auto& [id, word] : table_) out += std::to_string(id) + " " + word.to_string() + "\n";
        return out;
      }
      case Kind::kTwoClass:
        return "mu0 1\nmu 0<mu>\n";
      case Kind::kRaw:
        return "mu <mu>\n";
    }
    throw DomainError("unreachable");
  }

  // Codeword table of a table code (empty for the other shapes).
  const std::map<Outcome, BitString>& table() const { return table_; }

 private:
  enum class Kind { kTable, kTwoClass, kRaw };
  struct TrieNode {
    std::size_t child[2] = {0, 0};
    bool leaf = false;
    Outcome id = 0;
  };

  PrefixCode() = default;

  void check_message(const BitString& message) const {
    if (message.size() != width_) throw LengthError("message has the wrong width for this code");
  }

  Kind kind_ = Kind::kRaw;
  std::size_t width_ = 0;
  std::size_t ell0_ = 0;
  std::map<Outcome, BitString> table_;
  std::vector<TrieNode> trie_;
};

// Huffman code over the nonzero-probability outcomes. Ties in probability are
// broken by outcome id, and merged nodes rank after every leaf of equal
// probability, so the code is a deterministic function of P.
inline PrefixCode build_prefix_code(const DiscreteDistribution& P) {
  std::vector<std::pair<PrefixCode::Outcome, double>> support;
  for (const auto& e : P.entries()) {
    if (e.second > 0) support.push_back(e);
  }
  std::sort(support.begin(), support.end());
  if (support.empty()) throw DomainError("distribution has empty support");
  std::size_t width = 1;
  for (const auto& [id, p] : support) width = std::max<std::size_t>(width, 64 - std::countl_zero(id));
  std::map<PrefixCode::Outcome, BitString> table;
  if (support.size() == 1) {
    table.emplace(support.front().first, BitString::from_string("0"));
    return PrefixCode::from_table(std::move(table), width);
  }
  struct Node {
    std::size_t child[2];
    std::size_t leaf;  // index into support, or npos
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<Node> nodes;
  using Key = std::tuple<double, std::size_t>;  // (probability, rank), rank = node index
  std::priority_queue<Key, std::vector<Key>, std::greater<>> heap;
  for (std::size_t i = 0; i < support.size(); ++i) {
    nodes.push_back({{npos, npos}, i});
    heap.emplace(support[i].second, i);
  }
  while (heap.size() > 1) {
    const auto [pa, a] = heap.top();
    heap.pop();
    const auto [pb, b] = heap.top();
    heap.pop();
    nodes.push_back({{a, b}, npos});
    heap.emplace(pa + pb, nodes.size() - 1);
  }
  // Iterative walk from the root assigning '0' to the first-popped child.
  std::vector<std::pair<std::size_t, BitString>> stack{{nodes.size() - 1, BitString()}};
  while (!stack.empty()) {
    auto [n, prefix] = std::move(stack.back());
    stack.pop_back();
    if (nodes[n].leaf != npos) {
      table.emplace(support[nodes[n].leaf].first, prefix);
      continue;
    }
    for (int b = 1; b >= 0; --b) {
      BitString next = prefix;
      next.append(BitString::from_uint(static_cast<std::uint64_t>(b), 1));
      stack.emplace_back(nodes[n].child[b], std::move(next));
    }
  }
  return PrefixCode::from_table(std::move(table), width);
}

// Distribution of the l0-bit compressed string when messages follow P: each
// codeword c(m) contributes 2^(l0 - |c(m)|) strings of mass P(m) 2^-(l0 - |c(m)|).
inline DiscreteDistribution compressed_distribution(const DiscreteDistribution& P, const PrefixCode& code) {
  std::vector<ProbabilityClass> cls;
  for (const auto& [id, p] : P.entries()) {
    if (p <= 0) continue;
    const BitString word = code.codeword(BitString::from_uint(id, code.message_width()));
    const double pads = std::ldexp(1.0, static_cast<int>(code.ell0() - word.size()));
    cls.push_back({p / pads, pads});
  }
  return DiscreteDistribution::from_classes(std::move(cls));
}

inline BitString compress(const BitString& message, const PrefixCode& code, Rng& rng) {
  return code.compress(message, rng);
}

inline BitString decompress(const BitString& m0, const PrefixCode& code) { return code.decompress(m0); }

// p = w x split as m || m_rest, with m the first l bits.
struct RandomizedMessage {
  BitString m;
  BitString m_rest;
  FieldElement w;
};

// x is m0 zero-extended to the field degree (it may exceed l0 when the field
// is an embedding).
inline RandomizedMessage randomize(const BitString& m0, const FieldElement& w, std::size_t ell) {
  if (w.is_zero()) throw NonInvertibleError("randomizer seed must be nonzero");
  if (m0.size() > w.degree()) throw LengthError("compressed message longer than the field degree");
  if (ell > m0.size()) throw LengthError("extracted length exceeds the compressed length");
  BitString x = m0;
  x.resize(w.degree());
  const BitString p = gf_mul(w, w.field().element(std::move(x))).bits();
  return {p.prefix(ell), p.slice(ell, p.size() - ell), w};
}

// w^-1 (m || m_rest), all field-degree bits.
inline BitString derandomize(const BitString& m, const BitString& m_rest, const FieldElement& w) {
  if (w.is_zero()) throw NonInvertibleError("randomizer seed must be nonzero");
  if (m.size() + m_rest.size() != w.degree()) throw LengthError("m || m_rest must fill the field");
  return phi_invert(w, w.field().element(concat(m, m_rest))).bits();
}

}  // namespace ctt
