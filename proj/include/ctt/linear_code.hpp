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

// Binary linear codes seen through their syndrome map: syn(x) = H x and a
// decoder syn_dec(s) returning a low-weight e with syn(e) = s, or nothing.

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ctt/bitstring.hpp"
#include "ctt/error.hpp"
#include "ctt/stats.hpp"

namespace ctt {

class LinearCode {
 public:
  virtual ~LinearCode() = default;

  virtual std::size_t n() const = 0;
  virtual std::size_t kappa() const = 0;
  // Every error pattern of weight <= t_corr() is decoded exactly.
  virtual std::size_t t_corr() const = 0;
  virtual BitString syn(const BitString& x) const = 0;
  // nullopt signals decoder failure.
  virtual std::optional<BitString> syn_dec(const BitString& s) const = 0;
  // Exact Pr[syn_dec(syn(e)) != e] for e with i.i.d. Bernoulli(p) bits.
  virtual double bsc_failure(double p) const = 0;
  // Registry descriptor that rebuilds this code.
  virtual std::string descriptor() const = 0;

  std::size_t syndrome_length() const { return n() - kappa(); }
  double rate() const { return static_cast<double>(kappa()) / static_cast<double>(n()); }

  // H as text, one row of '0'/'1' per line. Quadratic in n.
  void write_parity_check(std::ostream& out) const {
    if (n() > 8192) throw UnsupportedError("parity-check export is limited to n <= 8192");
    std::vector<BitString> cols;
    cols.reserve(n());
    for (std::size_t j = 0; j < n(); ++j) {
      BitString e(n());
      e.set(j, true);
      cols.push_back(syn(e));
    }
    std::string row(n(), '0');
    for (std::size_t i = 0; i < syndrome_length(); ++i) {
      for (std::size_t j = 0; j < n(); ++j) row[j] = cols[j].get(i) ? '1' : '0';
      out << row << '\n';
    }
  }

 protected:
  void check_word(const BitString& x) const {
    if (x.size() != n()) throw LengthError("word length does not match the code length");
  }
  void check_syndrome(const BitString& s) const {
    if (s.size() != syndrome_length()) throw LengthError("syndrome length does not match the code");
  }
};

using CodePtr = std::shared_ptr<const LinearCode>;

// Rank of a set of GF(2) row vectors.
inline std::size_t gf2_rank(std::vector<BitString> rows) {
  std::size_t rank = 0;
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && !rows[pivot].get(c)) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r].get(c)) rows[r] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

// Small code with an explicit parity-check matrix and an exhaustive coset-leader
// table. Column j of H is stored as the integer cols[j] (bit i = row i).
class TableCode final : public LinearCode {
 public:
  static constexpr std::size_t kMaxLength = 24;

  TableCode(std::vector<std::uint32_t> columns, std::size_t rows, std::string name)
      : cols_(std::move(columns)), rows_(rows), name_(std::move(name)) {
    if (cols_.empty() || cols_.size() > kMaxLength) throw DomainError("table codes need 1 <= n <= 24");
    if (rows_ == 0 || rows_ >= cols_.size()) throw DomainError("table code needs 0 < n - kappa < n");
    std::vector<BitString> hrows(rows_, BitString(cols_.size()));
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if ((cols_[j] >> rows_) != 0) throw DomainError("parity-check column wider than the row count");
      for (std::size_t i = 0; i < rows_; ++i) hrows[i].set(j, (cols_[j] >> i) & 1U);
    }
    if (gf2_rank(hrows) != rows_) throw DomainError("parity-check matrix does not have full row rank");
    build_leaders();
  }

  // Cyclic code of length n with generator polynomial g (bit i = coefficient of x^i):
  // column j of H is x^j mod g.
  static TableCode cyclic(std::size_t n, std::uint32_t g, std::string name) {
    const int r = 31 - std::countl_zero(g);
    std::vector<std::uint32_t> cols;
    std::uint32_t v = 1;
    for (std::size_t j = 0; j < n; ++j) {
      cols.push_back(v);
      v <<= 1;
      if ((v >> r) & 1U) v ^= g;
    }
    return TableCode(std::move(cols), static_cast<std::size_t>(r), std::move(name));
  }

  static TableCode hamming7() { return cyclic(7, 0b1011, "hamming7"); }
  static TableCode hamming15() { return cyclic(15, 0b10011, "hamming15"); }
  static TableCode golay23() { return cyclic(23, 0xC75, "golay23"); }

  // Rows of '0'/'1' characters, all the same length; blank lines ignored.
  static TableCode from_parity_rows(std::istream& in) {
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty()) continue;
      if (!rows.empty() && line.size() != rows.front().size()) throw ParseError("parity-check rows differ in length");
      if (line.find_first_not_of("01") != std::string::npos) throw ParseError("parity-check rows must be 0/1");
      rows.push_back(line);
    }
    if (rows.empty()) throw ParseError("empty parity-check matrix");
    std::vector<std::uint32_t> cols(rows.front().size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (rows[i][j] == '1') cols[j] |= std::uint32_t{1} << i;
      }
    }
    std::string name = "table:";
    for (std::size_t i = 0; i < rows.size(); ++i) name += (i ? "/" : "") + rows[i];
    return TableCode(std::move(cols), rows.size(), std::move(name));
  }

  std::size_t n() const override { return cols_.size(); }
  std::size_t kappa() const override { return cols_.size() - rows_; }
  std::size_t t_corr() const override { return t_corr_; }
  std::string descriptor() const override { return name_; }
  const std::vector<std::uint32_t>& columns() const { return cols_; }

  BitString syn(const BitString& x) const override {
    check_word(x);
    std::uint32_t s = 0;
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      if (x.get(j)) s ^= cols_[j];
    }
    return BitString::from_uint(s, rows_);
  }

  std::optional<BitString> syn_dec(const BitString& s) const override {
    check_syndrome(s);
    const auto& entry = leaders_[s.to_uint()];
    if (static_cast<std::size_t>(std::popcount(entry)) > t_corr_) return std::nullopt;
    return BitString::from_uint(entry, cols_.size());
  }

  // The leader of the coset with syndrome s, even beyond t_corr.
  BitString coset_leader(const BitString& s) const {
    check_syndrome(s);
    return BitString::from_uint(leaders_[s.to_uint()], cols_.size());
  }

  double bsc_failure(double p) const override {
    // Decoding succeeds exactly when e is an accepted coset leader.
    std::vector<double> by_weight(cols_.size() + 1, 0);
    for (std::uint32_t e : leaders_) {
      const auto w = static_cast<std::size_t>(std::popcount(e));
      if (w <= t_corr_) by_weight[w] += 1;
    }
    double ok = 0;
    for (std::size_t w = 0; w < by_weight.size(); ++w) {
      if (by_weight[w] > 0) ok += by_weight[w] * std::pow(p, static_cast<double>(w)) *
                                  std::pow(1 - p, static_cast<double>(cols_.size() - w));
    }
    return std::max(0.0, 1 - ok);
  }

 private:
  // Enumerates patterns by increasing weight; the first pattern to reach a
  // syndrome is its leader, and the first repeated syndrome bounds t_corr.
  void build_leaders() {
    const std::size_t n = cols_.size();
    const std::size_t cosets = std::size_t{1} << rows_;
    leaders_.assign(cosets, 0);
    std::vector<bool> filled(cosets, false);
    filled[0] = true;
    std::size_t remaining = cosets - 1;
    bool collided = false;
    t_corr_ = n;
    for (std::size_t w = 1; w <= n && (remaining > 0 || !collided); ++w) {
      // Gosper's hack over all n-bit masks of weight w.
      std::uint32_t mask = (std::uint32_t{1} << w) - 1;
      const std::uint32_t limit = std::uint32_t{1} << n;
      while (mask < limit) {
        std::uint32_t s = 0;
        for (std::uint32_t m = mask; m != 0; m &= m - 1) s ^= cols_[static_cast<std::size_t>(std::countr_zero(m))];
        if (filled[s]) {
          if (!collided) {
            collided = true;
            t_corr_ = w - 1;
          }
          if (remaining == 0) break;
        } else {
          filled[s] = true;
          leaders_[s] = mask;
          --remaining;
        }
        const std::uint32_t c = mask & (0U - mask);
        const std::uint32_t r = mask + c;
        if (r == 0 || r >= limit) break;
        mask = (((r ^ mask) >> 2) / c) | r;
      }
    }
  }

  std::vector<std::uint32_t> cols_;
  std::size_t rows_;
  std::string name_;
  std::vector<std::uint32_t> leaders_;
  std::size_t t_corr_ = 0;
};

// Length-R repetition code, R odd: syndrome bit j - 1 is x_0 xor x_j.
class RepetitionCode final : public LinearCode {
 public:
  explicit RepetitionCode(std::size_t R) : R_(R) {
    if (R < 3 || R % 2 == 0) throw DomainError("repetition length must be odd and at least 3");
  }

  std::size_t n() const override { return R_; }
  std::size_t kappa() const override { return 1; }
  std::size_t t_corr() const override { return (R_ - 1) / 2; }
  std::string descriptor() const override { return "rep:" + std::to_string(R_); }

  BitString syn(const BitString& x) const override {
    check_word(x);
    BitString s = x.slice(1, R_ - 1);
    if (x.get(0)) flip_all(s);
    return s;
  }

  // Majority decoding: the lighter of the two patterns consistent with s.
  std::optional<BitString> syn_dec(const BitString& s) const override {
    check_syndrome(s);
    BitString e = concat(BitString(1), s);
    if (s.weight() > t_corr()) {
      flip_all(e);
    }
    return e;
  }

  double bsc_failure(double p) const override {
    return stats::binomial_sf(R_, static_cast<std::int64_t>(t_corr()) + 1, p);
  }

 private:
  static void flip_all(BitString& s) {
    auto w = s.mutable_words();
    for (auto& word : w) word = ~word;
    s = BitString::from_words(w, s.size());
  }

  std::size_t R_;
};

// Block-diagonal combination: codewords, syndromes and errors are concatenations.
class DirectSumCode final : public LinearCode {
 public:
  explicit DirectSumCode(std::vector<CodePtr> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw DomainError("direct sum needs at least one part");
    t_corr_ = parts_.front()->t_corr();
    for (const auto& p : parts_) {
      n_ += p->n();
      kappa_ += p->kappa();
      t_corr_ = std::min(t_corr_, p->t_corr());
    }
  }

  static DirectSumCode copies(const CodePtr& part, std::size_t count) {
    return DirectSumCode(std::vector<CodePtr>(count, part));
  }

  std::size_t n() const override { return n_; }
  std::size_t kappa() const override { return kappa_; }
  std::size_t t_corr() const override { return t_corr_; }
  const std::vector<CodePtr>& parts() const { return parts_; }

  std::string descriptor() const override {
    std::string out;
    for (std::size_t i = 0; i < parts_.size();) {
      std::size_t j = i;
      while (j < parts_.size() && parts_[j]->descriptor() == parts_[i]->descriptor()) ++j;
      if (!out.empty()) out += '+';
      out += std::to_string(j - i) + "x" + parts_[i]->descriptor();
      i = j;
    }
    return out;
  }

  BitString syn(const BitString& x) const override {
    check_word(x);
    BitString s;
    std::size_t pos = 0;
    for (const auto& p : parts_) {
      s.append(p->syn(x.slice(pos, p->n())));
      pos += p->n();
    }
    return s;
  }

  std::optional<BitString> syn_dec(const BitString& s) const override {
    check_syndrome(s);
    BitString e;
    std::size_t pos = 0;
    for (const auto& p : parts_) {
      auto part = p->syn_dec(s.slice(pos, p->syndrome_length()));
      if (!part) return std::nullopt;
      e.append(*part);
      pos += p->syndrome_length();
    }
    return e;
  }

  double bsc_failure(double p) const override {
    double log_ok = 0;
    for (const auto& part : parts_) log_ok += std::log1p(-std::min(part->bsc_failure(p), 1.0));
    return -std::expm1(log_ok);
  }

 private:
  std::vector<CodePtr> parts_;
  std::size_t n_ = 0;
  std::size_t kappa_ = 0;
  std::size_t t_corr_ = 0;
};

}  // namespace ctt
