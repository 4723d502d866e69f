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

// Primitive narrow-sense binary BCH codes of length 2^m - 1 with
// bounded-distance decoding (Berlekamp-Massey, then Chien search).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ctt/bitstring.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_poly.hpp"
#include "ctt/linear_code.hpp"
#include "ctt/stats.hpp"

namespace ctt {

class BchCode final : public LinearCode {
 public:
  static constexpr unsigned kMinM = 3;
  static constexpr unsigned kMaxM = 10;

  BchCode(unsigned m, std::size_t t) : m_(m), t_(t) {
    if (m < kMinM || m > kMaxM) throw DomainError("BCH field exponent must be in [3, 10]");
    n_ = (std::size_t{1} << m) - 1;
    if (t == 0 || 2 * t + 1 > n_) throw DomainError("BCH designed distance out of range");
    build_tables();
    build_generator();
    if (deg_g_ >= n_) throw DomainError("BCH code has dimension zero");
  }

  // Dimension n - deg g, from the sizes of the cyclotomic cosets of 1..2t.
  static std::size_t dimension(unsigned m, std::size_t t) {
    const std::size_t n = (std::size_t{1} << m) - 1;
    std::set<std::size_t> roots;
    for (std::size_t j = 1; j <= 2 * t; ++j) {
      for (std::size_t k = j % n; roots.insert(k).second;) k = (2 * k) % n;
    }
    return roots.size() >= n ? 0 : n - roots.size();
  }

  // dimension(m, t) for t = 0..(n-1)/2 in one pass over the cosets; entry 0 is n.
  static std::vector<std::size_t> dimensions(unsigned m) {
    const std::size_t n = (std::size_t{1} << m) - 1;
    std::vector<bool> in_roots(n, false);
    std::size_t count = 0;
    std::vector<std::size_t> out{n};
    for (std::size_t t = 1; 2 * t + 1 <= n; ++t) {
      for (std::size_t j = 2 * t - 1; j <= 2 * t; ++j) {
        for (std::size_t k = j % n; !in_roots[k]; k = (2 * k) % n) {
          in_roots[k] = true;
          ++count;
        }
      }
      out.push_back(count >= n ? 0 : n - count);
    }
    return out;
  }

  std::size_t n() const override { return n_; }
  std::size_t kappa() const override { return n_ - deg_g_; }
  std::size_t t_corr() const override { return t_; }
  std::string descriptor() const override { return "bch:" + std::to_string(m_) + ":" + std::to_string(t_); }
  const gf2::Words& generator() const { return g_; }

  // x(X) mod g(X).
  BitString syn(const BitString& x) const override {
    check_word(x);
    gf2::Words w(x.words().begin(), x.words().end());
    return BitString::from_words(gf2::mod(std::move(w), g_), deg_g_);
  }

  std::optional<BitString> syn_dec(const BitString& s) const override {
    check_syndrome(s);
    if (s.is_zero()) return BitString(n_);
    // S_j = s(alpha^j) = e(alpha^j) because g vanishes at alpha^1..alpha^2t.
    std::vector<unsigned> S(2 * t_ + 1, 0);
    for (std::size_t j = 1; j <= 2 * t_; ++j) {
      unsigned acc = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.get(i)) acc ^= exp_[(i * j) % n_];
      }
      S[j] = acc;
    }
    // Berlekamp-Massey for the error locator C(X).
    std::vector<unsigned> C{1};
    std::vector<unsigned> B{1};
    std::size_t L = 0;
    std::size_t shift = 1;
    unsigned b = 1;
    for (std::size_t k = 0; k < 2 * t_; ++k) {
      unsigned d = S[k + 1];
      for (std::size_t i = 1; i <= L && i < C.size(); ++i) d ^= mul(C[i], S[k + 1 - i]);
      if (d == 0) {
        ++shift;
        continue;
      }
      const unsigned coef = mul(d, inv(b));
      std::vector<unsigned> T = C;
      if (C.size() < B.size() + shift) C.resize(B.size() + shift, 0);
      for (std::size_t i = 0; i < B.size(); ++i) C[i + shift] ^= mul(coef, B[i]);
      if (2 * L <= k) {
        L = k + 1 - L;
        B = std::move(T);
        b = d;
        shift = 1;
      } else {
        ++shift;
      }
    }
    if (L > t_) return std::nullopt;
    // Chien search: position i is in error iff C(alpha^-i) = 0.
    BitString e(n_);
    std::size_t roots = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      unsigned v = 0;
      const std::size_t step = (n_ - i) % n_;
      for (std::size_t k = 0; k < C.size(); ++k) {
        if (C[k] != 0) v ^= exp_[(log_[C[k]] + k * step) % n_];
      }
      if (v == 0) {
        e.set(i, true);
        ++roots;
      }
    }
    if (roots != L) return std::nullopt;
    if (!(syn(e) == s)) return std::nullopt;
    return e;
  }

  double bsc_failure(double p) const override {
    return stats::binomial_sf(n_, static_cast<std::int64_t>(t_) + 1, p);
  }

 private:
  static unsigned primitive_polynomial(unsigned m) {
    static constexpr unsigned kTable[] = {0, 0, 0, 0b1011, 0b10011, 0b100101, 0b1000011, 0b10001001, 0x11D, 0x211, 0x409};
    return kTable[m];
  }

  void build_tables() {
    exp_.assign(2 * n_, 0);
    log_.assign(n_ + 1, 0);
    unsigned v = 1;
    const unsigned poly = primitive_polynomial(m_);
    for (std::size_t i = 0; i < n_; ++i) {
      exp_[i] = v;
      log_[v] = static_cast<unsigned>(i);
      v <<= 1;
      if ((v >> m_) & 1U) v ^= poly;
    }
    for (std::size_t i = n_; i < 2 * n_; ++i) exp_[i] = exp_[i - n_];
  }

  unsigned mul(unsigned a, unsigned b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  unsigned inv(unsigned a) const { return exp_[(n_ - log_[a]) % n_]; }

  // g = product of (X - alpha^k) over the union of cyclotomic cosets of 1..2t.
  void build_generator() {
    std::set<std::size_t> roots;
    for (std::size_t j = 1; j <= 2 * t_; ++j) {
      for (std::size_t k = j % n_; roots.insert(k).second;) k = (2 * k) % n_;
    }
    std::vector<unsigned> g{1};
    for (std::size_t k : roots) {
      std::vector<unsigned> next(g.size() + 1, 0);
      const unsigned root = exp_[k];
      for (std::size_t i = 0; i < g.size(); ++i) {
        next[i + 1] ^= g[i];
        next[i] ^= mul(g[i], root);
      }
      g = std::move(next);
    }
    deg_g_ = g.size() - 1;
    g_.assign(gf2::words_for_bits(g.size()), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] > 1) throw DomainError("BCH generator has non-binary coefficients");
      if (g[i]) g_[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }

  unsigned m_;
  std::size_t t_;
  std::size_t n_ = 0;
  std::size_t deg_g_ = 0;
  std::vector<unsigned> exp_;
  std::vector<unsigned> log_;
  gf2::Words g_;
};

}  // namespace ctt
