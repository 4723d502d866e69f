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

// Dense polynomials over GF(2) stored as little-endian 64-bit words, plus the
// sparse reduction polynomials that define the binary extension fields.

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CTT_HAVE_X86 1
#endif

#include "ctt/error.hpp"

namespace ctt::gf2 {

using Words = std::vector<std::uint64_t>;

inline std::size_t words_for_bits(std::size_t bits) { return (bits + 63) / 64; }

// Number of significant bits, i.e. degree + 1 (0 for the zero polynomial).
inline std::size_t bit_length(std::span<const std::uint64_t> p) {
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] != 0) return 64 * i + 64 - static_cast<std::size_t>(std::countl_zero(p[i]));
  }
  return 0;
}

inline void trim_to_bits(Words& p, std::size_t bits) {
  p.resize(words_for_bits(bits), 0);
  if (bits % 64 != 0 && !p.empty()) p.back() &= (std::uint64_t{1} << (bits % 64)) - 1;
}

// dst ^= src << shift; dst grows as needed.
inline void xor_shifted(Words& dst, std::span<const std::uint64_t> src, std::size_t shift) {
  const std::size_t src_bits = bit_length(src);
  if (src_bits == 0) return;
  const std::size_t need = words_for_bits(src_bits + shift);
  if (dst.size() < need) dst.resize(need, 0);
  const std::size_t ws = shift / 64;
  const std::size_t bs = shift % 64;
  const std::size_t n = words_for_bits(src_bits);
  if (bs == 0) {
    for (std::size_t i = 0; i < n; ++i) dst[ws + i] ^= src[i];
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    dst[ws + i] ^= src[i] << bs;
    if (ws + i + 1 < dst.size()) dst[ws + i + 1] ^= src[i] >> (64 - bs);
  }
}

// p >> shift.
inline Words shifted_right(std::span<const std::uint64_t> p, std::size_t shift) {
  const std::size_t bits = bit_length(p);
  if (bits <= shift) return {};
  Words out(words_for_bits(bits - shift), 0);
  const std::size_t ws = shift / 64;
  const std::size_t bs = shift % 64;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint64_t lo = ws + i < p.size() ? p[ws + i] : 0;
    const std::uint64_t hi = ws + i + 1 < p.size() ? p[ws + i + 1] : 0;
    out[i] = bs == 0 ? lo : (lo >> bs) | (hi << (64 - bs));
  }
  return out;
}

namespace detail {

inline void clmul_words_soft(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                             std::uint64_t* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const std::uint64_t x = a[i];
    if (x == 0) continue;
    // 4-bit window table of x times every nibble, with the bits carried out of the word.
    std::array<std::uint64_t, 16> lo{};
    std::array<std::uint64_t, 16> hi{};
    for (unsigned k = 1; k < 16; ++k) {
      for (unsigned bit = 0; bit < 4; ++bit) {
        if ((k >> bit) & 1U) {
          lo[k] ^= x << bit;
          if (bit != 0) hi[k] ^= x >> (64 - bit);
        }
      }
    }
    for (std::size_t j = 0; j < nb; ++j) {
      const std::uint64_t y = b[j];
      std::uint64_t rl = 0;
      std::uint64_t rh = 0;
      for (unsigned s = 0; s < 64; s += 4) {
        const unsigned nib = static_cast<unsigned>((y >> s) & 0xfU);
        rl ^= s == 0 ? lo[nib] : lo[nib] << s;
        rh ^= s == 0 ? hi[nib] : (hi[nib] << s) | (lo[nib] >> (64 - s));
      }
      out[i + j] ^= rl;
      out[i + j + 1] ^= rh;
    }
  }
}

#ifdef CTT_HAVE_X86
__attribute__((target("pclmul,sse2"))) inline void clmul_words_hw(const std::uint64_t* a, std::size_t na,
                                                                    const std::uint64_t* b, std::size_t nb,
                                                                    std::uint64_t* out) {
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    const __m128i x = _mm_cvtsi64_si128(static_cast<long long>(a[i]));
    for (std::size_t j = 0; j < nb; ++j) {
      const __m128i r = _mm_clmulepi64_si128(x, _mm_cvtsi64_si128(static_cast<long long>(b[j])), 0x00);
      out[i + j] ^= static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
      out[i + j + 1] ^= static_cast<std::uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(r, r)));
    }
  }
}

inline bool cpu_has_pclmul() {
  static const bool has = __builtin_cpu_supports("pclmul");
  return has;
}
#endif

// out[0 .. na+nb) ^= a * b, schoolbook.
inline void clmul_schoolbook(const std::uint64_t* a, std::size_t na, const std::uint64_t* b, std::size_t nb,
                             std::uint64_t* out) {
#ifdef CTT_HAVE_X86
  if (cpu_has_pclmul()) {
    clmul_words_hw(a, na, b, nb, out);
    return;
  }
#endif
  clmul_words_soft(a, na, b, nb, out);
}

constexpr std::size_t kKaratsubaCutoff = 24;

// out[0 .. 2n) = a * b for two n-word operands; out must be zeroed.
inline void karatsuba(const std::uint64_t* a, const std::uint64_t* b, std::size_t n, std::uint64_t* out) {
  if (n <= kKaratsubaCutoff) {
    clmul_schoolbook(a, n, b, n, out);
    return;
  }
  const std::size_t lo = n / 2;
  const std::size_t hi = n - lo;
  // z0 = a0 b0 lands in out[0, 2lo), z2 = a1 b1 in out[2lo, 2lo + 2hi).
  karatsuba(a, b, lo, out);
  karatsuba(a + lo, b + lo, hi, out + 2 * lo);
  std::vector<std::uint64_t> sa(hi, 0);
  std::vector<std::uint64_t> sb(hi, 0);
  for (std::size_t i = 0; i < hi; ++i) {
    sa[i] = a[lo + i] ^ (i < lo ? a[i] : 0);
    sb[i] = b[lo + i] ^ (i < lo ? b[i] : 0);
  }
  std::vector<std::uint64_t> mid(2 * hi, 0);
  karatsuba(sa.data(), sb.data(), hi, mid.data());
  for (std::size_t i = 0; i < 2 * lo; ++i) mid[i] ^= out[i];
  for (std::size_t i = 0; i < 2 * hi; ++i) mid[i] ^= out[2 * lo + i];
  for (std::size_t i = 0; i < 2 * hi; ++i) out[lo + i] ^= mid[i];
}

inline const std::array<std::uint16_t, 256>& spread_table() {
  static const std::array<std::uint16_t, 256> table = [] {
    std::array<std::uint16_t, 256> t{};
    for (unsigned v = 0; v < 256; ++v) {
      std::uint16_t s = 0;
      for (unsigned bit = 0; bit < 8; ++bit) {
        if ((v >> bit) & 1U) s = static_cast<std::uint16_t>(s | (1U << (2 * bit)));
      }
      t[v] = s;
    }
    return t;
  }();
  return table;
}

}  // namespace detail

// Carry-less product a * b.
inline Words multiply(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  const std::size_t na = words_for_bits(bit_length(a));
  const std::size_t nb = words_for_bits(bit_length(b));
  if (na == 0 || nb == 0) return {};
  const std::size_t n = std::max(na, nb);
  if (std::min(na, nb) <= detail::kKaratsubaCutoff || 4 * std::min(na, nb) < n) {
    Words out(na + nb, 0);
    detail::clmul_schoolbook(a.data(), na, b.data(), nb, out.data());
    return out;
  }
  Words pa(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(na));
  Words pb(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(nb));
  pa.resize(n, 0);
  pb.resize(n, 0);
  Words out(2 * n, 0);
  detail::karatsuba(pa.data(), pb.data(), n, out.data());
  out.resize(na + nb);
  return out;
}

// a^2, which over GF(2) interleaves zero bits between the coefficients.
inline Words square(std::span<const std::uint64_t> a) {
  const auto& table = detail::spread_table();
  Words out(2 * a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    for (unsigned byte = 0; byte < 4; ++byte) {
      lo |= static_cast<std::uint64_t>(table[(a[i] >> (8 * byte)) & 0xffU]) << (16 * byte);
      hi |= static_cast<std::uint64_t>(table[(a[i] >> (8 * byte + 32)) & 0xffU]) << (16 * byte);
    }
    out[2 * i] = lo;
    out[2 * i + 1] = hi;
  }
  return out;
}

// a mod b for dense b != 0.
inline Words mod(Words a, std::span<const std::uint64_t> b) {
  const std::size_t db = bit_length(b);
  if (db == 0) throw DomainError("polynomial division by zero");
  for (std::size_t da = bit_length(a); da >= db; da = bit_length(a)) xor_shifted(a, b, da - db);
  trim_to_bits(a, db - 1);
  return a;
}

inline Words gcd(Words a, Words b) {
  while (bit_length(b) != 0) {
    a = mod(std::move(a), b);
    std::swap(a, b);
  }
  trim_to_bits(a, bit_length(a));
  return a;
}

// x^degree + sum of x^e over `terms`, every e < degree. Terms are kept in
// descending order and always include the constant term for irreducible
// moduli of degree > 1.
struct ReductionPolynomial {
  std::size_t degree = 0;
  std::vector<std::size_t> terms;

  Words dense() const {
    Words out(words_for_bits(degree + 1), 0);
    out[degree / 64] |= std::uint64_t{1} << (degree % 64);
    for (std::size_t e : terms) out[e / 64] ^= std::uint64_t{1} << (e % 64);
    return out;
  }

  // Canonical identifier: exponents in descending order, e.g. "3,1,0".
  std::string id() const {
    std::string out = std::to_string(degree);
    for (std::size_t e : terms) out += "," + std::to_string(e);
    return out;
  }

  static ReductionPolynomial from_id(const std::string& id) {
    ReductionPolynomial p;
    std::vector<std::size_t> exps;
    std::size_t cur = 0;
    bool have = false;
    for (char c : id) {
      if (c == ',') {
        if (!have) throw ParseError("bad polynomial identifier");
        exps.push_back(cur);
        cur = 0;
        have = false;
      } else if (c >= '0' && c <= '9') {
        cur = cur * 10 + static_cast<std::size_t>(c - '0');
        have = true;
      } else {
        throw ParseError("bad polynomial identifier");
      }
    }
    if (!have) throw ParseError("bad polynomial identifier");
    exps.push_back(cur);
    if (!std::is_sorted(exps.rbegin(), exps.rend()) ||
        std::adjacent_find(exps.begin(), exps.end()) != exps.end()) {
      throw ParseError("polynomial exponents must be strictly descending");
    }
    p.degree = exps.front();
    p.terms.assign(exps.begin() + 1, exps.end());
    return p;
  }

  friend bool operator==(const ReductionPolynomial&, const ReductionPolynomial&) = default;
};

// p mod f for the sparse modulus f; result has exactly words_for_bits(degree) words.
inline void reduce(Words& p, const ReductionPolynomial& f) {
  const std::size_t deg = f.degree;
  for (std::size_t top = bit_length(p); top > deg; top = bit_length(p)) {
    Words hi = shifted_right(p, deg);
    trim_to_bits(p, deg);
    for (std::size_t e : f.terms) xor_shifted(p, hi, e);
  }
  trim_to_bits(p, deg);
}

namespace detail {

inline std::vector<std::size_t> prime_factors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

// Rabin's test: f of degree n is irreducible iff x^(2^n) = x mod f and
// gcd(x^(2^(n/q)) - x, f) = 1 for every prime q dividing n.
inline bool is_irreducible(const ReductionPolynomial& f) {
  const std::size_t n = f.degree;
  if (n == 0) return false;
  if (n == 1) return true;
  if (f.terms.empty() || f.terms.back() != 0) return false;
  const auto primes = detail::prime_factors(n);
  std::map<std::size_t, Words> checkpoints;
  for (std::size_t q : primes) checkpoints[n / q] = {};
  Words h{2};
  for (std::size_t i = 1; i <= n; ++i) {
    h = square(h);
    reduce(h, f);
    if (auto it = checkpoints.find(i); it != checkpoints.end()) it->second = h;
  }
  Words x(words_for_bits(n), 0);
  x[0] = 2;
  if (h != x) return false;
  const Words dense = f.dense();
  for (auto& [step, value] : checkpoints) {
    Words g = value;
    g.resize(std::max<std::size_t>(g.size(), 1), 0);
    g[0] ^= 2;
    const Words d = gcd(dense, g);
    if (!(d.size() == 1 && d[0] == 1)) return false;
  }
  return true;
}

// Deterministic choice: the irreducible trinomial x^n + x^k + 1 with the
// smallest k, else the pentanomial x^n + x^a + x^b + x^c + 1 with the
// lexicographically smallest (a, b, c).
inline ReductionPolynomial find_irreducible(std::size_t degree) {
  if (degree == 0) throw DomainError("field degree must be positive");
  if (degree == 1) return {1, {0}};
  // Swan: no trinomial of degree divisible by 8 is irreducible.
  if (degree % 8 != 0) {
    for (std::size_t k = 1; k < degree; ++k) {
      ReductionPolynomial f{degree, {k, 0}};
      if (is_irreducible(f)) return f;
    }
  }
  for (std::size_t a = 3; a < degree; ++a) {
    for (std::size_t b = 2; b < a; ++b) {
      for (std::size_t c = 1; c < b; ++c) {
        ReductionPolynomial f{degree, {a, b, c, 0}};
        if (is_irreducible(f)) return f;
      }
    }
  }
  throw UnsupportedError("no irreducible trinomial or pentanomial of degree " + std::to_string(degree));
}

// Degrees above this are only available from the pinned large-degree table.
inline constexpr std::size_t kMaxSearchDegree = 4096;

// Pinned moduli. The small entries are what find_irreducible returns; the large
// entries are prime-degree trinomials whose irreducibility is checked by the
// test suite with the Rabin test above.
inline const std::vector<ReductionPolynomial>& pinned_moduli() {
  static const std::vector<ReductionPolynomial> table = {
      {3, {1, 0}},
      {4, {1, 0}},
      {8, {4, 3, 1, 0}},
      {16, {5, 3, 1, 0}},
      {32, {7, 3, 2, 0}},
      {64, {4, 3, 1, 0}},
      {128, {7, 2, 1, 0}},
      {256, {10, 5, 2, 0}},
      {2281, {715, 0}},
      {3217, {67, 0}},
      {4423, {271, 0}},
      {9689, {84, 0}},
      {19937, {881, 0}},
      {23209, {1530, 0}},
      {44497, {8575, 0}},
      {110503, {25230, 0}},
      {132049, {7000, 0}},
  };
  return table;
}

// The modulus used for GF(2^degree), computed once per degree per process.
inline const ReductionPolynomial& reduction_polynomial(std::size_t degree) {
  static std::mutex mu;
  static std::map<std::size_t, ReductionPolynomial> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(degree); it != cache.end()) return it->second;
  for (const auto& p : pinned_moduli()) {
    if (p.degree == degree) return cache.emplace(degree, p).first->second;
  }
  if (degree > kMaxSearchDegree) {
    throw UnsupportedError("GF(2^" + std::to_string(degree) + ") is above the searchable range and not pinned");
  }
  return cache.emplace(degree, find_irreducible(degree)).first->second;
}

// True when p is the modulus reduction_polynomial(p.degree) would return.
inline bool is_canonical_modulus(const ReductionPolynomial& p) {
  if (p.degree == 0) return false;
  if (p.degree > kMaxSearchDegree) {
    const auto& table = pinned_moduli();
    return std::find(table.begin(), table.end(), p) != table.end();
  }
  return reduction_polynomial(p.degree) == p;
}

// Smallest supported field degree >= n: n itself when it can be searched,
// otherwise the next pinned large degree.
inline std::size_t supported_degree_at_least(std::size_t n) {
  if (n <= kMaxSearchDegree) return std::max<std::size_t>(n, 1);
  for (const auto& p : pinned_moduli()) {
    if (p.degree >= n) return p.degree;
  }
  throw UnsupportedError("no supported field degree >= " + std::to_string(n));
}

}  // namespace ctt::gf2
