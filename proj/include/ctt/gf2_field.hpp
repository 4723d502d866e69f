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

// GF(2^nu) arithmetic and the invertible universal hash phi(w, x) = (w x)[0, l).

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "ctt/bitstring.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_poly.hpp"
#include "ctt/rng.hpp"

namespace ctt {

class FieldElement;

// A binary extension field, identified by its reduction polynomial. Cheap to copy.
class Field {
 public:
  explicit Field(std::size_t degree)
      : modulus_(std::make_shared<const gf2::ReductionPolynomial>(gf2::reduction_polynomial(degree))) {}

  // Uses the given modulus; it must be irreducible.
  explicit Field(gf2::ReductionPolynomial modulus) {
    if (!gf2::is_canonical_modulus(modulus) && !gf2::is_irreducible(modulus)) {
      throw DomainError("reduction polynomial is not irreducible");
    }
    modulus_ = std::make_shared<const gf2::ReductionPolynomial>(std::move(modulus));
  }

  std::size_t degree() const { return modulus_->degree; }
  const gf2::ReductionPolynomial& modulus() const { return *modulus_; }
  std::string id() const { return "gf2^" + std::to_string(degree()) + "[" + modulus_->id() + "]"; }

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement element(BitString bits) const;
  FieldElement random(Rng& rng) const;
  FieldElement random_nonzero(Rng& rng) const;

  friend bool operator==(const Field& a, const Field& b) {
    return a.modulus_ == b.modulus_ || *a.modulus_ == *b.modulus_;
  }

 private:
  std::shared_ptr<const gf2::ReductionPolynomial> modulus_;
};

class FieldElement {
 public:
  const Field& field() const { return field_; }
  const BitString& bits() const { return bits_; }
  std::size_t degree() const { return field_.degree(); }
  bool is_zero() const { return bits_.is_zero(); }
  bool is_one() const { return bits_.size() > 0 && bits_.get(0) && bits_.weight() == 1; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.field_ == b.field_ && a.bits_ == b.bits_;
  }

  // "gf2^<nu>[<exponents>]:<len>:<hex>".
  std::string serialize() const { return field_.id() + ":" + bits_.serialize(); }

  static FieldElement deserialize(std::string_view text) {
    if (text.substr(0, 4) != "gf2^") throw ParseError("field element must start with gf2^");
    const auto open = text.find('[');
    const auto close = text.find(']');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open ||
        close + 1 >= text.size() || text[close + 1] != ':') {
      throw ParseError("malformed field element");
    }
    auto modulus = gf2::ReductionPolynomial::from_id(std::string(text.substr(open + 1, close - open - 1)));
    if (std::to_string(modulus.degree) != text.substr(4, open - 4)) throw ParseError("field degree mismatch");
    return Field(std::move(modulus)).element(BitString::deserialize(text.substr(close + 2)));
  }

 private:
  friend class Field;
  FieldElement(Field field, BitString bits) : field_(std::move(field)), bits_(std::move(bits)) {}

  Field field_;
  BitString bits_;
};

inline FieldElement Field::zero() const { return FieldElement(*this, BitString(degree())); }

inline FieldElement Field::one() const {
  BitString b(degree());
  b.set(0, true);
  return FieldElement(*this, std::move(b));
}

inline FieldElement Field::element(BitString bits) const {
  if (bits.size() != degree()) throw LengthError("field element has the wrong number of bits");
  return FieldElement(*this, std::move(bits));
}

inline FieldElement Field::random(Rng& rng) const { return FieldElement(*this, rng.random_bits(degree())); }

inline FieldElement Field::random_nonzero(Rng& rng) const {
  for (;;) {
    BitString b = rng.random_bits(degree());
    if (!b.is_zero()) return FieldElement(*this, std::move(b));
  }
}

namespace detail {

inline void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (!(a.field() == b.field())) {
    throw DegreeMismatchError("field elements from " + a.field().id() + " and " + b.field().id());
  }
}

}  // namespace detail

inline FieldElement gf_add(const FieldElement& a, const FieldElement& b) {
  detail::require_same_field(a, b);
  return a.field().element(a.bits() ^ b.bits());
}

inline FieldElement gf_mul(const FieldElement& a, const FieldElement& b) {
  detail::require_same_field(a, b);
  gf2::Words p = gf2::multiply(a.bits().words(), b.bits().words());
  gf2::reduce(p, a.field().modulus());
  return a.field().element(BitString::from_words(p, a.degree()));
}

inline FieldElement gf_square(const FieldElement& a) {
  gf2::Words p = gf2::square(a.bits().words());
  gf2::reduce(p, a.field().modulus());
  return a.field().element(BitString::from_words(p, a.degree()));
}

// Extended Euclid over GF(2)[x]: maintains r_i = s_i a mod f.
inline FieldElement gf_inv(const FieldElement& a) {
  if (a.is_zero()) throw NonInvertibleError("zero has no multiplicative inverse");
  const auto& f = a.field().modulus();
  gf2::Words r0 = f.dense();
  gf2::Words r1(a.bits().words().begin(), a.bits().words().end());
  gf2::Words s0;
  gf2::Words s1{1};
  std::size_t d0 = gf2::bit_length(r0);
  std::size_t d1 = gf2::bit_length(r1);
  while (d1 > 1) {
    // One elimination step: r0 -= x^k r1, s0 -= x^k s1, keeping deg r0 descending.
    while (d0 >= d1) {
      const std::size_t k = d0 - d1;
      gf2::xor_shifted(r0, r1, k);
      gf2::xor_shifted(s0, s1, k);
      d0 = gf2::bit_length(r0);
    }
    std::swap(r0, r1);
    std::swap(s0, s1);
    std::swap(d0, d1);
  }
  gf2::reduce(s1, f);
  return a.field().element(BitString::from_words(s1, a.degree()));
}

// First l bits of w x.
inline BitString phi(const FieldElement& w, const FieldElement& x, std::size_t ell) {
  if (ell > w.degree()) throw LengthError("phi output length exceeds the field degree");
  return gf_mul(w, x).bits().prefix(ell);
}

// The x with w x == p.
inline FieldElement phi_invert(const FieldElement& w, const FieldElement& p) {
  if (w.is_zero()) throw NonInvertibleError("phi seed must be nonzero to invert");
  return gf_mul(gf_inv(w), p);
}

}  // namespace ctt
