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

#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "ctt/gf2_field.hpp"

namespace ctt {
namespace {

// Bit-by-bit schoolbook oracle: shift-and-add, reducing after every shift.
std::uint64_t oracle_mul(std::uint64_t a, std::uint64_t b, std::uint64_t f, unsigned deg) {
  std::uint64_t acc = 0;
  for (unsigned i = 0; i < deg; ++i) {
    if ((b >> i) & 1U) acc ^= a;
    a <<= 1;
    if ((a >> deg) & 1U) a ^= f;
  }
  return acc;
}

std::uint64_t dense_u64(const gf2::ReductionPolynomial& p) { return gf2::Words(p.dense())[0]; }

// Trial division by every polynomial of degree 1..deg/2.
bool oracle_irreducible(std::uint64_t f, unsigned deg) {
  for (unsigned d = 1; 2 * d <= deg; ++d) {
    for (std::uint64_t g = std::uint64_t{1} << d; g < (std::uint64_t{2} << d); ++g) {
      std::uint64_t r = f;
      for (int bit = static_cast<int>(deg); bit >= static_cast<int>(d); --bit) {
        if ((r >> bit) & 1U) r ^= g << (bit - static_cast<int>(d));
      }
      if (r == 0) return false;
    }
  }
  return true;
}

FieldElement elem(const Field& f, std::uint64_t v) { return f.element(BitString::from_uint(v, f.degree())); }

TEST(Gf2FieldTest, SmallFieldUsesStandardModulus) {
  EXPECT_EQ(Field(3).modulus().id(), "3,1,0");
  EXPECT_EQ(Field(4).modulus().id(), "4,1,0");
}

TEST(Gf2FieldTest, WorkedProductInGf8) {
  const Field f(3);
  // Written high degree first: x (x + 1) = x^2 + x.
  EXPECT_EQ(gf_mul(elem(f, 0b010), elem(f, 0b011)).bits().to_uint(), 0b110u);
  // Written low degree first the strings are x and x + x^2: x^2 + x^3 = 1 + x + x^2.
  const auto a = f.element(BitString::from_string("010"));
  const auto b = f.element(BitString::from_string("011"));
  EXPECT_EQ(gf_mul(a, b).bits().to_string(), "111");
}

TEST(Gf2FieldTest, IdentityAndAnnihilator) {
  const Field f(64);
  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const auto a = f.random(rng);
    EXPECT_EQ(gf_mul(f.one(), a), a);
    EXPECT_EQ(gf_mul(f.zero(), a), f.zero());
  }
}

TEST(Gf2FieldTest, MatchesSchoolbookOracleUpTo32Bits) {
  Rng rng(5);
  for (unsigned deg : {3u, 4u, 5u, 8u, 13u, 16u, 31u, 32u}) {
    const Field f(deg);
    const std::uint64_t poly = dense_u64(f.modulus());
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t mask = (std::uint64_t{1} << deg) - 1;
      const std::uint64_t a = rng.next_u64() & mask;
      const std::uint64_t b = rng.next_u64() & mask;
      ASSERT_EQ(gf_mul(elem(f, a), elem(f, b)).bits().to_uint(), oracle_mul(a, b, poly, deg)) << deg;
    }
  }
}

TEST(Gf2FieldTest, ExhaustiveInversesInGf256) {
  const Field f(8);
  for (std::uint64_t v = 1; v < 256; ++v) {
    const auto a = elem(f, v);
    EXPECT_TRUE(gf_mul(a, gf_inv(a)).is_one()) << v;
  }
  EXPECT_EQ(gf_inv(f.one()), f.one());
  EXPECT_THROW(gf_inv(f.zero()), NonInvertibleError);
}

TEST(Gf2FieldTest, InverseInLargeFields) {
  Rng rng(6);
  for (std::size_t deg : {127u, 256u, 1000u, 2281u}) {
    const Field f(deg);
    const auto a = f.random_nonzero(rng);
    EXPECT_TRUE(gf_mul(a, gf_inv(a)).is_one()) << deg;
  }
}

TEST(Gf2FieldTest, RingAxiomsOnSamples) {
  Rng rng(7);
  for (std::size_t deg : {8u, 61u, 128u, 700u, 3217u}) {
    const Field f(deg);
    for (int i = 0; i < 10; ++i) {
      const auto a = f.random(rng);
      const auto b = f.random(rng);
      const auto c = f.random(rng);
      EXPECT_EQ(gf_mul(a, b), gf_mul(b, a));
      EXPECT_EQ(gf_mul(gf_mul(a, b), c), gf_mul(a, gf_mul(b, c)));
      EXPECT_EQ(gf_mul(gf_add(a, b), c), gf_add(gf_mul(a, c), gf_mul(b, c)));
      EXPECT_EQ(gf_square(a), gf_mul(a, a));
    }
  }
}

TEST(Gf2FieldTest, MismatchedFieldsAreRejected) {
  EXPECT_THROW(gf_mul(Field(8).one(), Field(16).one()), DegreeMismatchError);
  EXPECT_THROW(Field(8).element(BitString(7)), LengthError);
}

TEST(Gf2PolyTest, KaratsubaMatchesSchoolbook) {
  Rng rng(8);
  for (std::size_t words : {1u, 25u, 40u, 97u, 300u}) {
    gf2::Words a(words);
    gf2::Words b(words + 3);
    for (auto& w : a) w = rng.next_u64();
    for (auto& w : b) w = rng.next_u64();
    gf2::Words expect(a.size() + b.size(), 0);
    gf2::detail::clmul_words_soft(a.data(), a.size(), b.data(), b.size(), expect.data());
    EXPECT_EQ(gf2::multiply(a, b), expect) << words;
  }
}

TEST(Gf2PolyTest, SearchAgreesWithTrialDivision) {
  for (unsigned deg = 2; deg <= 16; ++deg) {
    const auto p = gf2::find_irreducible(deg);
    EXPECT_TRUE(oracle_irreducible(dense_u64(p), deg)) << deg;
  }
  // The Rabin test on every trinomial and pentanomial of degree 10 against trial division.
  for (std::uint64_t f = (1U << 10) | 1U; f < (2U << 10); f += 2) {
    gf2::ReductionPolynomial p{10, {}};
    for (int e = 9; e >= 0; --e) {
      if ((f >> e) & 1U) p.terms.push_back(static_cast<std::size_t>(e));
    }
    ASSERT_EQ(gf2::is_irreducible(p), oracle_irreducible(f, 10)) << p.id();
  }
}

TEST(Gf2PolyTest, PinnedTableIsIrreducibleAndCanonical) {
  for (const auto& p : gf2::pinned_moduli()) {
    if (p.degree > 50000) continue;  // the two largest are checked in ItsLargestDegreesAreIrreducible
    EXPECT_TRUE(gf2::is_irreducible(p)) << p.id();
    if (p.degree <= 256) {
      EXPECT_EQ(gf2::find_irreducible(p.degree), p);
    }
  }
  EXPECT_FALSE(gf2::is_irreducible({2281, {714, 0}}));
  EXPECT_FALSE(gf2::is_irreducible({8, {4, 0}}));
}

TEST(Gf2PolyTest, ItsLargestDegreesAreIrreducible) {
  for (const auto& p : gf2::pinned_moduli()) {
    if (p.degree > 50000) {
      EXPECT_TRUE(gf2::is_irreducible(p)) << p.id();
    }
  }
}

TEST(Gf2PolyTest, SupportedDegreeLookup) {
  EXPECT_EQ(gf2::supported_degree_at_least(100), 100u);
  EXPECT_EQ(gf2::supported_degree_at_least(5000), 9689u);
  EXPECT_EQ(gf2::supported_degree_at_least(100000), 110503u);
  EXPECT_THROW(gf2::supported_degree_at_least(200000), UnsupportedError);
  EXPECT_THROW(gf2::reduction_polynomial(5000), UnsupportedError);
}

TEST(PhiTest, IdentitySeedTakesPrefix) {
  const Field f(16);
  Rng rng(9);
  const auto x = f.random(rng);
  EXPECT_EQ(phi(f.one(), x, 5), x.bits().prefix(5));
  EXPECT_THROW(phi(f.one(), x, 17), LengthError);
}

// Two-universality: for every pair x != x' the fraction of seeds (zero included)
// with a collision on the first l bits is exactly 2^-l.
TEST(PhiTest, ExhaustiveCollisionFractionIsExact) {
  for (unsigned deg = 1; deg <= 4; ++deg) {
    const Field f(deg);
    const std::uint64_t size = std::uint64_t{1} << deg;
    for (unsigned ell = 1; ell <= deg; ++ell) {
      for (std::uint64_t x = 0; x < size; ++x) {
        for (std::uint64_t y = x + 1; y < size; ++y) {
          std::uint64_t collisions = 0;
          for (std::uint64_t w = 0; w < size; ++w) {
            collisions += phi(elem(f, w), elem(f, x), ell) == phi(elem(f, w), elem(f, y), ell);
          }
          ASSERT_EQ(collisions << ell, size) << deg << " " << ell << " " << x << " " << y;
        }
      }
    }
  }
}

TEST(PhiTest, InvertRoundTripsExhaustivelyInGf16) {
  const Field f(4);
  for (std::uint64_t w = 1; w < 16; ++w) {
    for (std::uint64_t x = 0; x < 16; ++x) {
      EXPECT_EQ(phi_invert(elem(f, w), gf_mul(elem(f, w), elem(f, x))), elem(f, x));
    }
  }
  EXPECT_THROW(phi_invert(f.zero(), f.one()), NonInvertibleError);
}

TEST(PhiTest, InvertRoundTripsRandomly) {
  Rng rng(10);
  for (std::size_t deg : {16u, 200u}) {
    const Field f(deg);
    for (int i = 0; i < 50; ++i) {
      const auto w = f.random_nonzero(rng);
      const auto x = f.random(rng);
      EXPECT_EQ(phi_invert(w, gf_mul(w, x)), x);
    }
    const auto p = f.random(rng);
    EXPECT_EQ(phi_invert(f.one(), p), p);
  }
}

TEST(FieldElementTest, SerializationCarriesModulus) {
  const Field f(13);
  Rng rng(11);
  const auto a = f.random(rng);
  const std::string text = a.serialize();
  EXPECT_EQ(text.rfind("gf2^13[13,4,3,1,0]:13:", 0), 0u) << text;
  EXPECT_EQ(FieldElement::deserialize(text), a);
  EXPECT_THROW(FieldElement::deserialize("gf2^4[4,2,0]:4:01"), DomainError);
  EXPECT_THROW(FieldElement::deserialize("gf2^5[4,1,0]:4:01"), ParseError);
}

}  // namespace
}  // namespace ctt
