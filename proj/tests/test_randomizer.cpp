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

#include <cmath>
#include <functional>
#include <map>

#include "ctt/randomizer.hpp"

namespace ctt {
namespace {

DiscreteDistribution from_probs(const std::vector<double>& p) {
  std::vector<std::pair<DiscreteDistribution::Outcome, double>> e;
  for (std::size_t i = 0; i < p.size(); ++i) e.emplace_back(i, p[i]);
  return DiscreteDistribution(std::move(e));
}

std::vector<double> random_probs(Rng& rng, std::size_t n) {
  std::vector<double> p(n);
  double total = 0;
  for (auto& v : p) total += (v = std::pow(rng.next_double(), 2) + 1e-3);
  for (auto& v : p) v /= total;
  return p;
}

double average_length(const PrefixCode& code, const std::vector<double>& p) {
  double avg = 0;
  for (std::size_t i = 0; i < p.size(); ++i) avg += p[i] * static_cast<double>(code.table().at(i).size());
  return avg;
}

// Minimum expected length over all length vectors satisfying Kraft's inequality.
double optimal_length_oracle(const std::vector<double>& p) {
  const std::size_t n = p.size();
  if (n == 1) return 1;
  double best = INFINITY;
  std::vector<int> len(n);
  std::function<void(std::size_t, double, double)> rec = [&](std::size_t i, double kraft, double avg) {
    if (kraft > 1 + 1e-12) return;
    if (i == n) {
      best = std::min(best, avg);
      return;
    }
    for (int l = 1; l < static_cast<int>(n); ++l) rec(i + 1, kraft + std::ldexp(1.0, -l), avg + p[i] * l);
  };
  rec(0, 0, 0);
  return best;
}

void expect_prefix_free(const PrefixCode& code) {
  double kraft = 0;
  for (const auto& [a, wa] : code.table()) {
    kraft += std::ldexp(1.0, -static_cast<int>(wa.size()));
    for (const auto& [b, wb] : code.table()) {
      if (a == b || wb.size() < wa.size()) continue;
      EXPECT_NE(wb.prefix(wa.size()), wa) << a << " prefixes " << b;
    }
  }
  EXPECT_LE(kraft, 1 + 1e-12);
}

TEST(PrefixCodeTest, TwoEquiprobableMessages) {
  const auto code = build_prefix_code(from_probs({0.5, 0.5}));
  EXPECT_EQ(code.ell0(), 1u);
  EXPECT_EQ(code.table().at(0).to_string(), "0");
  EXPECT_EQ(code.table().at(1).to_string(), "1");
}

TEST(PrefixCodeTest, HuffmanOnTheExampleDistribution) {
  const unsigned L = 8;
  const auto code = build_prefix_code(distributions::two_class(L));
  const std::uint64_t mu0 = (1U << L) - 1;
  EXPECT_EQ(code.table().at(mu0).size(), 1u);
  EXPECT_EQ(code.ell0(), L + 1);
  // 2^L - 1 equiprobable leaves under one node: all at depth L + 1 except one at depth L.
  std::size_t short_words = 0;
  for (const auto& [id, word] : code.table()) {
    if (id == mu0) continue;
    EXPECT_NE(word.get(0), code.table().at(mu0).get(0));
    EXPECT_GE(word.size(), L);
    short_words += word.size() == L;
  }
  EXPECT_EQ(short_words, 1u);
  expect_prefix_free(code);
}

TEST(PrefixCodeTest, HuffmanIsOptimalOnSmallSupports) {
  Rng rng(20);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_probs(rng, 2 + rng.uniform_below(4));
    const auto code = build_prefix_code(from_probs(p));
    expect_prefix_free(code);
    EXPECT_NEAR(average_length(code, p), optimal_length_oracle(p), 1e-12);
  }
}

TEST(PrefixCodeTest, HuffmanWithinOneBitOfEntropy) {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = random_probs(rng, 8);
    const auto d = from_probs(p);
    const auto code = build_prefix_code(d);
    expect_prefix_free(code);
    EXPECT_LE(average_length(code, p), shannon_entropy(d) + 1);
  }
}

TEST(PrefixCodeTest, HuffmanIsDeterministicUnderTies) {
  const auto a = build_prefix_code(distributions::uniform(6));
  const auto b = build_prefix_code(distributions::uniform(6));
  EXPECT_EQ(a.serialize(), b.serialize());
  EXPECT_EQ(PrefixCode::deserialize(a.serialize()).serialize(), a.serialize());
  EXPECT_THROW(build_prefix_code(DiscreteDistribution::from_classes({{0.5, 2}})), UnsupportedError);
}

TEST(PrefixCodeTest, RejectsNonPrefixFreeTables) {
  std::map<PrefixCode::Outcome, BitString> t{{0, BitString::from_string("0")}, {1, BitString::from_string("01")}};
  EXPECT_THROW(PrefixCode::from_table(t, 1), DomainError);
}

TEST(CompressTest, FullLengthCodewordHasNoPadding) {
  const auto code = build_prefix_code(distributions::two_class(4));
  Rng rng(22);
  for (const auto& [id, word] : code.table()) {
    if (word.size() != code.ell0()) continue;
    EXPECT_EQ(compress(BitString::from_uint(id, 4), code, rng), word);
  }
}

TEST(CompressTest, ExampleCodeMu0IsOneThenUniformPadding) {
  const std::size_t L = 8;
  const auto code = PrefixCode::two_class(L);
  const BitString mu0 = BitString::from_uint(0xff, L);
  Rng rng(23);
  std::map<std::uint64_t, int> counts;
  const int draws = 256 * 200;
  for (int i = 0; i < draws; ++i) {
    const BitString m0 = compress(mu0, code, rng);
    ASSERT_EQ(m0.size(), L + 1);
    ASSERT_TRUE(m0.get(0));
    ASSERT_EQ(decompress(m0, code), mu0);
    ++counts[m0.slice(1, L).to_uint()];
  }
  ASSERT_EQ(counts.size(), 256u);
  // Chi-square against uniform over 256 cells; 255 dof, 99.9th percentile ~ 330.
  double chi2 = 0;
  for (const auto& [k, c] : counts) chi2 += (c - 200.0) * (c - 200.0) / 200.0;
  EXPECT_LT(chi2, 330.0);
}

TEST(DecompressTest, RoundTripsEveryMessageWithManyPaddings) {
  Rng rng(24);
  const auto huff = build_prefix_code(distributions::two_class(6));
  for (const auto& [id, word] : huff.table()) {
    const BitString mu = BitString::from_uint(id, 6);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(decompress(compress(mu, huff, rng), huff), mu);
  }
  const auto ex = PrefixCode::two_class(6);
  for (std::uint64_t id = 0; id < 64; ++id) {
    const BitString mu = BitString::from_uint(id, 6);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(decompress(compress(mu, ex, rng), ex), mu);
  }
}

TEST(DecompressTest, ExampleCodeHandParses) {
  const auto code = PrefixCode::two_class(4);
  EXPECT_EQ(decompress(BitString::from_string("00110"), code), BitString::from_string("0110"));
  EXPECT_EQ(decompress(BitString(5), code), BitString::from_string("0000"));
  EXPECT_EQ(decompress(BitString::from_string("10000"), code), BitString::from_string("1111"));
  EXPECT_THROW(decompress(BitString::from_string("01111"), code), ParseError);
  EXPECT_EQ(code.serialize(), "two_class:4");
}

TEST(RandomizeTest, IdentitySeedSplitsTheInput) {
  const Field f(12);
  Rng rng(25);
  const BitString m0 = rng.random_bits(12);
  const auto r = randomize(m0, f.one(), 5);
  EXPECT_EQ(r.m, m0.prefix(5));
  EXPECT_EQ(r.m_rest, m0.slice(5, 7));
  EXPECT_EQ(concat(r.m, r.m_rest), gf_mul(f.one(), f.element(m0)).bits());
  EXPECT_EQ(derandomize(r.m, r.m_rest, f.one()), m0);
  EXPECT_THROW(randomize(m0, f.zero(), 5), NonInvertibleError);
  EXPECT_THROW(derandomize(r.m, r.m_rest, f.zero()), NonInvertibleError);
}

TEST(RandomizeTest, RoundTripsAndStoresExactRemainder) {
  Rng rng(26);
  for (std::size_t deg : {9u, 64u, 300u}) {
    const Field f(deg);
    for (int i = 0; i < 30; ++i) {
      const auto w = f.random_nonzero(rng);
      const BitString m0 = rng.random_bits(deg);
      const std::size_t ell = rng.uniform_below(deg + 1);
      const auto r = randomize(m0, w, ell);
      EXPECT_EQ(r.m.size(), ell);
      EXPECT_EQ(r.m_rest.size(), deg - ell);
      EXPECT_EQ(concat(r.m, r.m_rest), gf_mul(w, f.element(m0)).bits());
      EXPECT_EQ(derandomize(r.m, r.m_rest, w), m0);
    }
  }
}

TEST(RandomizeTest, ExhaustiveBijectionOverGf16) {
  const Field f(4);
  for (std::uint64_t wv = 1; wv < 16; ++wv) {
    const auto w = f.element(BitString::from_uint(wv, 4));
    std::map<std::string, bool> images;
    for (std::uint64_t x = 0; x < 16; ++x) {
      const auto r = randomize(BitString::from_uint(x, 4), w, 2);
      images[concat(r.m, r.m_rest).to_string()] = true;
      EXPECT_EQ(derandomize(r.m, r.m_rest, w), BitString::from_uint(x, 4));
    }
    EXPECT_EQ(images.size(), 16u);
  }
}

TEST(RandomizeTest, OneBitFlipInMChangesTheMessage) {
  const Field f(32);
  Rng rng(27);
  const auto w = f.random_nonzero(rng);
  const BitString m0 = rng.random_bits(32);
  auto r = randomize(m0, w, 10);
  r.m.flip(3);
  EXPECT_NE(derandomize(r.m, r.m_rest, w), m0);
}

TEST(RandomizeTest, EmbeddedFieldPadsWithZeros) {
  const Field f(16);
  Rng rng(28);
  const auto w = f.random_nonzero(rng);
  const BitString m0 = rng.random_bits(11);
  const auto r = randomize(m0, w, 4);
  EXPECT_EQ(r.m_rest.size(), 12u);
  const BitString back = derandomize(r.m, r.m_rest, w);
  EXPECT_EQ(back.prefix(11), m0);
  EXPECT_TRUE(back.slice(11, 5).is_zero());
}

// Exact statistical distance of m from uniform, averaged over every nonzero
// seed, for M0 distributed as the compressed example message with L = 10.
TEST(RandomizeTest, ExtractedPartIsCloseToUniform) {
  const unsigned L = 10;
  const double eps0 = 1.0 / 16;
  const auto dist = distributions::two_class_m0(L);
  const std::size_t ell = extractable_length(dist, eps0);
  ASSERT_GT(ell, 0u);
  const Field f(L + 1);
  std::vector<std::pair<std::uint64_t, double>> support;
  for (const auto& [id, p] : dist.entries()) support.emplace_back(id, p);
  double total_distance = 0;
  const std::uint64_t seeds = (std::uint64_t{1} << (L + 1)) - 1;
  std::vector<double> hist(std::size_t{1} << ell);
  for (std::uint64_t wv = 1; wv <= seeds; ++wv) {
    std::fill(hist.begin(), hist.end(), 0.0);
    const auto w = f.element(BitString::from_uint(wv, L + 1));
    for (const auto& [id, p] : support) {
      hist[randomize(BitString::from_uint(id, L + 1), w, ell).m.to_uint()] += p;
    }
    double d = 0;
    for (double h : hist) d += std::fabs(h - std::ldexp(1.0, -static_cast<int>(ell)));
    total_distance += 0.5 * d;
  }
  EXPECT_LE(total_distance / static_cast<double>(seeds), eps0) << "ell=" << ell;
}

TEST(CompressedDistributionTest, ExampleCodeGivesTheKnownDistribution) {
  for (unsigned L : {3u, 8u, 12u}) {
    const auto d = compressed_distribution(distributions::two_class(L), PrefixCode::two_class(L));
    const auto ref = distributions::two_class_m0(L);
    EXPECT_DOUBLE_EQ(d.max_probability(), ref.max_probability());
    EXPECT_NEAR(renyi_entropy(d, 2), renyi_entropy(ref, 2), 1e-12);
    EXPECT_NEAR(d.support_size(), ref.support_size(), 1e-9);
  }
}

TEST(CompressedDistributionTest, HuffmanPaddingKeepsTotalMass) {
  const DiscreteDistribution P({{0, 0.5}, {1, 0.25}, {2, 0.125}, {3, 0.125}});
  const auto code = build_prefix_code(P);
  const auto d = compressed_distribution(P, code);
  EXPECT_EQ(code.ell0(), 3u);
  // Codeword lengths 1, 2, 3, 3: every 3-bit string carries 1/8.
  EXPECT_DOUBLE_EQ(d.max_probability(), 0.125);
  EXPECT_NEAR(d.support_size(), 8, 1e-12);
}

}  // namespace
}  // namespace ctt
