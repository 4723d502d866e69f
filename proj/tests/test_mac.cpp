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
#include <vector>

#include "ctt/mac.hpp"

namespace ctt {
namespace {

std::vector<MacKey> all_keys(std::size_t lambda) {
  const Field f(lambda);
  std::vector<MacKey> keys;
  for (std::uint64_t a = 0; a < (1U << lambda); ++a) {
    for (std::uint64_t b = 0; b < (1U << lambda); ++b) {
      keys.push_back({f.element(BitString::from_uint(a, lambda)), f.element(BitString::from_uint(b, lambda))});
    }
  }
  return keys;
}

// max over (m, theta) and (m', theta') with m' != m of
// Pr_key[tag(m') = theta' | tag(m) = theta], over precomputed tags.
double max_forgery(const std::vector<std::vector<std::uint64_t>>& tags, std::size_t lambda, std::size_t i,
                   std::size_t j) {
  const std::size_t T = std::size_t{1} << lambda;
  std::vector<std::size_t> joint(T * T, 0);
  std::vector<std::size_t> marginal(T, 0);
  for (std::size_t k = 0; k < tags[i].size(); ++k) {
    ++joint[tags[i][k] * T + tags[j][k]];
    ++marginal[tags[i][k]];
  }
  double worst = 0;
  for (std::size_t t = 0; t < T; ++t) {
    if (marginal[t] == 0) continue;
    for (std::size_t u = 0; u < T; ++u) {
      worst = std::max(worst, static_cast<double>(joint[t * T + u]) / static_cast<double>(marginal[t]));
    }
  }
  return worst;
}

TEST(MacTest, CompletenessForRandomKeysAndMessages) {
  Rng rng(40);
  for (std::size_t lambda : {1u, 5u, 16u, 61u, 100u}) {
    for (int i = 0; i < 20; ++i) {
      const auto key = MacKey::generate(lambda, rng);
      const std::size_t len = rng.uniform_below(lambda < 20 ? (1U << std::min<std::size_t>(lambda, 10)) : 3000);
      if (!mac_accepts_length(len, lambda)) continue;
      const BitString msg = rng.random_bits(len);
      EXPECT_TRUE(mac_verify(key, msg, mac_tag(key, msg)));
    }
  }
}

TEST(MacTest, ZeroAIgnoresTheMessage) {
  const Field f(8);
  Rng rng(41);
  const MacKey key{f.zero(), f.random(rng)};
  for (int i = 0; i < 10; ++i) EXPECT_EQ(mac_tag(key, rng.random_bits(40)), key.b.bits());
}

TEST(MacTest, TagBitFlipAlwaysRejects) {
  Rng rng(42);
  const auto key = MacKey::generate(32, rng);
  const BitString msg = rng.random_bits(500);
  const BitString tag = mac_tag(key, msg);
  for (std::size_t i = 0; i < tag.size(); ++i) {
    BitString bad = tag;
    bad.flip(i);
    EXPECT_FALSE(mac_verify(key, msg, bad));
  }
  EXPECT_FALSE(mac_verify(key, msg, tag.prefix(31)));
}

TEST(MacTest, OversizeMessageRejected) {
  Rng rng(43);
  const auto key = MacKey::generate(4, rng);
  EXPECT_NO_THROW(mac_tag(key, BitString(15)));
  EXPECT_THROW(mac_tag(key, BitString(16)), LengthError);
  EXPECT_FALSE(mac_verify(key, BitString(16), BitString(4)));
}

TEST(MacTest, ExhaustiveForgeryBoundLambda4TwoBlocks) {
  const std::size_t lambda = 4;
  const auto keys = all_keys(lambda);
  // Every 8-bit message (B = 2) plus shorter and longer messages of 5 and 12 bits.
  std::vector<BitString> msgs;
  for (std::uint64_t m = 0; m < 256; ++m) msgs.push_back(BitString::from_uint(m, 8));
  for (std::uint64_t m = 0; m < 32; m += 3) msgs.push_back(BitString::from_uint(m, 5));
  for (std::uint64_t m = 0; m < 4096; m += 511) msgs.push_back(BitString::from_uint(m, 12));
  std::vector<std::vector<std::uint64_t>> tags(msgs.size());
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    for (const auto& k : keys) tags[i].push_back(mac_tag(k, msgs[i]).to_uint());
  }
  double worst = 0;
  for (std::size_t i = 0; i < msgs.size(); ++i) {
    for (std::size_t j = 0; j < msgs.size(); ++j) {
      if (i == j) continue;
      const std::size_t B = std::max(mac_block_count(msgs[i].size(), lambda), mac_block_count(msgs[j].size(), lambda));
      const double f = max_forgery(tags, lambda, i, j);
      ASSERT_LE(f, static_cast<double>(B + 1) / 16.0 + 1e-12) << i << " " << j;
      if (msgs[i].size() == 8 && msgs[j].size() == 8) worst = std::max(worst, f);
    }
  }
  EXPECT_LE(worst, 3.0 / 16.0);
  EXPECT_GT(worst, 0.0);
}

TEST(MacTest, SingleBitFlipRejectedWithBoundedProbability) {
  const std::size_t lambda = 4;
  const auto keys = all_keys(lambda);
  Rng rng(44);
  const BitString msg = rng.random_bits(8);
  for (std::size_t bit = 0; bit < 8; ++bit) {
    BitString other = msg;
    other.flip(bit);
    std::size_t accepted = 0;
    for (const auto& k : keys) accepted += mac_verify(k, other, mac_tag(k, msg));
    EXPECT_LE(static_cast<double>(accepted) / keys.size(), 3.0 / 16.0);
  }
}

TEST(MacTest, ForgeryBoundForSmallLambdaAndBlocks) {
  Rng rng(45);
  for (std::size_t lambda = 2; lambda <= 6; ++lambda) {
    const auto keys = all_keys(lambda);
    for (std::size_t B = 1; B <= 3; ++B) {
      const std::size_t len = B * lambda;
      if (!mac_accepts_length(len, lambda)) continue;
      std::vector<BitString> msgs;
      for (int i = 0; i < 24; ++i) msgs.push_back(rng.random_bits(len));
      std::vector<std::vector<std::uint64_t>> tags(msgs.size());
      for (std::size_t i = 0; i < msgs.size(); ++i) {
        for (const auto& k : keys) tags[i].push_back(mac_tag(k, msgs[i]).to_uint());
      }
      const double bound = static_cast<double>(B + 1) * std::ldexp(1.0, -static_cast<int>(lambda));
      for (std::size_t i = 0; i < msgs.size(); ++i) {
        for (std::size_t j = 0; j < msgs.size(); ++j) {
          if (msgs[i] == msgs[j]) continue;
          ASSERT_LE(max_forgery(tags, lambda, i, j), bound + 1e-12) << lambda << " " << B;
        }
      }
    }
  }
}

TEST(MacSizesTest, ReferenceSizesAndImplementedLambda) {
  const auto s = mac_sizes(std::ldexp(1.0, -32), std::size_t{1} << 20);
  EXPECT_NEAR(s.reference_key_bits, 64 + 2 * 20, 1e-9);
  EXPECT_NEAR(s.reference_tag_bits, 32 + 20, 1e-9);
  EXPECT_LE(s.forgery_bound, std::ldexp(1.0, -32));
  EXPECT_EQ(s.lambda, static_cast<std::size_t>(std::ceil(std::log2((s.blocks + 1) / std::ldexp(1.0, -32)))));
  EXPECT_EQ(s.key_bits, 2 * s.lambda);
  const auto trivial = mac_sizes(1.0, 1);
  EXPECT_EQ(trivial.lambda, 1u);
}

TEST(MacSizesTest, FormulaLambdaMeetsExhaustiveBound) {
  for (double eps : {0.9, 0.5, 0.3}) {
    for (std::size_t len : {2u, 4u, 6u}) {
      const auto s = mac_sizes(eps, len);
      if (s.lambda > 6) continue;
      const auto keys = all_keys(s.lambda);
      std::vector<BitString> msgs;
      for (std::uint64_t m = 0; m < (1U << len); ++m) msgs.push_back(BitString::from_uint(m, len));
      std::vector<std::vector<std::uint64_t>> tags(msgs.size());
      for (std::size_t i = 0; i < msgs.size(); ++i) {
        for (const auto& k : keys) tags[i].push_back(mac_tag(k, msgs[i]).to_uint());
      }
      for (std::size_t i = 0; i < msgs.size(); ++i) {
        for (std::size_t j = 0; j < msgs.size(); ++j) {
          if (i != j) {
            ASSERT_LE(max_forgery(tags, s.lambda, i, j), eps + 1e-12) << eps << " " << len;
          }
        }
      }
    }
  }
}

TEST(MacTest, OneTimeKeyRefusesReuse) {
  Rng rng(46);
  OneTimeMacKey key(MacKey::generate(16, rng));
  const BitString msg = rng.random_bits(50);
  const BitString tag = key.tag(msg);
  EXPECT_TRUE(key.verify(msg, tag));
  EXPECT_THROW(key.tag(msg), DomainError);
  EXPECT_EQ(MacKey::deserialize(key.key().serialize()).serialize(), key.key().serialize());
}

}  // namespace
}  // namespace ctt
