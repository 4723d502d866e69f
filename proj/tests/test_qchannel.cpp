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
#include <map>
#include <type_traits>

#include "ctt/qchannel.hpp"

namespace ctt {
namespace {

// Three binomial standard deviations for a proportion p over n trials.
double three_sigma(double p, double n) { return 3 * std::sqrt(p * (1 - p) / n); }

TEST(TrapLayoutTest, WeightAndPartition) {
  Rng rng(50);
  const auto layout = TrapLayout::random(20, 7, rng);
  EXPECT_EQ(layout.size(), 27u);
  EXPECT_EQ(layout.r(), 7u);
  EXPECT_EQ(layout.bits().weight(), 7u);
  EXPECT_EQ(layout.n(), 20u);
  const BitString full = rng.random_bits(27);
  const BitString v = layout.gather_traps(full);
  const BitString x = layout.gather_payload(full);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(v.get(i), full.get(layout.traps()[i]));
  for (std::size_t i = 0; i < 20; ++i) EXPECT_EQ(x.get(i), full.get(layout.payload()[i]));
  // ceil(log2 C(27, 7)) = ceil(log2 888030) = 20.
  EXPECT_EQ(layout.encoded_bits(), 20u);
}

TEST(TrapLayoutTest, SubsetsAreUniform) {
  // All C(5, 2) = 10 subsets should appear with frequency 1/10.
  Rng rng(51);
  std::map<std::string, int> counts;
  const int trials = 50000;
  for (int i = 0; i < trials; ++i) ++counts[TrapLayout::random(3, 2, rng).bits().to_string()];
  ASSERT_EQ(counts.size(), 10u);
  for (const auto& [k, c] : counts) EXPECT_NEAR(c / double(trials), 0.1, three_sigma(0.1, trials)) << k;
}

TEST(QubitRegisterTest, SameBasisNoiselessMeasurementReturnsXi) {
  Rng rng(52);
  const auto layout = TrapLayout::random(100, 30, rng);
  const BitString xi = rng.random_bits(130);
  auto reg = QubitRegister::prepare(xi, layout, 30);
  EXPECT_EQ(reg.measure(layout.bits(), rng), xi);
  EXPECT_THROW(QubitRegister::prepare(xi, layout, 29), DomainError);
}

TEST(QubitRegisterTest, AllStandardWhenNoTraps) {
  Rng rng(53);
  const BitString xi = rng.random_bits(64);
  auto reg = QubitRegister::prepare(xi, BitString(64));
  EXPECT_EQ(reg.measure(BitString(64), rng), xi);
}

TEST(QubitRegisterTest, CheckpointRoundTrip) {
  Rng rng(54);
  const auto layout = TrapLayout::random(40, 10, rng);
  auto reg = QubitRegister::prepare(rng.random_bits(50), layout.bits());
  reg.apply_storage_noise(0.2, rng);
  const auto bytes = reg.to_bytes();
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 7), "CTTQREG");
  const auto back = QubitRegister::from_bytes(bytes);
  EXPECT_EQ(back.to_bytes(), bytes);
  EXPECT_EQ(QubitRegister::from_hex(reg.to_hex()), reg);
  auto bad = bytes;
  bad.back() = 0xff;
  EXPECT_THROW(QubitRegister::from_bytes(bad), ParseError);
  bad = bytes;
  bad.pop_back();
  EXPECT_THROW(QubitRegister::from_bytes(bad), ParseError);
}

TEST(QubitRegisterTest, NoiseZeroIsIdentity) {
  Rng rng(55);
  auto reg = QubitRegister::prepare(rng.random_bits(100), rng.random_bits(100));
  const auto before = reg.to_bytes();
  reg.apply_storage_noise(0, rng);
  EXPECT_EQ(reg.to_bytes(), before);
  EXPECT_THROW(reg.apply_storage_noise(0.5, rng), DomainError);
}

TEST(QubitRegisterTest, NoiseRateMatchesBinomial) {
  Rng rng(56);
  const std::size_t n = 100000;
  const BitString xi = rng.random_bits(n);
  const BitString t = rng.random_bits(n);
  auto reg = QubitRegister::prepare(xi, t);
  reg.apply_storage_noise(0.05, rng);
  const double rate = (reg.measure(t, rng) ^ xi).weight() / double(n);
  EXPECT_NEAR(rate, 0.05, three_sigma(0.05, n));
  EXPECT_LE(three_sigma(0.05, n), 0.003);
}

TEST(QubitRegisterTest, SequentialNoiseComposes) {
  Rng rng(57);
  const std::size_t n = 100000;
  const double b0 = 0.05, b1 = 0.1;
  const BitString xi = rng.random_bits(n);
  auto reg = QubitRegister::prepare(xi, BitString(n));
  reg.apply_storage_noise(b0, rng);
  reg.apply_storage_noise(b1, rng);
  const double expect = b0 * (1 - b1) + b1 * (1 - b0);
  const double rate = (reg.measure(BitString(n), rng) ^ xi).weight() / double(n);
  EXPECT_NEAR(rate, expect, three_sigma(expect, n));
}

TEST(QubitRegisterTest, CrossBasisOutcomeIsUniform) {
  Rng rng(58);
  const int trials = 100000;
  int ones = 0;
  for (int i = 0; i < trials; ++i) {
    auto reg = QubitRegister::prepare(BitString::from_string("0"), BitString::from_string("1"));
    ones += reg.measure(BitString::from_string("0"), rng).get(0);
  }
  EXPECT_NEAR(ones / double(trials), 0.5, 0.005);
}

TEST(QubitRegisterTest, RemeasurementRepeatsCollapsedOutcome) {
  Rng rng(59);
  const BitString xi = rng.random_bits(200);
  const BitString t = rng.random_bits(200);
  auto reg = QubitRegister::prepare(xi, t);
  const BitString bases = rng.random_bits(200);
  const BitString first = reg.measure(bases, rng);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(reg.measure(bases, rng), first);
}

TEST(InterceptResendTest, RandomBasisInducesQuarterErrorRate) {
  Rng rng(60);
  const std::size_t n = 100000;
  const BitString xi = rng.random_bits(n);
  const BitString t = rng.random_bits(n);
  auto reg = QubitRegister::prepare(xi, t);
  attack_intercept_resend(reg, BasisPolicy::kRandom, rng);
  const double rate = (reg.measure(t, rng) ^ xi).weight() / double(n);
  EXPECT_NEAR(rate, 0.25, three_sigma(0.25, n));
}

TEST(InterceptResendTest, AllStandardPolicy) {
  Rng rng(61);
  const std::size_t n = 100000;
  const BitString xi = rng.random_bits(n);
  // Standard-basis cells: untouched.
  auto std_reg = QubitRegister::prepare(xi, BitString(n));
  attack_intercept_resend(std_reg, BasisPolicy::kAllStandard, rng);
  EXPECT_EQ(std_reg.measure(BitString(n), rng), xi);
  // Hadamard cells: error 1/2.
  BitString all_h(n);
  for (std::size_t j = 0; j < n; ++j) all_h.set(j, true);
  auto h_reg = QubitRegister::prepare(xi, all_h);
  EveAccess eve(h_reg);
  intercept_resend_strategy(BasisPolicy::kAllStandard).intervene(eve, rng);
  const double rate = (h_reg.measure(all_h, rng) ^ xi).weight() / double(n);
  EXPECT_NEAR(rate, 0.5, three_sigma(0.5, n));
}

TEST(EveAccessTest, InterfaceExposesOnlyMeasureAndReplace) {
  // EveAccess cannot be built from a const register and has no accessor for records.
  static_assert(!std::is_constructible_v<EveAccess, const QubitRegister&>);
  static_assert(std::is_constructible_v<EveAccess, QubitRegister&>);
  // A strategy that wants the basis can only measure, and a wrong-basis
  // guess returns a fresh bit: over many trials it learns nothing about v.
  Rng rng(62);
  const int trials = 40000;
  int agree = 0;
  for (int i = 0; i < trials; ++i) {
    const bool value = rng.next_bit();
    auto reg = QubitRegister::prepare(BitString::from_uint(value, 1), BitString::from_string("1"));
    EveAccess eve(reg);
    agree += eve.measure(0, Basis::kStandard, rng) == value;
  }
  EXPECT_NEAR(agree / double(trials), 0.5, three_sigma(0.5, trials));
  EXPECT_EQ(parse_basis_policy("random-basis"), BasisPolicy::kRandom);
  EXPECT_THROW(parse_basis_policy("x"), ParseError);
}

}  // namespace
}  // namespace ctt
