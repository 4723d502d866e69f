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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ctt/harness.hpp"

namespace ctt::harness {
namespace {

ExperimentConfig config(double eps, double beta0, std::string strategy, std::size_t trials, std::uint64_t seed = 1) {
  ExperimentConfig c;
  c.scenario = "test";
  c.inputs = ParamInputs{eps, beta0, 8, 13, 0, 1.0 / 16};
  c.strategy = std::move(strategy);
  c.trials = trials;
  c.seed = seed;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(HarnessTest, NoiselessRunsNeverFail) {
  const auto rep = run_correctness_experiment(config(0.05, 0.0, "passive", 100));
  EXPECT_EQ(rep.events, 0u);
  EXPECT_EQ(rep.trials.size(), 100u);
  EXPECT_EQ(rep.verdict, Verdict::kConsistent);
}

TEST(HarnessTest, NoisyFailureRateWithinDeltaC) {
  const auto rep = run_correctness_experiment(config(0.05, 0.05, "passive", 500, 2));
  EXPECT_LE(correctness_bound(rep.params), 0.05 + 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::kConsistent) << rep.summary_csv();
  EXPECT_LE(rep.interval.lo, rep.bound);
}

// Flips well above beta + nu trip the traps almost surely.
TEST(HarnessTest, ExcessNoiseMakesFailuresDominate) {
  auto cfg = config(0.05, 0.05, "passive", 100, 3);
  const auto p = derive_params(cfg.inputs);
  cfg.channel_ber = 0.49;
  ASSERT_GT(cfg.channel_ber, p.beta + p.nu);
  const auto rep = run_correctness_experiment(cfg);
  EXPECT_GT(rep.frequency, 0.95);
  EXPECT_EQ(rep.verdict, Verdict::kViolated);
  EXPECT_GT(stats::binomial_sf(p.r, static_cast<std::int64_t>(std::floor(p.beta * p.r)) + 1, 0.49), 0.999);
}

TEST(HarnessTest, CiphertextFlipAcceptanceBelowForgeryBound) {
  const auto rep = run_tamper_experiment(config(0.05, 0.05, "flip-ciphertext", 300, 4));
  EXPECT_EQ(rep.bound_name, "mac_forgery_bound");
  EXPECT_LE(rep.bound, rep.params.eps_mac);
  EXPECT_EQ(rep.verdict, Verdict::kConsistent);
  for (const auto& t : rep.trials) EXPECT_EQ(t.reason, AbortReason::kMac);
}

TEST(HarnessTest, InterceptResendAcceptanceBelowBinomialTail) {
  const auto rep = run_tamper_experiment(config(0.01, 0.05, "intercept-resend/random-basis", 300, 5));
  const auto& p = rep.params;
  EXPECT_EQ(p.r, 133u);
  EXPECT_NEAR(rep.bound, stats::binomial_cdf(p.r, static_cast<std::int64_t>(std::floor(p.beta * p.r)), 0.25), 1e-15);
  EXPECT_EQ(rep.verdict, Verdict::kConsistent) << rep.summary_csv();
  // Eve reads a payload bit right in her basis half the time, else by chance,
  // and the storage flips hit her reads at rate beta0.
  double learned = 0;
  for (const auto& t : rep.trials) learned += t.learned;
  EXPECT_NEAR(learned / rep.trials.size(), 0.5 * 0.95 + 0.25, 0.01);
}

TEST(HarnessTest, StandardBasisMeasurementDisturbsHalfTheTraps) {
  const auto rep = run_tamper_experiment(config(0.05, 0.05, "measure-standard", 200, 6));
  const double r = static_cast<double>(rep.params.r);
  double rate = 0;
  for (const auto& t : rep.trials) {
    EXPECT_FALSE(t.omega);
    EXPECT_EQ(t.reason, AbortReason::kTrap);
    rate += static_cast<double>(t.trap_errors) / r;
  }
  rate /= static_cast<double>(rep.trials.size());
  EXPECT_NEAR(rate, 0.5, 4 * std::sqrt(0.25 / (r * rep.trials.size())));
  EXPECT_LT(rep.bound, 1e-6);
  double learned = 0;
  for (const auto& t : rep.trials) learned += t.learned;
  EXPECT_NEAR(learned / rep.trials.size(), 0.95, 0.01);
}

TEST(HarnessTest, ReportsAreReproducible) {
  const auto dir = std::filesystem::temp_directory_path() / "ctt_harness_repro";
  std::filesystem::remove_all(dir);
  auto cfg = config(0.05, 0.05, "intercept-resend/random-basis", 20, 9);
  cfg.output = (dir / "a").string();
  const std::string a = run_experiment(cfg).write(cfg.output);
  cfg.output = (dir / "b").string();
  const std::string b = run_experiment(cfg).write(cfg.output);
  for (const char* ext : {".trials.csv", ".summary.csv", ".report"}) {
    const std::string fa = slurp((dir / "a" / (cfg.scenario + ext)).string());
    EXPECT_FALSE(fa.empty());
    EXPECT_EQ(fa, slurp((dir / "b" / (cfg.scenario + ext)).string())) << ext;
  }
  const KvDocument doc = KvDocument::parse(slurp(a));
  EXPECT_EQ(doc.get_uint("master_seed"), 9u);
  EXPECT_EQ(doc.get("library_version"), kLibraryVersion);
  EXPECT_TRUE(doc.has("bound"));
  EXPECT_TRUE(doc.has("params.r"));
  std::filesystem::remove_all(dir);
}

TEST(HarnessTest, TrialsAreOrderIndependent) {
  const auto all = run_correctness_experiment(config(0.05, 0.05, "passive", 6, 11));
  for (const auto& t : all.trials) EXPECT_EQ(t.seed, derive_seed(11, t.index));
  // Trial 5 alone, from its own seed, repeats the recorded outcome.
  const Protocol proto = experiment_protocol(all.config);
  Rng rng(derive_seed(11, 5));
  const BitString mu = rng.random_bits(12);
  auto [bundle, secrets] = proto.store(mu, rng);
  bundle.psi.apply_storage_noise(0.05, rng);
  const auto out = proto.retrieve(bundle, secrets, rng);
  EXPECT_EQ(out.trap_errors, all.trials[5].trap_errors);
  EXPECT_EQ(out.omega, all.trials[5].omega);
}

TEST(HarnessTest, ConfigRoundTripAndValidation) {
  auto cfg = config(0.01, 0.02, "all-standard", 17, 99);
  cfg.channel_ber = 0.03;
  cfg.output = "somewhere";
  const auto back = ExperimentConfig::from_document(KvDocument::parse(cfg.to_document().to_string()));
  EXPECT_EQ(back.to_document().to_string(), cfg.to_document().to_string());
  EXPECT_DOUBLE_EQ(back.noise(), 0.03);
  auto zero = cfg;
  zero.trials = 0;
  EXPECT_THROW(run_experiment(zero), DomainError);
  EXPECT_THROW(run_tamper_experiment(config(0.05, 0.05, "passive", 1)), DomainError);
  EXPECT_THROW(run_correctness_experiment(config(0.05, 0.05, "flip-ciphertext", 1)), DomainError);
  EXPECT_THROW(parse_strategy("teleport"), ParseError);
}

TEST(HarnessTest, VerdictOnlyFlagsBoundsBelowTheInterval) {
  const auto ci = stats::wilson_interval(5, 100);
  EXPECT_EQ(upper_bound_verdict(ci.lo - 1e-6, ci), Verdict::kViolated);
  EXPECT_EQ(upper_bound_verdict(ci.lo, ci), Verdict::kConsistent);
  EXPECT_EQ(upper_bound_verdict(0.9, ci), Verdict::kConsistent);
  EXPECT_EQ(upper_bound_verdict(0.0, stats::wilson_interval(0, 100)), Verdict::kConsistent);
}

TEST(HarnessTest, OutputDirectoryFromEnvironment) {
  setenv("CTT_OUT_DIR", "/tmp/ctt_env_dir", 1);
  EXPECT_EQ(default_output_dir(), "/tmp/ctt_env_dir");
  unsetenv("CTT_OUT_DIR");
  EXPECT_EQ(default_output_dir("x"), "x");
}

}  // namespace
}  // namespace ctt::harness
