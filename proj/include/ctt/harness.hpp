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

// Monte Carlo experiments comparing protocol runs with their bounds.
// Trial i draws everything from Rng(derive_seed(master, i)), so any subset of
// trials reproduces independently of order.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ctt/error.hpp"
#include "ctt/kv_format.hpp"
#include "ctt/params.hpp"
#include "ctt/protocol.hpp"
#include "ctt/qchannel.hpp"
#include "ctt/rng.hpp"
#include "ctt/stats.hpp"
#include "ctt/version.hpp"

namespace ctt::harness {

struct ExperimentConfig {
  std::string scenario = "experiment";
  ParamInputs inputs{0.05, 0.05, 8, 13, 0, 1.0 / 16};
  double channel_ber = -1;  // storage flip rate; negative means inputs.beta0
  std::string strategy = "passive";
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::size_t message_width = 12;  // messages are two-class strings of this width
  std::string output;           // directory for report files; empty means none

  double noise() const { return channel_ber < 0 ? inputs.beta0 : channel_ber; }

  void validate() const {
    if (trials == 0) throw DomainError("trial count must be at least 1");
    if (!(noise() >= 0 && noise() < 0.5)) throw DomainError("channel flip rate must lie in [0, 1/2)");
    if (message_width == 0 || message_width > 24) throw DomainError("message width must be in [1, 24]");
  }

  KvDocument to_document() const {
    KvDocument doc("config", 1);
    doc.set("scenario", scenario);
    doc.set("epsilon", inputs.epsilon);
    doc.set("beta0", inputs.beta0);
    doc.set("ell", std::uint64_t{inputs.ell});
    doc.set("ell0", std::uint64_t{inputs.ell0});
    doc.set("trap_count", std::uint64_t{inputs.trap_count});
    doc.set("eps0_fraction", inputs.eps0_fraction);
    doc.set("channel_ber", noise());
    doc.set("strategy", strategy);
    doc.set("trials", std::uint64_t{trials});
    doc.set("seed", std::uint64_t{seed});
    doc.set("message_width", std::uint64_t{message_width});
    doc.set("output", output);
    return doc;
  }

  static ExperimentConfig from_document(const KvDocument& doc) {
    if (doc.kind() != "config" || doc.version() != 1) throw ParseError("not a version 1 config document");
    ExperimentConfig c;
    c.scenario = doc.get("scenario");
    c.inputs = {doc.get_double("epsilon"), doc.get_double("beta0"), doc.get_uint("ell"), doc.get_uint("ell0"),
                doc.get_uint("trap_count"), doc.get_double("eps0_fraction")};
    c.channel_ber = doc.get_double("channel_ber");
    c.strategy = doc.get("strategy");
    c.trials = doc.get_uint("trials");
    c.seed = doc.get_uint("seed");
    c.message_width = doc.get_uint("message_width");
    c.output = doc.has("output") ? doc.get("output") : "";
    return c;
  }
};

enum class Verdict { kConsistent, kViolated };

inline const char* to_string(Verdict v) { return v == Verdict::kConsistent ? "consistent" : "violated"; }

// Upper-bound claims: violated only when the bound lies below the whole interval.
inline Verdict upper_bound_verdict(double bound, const stats::Interval& ci) {
  return bound < ci.lo ? Verdict::kViolated : Verdict::kConsistent;
}

struct TrialRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool omega = false;
  bool correct = false;  // omega and the recovered message equals the stored one
  AbortReason reason = AbortReason::kNone;
  std::size_t trap_errors = 0;
  double learned = std::numeric_limits<double>::quiet_NaN();  // payload bits Eve guessed right
};

struct ExperimentReport {
  ExperimentConfig config;
  ProtocolParams params;
  std::string event;  // "failure" or "acceptance"
  std::vector<TrialRecord> trials;
  std::size_t events = 0;
  double frequency = 0;
  stats::Interval interval;
  std::string bound_name;
  double bound = 0;
  Verdict verdict = Verdict::kConsistent;
  double learned_given_accept = std::numeric_limits<double>::quiet_NaN();

  static std::string number(double v) { return std::isnan(v) ? "nan" : KvDocument::format_double(v); }

  std::string trials_csv() const {
    std::ostringstream out;
    out << "trial,seed,omega,correct,reason,trap_errors,learned\n";
    for (const auto& t : trials) {
      out << t.index << ',' << t.seed << ',' << t.omega << ',' << t.correct << ',' << to_string(t.reason) << ','
          << t.trap_errors << ',' << number(t.learned) << '\n';
    }
    return out.str();
  }

  std::string summary_csv() const {
    std::ostringstream out;
    out << "scenario,strategy,master_seed,trials,event,events,frequency,wilson_lo,wilson_hi,bound_name,bound,verdict,"
           "learned_given_accept,library_version\n";
    out << config.scenario << ',' << config.strategy << ',' << config.seed << ',' << trials.size() << ',' << event << ','
        << events << ',' << number(frequency) << ',' << number(interval.lo) << ',' << number(interval.hi) << ','
        << bound_name << ',' << number(bound) << ',' << to_string(verdict) << ',' << number(learned_given_accept) << ','
        << kLibraryVersion << '\n';
    return out.str();
  }

  KvDocument summary() const {
    KvDocument doc("report", 1);
    doc.set("scenario", config.scenario);
    doc.set("strategy", config.strategy);
    doc.set("master_seed", std::uint64_t{config.seed});
    doc.set("trials", std::uint64_t{trials.size()});
    doc.set("event", event);
    doc.set("events", std::uint64_t{events});
    doc.set("frequency", frequency);
    doc.set("wilson_lo", interval.lo);
    doc.set("wilson_hi", interval.hi);
    doc.set("bound_name", bound_name);
    doc.set("bound", bound);
    doc.set("verdict", std::string(to_string(verdict)));
    doc.set("learned_given_accept", number(learned_given_accept));
    doc.set("library_version", kLibraryVersion);
    doc.set("format_versions", kFormatVersions);
    const KvDocument pdoc = params.to_document();
    for (const auto& [k, v] : pdoc.entries()) doc.set("params." + k, v);
    return doc;
  }

  // Writes <dir>/<scenario>.trials.csv, .summary.csv and .report; returns the report path.
  std::string write(const std::string& dir) const {
    std::filesystem::create_directories(dir);
    const std::string base = (std::filesystem::path(dir) / config.scenario).string();
    auto put = [](const std::string& path, const std::string& text) {
      std::ofstream out(path, std::ios::binary);
      if (!out) throw Error("cannot write " + path);
      out << text;
    };
    put(base + ".trials.csv", trials_csv());
    put(base + ".summary.csv", summary_csv());
    put(base + ".report", summary().to_string());
    return base + ".report";
  }
};

// Default output directory from CTT_OUT_DIR, else the given fallback.
inline std::string default_output_dir(const std::string& fallback = "ctt_out") {
  const char* env = std::getenv("CTT_OUT_DIR");
  return env && *env ? std::string(env) : fallback;
}

namespace detail {

inline void finish(ExperimentReport& rep) {
  rep.frequency = static_cast<double>(rep.events) / static_cast<double>(rep.trials.size());
  rep.interval = stats::wilson_interval(rep.events, rep.trials.size());
  rep.verdict = upper_bound_verdict(rep.bound, rep.interval);
  double learned = 0;
  std::size_t n = 0;
  for (const auto& t : rep.trials) {
    if (t.omega && !std::isnan(t.learned)) {
      learned += t.learned;
      ++n;
    }
  }
  if (n) rep.learned_given_accept = learned / static_cast<double>(n);
  if (!rep.config.output.empty()) rep.write(rep.config.output);
}

// Payload values from a checkpoint taken before the attack; the harness is
// the simulator, so it may look.
inline BitString payload_truth(const QubitRegister& reg, const TrapLayout& layout) {
  const auto bytes = reg.to_bytes();
  const std::size_t header = QubitRegister::kMagic.size() + 9;
  BitString x(layout.n());
  for (std::size_t i = 0; i < layout.n(); ++i) x.set(i, (bytes[header + layout.payload()[i]] >> 1) & 1);
  return x;
}

}  // namespace detail

// Strategy names: passive, flip-ciphertext, intercept-resend/<policy> or
// <policy> with policy random-basis, all-standard or all-hadamard, and
// measure-standard (every cell in the standard basis).
struct StrategyInfo {
  bool measuring = false;
  bool classical = false;
  BasisPolicy policy = BasisPolicy::kRandom;
};

inline StrategyInfo parse_strategy(const std::string& name) {
  if (name == "passive") return {};
  if (name == "flip-ciphertext") return {false, true, BasisPolicy::kRandom};
  if (name == "measure-standard") return {true, false, BasisPolicy::kAllStandard};
  const std::string prefix = "intercept-resend/";
  const std::string policy = name.rfind(prefix, 0) == 0 ? name.substr(prefix.size()) : name;
  return {true, false, parse_basis_policy(policy)};
}

// Pr[omega = 1] ceiling for a strategy: forgery bound for classical edits,
// Pr[Bin(r, q) <= beta r] for measuring ones, where q is the chance a trap flips.
inline double acceptance_bound(const StrategyInfo& s, const ProtocolParams& p) {
  if (s.classical) return mac_sizes(p.eps_mac, p.mac_message_bits()).forgery_bound;
  if (!s.measuring) return 1;
  const auto limit = static_cast<std::int64_t>(std::floor(p.beta * static_cast<double>(p.r)));
  switch (s.policy) {
    case BasisPolicy::kRandom:
      return stats::binomial_cdf(p.r, limit, 0.25);
    case BasisPolicy::kAllStandard:
      return stats::binomial_cdf(p.r, limit, 0.5);
    case BasisPolicy::kAllHadamard:
      return 1;  // traps are read in their own basis
  }
  return 1;
}

inline Protocol experiment_protocol(const ExperimentConfig& cfg) {
  cfg.validate();
  return Protocol(derive_params(cfg.inputs), PrefixCode::two_class(cfg.message_width));
}

// store, then flips at the channel rate, then retrieve; counts runs without
// omega = 1 and a correct message.
inline ExperimentReport run_correctness_experiment(const ExperimentConfig& cfg) {
  if (cfg.strategy != "passive") throw DomainError("the correctness experiment needs the passive strategy");
  const Protocol proto = experiment_protocol(cfg);
  ExperimentReport rep;
  rep.config = cfg;
  rep.params = proto.params();
  rep.event = "failure";
  const bool bsc = rep.params.code_criterion == CodeCriterion::kBsc;
  rep.bound_name = bsc ? "delta_c+code_failure" : "delta_c";
  rep.bound = correctness_bound(rep.params) + (bsc ? rep.params.code_failure : 0);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    TrialRecord t;
    t.index = i;
    t.seed = derive_seed(cfg.seed, i);
    Rng rng(t.seed);
    const BitString mu = rng.random_bits(cfg.message_width);
    auto [bundle, secrets] = proto.store(mu, rng);
    bundle.psi.apply_storage_noise(cfg.noise(), rng);
    const RetrievalOutcome out = proto.retrieve(bundle, secrets, rng);
    t.omega = out.omega;
    t.correct = out.omega && *out.message == mu;
    t.reason = out.reason;
    t.trap_errors = out.trap_errors;
    if (!t.correct) ++rep.events;
    rep.trials.push_back(t);
  }
  detail::finish(rep);
  return rep;
}

// store, channel noise, the attack, then retrieve; counts acceptances.
inline ExperimentReport run_tamper_experiment(const ExperimentConfig& cfg) {
  const StrategyInfo strategy = parse_strategy(cfg.strategy);
  if (!strategy.measuring && !strategy.classical) throw DomainError("the tamper experiment needs an active strategy");
  const Protocol proto = experiment_protocol(cfg);
  ExperimentReport rep;
  rep.config = cfg;
  rep.params = proto.params();
  rep.event = "acceptance";
  rep.bound_name = strategy.classical ? "mac_forgery_bound" : "binomial_trap_tail";
  rep.bound = acceptance_bound(strategy, rep.params);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    TrialRecord t;
    t.index = i;
    t.seed = derive_seed(cfg.seed, i);
    Rng rng(t.seed);
    const BitString mu = rng.random_bits(cfg.message_width);
    auto [bundle, secrets] = proto.store(mu, rng);
    const BitString truth = strategy.measuring ? detail::payload_truth(bundle.psi, secrets.traps) : BitString();
    bundle.psi.apply_storage_noise(cfg.noise(), rng);
    if (strategy.classical) {
      apply_adversary(ciphertext_flip_adversary(), bundle, rng);
    } else {
      // Intercept-resend that remembers what it read.
      auto seen = std::make_shared<BitString>(bundle.psi.size());
      const BasisPolicy policy = strategy.policy;
      const Adversary recorder{cfg.strategy, [seen, policy](TranscriptView&, EveAccess& eve, Rng& r) {
                                 for (std::size_t j = 0; j < eve.size(); ++j) {
                                   Basis b = Basis::kStandard;
                                   if (policy == BasisPolicy::kAllHadamard || (policy == BasisPolicy::kRandom && r.next_bit())) {
                                     b = Basis::kHadamard;
                                   }
                                   const bool value = eve.measure(j, b, r);
                                   eve.replace(j, b, value);
                                   seen->set(j, value);
                                 }
                               }};
      apply_adversary(recorder, bundle, rng);
      const std::size_t wrong = (secrets.traps.gather_payload(*seen) ^ truth).weight();
      t.learned = truth.size() ? 1 - static_cast<double>(wrong) / static_cast<double>(truth.size()) : 0;
    }
    const RetrievalOutcome out = proto.retrieve(bundle, secrets, rng);
    t.omega = out.omega;
    t.correct = out.omega && *out.message == mu;
    t.reason = out.reason;
    t.trap_errors = out.trap_errors;
    if (t.omega) ++rep.events;
    rep.trials.push_back(t);
  }
  detail::finish(rep);
  return rep;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  return cfg.strategy == "passive" ? run_correctness_experiment(cfg) : run_tamper_experiment(cfg);
}

}  // namespace ctt::harness
