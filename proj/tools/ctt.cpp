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

// Command-line front end: parameter derivation, store and retrieve on files,
// Monte-Carlo experiments, the SUPPORT attack lab, rates and a self test.
// Exit status: 0 on success, 1 on usage or input errors, 2 when the self
// test observes a violated bound.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ctt/ctt.hpp"
#include "ctt/support_attack.hpp"

namespace {

using namespace ctt;
namespace fs = std::filesystem;

constexpr int kUsageError = 1;
constexpr int kViolation = 2;

std::string read_text(const std::string& path) { return KvDocument::read_file(path); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// '0'/'1' characters; whitespace and '#' comments to end of line are ignored.
BitString read_bits(const std::string& path) {
  std::string bits;
  bool comment = false;
  for (char c : read_text(path)) {
    if (c == '\n') comment = false;
    if (comment || c == '#') {
      comment = true;
    } else if (c == '0' || c == '1') {
      bits.push_back(c);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      throw ParseError("message file may only contain '0', '1' and whitespace");
    }
  }
  if (bits.empty()) throw ParseError("message file is empty");
  return BitString::from_string(bits);
}

std::string fmt(double v, int digits = 10) {
  if (std::isinf(v)) return "inf";
  std::ostringstream out;
  out << std::setprecision(digits) << v;
  return out.str();
}

// Message source: the built-in two-class distribution of width L, or a table.
struct Source {
  DiscreteDistribution dist;
  PrefixCode code;
};

Source make_source(const std::string& dist_file, std::size_t L) {
  if (!dist_file.empty()) {
    DiscreteDistribution P = distributions::load_table(dist_file);
    PrefixCode code = build_prefix_code(P);
    return {std::move(P), std::move(code)};
  }
  return {distributions::two_class(static_cast<unsigned>(L)), PrefixCode::two_class(L)};
}

struct ParamFlags {
  double epsilon = 0.05;
  double ber = 0.05;
  std::size_t ell = 0;
  std::size_t traps = 0;
  double eps0_fraction = 1.0 / 16;
  std::string dist_file;
  std::size_t L = 12;

  void add(CLI::App& app) {
    app.add_option("--epsilon", epsilon, "overall security parameter")->capture_default_str();
    app.add_option("--ber", ber, "storage bit-flip rate beta0")->capture_default_str();
    app.add_option("--ell", ell, "extracted length; 0 derives it from the message entropy")->capture_default_str();
    app.add_option("--traps", traps, "trap count r; 0 selects the smallest admissible value")->capture_default_str();
    app.add_option("--eps0-fraction", eps0_fraction, "eps0 as a fraction of epsilon")->capture_default_str();
    app.add_option("--dist-file", dist_file, "message distribution table ('outcome-id probability' lines)");
    app.add_option("--L", L, "width of the built-in two-class message distribution")->capture_default_str();
  }

  ParamInputs inputs(const Source& src) const {
    ParamInputs in{epsilon, ber, ell, src.code.ell0(), traps, eps0_fraction};
    if (in.ell == 0) {
      const auto m0 = compressed_distribution(src.dist, src.code);
      const auto e = extractable_length_detail(m0, eps0_fraction * epsilon);
      if (e.length == 0) {
        throw InfeasibleError("extractable length", "the message distribution leaves no bits at this epsilon; pass --ell");
      }
      in.ell = e.length;
    }
    return in;
  }
};

int cmd_params(const ParamFlags& f, const std::string& out) {
  const Source src = make_source(f.dist_file, f.L);
  const ProtocolParams p = derive_params(f.inputs(src));
  const std::string text = p.to_document().to_string();
  std::cout << text;
  std::cout << "# delta_c=" << fmt(correctness_bound(p)) << " security_bound=" << fmt(security_bound(p)) << "\n";
  if (!out.empty()) write_text(out, text);
  return 0;
}

int cmd_store(const ParamFlags& f, const std::string& message_file, std::uint64_t seed, const std::string& out) {
  const BitString mu = read_bits(message_file);
  const Source src = make_source(f.dist_file, f.dist_file.empty() ? mu.size() : f.L);
  if (mu.size() != src.code.message_width()) {
    throw LengthError("message has " + std::to_string(mu.size()) + " bits, the code expects " +
                      std::to_string(src.code.message_width()));
  }
  const Protocol proto(derive_params(f.inputs(src)), src.code);
  Rng rng(seed);
  const auto [bundle, secrets] = proto.store(mu, rng);
  fs::create_directories(out);
  write_text((fs::path(out) / "params.txt").string(), proto.params().to_document().to_string());
  write_text((fs::path(out) / "bundle.txt").string(), bundle.to_document().to_string());
  write_text((fs::path(out) / "secrets.txt").string(), secrets.to_document().to_string());
  std::cout << "stored " << mu.size() << " message bits in " << bundle.psi.size() << " qubits\n"
            << "local secret bits: " << secrets.accounted_bits() << "\n"
            << "usefulness: " << fmt(usefulness(secrets, static_cast<double>(mu.size()))) << "\n"
            << "wrote " << out << "/{params,bundle,secrets}.txt\n";
  return 0;
}

Adversary adversary_for(const std::string& strategy) {
  const harness::StrategyInfo info = harness::parse_strategy(strategy);
  if (info.classical) return ciphertext_flip_adversary();
  if (info.measuring) return intercept_resend_adversary(info.policy);
  return passive_adversary();
}

int cmd_retrieve(const std::string& in, const std::string& strategy, double ber, std::uint64_t seed,
                 const std::string& out) {
  const ProtocolParams p = ProtocolParams::from_document(
      KvDocument::parse_expect(read_text((fs::path(in) / "params.txt").string()), "params", 1));
  ServerBundle bundle = ServerBundle::from_document(
      KvDocument::parse_expect(read_text((fs::path(in) / "bundle.txt").string()), "bundle", 1));
  const ClientSecrets secrets = ClientSecrets::from_document(
      KvDocument::parse_expect(read_text((fs::path(in) / "secrets.txt").string()), "secrets", 1));
  const Protocol proto(p, PrefixCode::deserialize(secrets.prefix_code));
  Rng rng(seed);
  // A measuring strategy reads the register before it sits in noisy storage.
  const Adversary adv = adversary_for(strategy);
  apply_adversary(adv, bundle, rng);
  bundle.psi.apply_storage_noise(ber < 0 ? p.beta0 : ber, rng);
  const RetrievalOutcome res = proto.retrieve(bundle, secrets, rng);
  std::cout << "omega=" << (res.omega ? 1 : 0) << "\nreason=" << to_string(res.reason)
            << "\ntrap_errors=" << res.trap_errors << "\n";
  if (res.omega) {
    std::cout << "message=" << res.message->to_string() << "\n";
    if (!out.empty()) write_text(out, res.message->to_string() + "\n");
  }
  return 0;
}

void print_report(const harness::ExperimentReport& rep) {
  std::cout << rep.summary_csv();
  std::cout << "# " << rep.event << " frequency " << fmt(rep.frequency) << " in [" << fmt(rep.interval.lo) << ", "
            << fmt(rep.interval.hi) << "], bound " << rep.bound_name << "=" << fmt(rep.bound) << ": "
            << harness::to_string(rep.verdict) << "\n";
}

struct SimulateFlags {
  ParamFlags params;
  std::string config_file;
  std::string scenario = "simulate";
  double channel_ber = -1;
  std::string strategy = "passive";
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t depth = 1;
  std::size_t message_bits = 20000;
};

int simulate_recursive(const SimulateFlags& f) {
  const double eps = f.params.epsilon;
  const double fraction = f.params.eps0_fraction;
  const std::size_t traps = f.params.traps;
  const LevelParams level = [&](std::size_t ell, std::size_t ell0) {
    return derive_params(ParamInputs{eps, f.params.ber, ell, ell0, traps, fraction});
  };
  const std::size_t bits = f.message_bits;
  const Protocol top(level(extractable_length_uniform(static_cast<double>(bits), fraction * eps), bits),
                     PrefixCode::raw(bits));
  std::cout << "trial,seed,levels,total_qubits,local_secret_bits,usefulness,omega,correct,reason\n";
  std::size_t correct = 0;
  for (std::size_t i = 0; i < f.trials; ++i) {
    const std::uint64_t s = derive_seed(f.seed, i);
    Rng rng(s);
    const BitString mu = rng.random_bits(bits);
    RecursiveChain chain = recursive_store(mu, top, f.depth, level, rng);
    for (auto& lvl : chain.levels) lvl.bundle.psi.apply_storage_noise(f.channel_ber < 0 ? f.params.ber : f.channel_ber, rng);
    const std::size_t qubits = chain.total_qubits();
    const std::size_t local = chain.local_secret_bits();
    const RetrievalOutcome res = recursive_retrieve(chain, rng);
    const bool ok = res.omega && *res.message == mu;
    correct += ok;
    std::cout << i << ',' << s << ',' << chain.levels.size() << ',' << qubits << ',' << local << ','
              << fmt(usefulness(local, static_cast<double>(bits))) << ',' << res.omega << ',' << ok << ','
              << to_string(res.reason) << "\n";
  }
  std::cout << "# correct " << correct << " of " << f.trials << "\n";
  return 0;
}

int cmd_simulate(const SimulateFlags& f, const CLI::App& app) {
  if (f.depth == 0) throw DomainError("--depth must be at least 1");
  if (f.depth > 1) return simulate_recursive(f);
  harness::ExperimentConfig cfg;
  if (!f.config_file.empty()) {
    cfg = harness::ExperimentConfig::from_document(KvDocument::parse_expect(read_text(f.config_file), "config", 1));
  }
  // Flags given on the command line override the config file.
  auto given = [&](const char* name) { return f.config_file.empty() || app.count(name) > 0; };
  if (given("--scenario")) cfg.scenario = f.scenario;
  if (given("--epsilon")) cfg.inputs.epsilon = f.params.epsilon;
  if (given("--ber")) cfg.inputs.beta0 = f.params.ber;
  if (given("--traps")) cfg.inputs.trap_count = f.params.traps;
  if (given("--eps0-fraction")) cfg.inputs.eps0_fraction = f.params.eps0_fraction;
  if (given("--L")) {
    cfg.message_width = f.params.L;
    cfg.inputs.ell0 = f.params.L + 1;
  }
  if (given("--ell")) {
    cfg.inputs.ell = f.params.ell;
    if (cfg.inputs.ell == 0) {
      const Source src = make_source("", cfg.message_width);
      ParamFlags pf = f.params;
      pf.epsilon = cfg.inputs.epsilon;
      pf.eps0_fraction = cfg.inputs.eps0_fraction;
      cfg.inputs.ell = pf.inputs(src).ell;
    }
  }
  if (given("--channel-ber")) cfg.channel_ber = f.channel_ber;
  if (given("--strategy")) cfg.strategy = f.strategy;
  if (given("--trials")) cfg.trials = f.trials;
  if (given("--seed")) cfg.seed = f.seed;
  cfg.output = f.out.empty() ? harness::default_output_dir() : f.out;
  const harness::ExperimentReport rep = harness::run_experiment(cfg);
  print_report(rep);
  std::cout << "# wrote " << (fs::path(cfg.output) / cfg.scenario).string() << ".{trials.csv,summary.csv,report}\n";
  return 0;
}

std::vector<double> parse_prior(const std::string& text) {
  std::vector<double> p;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      p.push_back(std::stod(item, &used));
      if (used != item.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("--prior expects comma-separated probabilities, got '" + item + "'");
    }
  }
  return p;
}

struct AttackFlags {
  std::string scheme = "toy-bb84";
  std::string scheme_file;
  std::string prior;
  std::string dist_file;
  std::string out;
  std::size_t samples = 4096;
  std::uint64_t seed = 1;
};

int cmd_attack_support(const AttackFlags& f) {
  const support::ToyScheme scheme =
      f.scheme_file.empty() ? support::schemes::by_name(f.scheme) : support::load_scheme(f.scheme_file);
  std::vector<double> p = scheme.prior();
  if (!f.prior.empty()) p = parse_prior(f.prior);
  if (!f.dist_file.empty()) {
    const DiscreteDistribution d = distributions::load_table(f.dist_file);
    p.assign(scheme.message_count(), 0.0);
    for (const auto& [id, q] : d.entries()) {
      if (id >= p.size()) throw DomainError("distribution outcome " + std::to_string(id) + " is not a message");
      p[id] = q;
    }
  }
  const support::SupportReport rep = support::run_support(scheme, p);
  const double floor = support::advantage_floor(rep.p_star, scheme.key_count(), scheme.message_count());
  Rng rng(f.seed);
  const support::PermutationResult best = support::best_permutation(scheme, p, rng, f.samples);
  std::cout << rep.to_csv();
  std::cout << "# scheme " << scheme.name() << ": |M|=" << scheme.message_count() << " |K|=" << scheme.key_count()
            << " D=" << scheme.dimension() << "\n"
            << "# m*=" << rep.m_star << " p*=" << fmt(rep.p_star) << "\n"
            << "# Pr[WIN and acc | m=m*]=" << fmt(rep.per_message[rep.m_star].win_and_acc, 12) << "\n"
            << "# Pr[acc]=" << fmt(rep.pr_acc, 12) << " Pr[WIN | acc]=" << fmt(rep.pr_win_given_acc, 12)
            << " advantage=" << fmt(rep.advantage, 12) << "\n"
            << "# best permutation advantage=" << fmt(best.advantage, 12) << " ("
            << (best.exhaustive ? "exhaustive" : "sampled") << ", " << best.evaluated << " evaluated, coverage "
            << fmt(best.coverage, 4) << ")\n"
            << "# floor p*(1-p*)(1-|K|/|M|)=" << fmt(floor, 12) << ": "
            << (best.advantage >= floor - 1e-9 ? "met" : "not met") << "\n";
  if (!f.out.empty()) write_text(f.out, rep.to_csv());
  return 0;
}

int cmd_rates(std::vector<double> bers, double ell) {
  if (bers.empty()) {
    for (int i = 0; i <= 10; ++i) bers.push_back(0.01 * i);
  }
  const double threshold = usefulness_threshold();
  std::cout << "beta0,h,qubits_per_bit,syndrome_per_bit,recursive_qubits_per_bit,threshold";
  if (ell > 0) std::cout << ",accounting_levels,accounting_qubits_per_bit";
  std::cout << "\n";
  for (double b : bers) {
    if (!(b >= 0 && b < 0.5)) throw DomainError("--ber values must lie in [0, 1/2)");
    const AsymptoticRates r = asymptotic_rates(b);
    std::cout << fmt(b) << ',' << fmt(binary_entropy(b)) << ',' << fmt(r.n_per_ell) << ',' << fmt(r.syndrome_per_ell)
              << ',' << fmt(r.recursive_per_ell) << ',' << fmt(threshold);
    if (ell > 0) {
      if (b < threshold) {
        const RecursionAccounting acc = recursion_accounting(b, ell);
        std::cout << ',' << acc.levels.size() << ',' << fmt(acc.qubits_per_ell);
      } else {
        std::cout << ",0,inf";
      }
    }
    std::cout << "\n";
  }
  return 0;
}

// Self test: quick versions of the invariants, each compared with its bound.
class Checklist {
 public:
  void check(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    failures_ += !ok;
  }
  std::size_t failures() const { return failures_; }

 private:
  std::size_t failures_ = 0;
};

int cmd_selftest(std::size_t trials, std::uint64_t seed) {
  Checklist c;
  const std::string dir = (fs::path(harness::default_output_dir()) / "selftest").string();

  {
    bool exact = true;
    for (unsigned deg = 1; deg <= 4; ++deg) {
      const Field f(deg);
      const std::uint64_t size = std::uint64_t{1} << deg;
      auto el = [&](std::uint64_t v) { return f.element(BitString::from_uint(v, deg)); };
      for (unsigned ell = 1; ell <= deg; ++ell) {
        for (std::uint64_t x = 0; x < size; ++x) {
          for (std::uint64_t y = x + 1; y < size; ++y) {
            std::uint64_t hits = 0;
            for (std::uint64_t w = 0; w < size; ++w) hits += phi(el(w), el(x), ell) == phi(el(w), el(y), ell);
            exact = exact && (hits << ell) == size;
          }
        }
      }
    }
    c.check("hash-collisions", exact, "collision fraction is 2^-l for every pair over GF(2^v), v <= 4");
  }
  {
    const AsymptoticRates r = asymptotic_rates(0.05);
    const bool ok = std::abs(r.n_per_ell - 1.4014) <= 1e-3 && std::abs(r.syndrome_per_ell - 0.4014) <= 1e-3 &&
                    std::abs(r.recursive_per_ell - 2.3412) <= 1e-3 && std::abs(r.threshold - 0.110028) <= 1e-6;
    c.check("rates", ok,
            fmt(r.n_per_ell) + "," + fmt(r.syndrome_per_ell) + "," + fmt(r.recursive_per_ell) + " threshold " +
                fmt(r.threshold));
  }
  {
    const double hmin = min_entropy(distributions::two_class(16));
    const double h2 = renyi_entropy(distributions::two_class(16), 2);
    const double m0 = min_entropy(distributions::two_class_m0(12));
    const bool ok = std::abs(hmin - 1) < 1e-12 && std::abs(h2 - 2) <= std::ldexp(1.0, -12) &&
                    std::abs(m0 - (std::log2(4095.0) + 1)) < 1e-12;
    c.check("entropy", ok, "H_min=" + fmt(hmin) + " H_2=" + fmt(h2) + " H_min(M0)=" + fmt(m0));
  }
  {
    const ProtocolParams p = derive_params(0.05, 0.05, 8);
    const double dc = correctness_bound(p);
    const double sec = security_bound(p);
    c.check("params", dc <= p.epsilon + 1e-12 && sec <= p.epsilon + 1e-9 && check_params(p).empty(),
            "delta_c=" + fmt(dc) + " security_bound=" + fmt(sec) + " at epsilon 0.05");
  }
  {
    Rng rng(seed);
    const support::ToyScheme s = support::schemes::toy_bb84({0.4, 0.3, 0.2, 0.1});
    const auto rep = support::run_support(s, {0.4, 0.3, 0.2, 0.1});
    const auto best = support::best_permutation(s, {0.4, 0.3, 0.2, 0.1}, rng);
    const double floor = support::advantage_floor(rep.p_star, 2, 4);
    const bool ok = std::abs(rep.per_message[rep.m_star].win_and_acc - 1) <= 1e-10 && rep.pr_acc >= rep.p_star - 1e-10 &&
                    best.advantage >= floor - 1e-9;
    c.check("support-attack", ok, "advantage " + fmt(best.advantage) + " vs floor " + fmt(floor));
  }

  auto experiment = [&](const std::string& scenario, double beta0, const std::string& strategy) {
    harness::ExperimentConfig cfg;
    cfg.scenario = scenario;
    cfg.inputs.beta0 = beta0;
    cfg.strategy = strategy;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.output = dir;
    const harness::ExperimentReport rep = harness::run_experiment(cfg);
    c.check(scenario, rep.verdict == harness::Verdict::kConsistent,
            rep.event + " " + std::to_string(rep.events) + "/" + std::to_string(rep.trials.size()) + ", Wilson [" +
                fmt(rep.interval.lo, 4) + ", " + fmt(rep.interval.hi, 4) + "], " + rep.bound_name + "=" +
                fmt(rep.bound, 4));
    return rep;
  };
  {
    const auto rep = experiment("noiseless", 0.0, "passive");
    c.check("noiseless-complete", rep.events == 0, std::to_string(rep.events) + " failures");
  }
  experiment("correctness", 0.05, "passive");
  experiment("flip-ciphertext", 0.05, "flip-ciphertext");
  experiment("intercept-resend", 0.05, "intercept-resend/random-basis");
  experiment("measure-standard", 0.05, "measure-standard");
  std::cout << "reports in " << dir << "\n";
  if (c.failures()) {
    std::cout << c.failures() << " check(s) failed\n";
    return kViolation;
  }
  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ctt: tamper-evident delegated quantum storage toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kLibraryVersion));
  std::function<int()> action;

  ParamFlags pflags;
  std::string params_out;
  auto* params = app.add_subcommand("params", "derive protocol parameters");
  pflags.add(*params);
  params->add_option("--out", params_out, "write the parameter document here");
  params->callback([&] { action = [&] { return cmd_params(pflags, params_out); }; });

  ParamFlags sflags;
  std::string message_file;
  std::uint64_t store_seed = 1;
  std::string store_out = "ctt_store";
  auto* store = app.add_subcommand("store", "store a message; writes params, bundle and secrets");
  sflags.add(*store);
  store->add_option("--message-file", message_file, "message bits as '0'/'1' text")->required();
  store->add_option("--seed", store_seed, "RNG seed")->capture_default_str();
  store->add_option("--out", store_out, "output directory")->capture_default_str();
  store->callback([&] { action = [&] { return cmd_store(sflags, message_file, store_seed, store_out); }; });

  std::string retrieve_in = "ctt_store";
  std::string retrieve_strategy = "passive";
  double retrieve_ber = -1;
  std::uint64_t retrieve_seed = 1;
  std::string retrieve_out;
  auto* retrieve = app.add_subcommand("retrieve", "retrieve a stored message");
  retrieve->add_option("--in", retrieve_in, "directory written by store")->capture_default_str();
  retrieve->add_option("--strategy", retrieve_strategy, "adversary acting on the stored bundle")->capture_default_str();
  retrieve->add_option("--ber", retrieve_ber, "storage flip rate applied before retrieval; negative uses beta0")
      ->capture_default_str();
  retrieve->add_option("--seed", retrieve_seed, "RNG seed")->capture_default_str();
  retrieve->add_option("--out", retrieve_out, "write the recovered message bits here");
  retrieve->callback([&] {
    action = [&] { return cmd_retrieve(retrieve_in, retrieve_strategy, retrieve_ber, retrieve_seed, retrieve_out); };
  });

  SimulateFlags sim;
  sim.params.ell = 8;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo experiment against a bound");
  sim.params.add(*simulate);
  simulate->add_option("--config", sim.config_file, "config document; flags override it");
  simulate->add_option("--scenario", sim.scenario, "report file stem")->capture_default_str();
  simulate->add_option("--channel-ber", sim.channel_ber, "actual storage flip rate; negative uses --ber")
      ->capture_default_str();
  simulate->add_option("--strategy", sim.strategy,
                       "passive, flip-ciphertext, measure-standard or intercept-resend/<random-basis|all-standard|all-hadamard>")
      ->capture_default_str();
  simulate->add_option("--trials", sim.trials, "number of sessions")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--out", sim.out, "report directory; default from CTT_OUT_DIR");
  simulate->add_option("--depth", sim.depth, "recursion depth; above 1 stores uniform raw messages recursively")
      ->capture_default_str();
  simulate->add_option("--message-bits", sim.message_bits, "raw message length for --depth above 1")
      ->capture_default_str();
  simulate->callback([&] { action = [&] { return cmd_simulate(sim, *simulate); }; });

  AttackFlags atk;
  auto* attack = app.add_subcommand("attack-support", "SUPPORT measurement on a toy scheme");
  attack->add_option("--scheme", atk.scheme, "toy-bb84, toy-bb84-parity or partial-otp:<q>:<j>")->capture_default_str();
  attack->add_option("--scheme-file", atk.scheme_file, "scheme document");
  attack->add_option("--prior", atk.prior, "comma-separated message probabilities");
  attack->add_option("--dist-file", atk.dist_file, "message distribution table");
  attack->add_option("--samples", atk.samples, "permutations sampled above 8 messages")->capture_default_str();
  attack->add_option("--seed", atk.seed, "RNG seed for sampled permutations")->capture_default_str();
  attack->add_option("--out", atk.out, "write the CSV report here");
  attack->callback([&] { action = [&] { return cmd_attack_support(atk); }; });

  std::vector<double> rate_bers;
  double rate_ell = 0;
  auto* rates = app.add_subcommand("rates", "asymptotic qubit and key rates per message bit");
  rates->add_option("--ber", rate_bers, "beta0 values; default 0, 0.01, ..., 0.1");
  rates->add_option("--ell", rate_ell, "also account a recursion of this message length");
  rates->callback([&] { action = [&] { return cmd_rates(rate_bers, rate_ell); }; });

  std::size_t self_trials = 200;
  std::uint64_t self_seed = 1;
  auto* selftest = app.add_subcommand("selftest", "run the invariant checks; exit 2 on a violated bound");
  selftest->add_option("--trials", self_trials, "sessions per experiment")->capture_default_str();
  selftest->add_option("--seed", self_seed, "master seed")->capture_default_str();
  selftest->callback([&] { action = [&] { return cmd_selftest(self_trials, self_seed); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }
  try {
    return action();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }
}
