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

// Finite-size parameter recipe, the correctness and security bounds it
// targets, and the asymptotic rate formulas.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ctt/code_registry.hpp"
#include "ctt/entropy.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_poly.hpp"
#include "ctt/kv_format.hpp"
#include "ctt/mac.hpp"

namespace ctt {

// A parameter set violates a hard constraint; constraint() names it.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string constraint, const std::string& detail)
      : Error("infeasible parameters: " + constraint + " (" + detail + ")"), constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

struct ParamInputs {
  double epsilon = 0.01;
  double beta0 = 0.05;
  std::size_t ell = 0;         // extracted message length
  std::size_t ell0 = 0;        // compressed length; 0 means ell
  std::size_t trap_count = 0;  // r; 0 selects the smallest admissible value
  double eps0_fraction = 1.0 / 16;  // eps0 = fraction * epsilon
};

struct ProtocolParams {
  // Security budget.
  double epsilon = 0;
  double eps0 = 0;
  double eps_mac = 0;
  double eps_qp = 0;
  double delta = 0;  // epsilon / 8 by construction; recomputed by security_bound
  // Error rates.
  double beta0 = 0;
  double beta = 0;
  double nu = 0;
  double target_ber = 0;  // rate the code is chosen for
  // Lengths.
  std::size_t r = 0;
  std::size_t n = 0;
  std::size_t kappa = 0;  // minimum code dimension
  std::size_t ell = 0;
  std::size_t ell0 = 0;
  std::size_t randomizer_degree = 0;  // field degree for w; >= ell0
  std::size_t d = 0;                  // extractor seed length = extractor field degree >= n
  std::size_t lambda = 0;             // MAC tag length
  // Code.
  std::string code;
  CodeCriterion code_criterion = CodeCriterion::kWorstCase;
  double code_failure = 0;  // BSC failure of the code at target_ber
  std::size_t fixed_point_rounds = 0;

  std::size_t mac_message_bits() const { return randomizer_degree + d + ell; }

  KvDocument to_document() const {
    KvDocument doc("params", 1);
    doc.set("epsilon", epsilon);
    doc.set("eps0", eps0);
    doc.set("eps_mac", eps_mac);
    doc.set("eps_qp", eps_qp);
    doc.set("delta", delta);
    doc.set("beta0", beta0);
    doc.set("beta", beta);
    doc.set("nu", nu);
    doc.set("target_ber", target_ber);
    doc.set("r", std::uint64_t{r});
    doc.set("n", std::uint64_t{n});
    doc.set("kappa", std::uint64_t{kappa});
    doc.set("ell", std::uint64_t{ell});
    doc.set("ell0", std::uint64_t{ell0});
    doc.set("randomizer_degree", std::uint64_t{randomizer_degree});
    doc.set("d", std::uint64_t{d});
    doc.set("lambda", std::uint64_t{lambda});
    doc.set("code", code);
    doc.set("code_criterion", std::string(code_criterion == CodeCriterion::kWorstCase ? "worst-case" : "bsc"));
    doc.set("code_failure", code_failure);
    doc.set("fixed_point_rounds", std::uint64_t{fixed_point_rounds});
    return doc;
  }

  static ProtocolParams from_document(const KvDocument& doc) {
    ProtocolParams p;
    p.epsilon = doc.get_double("epsilon");
    p.eps0 = doc.get_double("eps0");
    p.eps_mac = doc.get_double("eps_mac");
    p.eps_qp = doc.get_double("eps_qp");
    p.delta = doc.get_double("delta");
    p.beta0 = doc.get_double("beta0");
    p.beta = doc.get_double("beta");
    p.nu = doc.get_double("nu");
    p.target_ber = doc.get_double("target_ber");
    p.r = doc.get_uint("r");
    p.n = doc.get_uint("n");
    p.kappa = doc.get_uint("kappa");
    p.ell = doc.get_uint("ell");
    p.ell0 = doc.get_uint("ell0");
    p.randomizer_degree = doc.get_uint("randomizer_degree");
    p.d = doc.get_uint("d");
    p.lambda = doc.get_uint("lambda");
    p.code = doc.get("code");
    const std::string& crit = doc.get("code_criterion");
    if (crit != "worst-case" && crit != "bsc") throw ParseError("unknown code criterion " + crit);
    p.code_criterion = crit == "bsc" ? CodeCriterion::kBsc : CodeCriterion::kWorstCase;
    p.code_failure = doc.get_double("code_failure");
    p.fixed_point_rounds = doc.get_uint("fixed_point_rounds");
    return p;
  }

  bool operator==(const ProtocolParams&) const = default;
};

// ceil(4 log2(1 / eps_qp)) - 2 extra code dimensions over ell.
inline std::size_t kappa_overhead(double eps_qp) {
  return static_cast<std::size_t>(std::ceil(4 * std::log2(1 / eps_qp) - 1e-9)) - 2;
}

// Smallest integer r > (1/2 - beta0)^-2 * 4 ln(8 / eps).
inline std::size_t minimal_trap_count(double eps, double beta0) {
  const double bound = 4 * std::log(8 / eps) / ((0.5 - beta0) * (0.5 - beta0));
  return static_cast<std::size_t>(std::floor(bound)) + 1;
}

// beta0 + sqrt(ln(1/(eps - 2 eps^2)) / (2r)) + sqrt(3 ln(8/eps) / (2r)).
inline double code_target_ber(double eps, double beta0, std::size_t r) {
  const double rd = static_cast<double>(r);
  return beta0 + std::sqrt(std::log(1 / (eps - 2 * eps * eps)) / (2 * rd)) + std::sqrt(3 * std::log(8 / eps) / (2 * rd));
}

// beta with (beta - beta0)^2 = ln(1 / (eps - 2 eps^(n/r))) / (2r).
inline double accepted_trap_ber(double eps, double beta0, std::size_t r, std::size_t n) {
  const double rd = static_cast<double>(r);
  const double inner = eps - 2 * std::pow(eps, static_cast<double>(n) / rd);
  if (!(inner > 0)) throw InfeasibleError("eps > 2 eps^(n/r)", "n/r too small for this epsilon");
  return beta0 + std::sqrt(std::log(1 / inner) / (2 * rd));
}

// nu with nu^2 = ln(8/eps) / (2r) * (1 + 1/r) * (1 + r/n).
inline double sampling_slack(double eps, std::size_t r, std::size_t n) {
  const double rd = static_cast<double>(r);
  const double nd = static_cast<double>(n);
  return std::sqrt(std::log(8 / eps) / (2 * rd) * (1 + 1 / rd) * (1 + rd / nd));
}

// exp(-2 nu^2 r * n r / ((n + r)(r + 1))).
inline double sampling_bound(double nu, std::size_t r, std::size_t n) {
  const double rd = static_cast<double>(r);
  const double nd = static_cast<double>(n);
  return std::exp(-2 * nu * nu * rd * nd * rd / ((nd + rd) * (rd + 1)));
}

// e^(-2 eps^2 n).
inline double hoeffding_tail(double n, double eps) {
  if (!(eps >= 0)) throw DomainError("deviation must be nonnegative");
  return std::exp(-2 * eps * eps * n);
}

inline double correctness_bound(const ProtocolParams& p) {
  const double a = p.beta - p.beta0;
  const double b = p.beta + p.nu - p.beta0;
  return std::exp(-2 * a * a * static_cast<double>(p.r)) + 2 * std::exp(-2 * b * b * static_cast<double>(p.n));
}

inline double security_bound(const ProtocolParams& p) {
  return 2 * p.eps_mac + 2 * sampling_bound(p.nu, p.r, p.n) + 4 * p.eps0 + 2 * p.eps_qp;
}

// Violated constraints of a parameter set; empty when consistent.
inline std::vector<std::string> check_params(const ProtocolParams& p) {
  std::vector<std::string> bad;
  if (!(p.beta0 < p.beta)) bad.push_back("beta0 < beta");
  if (!(p.beta + p.nu < 0.5)) bad.push_back("beta + nu < 1/2");
  if (p.kappa != p.ell + kappa_overhead(p.eps_qp)) bad.push_back("kappa = ell + ceil(4 log2(1/eps_qp)) - 2");
  if (p.r < minimal_trap_count(p.epsilon, p.beta0)) bad.push_back("r > (1/2 - beta0)^-2 4 ln(8/eps)");
  if (!(p.n > 2 * p.r)) bad.push_back("n > 2r");
  if (p.ell > p.ell0) bad.push_back("ell <= ell0");
  if (p.randomizer_degree < p.ell0) bad.push_back("randomizer field holds ell0 bits");
  if (p.d < p.n) bad.push_back("extractor field holds n bits");
  return bad;
}

inline ProtocolParams derive_params(const ParamInputs& in) {
  if (!(in.epsilon > 0 && in.epsilon < 0.5)) {
    throw InfeasibleError("0 < eps < 1/2", "the code target needs eps - 2 eps^2 > 0");
  }
  if (!(in.beta0 >= 0 && in.beta0 < 0.5)) throw DomainError("channel bit error rate must lie in [0, 1/2)");
  ProtocolParams p;
  const double eps = in.epsilon;
  p.epsilon = eps;
  p.eps0 = in.eps0_fraction * eps;
  p.eps_mac = eps / 8;
  p.delta = eps / 8;
  p.eps_qp = eps / 8;
  p.beta0 = in.beta0;
  p.ell = in.ell;
  p.ell0 = in.ell0 ? in.ell0 : in.ell;
  if (p.ell0 == 0) throw DomainError("message length must be positive");
  if (p.ell > p.ell0) throw DomainError("extracted length exceeds the compressed length");
  p.kappa = p.ell + kappa_overhead(p.eps_qp);
  const std::size_t r_min = minimal_trap_count(eps, in.beta0);
  if (in.trap_count && in.trap_count < r_min) {
    throw InfeasibleError("r > (1/2 - beta0)^-2 4 ln(8/eps)", "requested r = " + std::to_string(in.trap_count) +
                                                                  " below " + std::to_string(r_min));
  }
  p.r = std::max(in.trap_count, r_min);
  p.target_ber = code_target_ber(eps, in.beta0, p.r);
  if (!(p.target_ber < 0.5)) {
    throw InfeasibleError("code target BER < 1/2", "target " + std::to_string(p.target_ber) + "; increase r");
  }

  // The code target does not depend on n; beta and nu do. Iterate from n = 2r + 1.
  CodeRequest req{p.kappa, p.target_ber, CodeCriterion::kWorstCase, 0, 2 * p.r + 1};
  CodePtr code;
  try {
    code = choose_code(req);
  } catch (const NoCodeError&) {
    // Worst-case radius above 1/4 is out of reach for kappa > 1; fall back to
    // random errors at the same rate with failure at most the delta budget.
    req.criterion = CodeCriterion::kBsc;
    req.max_failure = eps / 8;
    code = choose_code(req);
  }
  p.code = code->descriptor();
  p.code_criterion = req.criterion;
  p.code_failure = code->bsc_failure(p.target_ber);
  std::size_t n = 2 * p.r + 1;
  for (p.fixed_point_rounds = 1; p.fixed_point_rounds <= 20; ++p.fixed_point_rounds) {
    p.beta = accepted_trap_ber(eps, in.beta0, p.r, n);
    p.nu = sampling_slack(eps, p.r, n);
    if (!(p.beta + p.nu < 0.5)) {
      throw InfeasibleError("beta + nu < 1/2", "beta + nu = " + std::to_string(p.beta + p.nu));
    }
    if (code->n() == n) break;
    n = code->n();
  }
  p.n = n;
  try {
    p.randomizer_degree = gf2::supported_degree_at_least(p.ell0);
    p.d = gf2::supported_degree_at_least(p.n);
  } catch (const UnsupportedError& e) {
    throw InfeasibleError("supported field degree", e.what());
  }
  p.lambda = mac_sizes(p.eps_mac, p.mac_message_bits()).lambda;
  const auto bad = check_params(p);
  if (!bad.empty()) throw InfeasibleError(bad.front(), "derived parameters fail their own checks");
  return p;
}

inline ProtocolParams derive_params(double eps, double beta0, std::size_t ell) {
  return derive_params(ParamInputs{eps, beta0, ell, 0, 0, 1.0 / 16});
}

// Asymptotic figures per message bit.
struct AsymptoticRates {
  double n_per_ell = 0;          // 1 / (1 - h)
  double syndrome_per_ell = 0;   // h / (1 - h)
  double recursive_per_ell = 0;  // 1 / (1 - 2h), infinite at or above the threshold
  double threshold = 0;          // root of 1 - 2 h(beta) = 0
};

// Root of 1 - 2 h(beta) on (0, 1/2) by bisection.
inline double usefulness_threshold() {
  double lo = 0;
  double hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (1 - 2 * binary_entropy(mid) > 0 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

inline AsymptoticRates asymptotic_rates(double beta0) {
  if (!(beta0 >= 0 && beta0 < 0.5)) throw DomainError("bit error rate must lie in [0, 1/2)");
  const double h = binary_entropy(beta0);
  AsymptoticRates out;
  out.n_per_ell = 1 / (1 - h);
  out.syndrome_per_ell = h / (1 - h);
  out.recursive_per_ell = 1 - 2 * h > 0 ? 1 / (1 - 2 * h) : std::numeric_limits<double>::infinity();
  out.threshold = usefulness_threshold();
  return out;
}

// Finite-size lengths with an ideal code of rate 1 - h(beta + nu) and
// r = max(r_min, ceil(r_coef n^alpha)).
struct IdealParams {
  std::size_t r = 0;
  std::size_t n = 0;
  std::size_t kappa = 0;
  double beta = 0;
  double nu = 0;
  double n_per_ell = 0;
};

inline IdealParams ideal_params(double eps, double beta0, std::size_t ell, double alpha, double r_coef) {
  if (!(eps > 0 && eps < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");
  if (!(alpha >= 0 && alpha <= 1) || !(r_coef >= 0)) throw DomainError("trap scaling out of range");
  if (ell == 0) throw DomainError("message length must be positive");
  IdealParams out;
  out.kappa = ell + kappa_overhead(eps / 8);
  const std::size_t r_min = minimal_trap_count(eps, beta0);
  auto traps = [&](std::size_t n) {
    return std::max(r_min, static_cast<std::size_t>(std::ceil(r_coef * std::pow(static_cast<double>(n), alpha))));
  };
  // Required length for a trial n; n is feasible when required(n) <= n.
  auto required = [&](std::size_t n) -> double {
    const std::size_t r = traps(n);
    if (n <= 2 * r) return std::numeric_limits<double>::infinity();
    const double p = accepted_trap_ber(eps, beta0, r, n) + sampling_slack(eps, r, n);
    if (!(p < 0.5)) return std::numeric_limits<double>::infinity();
    return std::ceil(static_cast<double>(out.kappa) / (1 - binary_entropy(p)));
  };
  std::size_t lo = out.kappa;  // infeasible: no code has n = kappa at positive error rate
  std::size_t hi = std::max<std::size_t>(2 * out.kappa, 2 * r_min + 2);
  while (required(hi) > static_cast<double>(hi)) {
    lo = hi;
    if (hi > (std::size_t{1} << 50)) throw InfeasibleError("ideal code length", "no finite n satisfies the recipe");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (required(mid) <= static_cast<double>(mid) ? hi : lo) = mid;
  }
  out.n = hi;
  out.r = traps(hi);
  out.beta = accepted_trap_ber(eps, beta0, out.r, out.n);
  out.nu = sampling_slack(eps, out.r, out.n);
  out.n_per_ell = static_cast<double>(out.n) / static_cast<double>(ell);
  return out;
}

// Recursive delegation with ideal-code accounting: level i stores l_i bits on
// l_i / (1 - h) qubits and leaves a syndrome of l_i h / (1 - h) bits, which
// becomes the message of level i + 1.
struct RecursionLevel {
  double message_bits = 0;
  double qubits = 0;
  double syndrome_bits = 0;
};

struct RecursionAccounting {
  std::vector<RecursionLevel> levels;
  double total_qubits = 0;
  double residual_bits = 0;
  double qubits_per_ell = 0;
  double limit_per_ell = 0;  // 1 / (1 - 2h)
};

class RecursionUnprofitableError : public Error {
 public:
  using Error::Error;
};

inline RecursionAccounting recursion_accounting(double beta0, double ell, double residual_limit = 1000,
                                                std::size_t max_levels = 256) {
  if (!(ell > 0)) throw DomainError("message length must be positive");
  const double h = binary_entropy(beta0);
  const double ratio = h / (1 - h);
  if (!(ratio < 1)) throw RecursionUnprofitableError("syndrome is not shorter than the message at this error rate");
  RecursionAccounting out;
  double message = ell;
  while (out.levels.empty() || message >= residual_limit) {
    if (out.levels.size() == max_levels) break;
    RecursionLevel lvl{message, message / (1 - h), message * ratio};
    out.levels.push_back(lvl);
    out.total_qubits += lvl.qubits;
    message = lvl.syndrome_bits;
    if (ratio == 0) break;
  }
  out.residual_bits = message;
  out.qubits_per_ell = out.total_qubits / ell;
  out.limit_per_ell = 1 / (1 - 2 * h);
  return out;
}

}  // namespace ctt
