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

// Entropy functionals over finite distributions. All logarithms are base 2.

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ctt/error.hpp"

namespace ctt {

// `count` outcomes that each have probability `p`. Counts are real so that
// distributions over 2^64 outcomes stay representable.
struct ProbabilityClass {
  double p = 0;
  double count = 0;
};

// Finite probability distribution. Either explicit (outcome ids known) or
// implicit (only the multiset of probabilities is known, which is all the
// entropy functionals need).
class DiscreteDistribution {
 public:
  using Outcome = std::uint64_t;
  static constexpr double kTolerance = 1e-12;

  explicit DiscreteDistribution(std::vector<std::pair<Outcome, double>> entries) : entries_(std::move(entries)) {
    std::map<Outcome, bool> seen;
    std::map<double, double> grouped;
    for (const auto& [id, p] : entries_) {
      if (!(p >= 0 && p <= 1)) throw DomainError("probabilities must lie in [0, 1]");
      if (!seen.emplace(id, true).second) throw DomainError("duplicate outcome id " + std::to_string(id));
      if (p > 0) grouped[p] += 1;
    }
    for (const auto& [p, c] : grouped) classes_.push_back({p, c});
    finish();
  }

  static DiscreteDistribution from_classes(std::vector<ProbabilityClass> classes) {
    DiscreteDistribution d;
    for (const auto& c : classes) {
      if (!(c.p >= 0 && c.p <= 1) || !(c.count >= 0)) throw DomainError("bad probability class");
      if (c.p > 0 && c.count > 0) d.classes_.push_back(c);
    }
    d.finish();
    return d;
  }

  // Nonzero-probability classes, sorted by decreasing probability.
  const std::vector<ProbabilityClass>& classes() const { return classes_; }

  bool is_explicit() const { return classes_.empty() || !entries_.empty(); }

  const std::vector<std::pair<Outcome, double>>& entries() const {
    if (!is_explicit()) throw UnsupportedError("distribution has no explicit outcome list");
    return entries_;
  }

  double support_size() const {
    double s = 0;
    for (const auto& c : classes_) s += c.count;
    return s;
  }

  double max_probability() const { return classes_.front().p; }

 private:
  DiscreteDistribution() = default;

  void finish() {
    if (classes_.empty()) throw DomainError("distribution has empty support");
    std::sort(classes_.begin(), classes_.end(), [](const auto& a, const auto& b) { return a.p > b.p; });
    long double total = 0;
    for (const auto& c : classes_) total += static_cast<long double>(c.p) * c.count;
    if (std::fabs(static_cast<double>(total - 1.0L)) > kTolerance) {
      throw DomainError("probabilities sum to " + std::to_string(static_cast<double>(total)) + ", not 1");
    }
  }

  std::vector<std::pair<Outcome, double>> entries_;
  std::vector<ProbabilityClass> classes_;
};

inline double binary_entropy(double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("binary entropy argument outside [0, 1]");
  if (p == 0 || p == 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

// The beta in [0, 1/2] with h(beta) = y.
inline double binary_entropy_inverse(double y) {
  if (!(y >= 0 && y <= 1)) throw DomainError("binary entropy value outside [0, 1]");
  double lo = 0;
  double hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (binary_entropy(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double shannon_entropy(const DiscreteDistribution& P) {
  long double h = 0;
  for (const auto& c : P.classes()) h += static_cast<long double>(c.count) * c.p * -std::log2(c.p);
  return static_cast<double>(h);
}

inline double min_entropy(const DiscreteDistribution& P) { return -std::log2(P.max_probability()); }

inline double renyi_entropy(const DiscreteDistribution& P, double alpha) {
  if (alpha == 1) throw UnsupportedError("order 1 is the Shannon entropy; use shannon_entropy");
  if (!(alpha > 0)) throw DomainError("Renyi order must be positive");
  long double s = 0;
  for (const auto& c : P.classes()) s += static_cast<long double>(c.count) * std::pow(static_cast<long double>(c.p), alpha);
  return static_cast<double>(-std::log2(s) / (alpha - 1));
}

// Result of smoothing by capping: every probability above `cap` is cut to it.
struct CappedDistribution {
  double cap = 0;
  double collision = 0;  // sum of Q(x)^2
  double mass = 0;       // sum of Q(x), equals 1 - eta
  double entropy() const { return -std::log2(collision); }
};

// Caps the largest masses at the level c where sum min(P(x), c) = 1 - eta;
// this minimises sum Q^2 over sub-normalised Q <= P of mass >= 1 - eta.
inline CappedDistribution cap_distribution(const DiscreteDistribution& P, double eta) {
  if (!(eta >= 0 && eta < 1)) throw DomainError("smoothing parameter must lie in [0, 1)");
  const auto& cls = P.classes();
  long double tail = 0;
  long double tail_sq = 0;
  for (const auto& c : cls) {
    tail += static_cast<long double>(c.count) * c.p;
    tail_sq += static_cast<long double>(c.count) * c.p * c.p;
  }
  const long double target = tail - eta;  // tail is 1 up to rounding
  long double capped_count = 0;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    // Cap over classes [0, k]: mass(c) = capped_count * c + tail for c in [p_{k+1}, p_k].
    capped_count += cls[k].count;
    tail -= static_cast<long double>(cls[k].count) * cls[k].p;
    tail_sq -= static_cast<long double>(cls[k].count) * cls[k].p * cls[k].p;
    if (tail < 0) tail = 0;
    if (tail_sq < 0) tail_sq = 0;
    const double next = k + 1 < cls.size() ? cls[k + 1].p : 0.0;
    long double c = (target - tail) / capped_count;
    if (c >= next || k + 1 == cls.size()) {
      c = std::min<long double>(c, cls[k].p);
      CappedDistribution out;
      out.cap = static_cast<double>(c);
      out.collision = static_cast<double>(capped_count * c * c + tail_sq);
      out.mass = static_cast<double>(capped_count * c + tail);
      return out;
    }
  }
  throw DomainError("capping failed");  // unreachable for eta < 1
}

inline double smooth_renyi2(const DiscreteDistribution& P, double eta) { return cap_distribution(P, eta).entropy(); }

struct ExtractableLength {
  std::size_t length = 0;
  double eta = 0;
};

// max over the grid eta_i = eps0 * i / points, i < points, of
// floor(H2^eta(P) + 2 - log2(1 / (eps0 (eps0 - eta)))), clamped at 0.
inline ExtractableLength extractable_length_detail(const DiscreteDistribution& P, double eps0,
                                                   std::size_t grid_points = 1024) {
  if (!(eps0 > 0 && eps0 < 1)) throw DomainError("uniformity parameter must lie in (0, 1)");
  if (grid_points == 0) throw DomainError("eta grid must be nonempty");
  ExtractableLength best;
  double best_value = -1;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double eta = eps0 * static_cast<double>(i) / static_cast<double>(grid_points);
    const double value = std::floor(smooth_renyi2(P, eta) + 2 + std::log2(eps0) + std::log2(eps0 - eta));
    if (value > best_value) {
      best_value = value;
      best.eta = eta;
    }
  }
  best.length = best_value > 0 ? static_cast<std::size_t>(best_value) : 0;
  return best;
}

inline std::size_t extractable_length(const DiscreteDistribution& P, double eps0, std::size_t grid_points = 1024) {
  return extractable_length_detail(P, eps0, grid_points).length;
}

// Same grid for the uniform distribution on 2^bits outcomes, where capping
// removes eta evenly and H2^eta = bits - 2 log2(1 - eta). Needed for sources
// too large to represent as probability classes.
inline std::size_t extractable_length_uniform(double bits, double eps0, std::size_t grid_points = 1024) {
  if (!(eps0 > 0 && eps0 < 1)) throw DomainError("uniformity parameter must lie in (0, 1)");
  if (grid_points == 0) throw DomainError("eta grid must be nonempty");
  double best = -1;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double eta = eps0 * static_cast<double>(i) / static_cast<double>(grid_points);
    best = std::max(best, std::floor(bits - 2 * std::log2(1 - eta) + 2 + std::log2(eps0) + std::log2(eps0 - eta)));
  }
  return best > 0 ? static_cast<std::size_t>(best) : 0;
}

// Built-in generators.
namespace distributions {

inline constexpr unsigned kMaxExplicitBits = 22;

inline DiscreteDistribution uniform(double n) {
  if (!(n >= 1)) throw DomainError("uniform distribution needs at least one outcome");
  if (n <= (1U << kMaxExplicitBits) && n == std::floor(n)) {
    std::vector<std::pair<DiscreteDistribution::Outcome, double>> e;
    const auto count = static_cast<std::uint64_t>(n);
    e.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) e.emplace_back(i, 1.0 / n);
    return DiscreteDistribution(std::move(e));
  }
  return DiscreteDistribution::from_classes({{1.0 / n, n}});
}

inline DiscreteDistribution uniform_bits(unsigned bits) { return uniform(std::ldexp(1.0, static_cast<int>(bits))); }

// L-bit messages: the all-ones message mu0 has probability 1/2, the other
// 2^L - 1 messages share the rest uniformly. Outcome ids are the messages
// read as integers, bit 0 first.
inline DiscreteDistribution two_class(unsigned L) {
  if (L == 0 || L > 63) throw DomainError("example distribution needs 1 <= L <= 63");
  const double others = std::ldexp(1.0, static_cast<int>(L)) - 1;
  const double p_other = 0.5 / others;
  if (L <= kMaxExplicitBits) {
    std::vector<std::pair<DiscreteDistribution::Outcome, double>> e;
    const std::uint64_t mu0 = (std::uint64_t{1} << L) - 1;
    e.reserve(mu0 + 1);
    for (std::uint64_t m = 0; m < mu0; ++m) e.emplace_back(m, p_other);
    e.emplace_back(mu0, 0.5);
    return DiscreteDistribution(std::move(e));
  }
  return DiscreteDistribution::from_classes({{0.5, 1}, {p_other, others}});
}

// Distribution of the (L+1)-bit compressed string M0 for two_class(L): the
// 2^L strings '1'||padding carry 2^-(L+1) each, the 2^L - 1 strings '0'||mu
// carry 1 / (2 (2^L - 1)) each.
inline DiscreteDistribution two_class_m0(unsigned L) {
  if (L == 0 || L > 62) throw DomainError("example distribution needs 1 <= L <= 62");
  const double pads = std::ldexp(1.0, static_cast<int>(L));
  const double others = pads - 1;
  if (L + 1 <= kMaxExplicitBits) {
    std::vector<std::pair<DiscreteDistribution::Outcome, double>> e;
    const auto n = static_cast<std::uint64_t>(pads);
    const std::uint64_t mu0 = n - 1;
    for (std::uint64_t m = 0; m < n; ++m) {
      // First bit is the flag; the remaining L bits follow it.
      if (m != mu0) e.emplace_back(m << 1, 0.5 / others);
      e.emplace_back((m << 1) | 1U, 0.5 / pads);
    }
    return DiscreteDistribution(std::move(e));
  }
  return DiscreteDistribution::from_classes({{0.5 / pads, pads}, {0.5 / others, others}});
}

// n independent bits, each 1 with probability p.
inline DiscreteDistribution iid_bernoulli(double p, unsigned n) {
  if (!(p >= 0 && p <= 1)) throw DomainError("bit probability outside [0, 1]");
  if (n <= 16) {
    std::vector<std::pair<DiscreteDistribution::Outcome, double>> e;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const int k = std::popcount(x);
      e.emplace_back(x, std::pow(p, k) * std::pow(1 - p, static_cast<int>(n) - k));
    }
    return DiscreteDistribution(std::move(e));
  }
  std::vector<ProbabilityClass> cls;
  for (unsigned k = 0; k <= n; ++k) {
    const double log_choose = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    const double pk = std::pow(p, k) * std::pow(1 - p, n - k);
    cls.push_back({pk, std::exp(log_choose)});
  }
  return DiscreteDistribution::from_classes(std::move(cls));
}

// Text table: one "outcome-id probability" pair per line; '#' starts a comment.
inline DiscreteDistribution parse_table(std::istream& in) {
  std::vector<std::pair<DiscreteDistribution::Outcome, double>> e;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    DiscreteDistribution::Outcome id = 0;
    double p = 0;
    if (!(ls >> id)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("distribution line " + std::to_string(lineno) + ": expected an outcome id");
    }
    std::string rest;
    if (!(ls >> p) || (ls >> rest)) {
      throw ParseError("distribution line " + std::to_string(lineno) + ": expected 'outcome-id probability'");
    }
    e.emplace_back(id, p);
  }
  return DiscreteDistribution(std::move(e));
}

inline DiscreteDistribution load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open distribution file " + path);
  return parse_table(in);
}

}  // namespace distributions

}  // namespace ctt
