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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "ctt/error.hpp"

namespace ctt::stats {

inline double log_choose(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

inline double log2_choose(double n, double k) { return log_choose(n, k) / std::log(2.0); }

inline double binomial_log_pmf(std::uint64_t n, std::uint64_t k, double p) {
  if (k > n) return -INFINITY;
  if (p == 0) return k == 0 ? 0 : -INFINITY;
  if (p == 1) return k == n ? 0 : -INFINITY;
  const auto nd = static_cast<double>(n);
  const auto kd = static_cast<double>(k);
  return log_choose(nd, kd) + kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

// Pr[X <= k] for X ~ Bin(n, p).
inline double binomial_cdf(std::uint64_t n, std::int64_t k, double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("binomial probability outside [0, 1]");
  if (k < 0) return 0;
  if (static_cast<std::uint64_t>(k) >= n) return 1;
  // Sum the smaller side for accuracy.
  const double mean = static_cast<double>(n) * p;
  long double s = 0;
  if (static_cast<double>(k) <= mean) {
    for (std::int64_t i = k; i >= 0; --i) {
      const long double term = std::exp(static_cast<long double>(binomial_log_pmf(n, static_cast<std::uint64_t>(i), p)));
      s += term;
      if (term < s * 1e-20L) break;
    }
    return static_cast<double>(std::min<long double>(s, 1));
  }
  for (std::uint64_t i = static_cast<std::uint64_t>(k) + 1; i <= n; ++i) {
    const long double term = std::exp(static_cast<long double>(binomial_log_pmf(n, i, p)));
    s += term;
    if (term < s * 1e-20L) break;
  }
  return static_cast<double>(std::max<long double>(0, 1 - s));
}

// Pr[X >= k] for X ~ Bin(n, p), summed directly so that tiny tails keep precision.
inline double binomial_sf(std::uint64_t n, std::int64_t k, double p) {
  if (!(p >= 0 && p <= 1)) throw DomainError("binomial probability outside [0, 1]");
  if (k <= 0) return 1;
  if (static_cast<std::uint64_t>(k) > n) return 0;
  const double mean = static_cast<double>(n) * p;
  if (static_cast<double>(k) <= mean) return std::max(0.0, 1 - binomial_cdf(n, k - 1, p));
  long double s = 0;
  for (std::uint64_t i = static_cast<std::uint64_t>(k); i <= n; ++i) {
    const long double term = std::exp(static_cast<long double>(binomial_log_pmf(n, i, p)));
    s += term;
    if (term < s * 1e-20L) break;
  }
  return static_cast<double>(std::min<long double>(s, 1));
}

// Hypergeometric: Pr[K = k] when drawing `draws` of `total` items, `marked` of them marked.
inline double hypergeometric_log_pmf(std::uint64_t total, std::uint64_t marked, std::uint64_t draws, std::uint64_t k) {
  if (k > marked || k > draws || draws - k > total - marked) return -INFINITY;
  return log_choose(static_cast<double>(marked), static_cast<double>(k)) +
         log_choose(static_cast<double>(total - marked), static_cast<double>(draws - k)) -
         log_choose(static_cast<double>(total), static_cast<double>(draws));
}

struct Interval {
  double lo = 0;
  double hi = 1;
};

// Wilson score interval for a binomial proportion.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0, 1};
  if (successes > trials) throw DomainError("more successes than trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (phat + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
  // The endpoints are exact at the extremes; rounding would leave them just inside.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half), successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

}  // namespace ctt::stats
