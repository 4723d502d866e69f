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

// Code registry: descriptors <-> code instances, and selection of the
// highest-rate registered code meeting a correction target.

#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctt/bch.hpp"
#include "ctt/error.hpp"
#include "ctt/linear_code.hpp"

namespace ctt {

// Raised when no registered family reaches the requested target. Carries the
// best parameters that were achievable.
class NoCodeError : public Error {
 public:
  struct Best {
    std::string descriptor;
    std::size_t n = 0;
    std::size_t kappa = 0;
    std::size_t t_corr = 0;
    double radius = 0;   // t_corr / n
    double failure = 1;  // bsc failure at the target, when that criterion was used
  };

  NoCodeError(const std::string& what, Best best) : Error(what), best_(std::move(best)) {}
  const Best& best() const { return best_; }

 private:
  Best best_;
};

namespace detail {

inline std::size_t parse_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ParseError("bad number in code descriptor: " + s);
  }
  return static_cast<std::size_t>(std::stoull(s));
}

inline CodePtr make_single_code(const std::string& d) {
  if (d == "hamming7") return std::make_shared<TableCode>(TableCode::hamming7());
  if (d == "hamming15") return std::make_shared<TableCode>(TableCode::hamming15());
  if (d == "golay23") return std::make_shared<TableCode>(TableCode::golay23());
  if (d.rfind("rep:", 0) == 0) return std::make_shared<RepetitionCode>(parse_count(d.substr(4)));
  if (d.rfind("bch:", 0) == 0) {
    const auto colon = d.find(':', 4);
    if (colon == std::string::npos) throw ParseError("bch descriptor must be bch:<m>:<t>");
    return std::make_shared<BchCode>(static_cast<unsigned>(parse_count(d.substr(4, colon - 4))),
                                     parse_count(d.substr(colon + 1)));
  }
  if (d.rfind("table:", 0) == 0) {
    std::string rows = d.substr(6);
    for (char& c : rows) {
      if (c == '/') c = '\n';
    }
    std::istringstream in(rows);
    return std::make_shared<TableCode>(TableCode::from_parity_rows(in));
  }
  throw ParseError("unknown code descriptor: " + d);
}

}  // namespace detail

// Descriptors: "rep:R", "hamming7", "hamming15", "golay23", "bch:m:t",
// "table:<row>/<row>/...", or direct sums "<count>x<desc>+<count>x<desc>...".
inline CodePtr make_code(const std::string& descriptor) {
  const bool is_sum = descriptor.find('+') != std::string::npos ||
                      (!descriptor.empty() && std::isdigit(static_cast<unsigned char>(descriptor[0])));
  if (!is_sum) return detail::make_single_code(descriptor);
  std::vector<CodePtr> parts;
  std::size_t pos = 0;
  while (pos <= descriptor.size()) {
    auto plus = descriptor.find('+', pos);
    if (plus == std::string::npos) plus = descriptor.size();
    const std::string term = descriptor.substr(pos, plus - pos);
    const auto x = term.find('x');
    if (x == std::string::npos) throw ParseError("direct-sum term must be <count>x<desc>: " + term);
    const std::size_t count = detail::parse_count(term.substr(0, x));
    if (count == 0) throw ParseError("direct-sum term with zero copies");
    const CodePtr part = detail::make_single_code(term.substr(x + 1));
    parts.insert(parts.end(), count, part);
    pos = plus + 1;
  }
  return std::make_shared<DirectSumCode>(std::move(parts));
}

enum class CodeCriterion {
  // t_corr / n >= beta: every error pattern of relative weight <= beta is corrected.
  kWorstCase,
  // Pr[decoding error] <= max_failure when every bit flips independently with probability beta.
  kBsc,
};

struct CodeRequest {
  std::size_t kappa_min = 1;
  double beta = 0;
  CodeCriterion criterion = CodeCriterion::kWorstCase;
  double max_failure = 0;
  std::size_t n_min = 0;
};

namespace detail {

struct Candidate {
  std::string descriptor;
  std::size_t n = 0;
  std::size_t kappa = 0;
  std::size_t t = 0;
  double failure = 1;
};

inline bool better_rate(const Candidate& a, const Candidate& b) {
  // a.kappa / a.n > b.kappa / b.n, ties to the shorter code.
  const auto lhs = static_cast<long double>(a.kappa) * b.n;
  const auto rhs = static_cast<long double>(b.kappa) * a.n;
  return lhs > rhs || (lhs == rhs && a.n < b.n);
}

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// Failure of `copies` independent blocks, each failing with probability q.
inline double copies_failure(double q, std::size_t copies) {
  if (q >= 1) return 1;
  return -std::expm1(static_cast<double>(copies) * std::log1p(-q));
}

// Smallest odd R >= 3 with pred(R), for pred monotone in R; 0 if none is <= limit.
inline std::size_t smallest_odd(const std::function<bool(std::size_t)>& pred, std::size_t limit) {
  // Search over i with R = 2i + 1.
  std::size_t lo = 0;  // pred(2 lo + 1) is false (or lo = 0)
  std::size_t hi = 1;
  const std::size_t top = (limit - 1) / 2;
  while (!pred(2 * hi + 1)) {
    if (hi >= top) return 0;
    lo = hi;
    hi = std::min(2 * hi, top);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    (pred(2 * mid + 1) ? hi : lo) = mid;
  }
  return 2 * hi + 1;
}

// Block families with their base parameters, built once.
struct Block {
  std::string descriptor;
  std::size_t n, kappa, t;
  std::function<double(double)> failure;
};

inline const std::vector<Block>& block_catalogue() {
  static const std::vector<Block> blocks = [] {
    std::vector<Block> out;
    for (const char* name : {"hamming7", "hamming15", "golay23"}) {
      auto code = make_single_code(name);
      out.push_back({name, code->n(), code->kappa(), code->t_corr(), [code](double p) { return code->bsc_failure(p); }});
    }
    for (unsigned m = BchCode::kMinM; m <= BchCode::kMaxM; ++m) {
      const std::size_t n = (std::size_t{1} << m) - 1;
      const auto dims = BchCode::dimensions(m);
      for (std::size_t t = 1; t < dims.size(); ++t) {
        const std::size_t k = dims[t];
        if (k == 0) break;
        // Equal dimension means the same code; keep the largest designed t.
        if (t + 1 < dims.size() && dims[t + 1] == k) continue;
        out.push_back({"bch:" + std::to_string(m) + ":" + std::to_string(t), n, k, t,
                       [n, t](double p) { return stats::binomial_sf(n, static_cast<std::int64_t>(t) + 1, p); }});
      }
    }
    return out;
  }();
  return blocks;
}

inline constexpr std::size_t kMaxRepetition = 1u << 22;
inline constexpr std::size_t kMaxBlocks = 1u << 20;

}  // namespace detail

inline CodePtr choose_code(const CodeRequest& req) {
  using detail::Candidate;
  if (!(req.beta >= 0 && req.beta < 0.5)) throw DomainError("target bit error rate must lie in [0, 1/2)");
  if (req.kappa_min == 0) throw DomainError("code must carry at least one message bit");
  if (req.criterion == CodeCriterion::kBsc && !(req.max_failure > 0 && req.max_failure < 1)) {
    throw DomainError("failure bound must lie in (0, 1)");
  }
  std::optional<Candidate> best;
  Candidate nearest;  // closest miss, for the error report
  auto consider = [&best](const Candidate& c) {
    if (!best || detail::better_rate(c, *best)) best = c;
  };

  const auto& blocks = detail::block_catalogue();
  if (req.criterion == CodeCriterion::kWorstCase) {
    double nearest_radius = -1;
    for (const auto& b : blocks) {
      if (b.kappa < req.kappa_min || b.n < req.n_min) continue;
      const double radius = static_cast<double>(b.t) / static_cast<double>(b.n);
      const Candidate c{b.descriptor, b.n, b.kappa, b.t, 1};
      if (radius >= req.beta) {
        consider(c);
      } else if (radius > nearest_radius) {
        nearest_radius = radius;
        nearest = c;
      }
    }
    if (req.kappa_min == 1) {
      // (R - 1) / (2R) >= beta  <=>  R >= 1 / (1 - 2 beta).
      std::size_t R = static_cast<std::size_t>(std::ceil(1 / (1 - 2 * req.beta) - 1e-12));
      R = std::max<std::size_t>({R, 3, req.n_min});
      if (R % 2 == 0) ++R;
      if (R <= detail::kMaxRepetition) consider({"rep:" + std::to_string(R), R, 1, (R - 1) / 2, 1});
    }
  } else {
    double nearest_failure = 2;
    auto offer = [&](const Candidate& c) {
      if (c.failure <= req.max_failure) {
        consider(c);
      } else if (c.failure < nearest_failure) {
        nearest_failure = c.failure;
        nearest = c;
      }
    };
    // kappa_min repetition blocks of a common odd length R.
    const std::size_t copies = req.kappa_min;
    auto rep_failure = [&](std::size_t R) {
      return detail::copies_failure(stats::binomial_sf(R, static_cast<std::int64_t>((R - 1) / 2) + 1, req.beta),
                                    copies);
    };
    std::size_t R = detail::smallest_odd([&](std::size_t r) { return rep_failure(r) <= req.max_failure; },
                                         detail::kMaxRepetition);
    if (R == 0) R = detail::kMaxRepetition - 1;
    R = std::max(R, detail::ceil_div(req.n_min, copies));
    if (R % 2 == 0) ++R;
    offer({copies == 1 ? "rep:" + std::to_string(R) : std::to_string(copies) + "xrep:" + std::to_string(R),
           R * copies, copies, (R - 1) / 2, rep_failure(R)});
    for (const auto& b : blocks) {
      const std::size_t c = std::max(detail::ceil_div(req.kappa_min, b.kappa), detail::ceil_div(req.n_min, b.n));
      if (c > detail::kMaxBlocks) continue;
      offer({c == 1 ? b.descriptor : std::to_string(c) + "x" + b.descriptor, c * b.n, c * b.kappa, b.t,
             detail::copies_failure(b.failure(req.beta), c)});
    }
  }

  if (!best) {
    NoCodeError::Best report{nearest.descriptor, nearest.n, nearest.kappa, nearest.t,
                             nearest.n ? static_cast<double>(nearest.t) / static_cast<double>(nearest.n) : 0,
                             nearest.failure};
    std::ostringstream msg;
    msg << "no registered code with kappa >= " << req.kappa_min << " reaches "
        << (req.criterion == CodeCriterion::kWorstCase ? "correction radius " : "BSC failure bound at p = ") << req.beta;
    if (!report.descriptor.empty()) {
      msg << "; best was " << report.descriptor << " (t/n = " << report.radius << ", failure = " << report.failure << ")";
    }
    throw NoCodeError(msg.str(), report);
  }
  return make_code(best->descriptor);
}

// Worst-case selection: kappa >= kappa_min and t_corr / n >= beta_corr.
inline CodePtr choose_code(std::size_t kappa_min, double beta_corr) {
  return choose_code(CodeRequest{kappa_min, beta_corr, CodeCriterion::kWorstCase, 0, 0});
}

}  // namespace ctt
