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

// Exact small-dimension evaluation of the SUPPORT attack: Eve measures
// {Pi_{m*,K}, I_{M,K} - Pi_{m*,K}} on the stored state and guesses [m = m*].
// States, supports and acceptance effects are dense complex matrices of
// dimension D <= 64.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ctt/error.hpp"
#include "ctt/kv_format.hpp"
#include "ctt/rng.hpp"

namespace ctt::support {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxDimension = 64;
inline constexpr double kRankTolerance = 1e-9;  // relative to the largest eigenvalue
inline constexpr double kStateTolerance = 1e-10;
inline constexpr double kProjectorTolerance = 1e-9;

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

class DensityOperator {
 public:
  // Hermitian, eigenvalues >= -1e-10 and trace in (0, 1 + 1e-10].
  explicit DensityOperator(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw DomainError("density operator must be square");
    if (static_cast<std::size_t>(rho_.rows()) > kMaxDimension) throw DomainError("dimension above 64");
    if (max_abs(rho_ - rho_.adjoint()) > kStateTolerance) throw DomainError("density operator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_);
    if (es.eigenvalues().minCoeff() < -kStateTolerance) throw DomainError("density operator is not positive");
    const double tr = trace();
    if (!(tr > 0 && tr <= 1 + kStateTolerance)) throw DomainError("density operator trace outside (0, 1]");
    // rho = sum_i lambda_i |v_i><v_i| over the numerically nonzero spectrum.
    const double top = es.eigenvalues().maxCoeff();
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) > kRankTolerance * top) {
        weights_.push_back(es.eigenvalues()(i));
        vectors_.push_back(es.eigenvectors().col(i));
      }
    }
  }

  // |psi><psi| / <psi|psi>.
  static DensityOperator pure(const Vector& psi) {
    const double norm = psi.squaredNorm();
    if (!(norm > 0)) throw DomainError("zero state vector");
    return DensityOperator(psi * psi.adjoint() / norm);
  }

  std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }
  double trace() const { return rho_.trace().real(); }
  const std::vector<double>& spectrum_weights() const { return weights_; }
  const std::vector<Vector>& spectrum_vectors() const { return vectors_; }

 private:
  Matrix rho_;
  std::vector<double> weights_;
  std::vector<Vector> vectors_;
};

class Projector {
 public:
  explicit Projector(Matrix p) : p_(std::move(p)) {
    if (p_.rows() != p_.cols() || p_.rows() == 0) throw DomainError("projector must be square");
    if (max_abs(p_ - p_.adjoint()) > kProjectorTolerance) throw DomainError("projector is not Hermitian");
    if (max_abs(p_ * p_ - p_) > kProjectorTolerance) throw DomainError("projector is not idempotent");
  }

  static Projector identity(std::size_t dim) {
    return Projector(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
  }

  std::size_t dimension() const { return static_cast<std::size_t>(p_.rows()); }
  const Matrix& matrix() const { return p_; }
  std::size_t rank() const { return static_cast<std::size_t>(std::llround(p_.trace().real())); }

 private:
  Matrix p_;
};

// Projector onto the eigenvectors of a positive operator whose eigenvalue
// exceeds 1e-9 times the largest.
inline Projector support_of(const Matrix& positive) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(positive);
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  Matrix p = Matrix::Zero(positive.rows(), positive.cols());
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (top > 0 && es.eigenvalues()(i) > kRankTolerance * top) {
      p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
  }
  return Projector(std::move(p));
}

template <class Op>
Projector support_of_sum(const std::vector<Op>& ops) {
  if (ops.empty()) throw DomainError("support of an empty family");
  Matrix sum = Matrix::Zero(ops.front().matrix().rows(), ops.front().matrix().cols());
  for (const auto& op : ops) {
    if (op.matrix().rows() != sum.rows()) throw DomainError("operators of different dimensions");
    sum += op.matrix();
  }
  return support_of(sum);
}

inline Projector support_projector(const std::vector<DensityOperator>& ops) { return support_of_sum(ops); }
inline Projector support_projector(const std::vector<Projector>& ops) { return support_of_sum(ops); }

// Messages M = {0..|M|-1} with prior P, keys K = {0..|K|-1} drawn uniformly,
// encryptions rho(m, k) and an acceptance effect 0 <= A_k <= I applied by
// Alice to whatever the server returns under key k.
class ToyScheme {
 public:
  ToyScheme(std::string name, std::size_t messages, std::size_t keys, std::vector<DensityOperator> states,
            std::vector<Matrix> accept, std::vector<double> prior)
      : name_(std::move(name)), messages_(messages), keys_(keys), states_(std::move(states)),
        accept_(std::move(accept)), prior_(std::move(prior)) {
    if (messages_ < 2 || keys_ < 1) throw DomainError("scheme needs at least two messages and one key");
    if (states_.size() != messages_ * keys_) throw DomainError("scheme needs one state per message and key");
    dim_ = states_.front().dimension();
    for (const auto& s : states_) {
      if (s.dimension() != dim_) throw DomainError("scheme states of different dimensions");
    }
    if (prior_.empty()) prior_.assign(messages_, 1.0 / static_cast<double>(messages_));
    check_distribution(prior_);
    for (const auto& s : states_) state_support_.push_back(support_projector(std::vector{s}));
    for (std::size_t m = 0; m < messages_; ++m) {
      std::vector<Projector> per_key;
      for (std::size_t k = 0; k < keys_; ++k) per_key.push_back(state_support(m, k));
      message_support_.push_back(support_projector(per_key));
    }
    for (std::size_t k = 0; k < keys_; ++k) {
      std::vector<Projector> per_message;
      for (std::size_t m = 0; m < messages_; ++m) per_message.push_back(state_support(m, k));
      key_support_.push_back(support_projector(per_message));
      Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
      for (const auto& p : per_message) sum += p.matrix();
      const double gap = max_abs(sum - key_support_.back().matrix());
      if (gap > kProjectorTolerance && !defect_) {
        std::ostringstream out;
        out << "scheme " << name_ << ": supports under key " << k << " overlap (deviation " << gap << ")";
        defect_ = out.str();
      }
    }
    full_support_ = std::make_optional(support_projector(message_support_));
    if (accept_.empty()) {
      for (const auto& p : key_support_) accept_.push_back(p.matrix());
    }
    if (accept_.size() != keys_) throw DomainError("scheme needs one acceptance effect per key");
    for (const auto& a : accept_) {
      if (static_cast<std::size_t>(a.rows()) != dim_ || a.rows() != a.cols()) throw DomainError("acceptance effect has the wrong shape");
      if (max_abs(a - a.adjoint()) > kProjectorTolerance) throw DomainError("acceptance effect is not Hermitian");
      Eigen::SelfAdjointEigenSolver<Matrix> es(a);
      if (es.eigenvalues().minCoeff() < -kProjectorTolerance || es.eigenvalues().maxCoeff() > 1 + kProjectorTolerance) {
        throw DomainError("acceptance effect is not between 0 and I");
      }
    }
  }

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return dim_; }
  std::size_t message_count() const { return messages_; }
  std::size_t key_count() const { return keys_; }
  const std::vector<double>& prior() const { return prior_; }
  const DensityOperator& state(std::size_t m, std::size_t k) const { return states_.at(m * keys_ + k); }
  const Matrix& accept(std::size_t k) const { return accept_.at(k); }
  const Projector& state_support(std::size_t m, std::size_t k) const { return state_support_.at(m * keys_ + k); }
  // Pi_{m,K}, Pi_{M,k} and I_{M,K}.
  const Projector& message_support(std::size_t m) const { return message_support_.at(m); }
  const Projector& key_support(std::size_t k) const { return key_support_.at(k); }
  const Projector& full_support() const { return *full_support_; }

  // Empty when Pi_{M,k} = sum_m Pi_{m,k} for every k, else a diagnostic.
  const std::optional<std::string>& orthogonality_defect() const { return defect_; }

  static void check_distribution(const std::vector<double>& p) {
    double total = 0;
    for (double x : p) {
      if (!(x >= 0)) throw DomainError("negative probability");
      total += x;
    }
    if (std::abs(total - 1) > 1e-9) throw DomainError("prior does not sum to 1");
  }

 private:
  std::string name_;
  std::size_t messages_;
  std::size_t keys_;
  std::size_t dim_ = 0;
  std::vector<DensityOperator> states_;
  std::vector<Matrix> accept_;
  std::vector<double> prior_;
  std::vector<Projector> state_support_;
  std::vector<Projector> message_support_;
  std::vector<Projector> key_support_;
  std::optional<Projector> full_support_;
  std::optional<std::string> defect_;
};

// Per-message outcome averages over the key for one guessed message y.
struct SupportTable {
  std::size_t m_star = 0;
  std::vector<double> win;          // Pr[WIN | m]
  std::vector<double> acc;          // Pr[acc | m]
  std::vector<double> win_and_acc;  // Pr[WIN and acc | m]
  double max_povm_deviation = 0;    // max |Pr[outcome 1] + Pr[outcome 0] - 1|
};

inline SupportTable support_table(const ToyScheme& scheme, std::size_t y) {
  if (const auto& defect = scheme.orthogonality_defect()) throw DomainError(*defect);
  const std::size_t M = scheme.message_count(), K = scheme.key_count();
  const Matrix& E1 = scheme.message_support(y).matrix();
  const Matrix E0 = scheme.full_support().matrix() - E1;
  SupportTable t;
  t.m_star = y;
  t.win.assign(M, 0);
  t.acc.assign(M, 0);
  t.win_and_acc.assign(M, 0);
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t k = 0; k < K; ++k) {
      const DensityOperator& rho = scheme.state(m, k);
      const Matrix& A = scheme.accept(k);
      double p[2] = {0, 0}, a[2] = {0, 0};
      for (std::size_t i = 0; i < rho.spectrum_weights().size(); ++i) {
        const double lambda = rho.spectrum_weights()[i];
        const Vector& v = rho.spectrum_vectors()[i];
        const Vector u0 = E0 * v, u1 = E1 * v;
        p[0] += lambda * u0.squaredNorm();
        p[1] += lambda * u1.squaredNorm();
        // tr(A E rho E) on the collapsed, unnormalized branch.
        a[0] += lambda * u0.dot(A * u0).real();
        a[1] += lambda * u1.dot(A * u1).real();
      }
      t.max_povm_deviation = std::max(t.max_povm_deviation, std::abs(p[0] + p[1] - 1));
      const int right = m == y ? 1 : 0;
      t.win[m] += p[right] / static_cast<double>(K);
      t.acc[m] += (a[0] + a[1]) / static_cast<double>(K);
      t.win_and_acc[m] += a[right] / static_cast<double>(K);
    }
  }
  return t;
}

struct MessageBreakdown {
  std::size_t message = 0;
  double p = 0;
  double win = 0;
  double acc = 0;
  double win_and_acc = 0;
};

struct SupportReport {
  std::string scheme;
  std::size_t m_star = 0;
  double p_star = 0;
  double pr_win = 0;
  double pr_acc = 0;
  double pr_win_and_acc = 0;
  double pr_win_given_acc = 0;
  double pr_win_given_not_star = 0;
  double advantage = 0;  // Pr[WIN | acc] - p*
  double max_povm_deviation = 0;
  std::vector<MessageBreakdown> per_message;

  std::string to_csv() const {
    std::ostringstream out;
    out << "scheme,message,p,win,acc,win_and_acc\n";
    out.precision(17);
    for (const auto& b : per_message) {
      out << scheme << ',' << b.message << ',' << b.p << ',' << b.win << ',' << b.acc << ',' << b.win_and_acc << '\n';
    }
    out << scheme << ",all," << 1 << ',' << pr_win << ',' << pr_acc << ',' << pr_win_and_acc << '\n';
    return out.str();
  }
};

// Most likely message; ties go to the smallest index.
inline std::size_t most_likely(const std::vector<double>& p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

inline SupportReport report_from_table(const ToyScheme& scheme, const SupportTable& t, const std::vector<double>& p) {
  SupportReport r;
  r.scheme = scheme.name();
  r.m_star = t.m_star;
  r.p_star = p[t.m_star];
  r.max_povm_deviation = t.max_povm_deviation;
  double not_star_win = 0;
  for (std::size_t m = 0; m < p.size(); ++m) {
    r.per_message.push_back({m, p[m], t.win[m], t.acc[m], t.win_and_acc[m]});
    r.pr_win += p[m] * t.win[m];
    r.pr_acc += p[m] * t.acc[m];
    r.pr_win_and_acc += p[m] * t.win_and_acc[m];
    if (m != t.m_star) not_star_win += p[m] * t.win[m];
  }
  r.pr_win_given_acc = r.pr_acc > 0 ? r.pr_win_and_acc / r.pr_acc : 0;
  r.pr_win_given_not_star = r.p_star < 1 ? not_star_win / (1 - r.p_star) : 1;
  r.advantage = r.pr_win_given_acc - r.p_star;
  return r;
}

inline SupportReport run_support(const ToyScheme& scheme, const std::vector<double>& p) {
  if (p.size() != scheme.message_count()) throw DomainError("distribution size differs from the message space");
  ToyScheme::check_distribution(p);
  return report_from_table(scheme, support_table(scheme, most_likely(p)), p);
}

inline SupportReport run_support(const ToyScheme& scheme) { return run_support(scheme, scheme.prior()); }

struct PermutationResult {
  std::vector<std::size_t> permutation;  // message m gets probability P[m] at pi(m) = permutation[m]
  double advantage = 0;
  SupportReport report;
  bool exhaustive = false;
  std::size_t evaluated = 0;
  double coverage = 0;                      // evaluated / |M|!
  double mean_win_given_not_star = 0;       // over all evaluated permutations
};

// pi(P): probability P[m] moves to message perm[m].
inline std::vector<double> permute(const std::vector<double>& p, const std::vector<std::size_t>& perm) {
  std::vector<double> q(p.size());
  for (std::size_t m = 0; m < p.size(); ++m) q.at(perm.at(m)) = p[m];
  return q;
}

inline constexpr std::size_t kExhaustiveMessages = 8;

// Maximizes Pr_{pi(P)}[WIN | acc] - p* over permutations: all |M|! when
// |M| <= 8, otherwise `samples` uniform permutations.
inline PermutationResult best_permutation(const ToyScheme& scheme, const std::vector<double>& p, Rng& rng,
                                          std::size_t samples = 4096) {
  const std::size_t M = scheme.message_count();
  if (p.size() != M) throw DomainError("distribution size differs from the message space");
  ToyScheme::check_distribution(p);
  std::vector<std::optional<SupportTable>> tables(M);
  auto table = [&](std::size_t y) -> const SupportTable& {
    if (!tables[y]) tables[y] = support_table(scheme, y);
    return *tables[y];
  };
  PermutationResult best;
  best.advantage = -INFINITY;
  double win_sum = 0;
  auto consider = [&](const std::vector<std::size_t>& perm) {
    const auto q = permute(p, perm);
    SupportReport r = report_from_table(scheme, table(most_likely(q)), q);
    win_sum += r.pr_win_given_not_star;
    ++best.evaluated;
    if (r.advantage > best.advantage) {
      best.advantage = r.advantage;
      best.permutation = perm;
      best.report = std::move(r);
    }
  };
  std::vector<std::size_t> perm(M);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double factorial = 1;
  for (std::size_t i = 2; i <= M; ++i) factorial *= static_cast<double>(i);
  if (M <= kExhaustiveMessages) {
    best.exhaustive = true;
    do {
      consider(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    consider(perm);
    for (std::size_t s = 1; s < samples; ++s) {
      for (std::size_t i = M; i-- > 1;) std::swap(perm[i], perm[rng.uniform_below(i + 1)]);
      consider(perm);
    }
  }
  best.coverage = std::min(1.0, static_cast<double>(best.evaluated) / factorial);
  best.mean_win_given_not_star = win_sum / static_cast<double>(best.evaluated);
  return best;
}

// p* (1 - p*)(1 - |K|/|M|).
inline double advantage_floor(double p_star, std::size_t keys, std::size_t messages) {
  return p_star * (1 - p_star) * (1 - static_cast<double>(keys) / static_cast<double>(messages));
}

// Registered toy schemes. Basis index bit i is qubit i.
namespace schemes {

inline Vector basis_vector(std::size_t dim, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1;
  return v;
}

// H applied to every one of `qubits` qubits.
inline Matrix hadamard_all(unsigned qubits) {
  const std::size_t dim = std::size_t{1} << qubits;
  Matrix h(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const double scale = std::pow(2.0, -0.5 * qubits);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (std::popcount(i & j) % 2 ? -scale : scale);
    }
  }
  return h;
}

// Two message bits encoded as two qubits in the key basis (0 standard,
// 1 Hadamard); Alice decodes in the key basis and accepts whatever she reads.
inline ToyScheme toy_bb84(std::vector<double> prior = {}) {
  const Matrix H = hadamard_all(2);
  std::vector<DensityOperator> states;
  for (std::size_t m = 0; m < 4; ++m) {
    for (std::size_t k = 0; k < 2; ++k) {
      const Vector v = basis_vector(4, m);
      states.push_back(DensityOperator::pure(k ? Vector(H * v) : v));
    }
  }
  return ToyScheme("toy-bb84", 4, 2, std::move(states), {}, std::move(prior));
}

// As toy-bb84 with a third qubit holding the parity of the two message bits;
// Alice accepts when the parity checks out in the key basis.
inline ToyScheme toy_bb84_parity(std::vector<double> prior = {}) {
  const Matrix H = hadamard_all(3);
  std::vector<DensityOperator> states;
  for (std::size_t m = 0; m < 4; ++m) {
    const std::size_t word = m | (std::size_t{std::popcount(m) % 2u} << 2);
    for (std::size_t k = 0; k < 2; ++k) {
      const Vector v = basis_vector(8, word);
      states.push_back(DensityOperator::pure(k ? Vector(H * v) : v));
    }
  }
  return ToyScheme("toy-bb84-parity", 4, 2, std::move(states), {}, std::move(prior));
}

// |m + k> with k padding the low key_bits of a message_bits-bit message.
inline ToyScheme partial_otp(unsigned message_bits, unsigned key_bits, std::vector<double> prior = {}) {
  if (message_bits == 0 || message_bits > 6 || key_bits > message_bits) throw DomainError("partial pad needs 0 <= key bits <= message bits <= 6");
  const std::size_t M = std::size_t{1} << message_bits, K = std::size_t{1} << key_bits;
  std::vector<DensityOperator> states;
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t k = 0; k < K; ++k) states.push_back(DensityOperator::pure(basis_vector(M, m ^ k)));
  }
  return ToyScheme("partial-otp:" + std::to_string(message_bits) + ":" + std::to_string(key_bits), M, K,
                   std::move(states), {}, std::move(prior));
}

// "toy-bb84", "toy-bb84-parity" or "partial-otp:<message bits>:<key bits>".
inline ToyScheme by_name(const std::string& name, std::vector<double> prior = {}) {
  if (name == "toy-bb84") return toy_bb84(std::move(prior));
  if (name == "toy-bb84-parity") return toy_bb84_parity(std::move(prior));
  if (name.rfind("partial-otp:", 0) == 0) {
    const auto colon = name.find(':', 12);
    if (colon != std::string::npos) {
      try {
        return partial_otp(static_cast<unsigned>(std::stoul(name.substr(12, colon - 12))),
                           static_cast<unsigned>(std::stoul(name.substr(colon + 1))), std::move(prior));
      } catch (const std::logic_error&) {
      }
    }
  }
  throw ParseError("unknown toy scheme: " + name);
}

inline std::vector<std::string> registered() { return {"toy-bb84", "toy-bb84-parity", "partial-otp:2:2", "partial-otp:3:1"}; }

}  // namespace schemes

// Scheme text (a ctt-scheme v1 document):
//   name=<text>  dimension=<D>  messages=<|M|>  keys=<|K|>
//   prior=<p_0> <p_1> ...                       optional, default uniform
//   state.<m>.<k>=<amps>                        pure state, amps "re,im re,im ..."
//   state.<m>.<k>=<w>:<amps>|<w>:<amps>|...     mixture with weights summing to 1
//   accept.<k>=span <amps>|<amps>|...           projector onto the span
//   accept.<k>=support                          Pi_{M,k}, the default
namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

inline double parse_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "' in scheme");
  }
}

inline Vector parse_amplitudes(const std::string& text, std::size_t dim) {
  std::istringstream in(text);
  std::string pair;
  std::vector<std::complex<double>> amps;
  while (in >> pair) {
    const auto comma = pair.find(',');
    if (comma == std::string::npos) throw ParseError("amplitude must be re,im: " + pair);
    amps.emplace_back(parse_number(pair.substr(0, comma)), parse_number(pair.substr(comma + 1)));
  }
  if (amps.size() != dim) throw ParseError("state vector has the wrong dimension");
  Vector v(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) v(static_cast<Eigen::Index>(i)) = amps[i];
  return v;
}

}  // namespace detail

inline ToyScheme parse_scheme(const std::string& text) {
  const KvDocument doc = KvDocument::parse_expect(text, "scheme", 1);
  const std::size_t dim = doc.get_uint("dimension");
  const std::size_t M = doc.get_uint("messages");
  const std::size_t K = doc.get_uint("keys");
  if (dim == 0 || dim > kMaxDimension) throw ParseError("scheme dimension must be in [1, 64]");
  if (M * K > 4096) throw ParseError("scheme too large");
  std::vector<double> prior;
  if (doc.has("prior")) {
    std::istringstream in(doc.get("prior"));
    std::string tok;
    while (in >> tok) prior.push_back(detail::parse_number(tok));
  }
  std::vector<DensityOperator> states;
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::string& spec = doc.get("state." + std::to_string(m) + "." + std::to_string(k));
      if (spec.find(':') == std::string::npos) {
        states.push_back(DensityOperator::pure(detail::parse_amplitudes(spec, dim)));
        continue;
      }
      Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (const auto& part : detail::split(spec, '|')) {
        const auto colon = part.find(':');
        if (colon == std::string::npos) throw ParseError("mixture component must be <weight>:<amps>");
        const Vector v = detail::parse_amplitudes(part.substr(colon + 1), dim);
        rho += detail::parse_number(part.substr(0, colon)) * v * v.adjoint() / v.squaredNorm();
      }
      states.emplace_back(std::move(rho));
    }
  }
  std::vector<Matrix> accept;
  bool any_accept = false;
  for (std::size_t k = 0; k < K; ++k) any_accept |= doc.has("accept." + std::to_string(k));
  if (any_accept) {
    std::vector<std::optional<Matrix>> explicit_accept(K);
    for (std::size_t k = 0; k < K; ++k) {
      const std::string key = "accept." + std::to_string(k);
      const std::string spec = doc.has(key) ? doc.get(key) : "support";
      if (spec == "support") continue;
      if (spec.rfind("span ", 0) != 0) throw ParseError("acceptance must be 'support' or 'span <amps>|...'");
      Matrix sum = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (const auto& part : detail::split(spec.substr(5), '|')) {
        const Vector v = detail::parse_amplitudes(part, dim);
        sum += v * v.adjoint();
      }
      explicit_accept[k] = support_of(sum).matrix();
    }
    // Fill 'support' entries from a scheme built with the default effects.
    const ToyScheme defaults(doc.get("name"), M, K, states, {}, prior);
    for (std::size_t k = 0; k < K; ++k) accept.push_back(explicit_accept[k] ? *explicit_accept[k] : defaults.key_support(k).matrix());
  }
  return ToyScheme(doc.get("name"), M, K, std::move(states), std::move(accept), std::move(prior));
}

inline ToyScheme load_scheme(const std::string& path) { return parse_scheme(KvDocument::read_file(path)); }

struct WitnessRow {
  unsigned message_bits = 0;
  unsigned key_bits = 0;
  double usefulness_bits = 0;         // 1 - key bits / message bits
  double usefulness_cardinality = 0;  // 1 - |K| / |M|
  double advantage = 0;
  double advantage_floor = 0;
  bool meets_floor = false;
};

struct WitnessReport {
  double Y = 0;
  double p_star = 0;
  double floor = 0;  // p* (1 - p*) Y
  std::vector<WitnessRow> rows;
  bool all_meet_floor() const {
    return std::all_of(rows.begin(), rows.end(), [](const WitnessRow& r) { return r.meets_floor; });
  }
};

// Partial-pad schemes with key fraction at most 1 - Y under the prior with
// p* on one message and the rest uniform: the best SUPPORT advantage never
// drops below p* (1 - p*) Y, whatever the message length.
inline WitnessReport usefulness_witness(double Y, double p_star, const std::vector<unsigned>& message_bits, Rng& rng) {
  if (!(Y > 0 && Y <= 1)) throw DomainError("usefulness must lie in (0, 1]");
  if (!(p_star > 0 && p_star < 1)) throw DomainError("p* must lie in (0, 1)");
  WitnessReport rep{Y, p_star, p_star * (1 - p_star) * Y, {}};
  for (unsigned q : message_bits) {
    const auto j = static_cast<unsigned>(std::floor((1 - Y) * q + 1e-12));
    const std::size_t M = std::size_t{1} << q;
    if (p_star < (1 - p_star) / static_cast<double>(M - 1)) throw DomainError("p* is not the largest probability");
    std::vector<double> prior(M, (1 - p_star) / static_cast<double>(M - 1));
    prior[0] = p_star;
    const ToyScheme scheme = schemes::partial_otp(q, j, prior);
    const PermutationResult best = best_permutation(scheme, prior, rng, 64);
    WitnessRow row;
    row.message_bits = q;
    row.key_bits = j;
    row.usefulness_bits = 1 - static_cast<double>(j) / q;
    row.usefulness_cardinality = 1 - std::ldexp(1.0, static_cast<int>(j) - static_cast<int>(q));
    row.advantage = best.advantage;
    row.advantage_floor = advantage_floor(p_star, std::size_t{1} << j, M);
    row.meets_floor = row.advantage >= rep.floor - 1e-9;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace ctt::support
