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

// Product-state simulation of BB84 qubits. Each cell is a classical record
// (basis, value) that only measurement can read. Honest states are
// unentangled and every modelled attack acts cell by cell, so the record
// reproduces the exact single-qubit statistics.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "ctt/bitstring.hpp"
#include "ctt/error.hpp"
#include "ctt/rng.hpp"
#include "ctt/stats.hpp"

namespace ctt {

enum class Basis : std::uint8_t { kStandard = 0, kHadamard = 1 };

// t with |t| = r: trap positions T = {j : t_j = 1}, payload positions the rest.
class TrapLayout {
 public:
  explicit TrapLayout(BitString t) : t_(std::move(t)) {
    for (std::size_t j = 0; j < t_.size(); ++j) (t_.get(j) ? traps_ : payload_).push_back(j);
  }

  // Uniform r-subset of [0, n + r) by a partial Fisher-Yates shuffle.
  static TrapLayout random(std::size_t n, std::size_t r, Rng& rng) {
    std::vector<std::size_t> idx(n + r);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    BitString t(n + r);
    for (std::size_t i = 0; i < r; ++i) {
      std::swap(idx[i], idx[i + rng.uniform_below(n + r - i)]);
      t.set(idx[i], true);
    }
    return TrapLayout(std::move(t));
  }

  const BitString& bits() const { return t_; }
  std::size_t size() const { return t_.size(); }
  std::size_t r() const { return traps_.size(); }
  std::size_t n() const { return payload_.size(); }
  const std::vector<std::size_t>& traps() const { return traps_; }
  const std::vector<std::size_t>& payload() const { return payload_; }

  // Values of a full-length string at the trap (v) or payload (x) positions.
  BitString gather_traps(const BitString& full) const { return gather(full, traps_); }
  BitString gather_payload(const BitString& full) const { return gather(full, payload_); }

  // Bits needed to name the layout among all C(n + r, r) choices.
  std::size_t encoded_bits() const {
    if (r() == 0 || n() == 0) return 0;
    return static_cast<std::size_t>(std::ceil(stats::log2_choose(static_cast<double>(size()), static_cast<double>(r())) - 1e-9));
  }

 private:
  BitString gather(const BitString& full, const std::vector<std::size_t>& pos) const {
    if (full.size() != t_.size()) throw LengthError("string length does not match the trap layout");
    BitString out(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) out.set(i, full.get(pos[i]));
    return out;
  }

  BitString t_;
  std::vector<std::size_t> traps_;
  std::vector<std::size_t> payload_;
};

class EveAccess;

// Simulated register of BB84 qubits. Each cell byte holds the preparation
// basis in bit 0, the current value in bit 1 and a disturbance marker in bit 2.
class QubitRegister {
 public:
  static constexpr std::string_view kMagic = "CTTQREG";
  static constexpr std::uint8_t kVersion = 1;

  QubitRegister() = default;

  // Cell j holds H^{t_j} |xi_j>.
  static QubitRegister prepare(const BitString& xi, const BitString& t) {
    if (xi.size() != t.size()) throw LengthError("xi and t must have equal length");
    QubitRegister reg;
    reg.cells_.resize(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) reg.cells_[j] = make_cell(t.get(j), xi.get(j));
    return reg;
  }

  static QubitRegister prepare(const BitString& xi, const TrapLayout& layout, std::size_t r) {
    if (layout.r() != r) throw DomainError("trap layout weight differs from r");
    return prepare(xi, layout.bits());
  }

  std::size_t size() const { return cells_.size(); }

  // Independent same-basis flip of each cell with probability beta0.
  void apply_storage_noise(double beta0, Rng& rng) {
    if (!(beta0 >= 0 && beta0 < 0.5)) throw DomainError("storage flip probability must lie in [0, 1/2)");
    if (beta0 == 0) return;
    for (auto& c : cells_) {
      if (rng.bernoulli(beta0)) c ^= kValueBit | kDisturbedBit;
    }
  }

  // Projective measurement of every cell; cross-basis outcomes are fresh
  // uniform bits and each cell collapses onto its outcome.
  BitString measure(const BitString& bases, Rng& rng) {
    if (bases.size() != cells_.size()) throw LengthError("basis string length differs from the register");
    BitString out(cells_.size());
    for (std::size_t j = 0; j < cells_.size(); ++j) out.set(j, measure_cell(j, bases.get(j), rng));
    return out;
  }

  // Simulation checkpoint: magic, version byte, little-endian u64 count, one byte per cell.
  std::vector<std::uint8_t> to_bytes() const {
    std::vector<std::uint8_t> out(kMagic.begin(), kMagic.end());
    out.push_back(kVersion);
    const std::uint64_t n = cells_.size();
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    out.insert(out.end(), cells_.begin(), cells_.end());
    return out;
  }

  static QubitRegister from_bytes(const std::vector<std::uint8_t>& bytes) {
    const std::size_t header = kMagic.size() + 9;
    if (bytes.size() < header || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
      throw ParseError("not a qubit register checkpoint");
    }
    if (bytes[kMagic.size()] != kVersion) throw ParseError("unsupported qubit register version");
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= std::uint64_t{bytes[kMagic.size() + 1 + i]} << (8 * i);
    if (bytes.size() - header != n) throw ParseError("qubit register length mismatch");
    QubitRegister reg;
    reg.cells_.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
    for (auto c : reg.cells_) {
      if (c & ~kAllBits) throw ParseError("corrupt qubit register cell");
    }
    return reg;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (auto b : to_bytes()) {
      out.push_back(kDigits[b >> 4]);
      out.push_back(kDigits[b & 15]);
    }
    return out;
  }

  static QubitRegister from_hex(std::string_view hex) {
    if (hex.size() % 2) throw ParseError("odd-length register hex");
    std::vector<std::uint8_t> bytes;
    auto digit = [](char c) -> int {
      if (c >= '0' && c <= '9') return c - '0';
      if (c >= 'a' && c <= 'f') return c - 'a' + 10;
      throw ParseError("bad hex digit in register");
    };
    for (std::size_t i = 0; i < hex.size(); i += 2) {
      bytes.push_back(static_cast<std::uint8_t>(digit(hex[i]) << 4 | digit(hex[i + 1])));
    }
    return from_bytes(bytes);
  }

  friend bool operator==(const QubitRegister&, const QubitRegister&) = default;

 private:
  friend class EveAccess;

  static constexpr std::uint8_t kBasisBit = 1;
  static constexpr std::uint8_t kValueBit = 2;
  static constexpr std::uint8_t kDisturbedBit = 4;
  static constexpr std::uint8_t kAllBits = 7;

  static std::uint8_t make_cell(bool hadamard, bool value) {
    return static_cast<std::uint8_t>((hadamard ? kBasisBit : 0) | (value ? kValueBit : 0));
  }

  bool measure_cell(std::size_t j, bool hadamard, Rng& rng) {
    std::uint8_t& c = cells_[j];
    const bool same = ((c & kBasisBit) != 0) == hadamard;
    const bool value = same ? (c & kValueBit) != 0 : rng.next_bit();
    const std::uint8_t disturbed = same ? (c & kDisturbedBit) : kDisturbedBit;
    c = make_cell(hadamard, value) | disturbed;
    return value;
  }

  void replace_cell(std::size_t j, bool hadamard, bool value) { cells_[j] = make_cell(hadamard, value) | kDisturbedBit; }

  std::vector<std::uint8_t> cells_;
};

// The only handle an adversary receives: per-cell measurement and
// re-preparation, never the hidden records.
class EveAccess {
 public:
  explicit EveAccess(QubitRegister& reg) : reg_(&reg) {}

  std::size_t size() const { return reg_->size(); }
  bool measure(std::size_t j, Basis basis, Rng& rng) {
    check(j);
    return reg_->measure_cell(j, basis == Basis::kHadamard, rng);
  }
  void replace(std::size_t j, Basis basis, bool value) {
    check(j);
    reg_->replace_cell(j, basis == Basis::kHadamard, value);
  }

 private:
  void check(std::size_t j) const {
    if (j >= reg_->size()) throw LengthError("cell index out of range");
  }

  QubitRegister* reg_;
};

enum class BasisPolicy { kRandom, kAllStandard, kAllHadamard };

inline BasisPolicy parse_basis_policy(std::string_view name) {
  if (name == "random-basis") return BasisPolicy::kRandom;
  if (name == "all-standard") return BasisPolicy::kAllStandard;
  if (name == "all-hadamard") return BasisPolicy::kAllHadamard;
  throw ParseError("unknown basis policy: " + std::string(name));
}

// Measure every cell under the policy and re-prepare the observed state.
inline void intercept_resend(EveAccess& eve, BasisPolicy policy, Rng& rng) {
  for (std::size_t j = 0; j < eve.size(); ++j) {
    Basis b = Basis::kStandard;
    if (policy == BasisPolicy::kAllHadamard || (policy == BasisPolicy::kRandom && rng.next_bit())) b = Basis::kHadamard;
    const bool value = eve.measure(j, b, rng);
    eve.replace(j, b, value);
  }
}

inline void attack_intercept_resend(QubitRegister& reg, BasisPolicy policy, Rng& rng) {
  EveAccess eve(reg);
  intercept_resend(eve, policy, rng);
}

// A named per-cell intervention acting through EveAccess only.
struct EveStrategy {
  std::string name;
  std::function<void(EveAccess&, Rng&)> intervene;
};

inline EveStrategy intercept_resend_strategy(BasisPolicy policy) {
  static constexpr const char* kNames[] = {"intercept-resend/random-basis", "intercept-resend/all-standard",
                                           "intercept-resend/all-hadamard"};
  return {kNames[static_cast<int>(policy)], [policy](EveAccess& eve, Rng& rng) { intercept_resend(eve, policy, rng); }};
}

}  // namespace ctt
