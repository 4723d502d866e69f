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

// One-time polynomial-evaluation MAC over GF(2^lambda):
//   tag = b + sum_{i=1..B+1} m_i a^i,
// where m_1..m_B are the lambda-bit blocks of the message (last one zero
// padded) and m_{B+1} is the message bit length. Distinct messages of bit
// length < 2^lambda give distinct coefficient vectors, so a forgery succeeds
// for at most B+1 values of a: Pr <= (B+1) / 2^lambda.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "ctt/bitstring.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_field.hpp"
#include "ctt/rng.hpp"

namespace ctt {

struct MacKey {
  FieldElement a;
  FieldElement b;

  std::size_t lambda() const { return a.degree(); }
  std::size_t key_bits() const { return 2 * lambda(); }

  static MacKey generate(std::size_t lambda, Rng& rng) {
    const Field f(lambda);
    return {f.random(rng), f.random(rng)};
  }

  // "<a>;<b>" using the field-element text form.
  std::string serialize() const { return a.serialize() + ";" + b.serialize(); }

  static MacKey deserialize(const std::string& text) {
    const auto semi = text.find(';');
    if (semi == std::string::npos) throw ParseError("MAC key must be <a>;<b>");
    MacKey k{FieldElement::deserialize(text.substr(0, semi)), FieldElement::deserialize(text.substr(semi + 1))};
    if (!(k.a.field() == k.b.field())) throw ParseError("MAC key halves come from different fields");
    return k;
  }
};

// Number of data blocks B for a message of msg_bits bits.
inline std::size_t mac_block_count(std::size_t msg_bits, std::size_t lambda) {
  return (msg_bits + lambda - 1) / lambda;
}

// Largest message the length block can describe: bit length < 2^lambda.
inline bool mac_accepts_length(std::size_t msg_bits, std::size_t lambda) {
  return lambda >= 64 || msg_bits < (std::size_t{1} << lambda);
}

inline BitString mac_tag(const MacKey& key, const BitString& msg) {
  const std::size_t lambda = key.lambda();
  if (!(key.a.field() == key.b.field())) throw DegreeMismatchError("MAC key halves come from different fields");
  if (!mac_accepts_length(msg.size(), lambda)) throw LengthError("message too long for this MAC tag length");
  const Field& f = key.a.field();
  const std::size_t B = mac_block_count(msg.size(), lambda);
  // Horner from the highest power: acc = (...((m_{B+1}) a + m_B) a + ... + m_1) a.
  FieldElement acc = gf_mul(f.element(BitString::from_uint(msg.size(), lambda)), key.a);
  for (std::size_t i = B; i-- > 0;) {
    const std::size_t pos = i * lambda;
    BitString block = msg.slice(pos, std::min(lambda, msg.size() - pos));
    block.resize(lambda);
    acc = gf_mul(gf_add(acc, f.element(std::move(block))), key.a);
  }
  return gf_add(acc, key.b).bits();
}

inline bool mac_verify(const MacKey& key, const BitString& msg, const BitString& tag) {
  if (tag.size() != key.lambda() || !mac_accepts_length(msg.size(), key.lambda())) return false;
  return mac_tag(key, msg) == tag;
}

struct MacSizes {
  std::size_t lambda = 0;     // implemented tag length
  std::size_t key_bits = 0;   // implemented key length, 2 lambda
  std::size_t blocks = 0;     // data blocks B at that lambda
  double forgery_bound = 0;   // (B + 1) / 2^lambda
  double reference_key_bits = 0;  // 2 log(1/eps) + 2 log log |M| with log |M| = msg_len
  double reference_tag_bits = 0;  // log(1/eps) + log log |M|
};

// Smallest lambda with (B(lambda) + 1) / 2^lambda <= eps_mac and msg_len < 2^lambda.
inline MacSizes mac_sizes(double eps_mac, std::size_t msg_len) {
  if (!(eps_mac > 0 && eps_mac <= 1)) throw DomainError("MAC security parameter must lie in (0, 1]");
  MacSizes out;
  for (std::size_t lambda = 1;; ++lambda) {
    const std::size_t B = mac_block_count(msg_len, lambda);
    const double bound = static_cast<double>(B + 1) * std::ldexp(1.0, -static_cast<int>(lambda));
    if (bound <= eps_mac && mac_accepts_length(msg_len, lambda)) {
      out.lambda = lambda;
      out.key_bits = 2 * lambda;
      out.blocks = B;
      out.forgery_bound = bound;
      break;
    }
    if (lambda > 4096) throw DomainError("MAC parameters out of range");
  }
  const double loglog = msg_len > 1 ? std::log2(static_cast<double>(msg_len)) : 0.0;
  out.reference_key_bits = 2 * std::log2(1 / eps_mac) + 2 * loglog;
  out.reference_tag_bits = std::log2(1 / eps_mac) + loglog;
  return out;
}

// A MAC key that refuses to produce a second tag.
class OneTimeMacKey {
 public:
  explicit OneTimeMacKey(MacKey key) : key_(std::move(key)) {}

  BitString tag(const BitString& msg) {
    if (used_) throw DomainError("one-time MAC key already used");
    used_ = true;
    return mac_tag(key_, msg);
  }

  bool verify(const BitString& msg, const BitString& tag) const { return mac_verify(key_, msg, tag); }
  bool used() const { return used_; }
  const MacKey& key() const { return key_; }

 private:
  MacKey key_;
  bool used_ = false;
};

}  // namespace ctt
