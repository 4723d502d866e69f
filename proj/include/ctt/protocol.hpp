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

// Store and retrieve state machines of the delegated-storage protocol.
//
// store:    m0 = Compress(mu); p = w m0 = m || m_rest; draw xi, t (|t| = r);
//           v = xi_T, x = xi_rest; Psi = (x) H^{t_j} |xi_j>; s = Syn x;
//           z = first l bits of u x; c = m + z; theta = Tag(eta, w || u || c).
// retrieve: MAC check; measure T in the Hadamard basis and the rest in the
//           standard basis; abort if |v' + v| > beta r; x^ = x' + SynDec(s + Syn x');
//           m^ = f(u', x^) + c'; mu^ = Decompress(w'^-1 (m^ || m_rest)).

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ctt/bitstring.hpp"
#include "ctt/code_registry.hpp"
#include "ctt/error.hpp"
#include "ctt/gf2_field.hpp"
#include "ctt/kv_format.hpp"
#include "ctt/mac.hpp"
#include "ctt/params.hpp"
#include "ctt/qchannel.hpp"
#include "ctt/randomizer.hpp"
#include "ctt/rng.hpp"
#include "ctt/stats.hpp"

namespace ctt {

// Everything kept on the server.
struct ServerBundle {
  FieldElement w;     // randomizer seed
  BitString u;        // extractor seed, d bits
  BitString c;        // ciphertext, l bits
  BitString theta;    // tag, lambda bits
  QubitRegister psi;  // simulated qubits

  // Authenticated string w || u || c.
  BitString mac_input() const { return concat(concat(w.bits(), u), c); }

  KvDocument to_document() const {
    KvDocument doc("bundle", 1);
    doc.set("w", w.serialize());
    doc.set("u", u.serialize());
    doc.set("c", c.serialize());
    doc.set("theta", theta.serialize());
    // The register is a simulation checkpoint; real qubits cannot be copied.
    doc.set("psi_checkpoint", psi.to_hex());
    return doc;
  }

  static ServerBundle from_document(const KvDocument& doc) {
    if (doc.kind() != "bundle" || doc.version() != 1) throw ParseError("not a version 1 bundle document");
    return {FieldElement::deserialize(doc.get("w")), BitString::deserialize(doc.get("u")),
            BitString::deserialize(doc.get("c")), BitString::deserialize(doc.get("theta")),
            QubitRegister::from_hex(doc.get("psi_checkpoint"))};
  }
};

// Everything Alice remembers.
struct ClientSecrets {
  MacKey eta;
  TrapLayout traps;
  BitString v;       // trap values, r bits
  BitString s;       // syndrome, n - kappa_code bits; empty when delegated further
  BitString m_rest;  // randomizer remainder, randomizer_degree - l bits
  std::string code;
  std::string prefix_code;
  std::size_t syndrome_bits = 0;  // |s| before any delegation

  // Compact accounting: MAC key, ceil(log2 C(n + r, r)) for T, trap values,
  // syndrome (when held locally) and the randomizer remainder.
  std::size_t accounted_bits() const {
    return eta.key_bits() + traps.encoded_bits() + v.size() + s.size() + m_rest.size();
  }

  KvDocument to_document() const {
    KvDocument doc("secrets", 1);
    doc.set("eta", eta.serialize());
    doc.set("t", traps.bits().serialize());
    doc.set("v", v.serialize());
    doc.set("s", s.serialize());
    doc.set("m_rest", m_rest.serialize());
    doc.set("code", code);
    doc.set("prefix_code", prefix_code);
    doc.set("syndrome_bits", std::uint64_t{syndrome_bits});
    return doc;
  }

  static ClientSecrets from_document(const KvDocument& doc) {
    if (doc.kind() != "secrets" || doc.version() != 1) throw ParseError("not a version 1 secrets document");
    return {MacKey::deserialize(doc.get("eta")),
            TrapLayout(BitString::deserialize(doc.get("t"))),
            BitString::deserialize(doc.get("v")),
            BitString::deserialize(doc.get("s")),
            BitString::deserialize(doc.get("m_rest")),
            doc.get("code"),
            doc.get("prefix_code"),
            static_cast<std::size_t>(doc.get_uint("syndrome_bits"))};
  }
};

enum class AbortReason { kNone, kMac, kTrap, kDecode };

inline const char* to_string(AbortReason r) {
  switch (r) {
    case AbortReason::kNone:
      return "none";
    case AbortReason::kMac:
      return "mac";
    case AbortReason::kTrap:
      return "trap";
    case AbortReason::kDecode:
      return "decode";
  }
  return "?";
}

struct RetrievalOutcome {
  bool omega = false;
  std::optional<BitString> message;  // present iff omega
  AbortReason reason = AbortReason::kNone;
  std::size_t trap_errors = 0;  // |v' + v|, when measured

  static RetrievalOutcome abort(AbortReason why, std::size_t trap_errors = 0) { return {false, std::nullopt, why, trap_errors}; }
};

// One configured protocol instance: parameters, code and prefix code.
class Protocol {
 public:
  Protocol(ProtocolParams params, PrefixCode prefix)
      : params_(std::move(params)),
        code_(make_code(params_.code)),
        prefix_(std::move(prefix)),
        randomizer_field_(params_.randomizer_degree),
        extractor_field_(params_.d) {
    const auto bad = check_params(params_);
    if (!bad.empty()) throw DomainError("inconsistent parameters: " + bad.front());
    if (prefix_.ell0() != params_.ell0) throw DomainError("prefix code length differs from l0");
    if (code_->n() != params_.n || code_->kappa() < params_.kappa) throw DomainError("code does not match n and kappa");
  }

  const ProtocolParams& params() const { return params_; }
  const LinearCode& code() const { return *code_; }
  const PrefixCode& prefix_code() const { return prefix_; }

  // First l bits of u x in the extractor field, x zero-extended to d bits.
  BitString extract(const BitString& u, const BitString& x) const {
    BitString xe = x;
    xe.resize(params_.d);
    return phi(extractor_field_.element(u), extractor_field_.element(std::move(xe)), params_.ell);
  }

  std::pair<ServerBundle, ClientSecrets> store(const BitString& mu, Rng& rng) const {
    const auto& P = params_;
    // Compress and randomize.
    const BitString m0 = prefix_.compress(mu, rng);
    const FieldElement w = randomizer_field_.random_nonzero(rng);
    RandomizedMessage rm = randomize(m0, w, P.ell);
    // Traps at secret positions, payload in the standard basis.
    TrapLayout layout = TrapLayout::random(P.n, P.r, rng);
    const BitString xi = rng.random_bits(P.n + P.r);
    BitString v = layout.gather_traps(xi);
    const BitString x = layout.gather_payload(xi);
    QubitRegister psi = QubitRegister::prepare(xi, layout, P.r);
    // One-time pad from the extracted payload; the client keeps its syndrome.
    BitString u = rng.random_bits(P.d);
    BitString s = code_->syn(x);
    BitString c = rm.m ^ extract(u, x);
    // Authenticate the classical transcript.
    MacKey eta = MacKey::generate(P.lambda, rng);
    ServerBundle bundle{w, std::move(u), std::move(c), BitString(), std::move(psi)};
    bundle.theta = mac_tag(eta, bundle.mac_input());
    const std::size_t syndrome_bits = s.size();
    ClientSecrets secrets{std::move(eta), std::move(layout), std::move(v), std::move(s), std::move(rm.m_rest),
                          code_->descriptor(), prefix_.serialize(), syndrome_bits};
    return {std::move(bundle), std::move(secrets)};
  }

  // The bundle is consumed: measurement collapses its register.
  RetrievalOutcome retrieve(ServerBundle& bundle, const ClientSecrets& secrets, Rng& rng) const {
    const auto& P = params_;
    if (secrets.s.size() != secrets.syndrome_bits || secrets.s.size() != code_->syndrome_length()) {
      throw DomainError("secrets hold no syndrome of this code");
    }
    // Malformed transcripts cannot carry a valid tag.
    if (!(bundle.w.field() == randomizer_field_) || bundle.u.size() != P.d || bundle.c.size() != P.ell ||
        !mac_verify(secrets.eta, bundle.mac_input(), bundle.theta)) {
      return RetrievalOutcome::abort(AbortReason::kMac);
    }
    if (bundle.psi.size() != P.n + P.r) return RetrievalOutcome::abort(AbortReason::kTrap);
    // Trap check.
    const BitString outcome = bundle.psi.measure(secrets.traps.bits(), rng);
    const std::size_t trap_errors = (secrets.traps.gather_traps(outcome) ^ secrets.v).weight();
    if (static_cast<double>(trap_errors) > P.beta * static_cast<double>(P.r)) {
      return RetrievalOutcome::abort(AbortReason::kTrap, trap_errors);
    }
    // Correct the payload and unpad.
    const BitString x_prime = secrets.traps.gather_payload(outcome);
    const auto e = code_->syn_dec(secrets.s ^ code_->syn(x_prime));
    if (!e) return RetrievalOutcome::abort(AbortReason::kDecode, trap_errors);
    const BitString x_hat = x_prime ^ *e;
    const BitString m_hat = extract(bundle.u, x_hat) ^ bundle.c;
    // A tag match pins w' = w, which is nonzero.
    if (bundle.w.is_zero()) return RetrievalOutcome::abort(AbortReason::kMac, trap_errors);
    const BitString m0_hat = derandomize(m_hat, secrets.m_rest, bundle.w);
    try {
      return {true, prefix_.decompress(m0_hat.prefix(P.ell0)), AbortReason::kNone, trap_errors};
    } catch (const ParseError&) {
      // Only reachable after a miscorrection; no message is released.
      return RetrievalOutcome::abort(AbortReason::kDecode, trap_errors);
    }
  }

 private:
  ProtocolParams params_;
  CodePtr code_;
  PrefixCode prefix_;
  Field randomizer_field_;
  Field extractor_field_;
};

// Y = (message bits - secret bits) / message bits.
inline double usefulness(std::size_t secret_bits, double message_bits) {
  if (!(message_bits > 0)) throw DomainError("message space must hold more than one message");
  return (message_bits - static_cast<double>(secret_bits)) / message_bits;
}

inline double usefulness(const ClientSecrets& secrets, double message_bits) {
  return usefulness(secrets.accounted_bits(), message_bits);
}

// Y = (|M| - |K|) / |M| over set sizes: 1 - 2^(key bits - message bits).
inline double usefulness_cardinality(std::size_t secret_bits, double message_bits) {
  return 1 - std::exp2(static_cast<double>(secret_bits) - message_bits);
}

// Ideal-code limit: the syndrome dominates, Y -> 1 - h / (1 - h).
inline double ideal_usefulness(double beta0) {
  const double h = binary_entropy(beta0);
  return 1 - h / (1 - h);
}

// Recursive delegation: level i + 1 stores the syndrome of level i.
struct RecursiveLevel {
  Protocol protocol;
  ServerBundle bundle;
  ClientSecrets secrets;  // s is empty on every level but the last
};

struct RecursiveChain {
  std::vector<RecursiveLevel> levels;

  std::size_t total_qubits() const {
    std::size_t q = 0;
    for (const auto& l : levels) q += l.bundle.psi.size();
    return q;
  }
  std::size_t local_secret_bits() const {
    std::size_t b = 0;
    for (const auto& l : levels) b += l.secrets.accounted_bits();
    return b;
  }
};

// Parameters for a uniformly distributed message of `bits` bits stored by a
// deeper level; receives (l, l0).
using LevelParams = std::function<ProtocolParams(std::size_t ell, std::size_t ell0)>;

inline RecursiveChain recursive_store(const BitString& mu, const Protocol& top, std::size_t depth,
                                      const LevelParams& next_params, Rng& rng) {
  if (depth == 0) throw DomainError("recursion depth must be at least 1");
  RecursiveChain chain;
  auto [bundle, secrets] = top.store(mu, rng);
  chain.levels.push_back({top, std::move(bundle), std::move(secrets)});
  double message_bits = static_cast<double>(top.prefix_code().message_width());
  for (std::size_t level = 1; level < depth; ++level) {
    ClientSecrets& prev = chain.levels.back().secrets;
    const std::size_t sbits = prev.s.size();
    if (!(static_cast<double>(sbits) < message_bits)) {
      throw RecursionUnprofitableError("level " + std::to_string(level) + " syndrome (" + std::to_string(sbits) +
                                       " bits) is not shorter than its message");
    }
    // The syndrome of a uniform payload under a full-rank H is uniform.
    const std::size_t ell = extractable_length_uniform(static_cast<double>(sbits), top.params().eps0, 1024);
    Protocol proto(next_params(ell, sbits), PrefixCode::raw(sbits));
    BitString s = std::move(prev.s);
    prev.s = BitString();
    auto [b, sec] = proto.store(s, rng);
    chain.levels.push_back({std::move(proto), std::move(b), std::move(sec)});
    message_bits = static_cast<double>(sbits);
  }
  return chain;
}

// Unwinds from the deepest level; any abort aborts the whole retrieval.
inline RetrievalOutcome recursive_retrieve(RecursiveChain& chain, Rng& rng) {
  std::optional<BitString> recovered;
  for (std::size_t i = chain.levels.size(); i-- > 0;) {
    auto& lvl = chain.levels[i];
    ClientSecrets secrets = lvl.secrets;
    if (recovered) secrets.s = std::move(*recovered);
    RetrievalOutcome out = lvl.protocol.retrieve(lvl.bundle, secrets, rng);
    if (!out.omega) return out;
    recovered = std::move(out.message);
    if (i == 0) return {true, std::move(recovered), AbortReason::kNone, out.trap_errors};
  }
  return RetrievalOutcome::abort(AbortReason::kDecode);
}

// The classical part of a bundle as an adversary sees and edits it.
struct TranscriptView {
  FieldElement& w;
  BitString& u;
  BitString& c;
  BitString& theta;
};

// Adversary acting on the classical transcript and, through EveAccess only,
// on the qubits.
struct Adversary {
  std::string name;
  std::function<void(TranscriptView&, EveAccess&, Rng&)> act;
};

inline void apply_adversary(const Adversary& adv, ServerBundle& bundle, Rng& rng) {
  TranscriptView view{bundle.w, bundle.u, bundle.c, bundle.theta};
  EveAccess eve(bundle.psi);
  adv.act(view, eve, rng);
}

inline Adversary passive_adversary() {
  return {"passive", [](TranscriptView&, EveAccess&, Rng&) {}};
}

inline Adversary intercept_resend_adversary(BasisPolicy policy) {
  const EveStrategy s = intercept_resend_strategy(policy);
  return {s.name, [s](TranscriptView&, EveAccess& eve, Rng& rng) { s.intervene(eve, rng); }};
}

// Flips one uniformly chosen ciphertext bit.
inline Adversary ciphertext_flip_adversary() {
  return {"flip-ciphertext", [](TranscriptView& t, EveAccess&, Rng& rng) {
            if (t.c.size()) t.c.flip(rng.uniform_below(t.c.size()));
          }};
}

}  // namespace ctt
