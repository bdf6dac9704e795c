// Copyright 2026 The tamperlab authors
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

#include <array>
#include <optional>
#include <vector>

#include "tamperlab/channel.hpp"
#include "tamperlab/clifford.hpp"

namespace tl {

// ---------------------------------------------------------------------------
// Keyed-conjugation codes: the common core of the 2-split quantum NMC, the
// 3-split bounded-storage TDC and the NMC-to-TDC reduction. A secret key R
// selects a Clifford C_R applied to the Z block (the message plus, when
// present, one half of λ EPR pairs); classical carrier registers X and Y ride
// along on designated shares; the other EPR halves (B) sit on another share.
//
// The decoder recovers R' (equal to R exactly when the carriers were left
// intact, or an independently keyed Clifford otherwise — the ideal key
// functionality), undoes the conjugation and, when λ > 0, runs the EPR test,
// replacing the message with the abort symbol on rejection.
//
// The key average is evaluated in closed form over the full Clifford group
// (one-design identity for the tampered-key branch, the Pauli-Kraus twirl
// decomposition for the intact-key branch); both identities are unit-tested
// against explicit group enumeration.
// ---------------------------------------------------------------------------

enum class QuantumRole { None, ZBlock, BBlock };
enum class KeyMode { Ideal, CarrierDerived };

struct ShareSpec {
  int carrier_bits = 0;  // 0 = no classical carrier on this share
  QuantumRole role = QuantumRole::None;
  int ancilla_qubits = 0;
};

struct KeyedCodeSpec {
  int k = 1;            // message qubits
  int lambda = 0;       // EPR pairs (0 disables the EPR test)
  bool purified = true; // Choi experiment vs fixed basis message
  uint64_t basis_message = 0;
  std::vector<ShareSpec> shares;
  KeyMode key_mode = KeyMode::Ideal;

  int z_qubits() const { return k + lambda; }
  int z_share() const;
  int b_share() const;  // -1 when lambda == 0
  int total_ancilla() const;
  int carrier_bits_x() const;  // first carrier in share order
  // Bound formula values are attached by the code builders.
};

struct ShareAdversary {
  struct Transition {
    uint64_t carrier_out = 0;
    std::vector<Mat> kraus;  // on (share quantum block ⊗ share ancilla)
  };
  // Indexed by carrier input value (size 1 when the share has no carrier).
  std::vector<std::vector<Transition>> per_input;
};

struct KeyedAdversary {
  std::vector<ShareAdversary> shares;
  Vec ancilla;  // pure state on the concatenated ancilla registers; empty if none
  std::string label;
};

// Result of the tampering experiment. In purified mode `j` is the effective
// Choi operator on (MH ⊗ M'), index m_hat * (2^k + 1) + m', with m' = 2^k
// the abort symbol. In basis mode `probs` is the distribution over m' ∪ bot.
struct ExperimentResult {
  Mat j;
  std::vector<double> probs;
  bool purified = true;
  int k = 1;
};

class KeyedExperiment {
 public:
  KeyedExperiment(KeyedCodeSpec spec, uint64_t key_salt = 0);

  const KeyedCodeSpec& spec() const { return spec_; }
  int total_qubits() const { return n_; }

  // Exact effective channel output for one adversary.
  ExperimentResult run(const KeyedAdversary& adv) const;

  // Brute-force oracle: enumerates the ideal key over the enumerated Clifford
  // group (z_qubits() <= 2) and simulates encode/tamper/decode densely.
  ExperimentResult run_enumerated_oracle(const KeyedAdversary& adv) const;

  // Identity adversary (no carriers tampered, identity channels).
  KeyedAdversary identity_adversary() const;

  // Random adversary in the declared model: per-share random instruments on
  // (carrier ⊗ quantum ⊗ ancilla) via Stinespring sampling with `env` qubits;
  // shares with ancilla participate in a shared random pure ancilla state.
  KeyedAdversary sample_adversary(Rng& rng, int env = 2) const;

  // The tampered-key Clifford for carrier outputs (x', y').
  CliffordOp tampered_key_clifford(uint64_t xp, uint64_t yp) const;

  // Two-share marginal distance from maximally mixed, for the 3-out-of-3
  // sharing claim: the code-state marginal on the named share pair, maximised
  // over basis messages plus `random_messages` sampled pure messages. The key
  // average uses the exact Pauli-subgroup reduction of the family average.
  double two_share_marginal_distance(int share_a, int share_b,
                                     int random_messages, Rng& rng) const;

  // Single-share marginal distance between two encoded pure messages.
  double single_share_message_distance(int share, const Vec& msg0,
                                       const Vec& msg1) const;

 private:
  KeyedCodeSpec spec_;
  uint64_t key_salt_;
  int n_ = 0;  // total engine qubits: MH? + A? + M + B? + ancillas
  std::vector<int> p_mh_, p_a_, p_m_, p_b_, p_z_;
  std::vector<std::vector<int>> p_w_;  // per share
  std::vector<int> p_w_all_;

  Vec initial_state(const Vec& ancilla) const;

  struct TransitionCase {
    double weight = 1.0;  // carrier prior
    bool same = true;
    uint64_t xp = 0, yp = 0;
    uint64_t x = 0, y = 0;
    // Kraus lists per share, non-Z shares only, already positioned.
    std::vector<std::pair<std::vector<int>, const std::vector<Mat>*>> non_z;
    const std::vector<Mat>* z_kraus = nullptr;  // may be null (identity)
  };

  void accumulate_same(const TransitionCase& tc, const Vec& psi0, Mat& j) const;
  void accumulate_tamper(const TransitionCase& tc, const Vec& psi0,
                         Mat& j) const;
  void accumulate_carrier_derived(const TransitionCase& tc, const Vec& psi0,
                                  Mat& j) const;

  void decode_plain_member(const Vec& v, Mat& j) const;
  Mat reduced_marginal(const std::vector<Vec>& members,
                       const std::vector<int>& keep) const;

  ExperimentResult finish(Mat j) const;
};

// Substitution attack demonstration: every share swaps its content (carriers
// included) with a pre-shared encoding of `fixed_message`; requires the
// carrier-derived key mode so the swapped codeword decodes. Returns the
// resulting effective output.
ExperimentResult substitution_attack_run(const KeyedCodeSpec& spec,
                                         uint64_t fixed_message,
                                         uint64_t key_salt, Rng& rng);

}  // namespace tl
