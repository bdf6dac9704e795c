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
#include <set>

#include "tamperlab/classical.hpp"
#include "tamperlab/qcodes.hpp"

namespace tl {

// ---------------------------------------------------------------------------
// Triangle gadget
// ---------------------------------------------------------------------------

// Register routing of the triangle gadget: party i keeps Q_i, hands X_i to
// party i-1 and (Y_i, Ehat_i) to party i+1 (indices mod 3).
struct GadgetRouting {
  // Registers held by local party slot w (0,1,2): lists of (kind, owner i)
  // with kind in {"Q", "YE", "X"}.
  static std::array<std::vector<std::pair<std::string, int>>, 3> shares();
};

struct GadgetInstance {
  int lambda = 1;  // base EPR count; the i-th inner code uses (i+1)*lambda
  int lambda_of(int i) const { return (i + 1) * lambda; }
  // Ancilla budget of the adversary tampering Q_i in the share-wise
  // reduction: the other quantum register on that party, |Ehat_{i-1}|.
  int reduction_budget(int i) const { return lambda_of((i + 2) % 3); }
};

// Share-wise tamper-detection harness for input slot i in {1, 2}: the i-th
// inner TDC with lambda_i EPR pairs against LO^3 adversaries whose Q-share
// party holds `budget_cap`-capped pre-shared ancilla qubits. Returns the
// maximum over trials of P[m' not in {m, bot}].
struct GadgetShareTdResult {
  double worst_flip = 0;
  int honored_budget = 0;
  int trials = 0;
};
GadgetShareTdResult gadget_share_td(const GadgetInstance& inst, int slot,
                                    int trials, int budget_cap, uint64_t seed);

// Pairwise-independence distance of the gadget: the sum over the three inner
// codes of their two-share marginal distances on the register pairs held by
// any two parties; returns the max over party pairs.
double gadget_pairwise_independence(const GadgetInstance& inst, uint64_t seed);

// ---------------------------------------------------------------------------
// Tamper-detecting secret sharing (component mode)
// ---------------------------------------------------------------------------

struct TdssVerdict {
  bool bot = false;
  std::vector<uint32_t> values;  // recovered per-party values when not bot
};

// Decoder logic over per-triangle verdicts: partitions T into U (three
// smallest) and T\U, rejects on any triangle bot or cross-triangle
// disagreement, drops the lowest index of each side and reconstructs.
struct TdssComponentDecoder {
  int p, t;
  ShamirScheme lrss;  // classical layer used by reconstruction

  // triangle_values[(a,b,c)] -> per-slot recovered values or bot.
  using TriangleOutcome = std::optional<std::array<uint32_t, 3>>;
  using TriangleMap =
      std::map<std::array<int, 3>, TriangleOutcome>;

  // Returns the recovered secret or nullopt for bot.
  std::optional<uint32_t> decode(const std::vector<int>& t_set,
                                 const TriangleMap& outcomes) const;
};

// ---------------------------------------------------------------------------
// Leakage-resilient secret sharing (Appendix-C construction)
// ---------------------------------------------------------------------------

struct LrssScheme {
  int p = 3, t = 2, k = 1;  // parties, threshold, leakers
  int mu = 1;               // leakage qubits
  int eta = 6;              // extractor source bits
  int l = 2;                // message/share bits (GF(2^l) Shamir)
  LinearExtractor ext;      // Toeplitz eta -> l with seed d = eta + l - 1

  struct Shares {
    bool bot = false;
    std::vector<uint32_t> w;      // eta-bit sources
    std::vector<uint32_t> m;      // only on bot: the exposed classical shares
    // SdShare components: per party, per seed, one GF(2^d) element.
    std::vector<std::array<uint32_t, 3>> s;
  };

  Shares share(uint32_t msg, Rng& rng) const;
  std::optional<uint32_t> reconstruct(const Shares& sh,
                                      const std::vector<int>& t_set) const;

  // Exact encoder bot probability over all (message, coefficient, seed)
  // choices.
  double bot_probability() const;

  // Measured component errors.
  double ext_classical_error() const;
  double ext_quantum_error() const;  // leftover-hash bound at mu qubits

  // Exact leaked-state trace distance between two messages for the local
  // leakage query (T = {holder}, K = {leaker}) under a seeded channel mapping
  // the leaked share content to a single-qubit pure state. Exact over all
  // randomness; the third party's seed-share chunks are uniform and message
  // independent and drop out analytically.
  double leaked_distance(uint32_t m0, uint32_t m1, int holder, int leaker,
                         uint64_t channel_seed) const;
};

LrssScheme build_lrss();

// ---------------------------------------------------------------------------
// LOCC non-malleable secret sharing compiler (mock hiding layer)
// ---------------------------------------------------------------------------

struct LoccNmssScheme {
  int p = 5, t = 3;
  int share_bits = 3;    // classical NMSS share width (Shamir field)
  int syndrome_pairs = 1;

  // Share S_i register labels: {X_{i,j}} ∪ {Y_{j,i}}, 2(p-1) registers.
  std::vector<std::string> share_registers(int i) const;

  // Deterministic decode partition: greedy pairs in index order, last triple
  // when |T| is odd.
  static std::vector<std::vector<int>> partition(const std::vector<int>& t_set);

  // Honest share/reconstruct through the mock hiding layer.
  std::vector<uint32_t> share_values(uint32_t msg, Rng& rng) const;
  uint32_t reconstruct(const std::vector<uint32_t>& values,
                       const std::vector<int>& t_set) const;

  // One-round LOCC^p adversary on the mock: emits the reduction record: the
  // transcript TV across share fixings (zero under the mock), and the maximal
  // deviation of the per-transcript induced joint mask law from the product
  // across partition cells.
  struct ReductionRecord {
    double transcript_tv = 0;
    double partition_factorization_tv = 0;
  };
  ReductionRecord run_adversary(const std::vector<int>& t_set, Rng& rng) const;
};

LoccNmssScheme build_locc_nmss(int p, int t);

}  // namespace tl
