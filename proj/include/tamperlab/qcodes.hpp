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

#include <string>

#include "tamperlab/analysis.hpp"
#include "tamperlab/classical.hpp"
#include "tamperlab/engine.hpp"

namespace tl {

// ---------------------------------------------------------------------------
// Engine-backed keyed constructions
// ---------------------------------------------------------------------------

struct KeyedCode {
  std::string name;
  KeyedCodeSpec spec;
  std::string bound_formula;
  double bound_value = 0;
  uint64_t key_salt = 0;
};

// Appendix-style 2-split quantum NMC: shares (Y | X, Z), Z = C_R(M), ideal
// augmented key. Average-case bound eps_key + 2^{2-k}.
KeyedCode build_qnmc2_lo(int k, int carrier_x = 2, int carrier_y = 1,
                         uint64_t salt = 1);

// Bounded-storage 3-split TDC: shares (X | Y,E | Z = C_R(A, M)). The flag
// selects which EPR half is conjugated; both wirings are security-equivalent
// under relabeling. Bound 2 eps_key + 6 * 2^{e3 - lambda}.
KeyedCode build_tdc3(int k, int lambda, int e3, bool conjugate_inner_half,
                     int carrier_x = 2, int carrier_y = 1, uint64_t salt = 2);

// NMC-to-TDC reduction on the 2-split inner NMC: shares (Y | X,Z | B=Ehat),
// Z = C_R(A, M) with A the inner EPR halves. Bound eps + 2^{1-lambda}
// (unentangled) or eps + 2^{1+a-lambda} with an a-qubit ancilla on the new
// share.
KeyedCode build_reduction_tdc(int k, int lambda, int a_budget,
                              int carrier_x = 2, int carrier_y = 1,
                              uint64_t salt = 3);

// Pad compiler: k -> k - pad qubits; the padded message is U on the pad
// qubits. Privacy bound 4 sqrt(eps + 2^{1-pad}).
struct PaddedCode {
  KeyedCode base;
  int pad = 0;
  double privacy_bound = 0;
};
PaddedCode pad_compiler(const KeyedCode& code, int pad);

// ---------------------------------------------------------------------------
// Single-bit NMC against LOCC^2 (Bell-pair code)
// ---------------------------------------------------------------------------

struct BitNmcLocc2 {
  int n;  // EPR pairs; shares hold n qubits each

  Mat encode(int bit) const;  // density on 2n qubits (A block then B block)
  // Probability that the Bell-basis decoder outputs 0 on rho.
  double decode_zero_prob(const Mat& rho) const;
  // Brute-force oracle: enumerate the 4^n - 1 Bell branches of Enc(1), apply
  // the Kraus map on the listed qubits, count returns to outcome (0,0).
  double flip_oracle(const std::vector<Mat>& kraus,
                     const std::vector<int>& qs) const;
  std::vector<int> share_a() const;
  std::vector<int> share_b() const;
};

BitNmcLocc2 build_bitnmc_locc2(int n);

// A one-round LOCC tampering adversary on a bipartite code: the actor share
// measures in a product basis (optionally preceded by a local pre-unitary),
// the other share applies a conditioned unitary.
struct LoccTamperAdversary {
  struct Branch {
    std::vector<Mat> kraus_a;
    std::vector<Mat> kraus_b;
  };
  std::vector<Branch> branches;  // one per transcript
  void validate(int64_t da, int64_t db) const;
  Mat apply(const Mat& rho, const std::vector<int>& qa,
            const std::vector<int>& qb, int n) const;
};

LoccTamperAdversary sample_locc_tamper(int qubits_a, int qubits_b, int rounds,
                                       Rng& rng);

// ---------------------------------------------------------------------------
// Bell-parity data hiding
// ---------------------------------------------------------------------------

struct BellParityHiding {
  int n;  // pairs
  Mat encode(int bit) const;  // density on 2n qubits
  int decode_outcome_parity(uint64_t a_bits, uint64_t b_bits) const;
  double decode_correct_prob(const Mat& rho, int bit) const;
  std::vector<int> share_a() const;
  std::vector<int> share_b() const;
};

BellParityHiding hiding_bell_parity(int n);

// ---------------------------------------------------------------------------
// 4-split NMC against LOCC: hiding ∘ classical NMC, with the ideal hiding
// mock (XOR syndrome registers; tampering the physical registers perturbs the
// decoded value by a value-independent mask).
// ---------------------------------------------------------------------------

struct Nmc4Locc {
  ClassicalNmc inner;         // 2-split classical NMC on (n1, n2)-bit shares
  int syndrome_pairs;         // EPR pairs per hiding instance
  // Runs one LOCC^4 adversary (one-round catalog) and returns:
  //  - per-message output distributions (for the NM fit),
  //  - the transcript TV distance across share-value fixings,
  //  - the max TV distance of the per-transcript joint from the product of
  //    its marginals (the Markov/factorization record).
  struct RunRecord {
    std::vector<std::vector<double>> message_dists;  // [m][m' or bot]
    double transcript_tv = 0;
    double factorization_tv = 0;
  };
  RunRecord run_adversary(Rng& rng) const;
};

Nmc4Locc build_nmc4_locc(ClassicalNmc inner, int syndrome_pairs);

}  // namespace tl
