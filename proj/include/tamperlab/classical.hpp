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

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tamperlab/common.hpp"

namespace tl {

// ---------------------------------------------------------------------------
// GF(2^w) and Shamir sharing
// ---------------------------------------------------------------------------

// Carry-less arithmetic in GF(2^w), w <= 24, with fixed irreducible moduli.
class GF2w {
 public:
  explicit GF2w(int w);
  int w() const { return w_; }
  uint32_t size() const { return uint32_t(1) << w_; }
  uint32_t add(uint32_t a, uint32_t b) const { return a ^ b; }
  uint32_t mul(uint32_t a, uint32_t b) const;
  uint32_t inv(uint32_t a) const;

 private:
  int w_;
  uint32_t modulus_;  // irreducible polynomial, including the x^w term
};

struct ShamirScheme {
  int parties;
  int threshold;
  int field_bits;

  // Share `secret` with explicit randomness: t-1 field coefficients.
  std::vector<uint32_t> share(uint32_t secret,
                              const std::vector<uint32_t>& coeffs) const;
  std::vector<uint32_t> share_random(uint32_t secret, Rng& rng) const;
  // Reconstruct from any >= threshold (index, value) pairs.
  uint32_t reconstruct(const std::vector<std::pair<int, uint32_t>>& pts) const;

  uint64_t randomness_space() const;
};

ShamirScheme shamir(int parties, int threshold, int field_bits);

// ---------------------------------------------------------------------------
// Tiny split-state non-malleable codes with exhaustive verification
// ---------------------------------------------------------------------------

enum class NmcGrade { Exhaustive, Ideal, Heuristic };

// A 2-split classical code on (n1, n2)-bit shares for k-bit messages, with a
// randomized encoder given as an explicit table: per message, a uniform
// distribution over (x, y) pairs. Decoding maps pairs to a message or bot.
struct ClassicalNmc {
  int k = 1;
  int n1 = 1, n2 = 1;
  // enc[m] = list of (x, y) codewords, all equally likely.
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> enc;
  // dec[(x << n2) | y] = message in [0, 2^k) or kBot.
  std::vector<int> dec;
  NmcGrade grade = NmcGrade::Exhaustive;
  double verified_error = -1;  // negative means "assumed"

  static constexpr int kBot = -1;

  int decode(uint32_t x, uint32_t y) const {
    return dec[size_t((uint64_t(x) << n2) | y)];
  }
  void check_perfect_correctness() const;
};

// Statistical distance of two distributions over {0..2^k} ∪ {bot} given as
// probability vectors (index 2^k = bot).
double statistical_distance(const std::vector<double>& a,
                            const std::vector<double>& b);

// Exhaustive non-malleability error: max over all deterministic function
// pairs (f, g) of the distance of Dec∘(f,g)∘Enc(m) to the best convex
// combination p·m + (1-p)·D_f. With `augmented` the joint distribution with
// the left share is fitted instead. Requires enumerable share spaces.
double nm_error_exhaustive(const ClassicalNmc& code, bool augmented);

// Distance of the tampered-output family {m -> dist_m} to the best convex fit
// p·m + (1-p)·D with D message independent; used by the exhaustive oracle and
// by reduction records. dist_m has 2^k + 1 entries (last = bot).
double nm_fit_distance(const std::vector<std::vector<double>>& dist_per_message);

// Single-bit bit-flip bias max_{f,g} P[Dec∘(f,g)∘Enc(b) = ¬b] - 1/2.
double dko_bitflip_bias(const ClassicalNmc& code);

// Randomized search over encoding tables, keeping the candidate with the
// smallest exhaustive error. Perfect correctness enforced.
ClassicalNmc search_tiny_nmc(int k, int n1, int n2, int trials, Rng& rng);

// ---------------------------------------------------------------------------
// Linear seeded extractor (Toeplitz) with inverter
// ---------------------------------------------------------------------------

struct LinearExtractor {
  int eta;  // source bits
  int d;    // seed bits = eta + l - 1 (Toeplitz diagonals)
  int l;    // output bits

  // Ext(w, s): l output bits.
  uint32_t extract(uint32_t w, uint64_t seed) const;
  // Row r of the seed matrix, as an eta-bit mask.
  uint32_t row(int r, uint64_t seed) const;
  // Uniform sample from Ext(·,s)^{-1}(y), or nullopt if the fiber is empty.
  std::optional<uint32_t> invert(uint32_t y, uint64_t seed, Rng& rng) const;
  // Fiber structure: particular solution + kernel basis; nullopt if empty.
  std::optional<std::pair<uint32_t, std::vector<uint32_t>>> fiber(
      uint32_t y, uint64_t seed) const;
  int rank(uint64_t seed) const;
};

LinearExtractor toeplitz_extractor(int eta, int l);

// Exhaustively measured strong-extraction error of the classical extractor:
// (1/2)|| (Ext(U,S), S) - (U_l, S) ||_1 over uniform source and seed.
double extractor_classical_error(const LinearExtractor& ext);

// Declared quantum-proof error against mu qubits of side information, via the
// leftover hash bound for two-universal families:
// (1/2) sqrt(2^{l - (eta - mu)}).
double extractor_quantum_error(const LinearExtractor& ext, int mu);

// ---------------------------------------------------------------------------
// Toy two-source non-malleable extractor stand-in
// ---------------------------------------------------------------------------

struct ToyNmExt {
  int n_bits;  // per source
  int r_bits;  // output
  uint32_t extract(uint32_t x, uint32_t y) const;
  // Exhaustive strong-extraction error: max over fixings of either source
  // side of the statistical distance of (R, X) from (U_r, X).
  double measured_strong_error() const;
  // p_same and bit-flip style checks against enumerable tampering pairs are
  // measured by the caller using extract().
};

ToyNmExt toy_nmext(int n_bits, int r_bits);

}  // namespace tl
