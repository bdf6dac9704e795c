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

#include <vector>

#include "tamperlab/clifford.hpp"
#include "tamperlab/cq_state.hpp"

namespace tl {

// (1/4^{|A|}) sum_Q (Q ⊗ I) rho (Q^dagger ⊗ I) over the Pauli operators on
// register group A; equals U_A ⊗ rho_B exactly.
CqState pauli_one_design_twirl(const CqState& state,
                               const std::vector<std::string>& reg_a);

// (1/|G|) sum_C (I ⊗ C^dagger P C) rho (I ⊗ C^dagger Q^dagger C) with C
// ranging over the enumerated Clifford group mod phase on A (n <= 2). Raw
// matrix form: `qa` are the qubit positions of A inside rho (n qubits total).
Mat clifford_pq_twirl(const Mat& rho, const std::vector<int>& qa, int n,
                      const PauliOp& p, const PauliOp& q);

// Pauli-basis Kraus splitting of a channel on (A, E): Kraus M_i decomposed as
// sum_Q Q_A ⊗ M_i^Q. Phi1 collects the Q = I coefficients, Phi2 the rest;
// Phi1 + Phi2 is trace preserving, and the group-twirled channel
// avg_C C^dagger Λ(C · C^dagger) C equals
//   Phi1-Kraus acting on E of psi_{AE..}
//   + sum-Phi2-Kraus acting on E of [ (4^{|A|}(psi_{¬A} ⊗ U_A) - psi) / (4^{|A|}-1) ]
// exactly, which is within 2/(4^{|A|}-1) of Phi1(psi) + Phi2(psi_{¬A}) ⊗ U_A.
struct TwirlDecomposition {
  std::vector<Mat> phi1;  // Kraus on E
  std::vector<Mat> phi2;  // Kraus on E
  int a_qubits = 0;
  int e_qubits = 0;
  double residual_bound = 0;  // 2/(4^{|A|}-1) + numerical slack
};

// `kraus` act on (A ⊗ E) with A as the leading tensor factor.
TwirlDecomposition twirl_with_side_info(const std::vector<Mat>& kraus,
                                        int a_qubits, int e_qubits);

// Applies the exact twirled channel to rho (n qubits), with A at positions
// `qa` and E at positions `qe`, using the decomposition's closed form.
Mat twirl_decomposition_apply(const TwirlDecomposition& d, const Mat& rho,
                              const std::vector<int>& qa,
                              const std::vector<int>& qe, int n);

// The approximate form Phi1(psi) + Phi2(psi_{¬A}) ⊗ U_A.
Mat twirl_decomposition_apply_approx(const TwirlDecomposition& d,
                                     const Mat& rho,
                                     const std::vector<int>& qa,
                                     const std::vector<int>& qe, int n);

// Brute-force twirl over the enumerated group (n_A <= 2) for validation:
// avg_C (C^dagger ⊗ I) Λ[(C ⊗ I) rho (C^dagger ⊗ I)] (C ⊗ I).
Mat twirl_channel_enumerated(const std::vector<Mat>& kraus,
                             const std::vector<int>& qa,
                             const std::vector<int>& qae, const Mat& rho,
                             int n);

// Transpose method check on the canonical purification of U_A.
bool transpose_trick_check(const Mat& m, double tol = kTolStrict);

}  // namespace tl
