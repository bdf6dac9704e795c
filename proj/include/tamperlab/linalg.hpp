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

#include "tamperlab/common.hpp"

namespace tl {

Mat kron(const Mat& a, const Mat& b);
Vec kron_vec(const Vec& a, const Vec& b);

inline Mat dagger(const Mat& m) { return m.adjoint(); }

// Schatten 1-norm. Uses a Hermitian eigensolver when the matrix is Hermitian
// within tolerance, SVD otherwise.
double trace_norm(const Mat& m);

// Trace distance ||a - b||_1 (not halved).
inline double trace_distance(const Mat& a, const Mat& b) {
  return trace_norm(a - b);
}

// Uhlmann fidelity F = || sqrt(a) sqrt(b) ||_1.
double fidelity(const Mat& a, const Mat& b);

// PSD square root via Hermitian eigendecomposition, negative eigenvalues
// clipped to zero.
Mat sqrt_psd(const Mat& m);

bool is_psd(const Mat& m, double tol = kTolStrict);
bool is_unitary(const Mat& m, double tol = kTolStrict);

// Hermitian check.
bool is_hermitian(const Mat& m, double tol = kTolLoose);

// Haar-random unitary of the given dimension (QR of a Ginibre matrix).
Mat random_unitary(int dim, Rng& rng);

// Random pure state vector.
Vec random_state_vector(int dim, Rng& rng);

// Random density matrix (mixed, full support) of the given dimension:
// partial trace of a random bipartite pure state with environment dim `env`.
Mat random_density(int dim, Rng& rng, int env = 2);

// von Neumann entropy in bits, eigenvalues below 1e-14 skipped.
double von_neumann_entropy(const Mat& rho);

// ---------------------------------------------------------------------------
// Qubit-register operations on raw vectors / matrices.
//
// States are vectors over `n` qubits; qubit 0 is the MOST significant index
// bit (so a register list reads left-to-right as the tensor order).
// ---------------------------------------------------------------------------

// Applies `op` (square, dim 2^k) to qubit positions `qs` (each in [0, n)) of
// state vector `v` on n qubits.
Vec apply_to_qubits(const Mat& op, const std::vector<int>& qs, const Vec& v,
                    int n);

// Same for density matrices: K rho K^dagger requires two calls; this applies
// op on the LEFT (rows) only: (op ⊗ I) m.
Mat apply_left(const Mat& op, const std::vector<int>& qs, const Mat& m, int n);

// K rho K^dagger with K supported on qubits `qs`.
Mat conjugate_on_qubits(const Mat& k, const std::vector<int>& qs, const Mat& rho,
                        int n);

// Partial trace of rho (on n qubits) keeping positions `keep` (in their given
// order as the output tensor order).
Mat partial_trace_keep(const Mat& rho, const std::vector<int>& keep, int n);

// Marginal of a pure state: Tr_{discard} |v><v| keeping `keep`.
Mat pure_marginal_keep(const Vec& v, const std::vector<int>& keep, int n);

// Partial inner product: <bra| acting on qubit positions `qs` of |ket> (n
// qubits); bra has dim 2^{|qs|}. Returns a vector on the remaining qubits, in
// their original relative order.
Vec partial_inner(const Vec& bra, const std::vector<int>& qs, const Vec& ket,
                  int n);

// Embeds |sub> on positions `qs` with |rest> on the remaining positions
// (relative order preserved) into an n-qubit vector.
Vec embed_product(const Vec& sub, const std::vector<int>& qs, const Vec& rest,
                  int n);

// |Phi^{⊗pairs}> on 2*pairs qubits ordered (first halves..., second halves...):
// 2^{-pairs/2} sum_j |j>|j>.
Vec epr_vector(int pairs);

// Computational basis vector |x> on dim entries.
Vec basis_vector(int dim, uint64_t x);

}  // namespace tl
