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
#include <vector>

#include "tamperlab/channel.hpp"
#include "tamperlab/fitters.hpp"

namespace tl {

// ---------------------------------------------------------------------------
// Single-qubit non-malleability characterization
// ---------------------------------------------------------------------------

struct SingleQubitNmReport {
  Eigen::Matrix3d t_matrix;
  Eigen::Vector3d t_vector;
  double bias_min = 0, bias_max = 0;  // negation bias over the sphere net
  double p = 0;                       // (1 - median v^T T v) / 2
  double choi_min = 0, choi_max = 0;  // <beta| (I ⊗ Λ)(Phi) |beta> over the net
  bool nm_verdict = false;            // spread <= 2 * epsilon
  bool choi_verdict = false;
  double t_norm_bound_ok = false;     // ||t||_2 <= 2 (p + eps)
  double t_matrix_deviation = 0;      // ||T - (1-2p) I||_F
};

// Fibonacci sphere with `points` directions; Choi net from traceless
// Cliffords plus `extra` random traceless unitaries.
SingleQubitNmReport single_qubit_nm_check(const Channel& ch, double epsilon,
                                          int points = 233, int extra = 64,
                                          uint64_t seed = 17);

// ---------------------------------------------------------------------------
// Entropy utilities (capacity checks)
// ---------------------------------------------------------------------------

// Conditional entropy S(X|Q) and mutual information I(X:Q) of the cq state
// rho_XQ = 2^{-k} sum_x |x><x| ⊗ enc(x), with enc given as density matrices.
struct EntropyReport {
  double conditional_entropy;  // S(Xhat | Q)
  double mutual_information;   // I(Xhat : Q1) when q1_dim > 0
};

EntropyReport entropy_suite(const std::vector<Mat>& encodings,
                            const std::vector<int>& q1_positions, int n_qubits);

// ---------------------------------------------------------------------------
// LOCC strategy catalog and distinguishability lower bound
// ---------------------------------------------------------------------------

// A projective product basis on a share, given as a unitary whose columns are
// the measurement vectors.
struct LoccStrategyCatalog {
  // Bases per share (same list reused): computational, Hadamard, plus random.
  std::vector<Mat> bases_per_qubit;  // 2x2 unitaries applied per qubit
  std::vector<Mat> share_bases;      // optional full-share bases (e.g. Bell)
  int depth = 2;
};

LoccStrategyCatalog default_catalog(int random_bases, uint64_t seed);

// Lower bound on the LOCC distinguishing bias |P[guess=0|rho0]-P[guess=0|rho1]|
// over the catalog: one party measures (a catalog basis), the other applies a
// Helstrom measurement on its conditional residual; depth-2 adds a second
// conditioned measurement round with a classical decision.
double locc_bias_lower_bound(const Mat& rho0, const Mat& rho1,
                             const std::vector<int>& share_a_qubits,
                             const std::vector<int>& share_b_qubits, int n,
                             const LoccStrategyCatalog& catalog);

}  // namespace tl
