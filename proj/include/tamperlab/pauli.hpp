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

#include "tamperlab/linalg.hpp"

namespace tl {

// n-qubit Pauli operator in symplectic form with a global phase i^phase_log.
// The matrix realization is i^{phase_log} * prod_j X_j^{x_j} Z_j^{z_j}
// (per qubit, X applied after Z: X^x Z^z).
struct PauliOp {
  uint32_t x_bits = 0;
  uint32_t z_bits = 0;
  int phase_log = 0;  // exponent of i, mod 4
  int n = 1;

  static PauliOp identity(int n) { return PauliOp{0, 0, 0, n}; }

  // Index in [0, 4^n): interleaved (x, z) pairs per qubit.
  static PauliOp from_index(int n, uint64_t index);
  uint64_t index() const;

  bool is_identity_mod_phase() const { return x_bits == 0 && z_bits == 0; }

  Mat matrix() const;

  // Symplectic composition: (*this) * other with phase tracking.
  PauliOp compose(const PauliOp& other) const;

  bool equals_mod_phase(const PauliOp& o) const {
    return x_bits == o.x_bits && z_bits == o.z_bits;
  }
  bool operator==(const PauliOp& o) const {
    return x_bits == o.x_bits && z_bits == o.z_bits &&
           phase_log == o.phase_log && n == o.n;
  }
};

// All 4^n Pauli operators mod phase, index order.
std::vector<PauliOp> enumerate_pauli(int n);

// X^a / Z^b string operators for a bit vector.
Mat pauli_x_string(int n, uint32_t a);
Mat pauli_z_string(int n, uint32_t b);

}  // namespace tl
