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

#include <memory>
#include <optional>
#include <vector>

#include "tamperlab/pauli.hpp"

namespace tl {

struct CliffordOp {
  Mat unitary;
  int n = 1;

  // C^dagger P C as a phase-tracked Pauli, or nullopt if the matrix fails to
  // normalize the Pauli group (within tolerance).
  std::optional<PauliOp> conjugate_pauli(const PauliOp& p,
                                         double tol = kTolLoose) const;
  bool is_clifford(double tol = kTolLoose) const;
};

// Complete list of n-qubit Cliffords modulo global phase; n <= 2.
// Memoized; the returned reference stays valid for the program lifetime.
const std::vector<CliffordOp>& enumerate_clifford_mod_phase(int n);

// Exactly uniform random Clifford (mod phase) on n <= 4 qubits, via a uniform
// symplectic tableau plus uniform sign bits, synthesized from its stabilizer
// action.
CliffordOp random_clifford(int n, Rng& rng);

enum class DesignGrade { OneDesign, TwoDesign, Ideal };

// Keyed unitary family: key -> Clifford. Grade `Ideal` enumerates the full
// group (n <= 2) and keys index it exactly; grade `TwoDesign` derives a
// uniformly random Clifford from the key (n <= 4); grade `OneDesign` maps the
// key to a Pauli operator.
class KeyedUnitaryFamily {
 public:
  KeyedUnitaryFamily(int n, DesignGrade grade);

  int n() const { return n_; }
  DesignGrade grade() const { return grade_; }
  // Key length metadata in the 5|A|-bit format; the ideal grade keys are
  // group indices instead.
  int key_bits() const { return 5 * n_; }
  uint64_t key_space() const;

  CliffordOp sample(uint64_t key) const;

 private:
  int n_;
  DesignGrade grade_;
};

}  // namespace tl
