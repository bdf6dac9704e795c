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

#include <optional>
#include <string>
#include <vector>

#include "tamperlab/common.hpp"

namespace tl {

enum class RegKind { Quantum, Classical };

struct Register {
  std::string id;
  RegKind kind = RegKind::Quantum;
  int size = 1;   // qubits or bits
  int share = 0;  // share index this register belongs to
};

// Ordered register list. Quantum registers define the tensor order of the
// branch operators (left-to-right); classical registers index the branch map.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(std::vector<Register> regs, int qubit_cap = kDefaultQubitCap);

  const std::vector<Register>& registers() const { return regs_; }
  const Register& reg(const std::string& id) const;
  bool has(const std::string& id) const;

  int total_qubits() const { return total_qubits_; }
  int64_t quantum_dim() const { return int64_t(1) << total_qubits_; }

  // Qubit positions (into the branch-operator tensor order) of a quantum
  // register, or of a list of quantum registers concatenated.
  std::vector<int> qubits_of(const std::string& id) const;
  std::vector<int> qubits_of(const std::vector<std::string>& ids) const;

  // Classical registers in layout order.
  std::vector<std::string> classical_ids() const;
  std::vector<std::string> quantum_ids() const;
  std::vector<std::string> ids_of_share(int share) const;

  int classical_index(const std::string& id) const;

 private:
  std::vector<Register> regs_;
  int total_qubits_ = 0;
};

// One classical assignment: a value per classical register, in layout order.
using ClassicalAssignment = std::vector<uint64_t>;

}  // namespace tl
