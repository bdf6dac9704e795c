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

#include "tamperlab/registers.hpp"

#include <set>

namespace tl {

RegisterLayout::RegisterLayout(std::vector<Register> regs, int qubit_cap)
    : regs_(std::move(regs)) {
  std::set<std::string> seen;
  for (const auto& r : regs_) {
    TL_REQUIRE(seen.insert(r.id).second, "duplicate register id: " + r.id);
    TL_REQUIRE(r.size >= 1, "register size must be >= 1: " + r.id);
    if (r.kind == RegKind::Quantum) total_qubits_ += r.size;
  }
  TL_REQUIRE(total_qubits_ <= qubit_cap,
             "total quantum dimension exceeds the configured cap");
}

const Register& RegisterLayout::reg(const std::string& id) const {
  for (const auto& r : regs_)
    if (r.id == id) return r;
  throw Error("unknown register id: " + id);
}

bool RegisterLayout::has(const std::string& id) const {
  for (const auto& r : regs_)
    if (r.id == id) return true;
  return false;
}

std::vector<int> RegisterLayout::qubits_of(const std::string& id) const {
  int pos = 0;
  for (const auto& r : regs_) {
    if (r.kind != RegKind::Quantum) continue;
    if (r.id == id) {
      std::vector<int> out(size_t(r.size));
      for (int i = 0; i < r.size; ++i) out[size_t(i)] = pos + i;
      return out;
    }
    pos += r.size;
  }
  throw Error("not a quantum register: " + id);
}

std::vector<int> RegisterLayout::qubits_of(
    const std::vector<std::string>& ids) const {
  std::vector<int> out;
  for (const auto& id : ids) {
    auto qs = qubits_of(id);
    out.insert(out.end(), qs.begin(), qs.end());
  }
  return out;
}

std::vector<std::string> RegisterLayout::classical_ids() const {
  std::vector<std::string> out;
  for (const auto& r : regs_)
    if (r.kind == RegKind::Classical) out.push_back(r.id);
  return out;
}

std::vector<std::string> RegisterLayout::quantum_ids() const {
  std::vector<std::string> out;
  for (const auto& r : regs_)
    if (r.kind == RegKind::Quantum) out.push_back(r.id);
  return out;
}

std::vector<std::string> RegisterLayout::ids_of_share(int share) const {
  std::vector<std::string> out;
  for (const auto& r : regs_)
    if (r.share == share) out.push_back(r.id);
  return out;
}

int RegisterLayout::classical_index(const std::string& id) const {
  int i = 0;
  for (const auto& r : regs_) {
    if (r.kind != RegKind::Classical) continue;
    if (r.id == id) return i;
    ++i;
  }
  throw Error("not a classical register: " + id);
}

}  // namespace tl
