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

#include "tamperlab/pauli.hpp"

#include <bit>

namespace tl {

namespace {
const cxd kI(0, 1);

Mat single_pauli(bool x, bool z) {
  Mat m(2, 2);
  if (!x && !z) m << 1, 0, 0, 1;
  if (x && !z) m << 0, 1, 1, 0;
  if (!x && z) m << 1, 0, 0, -1;
  if (x && z) {
    // X Z = [[0, -1], [1, 0]] = -i Y
    m << 0, -1, 1, 0;
  }
  return m;
}
}  // namespace

PauliOp PauliOp::from_index(int n, uint64_t index) {
  PauliOp p;
  p.n = n;
  p.x_bits = 0;
  p.z_bits = 0;
  p.phase_log = 0;
  for (int q = 0; q < n; ++q) {
    uint64_t v = (index >> (2 * (n - 1 - q))) & 3;
    if (v & 2) p.x_bits |= (1u << q);
    if (v & 1) p.z_bits |= (1u << q);
  }
  return p;
}

uint64_t PauliOp::index() const {
  uint64_t out = 0;
  for (int q = 0; q < n; ++q) {
    uint64_t v = (uint64_t((x_bits >> q) & 1) << 1) | ((z_bits >> q) & 1);
    out |= v << (2 * (n - 1 - q));
  }
  return out;
}

Mat PauliOp::matrix() const {
  Mat m = Mat::Identity(1, 1);
  for (int q = 0; q < n; ++q)
    m = kron(m, single_pauli((x_bits >> q) & 1, (z_bits >> q) & 1));
  cxd ph = std::pow(kI, phase_log & 3);
  return ph * m;
}

PauliOp PauliOp::compose(const PauliOp& other) const {
  // (X^a Z^b)(X^c Z^d) = (-1)^{b·c} X^{a+c} Z^{b+d}
  PauliOp out;
  out.n = n;
  out.x_bits = x_bits ^ other.x_bits;
  out.z_bits = z_bits ^ other.z_bits;
  int anti = std::popcount(z_bits & other.x_bits);
  out.phase_log = (phase_log + other.phase_log + 2 * anti) & 3;
  return out;
}

std::vector<PauliOp> enumerate_pauli(int n) {
  TL_REQUIRE(n >= 1 && n <= 8, "enumerate_pauli: n out of range");
  std::vector<PauliOp> out;
  uint64_t count = uint64_t(1) << (2 * n);
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) out.push_back(PauliOp::from_index(n, i));
  return out;
}

Mat pauli_x_string(int n, uint32_t a) {
  PauliOp p{a, 0, 0, n};
  return p.matrix();
}

Mat pauli_z_string(int n, uint32_t b) {
  PauliOp p{0, b, 0, n};
  return p.matrix();
}

}  // namespace tl
