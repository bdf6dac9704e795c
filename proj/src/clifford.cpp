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

#include "tamperlab/clifford.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

namespace tl {

std::optional<PauliOp> CliffordOp::conjugate_pauli(const PauliOp& p,
                                                   double tol) const {
  Mat conj = unitary.adjoint() * p.matrix() * unitary;
  // Project onto the Pauli basis; a Clifford conjugate has exactly one term.
  const int64_t dim = conj.rows();
  for (uint64_t idx = 0; idx < (uint64_t(1) << (2 * n)); ++idx) {
    PauliOp q = PauliOp::from_index(n, idx);
    Mat qm = q.matrix();
    cxd coef = (qm.adjoint() * conj).trace() / double(dim);
    if (std::abs(coef) < 0.5) continue;
    // coef should be a power of i.
    for (int ph = 0; ph < 4; ++ph) {
      cxd want = std::pow(cxd(0, 1), ph);
      if (std::abs(coef - want) <= 1e-6) {
        Mat recon = want * qm;
        if ((recon - conj).cwiseAbs().maxCoeff() <= tol) {
          q.phase_log = ph;
          return q;
        }
      }
    }
    return std::nullopt;
  }
  return std::nullopt;
}

bool CliffordOp::is_clifford(double tol) const {
  if (!is_unitary(unitary, tol)) return false;
  // Generators suffice: X_q and Z_q for each qubit.
  for (int q = 0; q < n; ++q) {
    PauliOp x{uint32_t(1) << q, 0, 0, n};
    PauliOp z{0, uint32_t(1) << q, 0, n};
    if (!conjugate_pauli(x, tol) || !conjugate_pauli(z, tol)) return false;
  }
  return true;
}

namespace {

Mat gate_h() {
  Mat m(2, 2);
  double s = 1 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Mat gate_s() {
  Mat m(2, 2);
  m << 1, 0, 0, cxd(0, 1);
  return m;
}

Mat gate_cnot() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

// Canonical fingerprint of a unitary modulo global phase.
uint64_t phase_canonical_hash(const Mat& u) {
  int64_t d = u.rows();
  cxd ref = 0;
  for (int64_t c = 0; c < d && std::abs(ref) < 1e-8; ++c)
    for (int64_t r = 0; r < d && std::abs(ref) < 1e-8; ++r)
      if (std::abs(u(r, c)) > 1e-8) ref = u(r, c);
  cxd rot = std::abs(ref) / ref;
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](int64_t v) {
    h ^= uint64_t(v);
    h *= 1099511628211ULL;
  };
  for (int64_t c = 0; c < d; ++c)
    for (int64_t r = 0; r < d; ++r) {
      cxd e = u(r, c) * rot;
      mix(llround(e.real() * 4096.0));
      mix(llround(e.imag() * 4096.0));
    }
  return h;
}

std::vector<CliffordOp> enumerate_impl(int n) {
  TL_REQUIRE(n >= 1 && n <= 2, "enumerate_clifford_mod_phase: n too large");
  std::vector<Mat> gens;
  if (n == 1) {
    gens = {gate_h(), gate_s()};
  } else {
    Mat id2 = Mat::Identity(2, 2);
    gens = {kron(gate_h(), id2), kron(id2, gate_h()), kron(gate_s(), id2),
            kron(id2, gate_s()), gate_cnot()};
  }
  const int64_t dim = int64_t(1) << n;
  std::vector<CliffordOp> out;
  std::unordered_set<uint64_t> seen;
  std::vector<Mat> frontier{Mat::Identity(dim, dim)};
  seen.insert(phase_canonical_hash(frontier[0]));
  out.push_back({frontier[0], n});
  while (!frontier.empty()) {
    std::vector<Mat> next;
    for (const Mat& u : frontier) {
      for (const Mat& g : gens) {
        Mat v = g * u;
        uint64_t h = phase_canonical_hash(v);
        if (seen.insert(h).second) {
          out.push_back({v, n});
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

// --- Symplectic sampling -------------------------------------------------
//
// Vectors in F_2^{2n} are stored as bit masks with (x_1..x_n, z_1..z_n).
inline int symp_inner(uint32_t a, uint32_t b, int n) {
  uint32_t ax = a & ((1u << n) - 1), az = a >> n;
  uint32_t bx = b & ((1u << n) - 1), bz = b >> n;
  return (std::popcount(ax & bz) + std::popcount(az & bx)) & 1;
}

}  // namespace

const std::vector<CliffordOp>& enumerate_clifford_mod_phase(int n) {
  static std::mutex mu;
  static std::unordered_map<int, std::unique_ptr<std::vector<CliffordOp>>> memo;
  std::lock_guard<std::mutex> lock(mu);
  auto it = memo.find(n);
  if (it == memo.end()) {
    auto vec = std::make_unique<std::vector<CliffordOp>>(enumerate_impl(n));
    it = memo.emplace(n, std::move(vec)).first;
  }
  return *it->second;
}

CliffordOp random_clifford(int n, Rng& rng) {
  TL_REQUIRE(n >= 1 && n <= 4, "random_clifford: n out of range");
  const int nn = 2 * n;
  // Sample a uniformly random symplectic basis (v_j, w_j) by rejection.
  std::vector<uint32_t> vs, ws;
  for (int j = 0; j < n; ++j) {
    uint32_t v;
    for (;;) {
      v = uint32_t(rng.bits(nn));
      if (v == 0) continue;
      bool ok = true;
      for (int i = 0; i < j && ok; ++i)
        ok = symp_inner(v, vs[size_t(i)], n) == 0 &&
             symp_inner(v, ws[size_t(i)], n) == 0;
      if (ok) break;
    }
    uint32_t w;
    for (;;) {
      w = uint32_t(rng.bits(nn));
      if (symp_inner(v, w, n) != 1) continue;
      bool ok = true;
      for (int i = 0; i < j && ok; ++i)
        ok = symp_inner(w, vs[size_t(i)], n) == 0 &&
             symp_inner(w, ws[size_t(i)], n) == 0;
      if (ok) break;
    }
    vs.push_back(v);
    ws.push_back(w);
  }
  // Uniform sign bits for the images of X_j and Z_j. The Hermitian form
  // i^{x·z} X^x Z^z squares to the identity, which the synthesis below needs.
  auto signed_pauli = [&](uint32_t vec, bool flip) {
    PauliOp p;
    p.n = n;
    p.x_bits = vec & ((1u << n) - 1);
    p.z_bits = vec >> n;
    p.phase_log = (std::popcount(p.x_bits & p.z_bits) + (flip ? 2 : 0)) & 3;
    return p;
  };
  std::vector<PauliOp> im_x, im_z;
  for (int j = 0; j < n; ++j) {
    im_x.push_back(signed_pauli(vs[size_t(j)], rng.bits(1) != 0));
    im_z.push_back(signed_pauli(ws[size_t(j)], rng.bits(1) != 0));
  }
  // Synthesize the unitary: U|0..0> is the stabilizer state of {im_z}, and
  // U|x> = prod_j im_x[j]^{x_j} U|0..0>.
  const int64_t dim = int64_t(1) << n;
  Mat proj = Mat::Identity(dim, dim);
  for (int j = 0; j < n; ++j)
    proj = 0.5 * (proj + im_z[size_t(j)].matrix() * proj);
  Vec col0;
  for (int64_t b = 0; b < dim; ++b) {
    Vec cand = proj * basis_vector(int(dim), uint64_t(b));
    if (cand.norm() > 1e-6) {
      col0 = cand.normalized();
      break;
    }
  }
  Mat u(dim, dim);
  for (int64_t x = 0; x < dim; ++x) {
    Vec col = col0;
    for (int j = 0; j < n; ++j)
      if ((x >> (n - 1 - j)) & 1) col = im_x[size_t(j)].matrix() * col;
    u.col(x) = col;
  }
  CliffordOp c{u, n};
  return c;
}

KeyedUnitaryFamily::KeyedUnitaryFamily(int n, DesignGrade grade)
    : n_(n), grade_(grade) {
  if (grade == DesignGrade::Ideal)
    TL_REQUIRE(n <= 2, "ideal grade requires an enumerable group (n <= 2)");
  if (grade == DesignGrade::TwoDesign)
    TL_REQUIRE(n <= 4, "two-design sampling supports n <= 4");
}

uint64_t KeyedUnitaryFamily::key_space() const {
  switch (grade_) {
    case DesignGrade::Ideal:
      return enumerate_clifford_mod_phase(n_).size();
    case DesignGrade::OneDesign:
      return uint64_t(1) << (2 * n_);
    case DesignGrade::TwoDesign:
      return 0;  // effectively unbounded; keys seed the sampler
  }
  return 0;
}

CliffordOp KeyedUnitaryFamily::sample(uint64_t key) const {
  switch (grade_) {
    case DesignGrade::Ideal: {
      const auto& group = enumerate_clifford_mod_phase(n_);
      return group[size_t(key % group.size())];
    }
    case DesignGrade::OneDesign: {
      PauliOp p = PauliOp::from_index(n_, key & ((uint64_t(1) << (2 * n_)) - 1));
      return CliffordOp{p.matrix(), n_};
    }
    case DesignGrade::TwoDesign: {
      Rng rng = Rng::derived(0x7a3b9c5d11ULL, key);
      return random_clifford(n_, rng);
    }
  }
  throw Error("unreachable");
}

}  // namespace tl
