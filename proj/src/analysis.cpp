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

#include "tamperlab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tamperlab/clifford.hpp"

namespace tl {

namespace {

std::vector<Eigen::Vector3d> fibonacci_sphere(int points) {
  std::vector<Eigen::Vector3d> out;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < points; ++i) {
    double y = 1.0 - 2.0 * (i + 0.5) / points;
    double r = std::sqrt(std::max(0.0, 1.0 - y * y));
    double th = golden * i;
    out.emplace_back(r * std::cos(th), y, r * std::sin(th));
  }
  return out;
}

Mat pauli_sigma(int i) {
  Mat m(2, 2);
  if (i == 0) m << 0, 1, 1, 0;
  if (i == 1) m << 0, cxd(0, -1), cxd(0, 1), 0;
  if (i == 2) m << 1, 0, 0, -1;
  return m;
}

}  // namespace

SingleQubitNmReport single_qubit_nm_check(const Channel& ch, double epsilon,
                                          int points, int extra,
                                          uint64_t seed) {
  ch.validate(kTolLoose);
  TL_REQUIRE(ch.dim() == 2, "single_qubit_nm_check: one-qubit channels only");
  SingleQubitNmReport rep;
  // Affine form: Λ(v0 I + v·σ) = v0 (I + t·σ) + (T v)·σ.
  for (int i = 0; i < 3; ++i) {
    rep.t_vector(i) =
        0.5 * (pauli_sigma(i) * ch.apply(Mat::Identity(2, 2))).trace().real();
    for (int j = 0; j < 3; ++j)
      rep.t_matrix(i, j) =
          0.5 * (pauli_sigma(i) * ch.apply(pauli_sigma(j))).trace().real();
  }
  auto net = fibonacci_sphere(points);
  std::vector<double> biases;
  for (const auto& v : net)
    biases.push_back(0.5 * (1.0 - v.dot(rep.t_matrix * v)));
  rep.bias_min = *std::min_element(biases.begin(), biases.end());
  rep.bias_max = *std::max_element(biases.begin(), biases.end());
  std::vector<double> sorted = biases;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  rep.p = sorted[sorted.size() / 2];
  rep.nm_verdict = (rep.bias_max - rep.bias_min) <= 2 * epsilon;

  // Choi-state criterion over maximally entangled beta orthogonal to Phi:
  // beta = (I ⊗ V) Phi for traceless unitaries V.
  std::vector<Mat> vs;
  for (const auto& c : enumerate_clifford_mod_phase(1))
    if (std::abs(c.unitary.trace()) < 1e-9) vs.push_back(c.unitary);
  Rng rng(seed);
  for (int i = 0; i < extra; ++i) {
    // V = U diag(1, -1) U^dagger is unitary and traceless.
    Mat u = random_unitary(2, rng);
    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = -1;
    vs.push_back(u * d * u.adjoint());
  }
  // J = (I ⊗ Λ)(Phi).
  Mat j = Mat::Zero(4, 4);
  for (const auto& k : ch.kraus) {
    Mat kk = kron(Mat::Identity(2, 2), k);
    Vec phi = epr_vector(1);
    Vec kphi = kk * phi;
    j += kphi * kphi.adjoint();
  }
  double cmin = 1e300, cmax = -1e300;
  for (const auto& v : vs) {
    Vec beta = kron(Mat::Identity(2, 2), v) * epr_vector(1);
    double val = (beta.adjoint() * j * beta)(0, 0).real();
    cmin = std::min(cmin, val);
    cmax = std::max(cmax, val);
  }
  rep.choi_min = cmin;
  rep.choi_max = cmax;
  // The Choi bias doubles to the negation bias: spread comparison at scale 2.
  rep.choi_verdict = (cmax - cmin) <= epsilon;

  rep.t_norm_bound_ok =
      rep.t_vector.norm() <= 2.0 * (rep.p + epsilon) + 1e-9;
  rep.t_matrix_deviation =
      (rep.t_matrix - (1.0 - 2.0 * rep.p) * Eigen::Matrix3d::Identity())
          .norm();
  return rep;
}

EntropyReport entropy_suite(const std::vector<Mat>& encodings,
                            const std::vector<int>& q1_positions,
                            int n_qubits) {
  const int64_t mcount = int64_t(encodings.size());
  const int64_t qd = encodings[0].rows();
  EntropyReport rep{};
  // S(Xhat Q) = H(1/m uniform) + avg S(enc) since Xhat is classical.
  double s_joint = std::log2(double(mcount));
  double s_q;
  {
    Mat avg = Mat::Zero(qd, qd);
    for (const auto& e : encodings) {
      s_joint += von_neumann_entropy(e) / double(mcount);
      avg += e / double(mcount);
    }
    s_q = von_neumann_entropy(avg);
  }
  rep.conditional_entropy = s_joint - s_q;
  if (!q1_positions.empty()) {
    // I(Xhat : Q1) = S(Xhat) + S(Q1) - S(Xhat Q1).
    double s_x = std::log2(double(mcount));
    Mat avg1 = Mat::Zero(int64_t(1) << q1_positions.size(),
                         int64_t(1) << q1_positions.size());
    double s_joint1 = s_x;
    for (const auto& e : encodings) {
      Mat m1 = partial_trace_keep(e, q1_positions, n_qubits);
      s_joint1 += von_neumann_entropy(m1) / double(mcount);
      avg1 += m1 / double(mcount);
    }
    rep.mutual_information = s_x + von_neumann_entropy(avg1) - s_joint1;
  }
  return rep;
}

LoccStrategyCatalog default_catalog(int random_bases, uint64_t seed) {
  LoccStrategyCatalog cat;
  Mat h(2, 2);
  double s = 1 / std::sqrt(2.0);
  h << s, s, s, -s;
  Mat sy(2, 2);
  sy << s, s, cxd(0, s), cxd(0, -s);
  cat.bases_per_qubit = {Mat::Identity(2, 2), h, sy};
  Rng rng(seed);
  for (int i = 0; i < random_bases; ++i)
    cat.bases_per_qubit.push_back(random_unitary(2, rng));
  return cat;
}

namespace {

// Applies a per-qubit basis rotation B^dagger to the listed qubits of rho.
Mat rotate_share(const Mat& rho, const Mat& basis, const std::vector<int>& qs,
                 int n) {
  Mat out = rho;
  Mat bd = basis.adjoint();
  for (int q : qs) out = conjugate_on_qubits(bd, {q}, out, n);
  return out;
}

}  // namespace

double locc_bias_lower_bound(const Mat& rho0, const Mat& rho1,
                             const std::vector<int>& share_a_qubits,
                             const std::vector<int>& share_b_qubits, int n,
                             const LoccStrategyCatalog& catalog) {
  double best = 0;
  // Local Helstrom on a single share (no communication at all).
  auto local_helstrom = [&](const std::vector<int>& qs) {
    Mat m0 = partial_trace_keep(rho0, qs, n);
    Mat m1 = partial_trace_keep(rho1, qs, n);
    return 0.5 * trace_distance(m0, m1);
  };
  best = std::max(best, local_helstrom(share_a_qubits));
  best = std::max(best, local_helstrom(share_b_qubits));

  // One round: A measures all its qubits in a product basis, broadcasts the
  // outcome, B applies the optimal (Helstrom) measurement per outcome.
  auto one_round = [&](const std::vector<int>& meas,
                       const std::vector<int>& keep, const Mat& basis) {
    Mat r0 = rotate_share(rho0, basis, meas, n);
    Mat r1 = rotate_share(rho1, basis, meas, n);
    double bias = 0;
    const int64_t outcomes = int64_t(1) << meas.size();
    for (int64_t c = 0; c < outcomes; ++c) {
      Vec bra = basis_vector(int(outcomes), uint64_t(c));
      // Conditional (unnormalized) residuals on the kept share.
      Mat res0, res1;
      {
        // <c| rho |c> over the measured positions.
        auto cond = [&](const Mat& r) {
          // Use two partial inners via eigendecomposition-free route: build
          // projector sandwich then trace out measured qubits.
          Mat proj = bra * bra.adjoint();
          Mat s = conjugate_on_qubits(proj, meas, r, n);
          return partial_trace_keep(s, keep, n);
        };
        res0 = cond(r0);
        res1 = cond(r1);
      }
      bias += 0.5 * trace_distance(res0, res1);
    }
    return bias;
  };

  for (const auto& basis : catalog.bases_per_qubit) {
    best = std::max(best, one_round(share_a_qubits, share_b_qubits, basis));
    best = std::max(best, one_round(share_b_qubits, share_a_qubits, basis));
  }

  // Two rounds with classical decision: A measures in basis1, B measures in
  // a basis chosen per outcome (scanned over the catalog uniformly), final
  // decision is the optimal classical rule. Equivalent to the one_round value
  // with B's Helstrom replaced by fixed product bases; never exceeds
  // one_round's bias, so it is reported only through the catalog max.
  return best;
}

}  // namespace tl
