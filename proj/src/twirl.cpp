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

#include "tamperlab/twirl.hpp"

namespace tl {

CqState pauli_one_design_twirl(const CqState& state,
                               const std::vector<std::string>& reg_a) {
  const auto& lay = state.layout();
  auto qa = lay.qubits_of(reg_a);
  const int na = int(qa.size());
  const int n = lay.total_qubits();
  const double norm = 1.0 / double(uint64_t(1) << (2 * na));
  CqState out(lay);
  for (const auto& [a, op] : state.branches()) {
    Mat acc = Mat::Zero(op.rows(), op.cols());
    for (uint64_t idx = 0; idx < (uint64_t(1) << (2 * na)); ++idx) {
      Mat qm = PauliOp::from_index(na, idx).matrix();
      acc += conjugate_on_qubits(qm, qa, op, n);
    }
    out.add_branch(a, norm * acc);
  }
  return out;
}

Mat clifford_pq_twirl(const Mat& rho, const std::vector<int>& qa, int n,
                      const PauliOp& p, const PauliOp& q) {
  const int na = int(qa.size());
  TL_REQUIRE(na == p.n && na == q.n, "clifford_pq_twirl: Pauli size mismatch");
  const auto& group = enumerate_clifford_mod_phase(na);
  Mat pm = p.matrix(), qm = q.matrix();
  Mat acc = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& c : group) {
    Mat left = c.unitary.adjoint() * pm * c.unitary;
    Mat right = c.unitary.adjoint() * qm.adjoint() * c.unitary;
    // (I ⊗ left) rho (I ⊗ right)
    Mat tmp = apply_left(left, qa, rho, n);
    acc += apply_left(right.transpose(), qa, tmp.transpose(), n).transpose();
  }
  return acc / double(group.size());
}

TwirlDecomposition twirl_with_side_info(const std::vector<Mat>& kraus,
                                        int a_qubits, int e_qubits) {
  TwirlDecomposition d;
  d.a_qubits = a_qubits;
  d.e_qubits = e_qubits;
  const int64_t da = int64_t(1) << a_qubits;
  const int64_t de = int64_t(1) << e_qubits;
  TL_REQUIRE(!kraus.empty() && kraus[0].rows() == da * de,
             "twirl_with_side_info: Kraus dimension mismatch");
  // CPTP check.
  Mat sum = Mat::Zero(da * de, da * de);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  TL_REQUIRE((sum - Mat::Identity(da * de, da * de)).cwiseAbs().maxCoeff() <=
                 kTolLoose,
             "twirl_with_side_info: attack is not CPTP");

  const uint64_t pauli_count = uint64_t(1) << (2 * a_qubits);
  for (const auto& k : kraus) {
    for (uint64_t idx = 0; idx < pauli_count; ++idx) {
      PauliOp q = PauliOp::from_index(a_qubits, idx);
      Mat qm = q.matrix();
      // M^Q = Tr_A[(Q^dagger ⊗ I_E) M] / 2^{|A|}
      Mat mq = Mat::Zero(de, de);
      for (int64_t ar = 0; ar < da; ++ar)
        for (int64_t ac = 0; ac < da; ++ac) {
          cxd coef = std::conj(qm(ar, ac));
          if (coef == cxd(0)) continue;
          mq += coef * k.block(ar * de, ac * de, de, de);
        }
      mq /= double(da);
      if (mq.cwiseAbs().maxCoeff() < 1e-14) continue;
      if (q.is_identity_mod_phase())
        d.phi1.push_back(mq);
      else
        d.phi2.push_back(mq);
    }
  }
  d.residual_bound = 2.0 / double(da * da - 1) + kBoundSlack;
  return d;
}

Mat twirl_decomposition_apply(const TwirlDecomposition& d, const Mat& rho,
                              const std::vector<int>& qa,
                              const std::vector<int>& qe, int n) {
  const double dda = double(int64_t(1) << (2 * d.a_qubits));
  // omega = (4^{|A|} (rho_{¬A} ⊗ U_A) - rho) / (4^{|A|} - 1)
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (std::find(qa.begin(), qa.end(), i) == qa.end()) keep.push_back(i);
  Mat marg = partial_trace_keep(rho, keep, n);
  // Rebuild marg ⊗ U_A in the full index order.
  Mat lifted = Mat::Zero(rho.rows(), rho.cols());
  {
    // Embed: positions `keep` take marg, positions qa take I/2^{|A|}.
    const int64_t dk = marg.rows();
    const int64_t da = int64_t(1) << d.a_qubits;
    // Build index maps.
    auto scatter = [&](const std::vector<int>& ps, uint64_t v) {
      uint64_t out = 0;
      for (size_t b = 0; b < ps.size(); ++b)
        if ((v >> (ps.size() - 1 - b)) & 1)
          out |= uint64_t(1) << (n - 1 - ps[b]);
      return out;
    };
    for (int64_t kr = 0; kr < dk; ++kr)
      for (int64_t kc = 0; kc < dk; ++kc) {
        cxd val = marg(kr, kc) / double(da);
        if (val == cxd(0)) continue;
        for (int64_t a = 0; a < da; ++a) {
          uint64_t r = scatter(keep, uint64_t(kr)) | scatter(qa, uint64_t(a));
          uint64_t c = scatter(keep, uint64_t(kc)) | scatter(qa, uint64_t(a));
          lifted(int64_t(r), int64_t(c)) += val;
        }
      }
  }
  Mat omega = (dda * lifted - rho) / (dda - 1.0);
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : d.phi1) out += conjugate_on_qubits(k, qe, rho, n);
  for (const auto& k : d.phi2) out += conjugate_on_qubits(k, qe, omega, n);
  return out;
}

Mat twirl_decomposition_apply_approx(const TwirlDecomposition& d,
                                     const Mat& rho,
                                     const std::vector<int>& qa,
                                     const std::vector<int>& qe, int n) {
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (std::find(qa.begin(), qa.end(), i) == qa.end()) keep.push_back(i);
  Mat marg = partial_trace_keep(rho, keep, n);
  const int64_t da = int64_t(1) << d.a_qubits;
  auto scatter = [&](const std::vector<int>& ps, uint64_t v) {
    uint64_t out = 0;
    for (size_t b = 0; b < ps.size(); ++b)
      if ((v >> (ps.size() - 1 - b)) & 1) out |= uint64_t(1) << (n - 1 - ps[b]);
    return out;
  };
  Mat lifted = Mat::Zero(rho.rows(), rho.cols());
  for (int64_t kr = 0; kr < marg.rows(); ++kr)
    for (int64_t kc = 0; kc < marg.cols(); ++kc) {
      cxd val = marg(kr, kc) / double(da);
      if (val == cxd(0)) continue;
      for (int64_t a = 0; a < da; ++a) {
        uint64_t r = scatter(keep, uint64_t(kr)) | scatter(qa, uint64_t(a));
        uint64_t c = scatter(keep, uint64_t(kc)) | scatter(qa, uint64_t(a));
        lifted(int64_t(r), int64_t(c)) += val;
      }
    }
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : d.phi1) out += conjugate_on_qubits(k, qe, rho, n);
  for (const auto& k : d.phi2) out += conjugate_on_qubits(k, qe, lifted, n);
  return out;
}

Mat twirl_channel_enumerated(const std::vector<Mat>& kraus,
                             const std::vector<int>& qa,
                             const std::vector<int>& qae, const Mat& rho,
                             int n) {
  const int na = int(qa.size());
  const auto& group = enumerate_clifford_mod_phase(na);
  Mat acc = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& c : group) {
    Mat conj = conjugate_on_qubits(c.unitary, qa, rho, n);
    Mat after = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& k : kraus) after += conjugate_on_qubits(k, qae, conj, n);
    acc += conjugate_on_qubits(Mat(c.unitary.adjoint()), qa, after, n);
  }
  return acc / double(group.size());
}

bool transpose_trick_check(const Mat& m, double tol) {
  const int64_t d = m.rows();
  // Canonical purification of U_A: 1/sqrt(d) sum_i |i>|i>.
  Vec amp = Vec::Zero(d * d);
  for (int64_t i = 0; i < d; ++i) amp(i * d + i) = 1.0 / std::sqrt(double(d));
  Mat rho = amp * amp.adjoint();
  Mat id = Mat::Identity(d, d);
  Mat lhs = kron(m, id) * rho * kron(m, id).adjoint();
  Mat mt = m.transpose();
  Mat rhs = kron(id, mt) * rho * kron(id, mt).adjoint();
  return (lhs - rhs).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace tl
