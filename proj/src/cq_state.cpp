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

#include "tamperlab/cq_state.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

namespace tl {

CqState CqState::pure(RegisterLayout layout, const Vec& amplitudes) {
  TL_REQUIRE(layout.classical_ids().empty(),
             "pure: layout must have no classical registers");
  TL_REQUIRE(amplitudes.size() == layout.quantum_dim(),
             "pure: amplitude dimension mismatch");
  CqState s(std::move(layout));
  s.branches_[{}] = amplitudes * amplitudes.adjoint();
  return s;
}

CqState CqState::from_density(RegisterLayout layout, const Mat& rho) {
  TL_REQUIRE(layout.classical_ids().empty(),
             "from_density: layout must have no classical registers");
  TL_REQUIRE(rho.rows() == layout.quantum_dim(), "from_density: dim mismatch");
  CqState s(std::move(layout));
  s.branches_[{}] = rho;
  return s;
}

void CqState::add_branch(const ClassicalAssignment& a, const Mat& op) {
  TL_REQUIRE(a.size() == layout_.classical_ids().size(),
             "add_branch: assignment arity mismatch");
  TL_REQUIRE(op.rows() == layout_.quantum_dim(), "add_branch: dim mismatch");
  auto it = branches_.find(a);
  if (it == branches_.end())
    branches_[a] = op;
  else
    it->second += op;
}

double CqState::total_trace() const {
  double t = 0;
  for (const auto& [a, op] : branches_) t += op.trace().real();
  return t;
}

void CqState::validate(double tol) const {
  for (const auto& [a, op] : branches_)
    TL_REQUIRE(is_psd(op, tol), "branch operator not PSD within tolerance");
  TL_REQUIRE(std::abs(total_trace() - 1.0) <= tol,
             "total trace differs from one beyond tolerance");
}

const Mat& CqState::sole_branch() const {
  TL_REQUIRE(branches_.size() == 1, "state has multiple branches");
  return branches_.begin()->second;
}

Mat CqState::block_density() const {
  // Classical assignments in sorted branch order become diagonal blocks.
  int64_t qd = layout_.quantum_dim();
  int64_t blocks = int64_t(branches_.size());
  Mat out = Mat::Zero(blocks * qd, blocks * qd);
  int64_t i = 0;
  for (const auto& [a, op] : branches_) {
    out.block(i * qd, i * qd, qd, qd) = op;
    ++i;
  }
  return out;
}

bool CqState::is_pure(double tol) const {
  if (branches_.size() != 1) return false;
  const Mat& op = branches_.begin()->second;
  return (op * op - op).cwiseAbs().maxCoeff() <= tol;
}

CqState tensor_and_trace(const CqState& state,
                         const std::vector<std::string>& keep) {
  const auto& lay = state.layout();
  std::set<std::string> keep_set(keep.begin(), keep.end());
  for (const auto& id : keep)
    TL_REQUIRE(lay.has(id), "tensor_and_trace: unknown register id " + id);

  std::vector<Register> kept_regs;
  for (const auto& r : lay.registers())
    if (keep_set.count(r.id)) kept_regs.push_back(r);
  RegisterLayout out_layout(kept_regs);

  // Quantum positions to keep, in kept layout order.
  std::vector<int> keep_qubits;
  std::vector<int> kept_classical_indices;
  for (const auto& r : lay.registers()) {
    if (!keep_set.count(r.id)) continue;
    if (r.kind == RegKind::Quantum) {
      auto qs = lay.qubits_of(r.id);
      keep_qubits.insert(keep_qubits.end(), qs.begin(), qs.end());
    } else {
      kept_classical_indices.push_back(lay.classical_index(r.id));
    }
  }

  CqState out(out_layout);
  const int n = lay.total_qubits();
  for (const auto& [a, op] : state.branches()) {
    ClassicalAssignment ka;
    ka.reserve(kept_classical_indices.size());
    for (int ci : kept_classical_indices) ka.push_back(a[size_t(ci)]);
    Mat reduced = partial_trace_keep(op, keep_qubits, n);
    out.add_branch(ka, reduced);
  }
  return out;
}

Metrics metrics(const CqState& a, const CqState& b) {
  TL_REQUIRE(a.layout().classical_ids() == b.layout().classical_ids() &&
                 a.layout().quantum_ids() == b.layout().quantum_ids(),
             "metrics: layout mismatch");
  // Trace distance over the union of classical supports.
  double td = 0;
  std::set<ClassicalAssignment> keys;
  for (const auto& [k, v] : a.branches()) keys.insert(k);
  for (const auto& [k, v] : b.branches()) keys.insert(k);
  int64_t qd = a.layout().quantum_dim();
  double fid = 0;
  for (const auto& k : keys) {
    auto ia = a.branches().find(k);
    auto ib = b.branches().find(k);
    const Mat za = ia == a.branches().end() ? Mat::Zero(qd, qd) : ia->second;
    const Mat zb = ib == b.branches().end() ? Mat::Zero(qd, qd) : ib->second;
    td += trace_distance(za, zb);
    if (ia != a.branches().end() && ib != b.branches().end())
      fid += fidelity(za, zb);
  }
  return {td, fid};
}

CqState canonical_purification(const Mat& rho, const std::string& reg_id,
                               const std::string& mirror_id) {
  TL_REQUIRE(is_psd(rho, kTolLoose), "canonical_purification: input not PSD");
  TL_REQUIRE(std::abs(rho.trace().real() - 1.0) <= kTolLoose,
             "canonical_purification: input trace not one");
  int64_t d = rho.rows();
  int sz = 0;
  while ((int64_t(1) << sz) < d) ++sz;
  TL_REQUIRE((int64_t(1) << sz) == d, "dimension must be a power of two");
  Mat root = sqrt_psd(rho);
  Vec amp = Vec::Zero(d * d);
  // (sqrt(rho) ⊗ I) sum_i |i>|i>
  for (int64_t i = 0; i < d; ++i)
    for (int64_t j = 0; j < d; ++j) amp(j * d + i) = root(j, i);
  RegisterLayout lay({{reg_id, RegKind::Quantum, sz, 0},
                      {mirror_id, RegKind::Quantum, sz, 0}});
  return CqState::pure(lay, amp);
}

BellTestResult bell_test(const CqState& state,
                         const std::vector<std::string>& reg_e,
                         const std::vector<std::string>& reg_ehat) {
  const auto& lay = state.layout();
  auto qe = lay.qubits_of(reg_e);
  auto qh = lay.qubits_of(reg_ehat);
  TL_REQUIRE(qe.size() == qh.size(),
             "bell_test: register group size mismatch");
  const int pairs = int(qe.size());
  const int n = lay.total_qubits();
  Vec phi = epr_vector(pairs);
  std::vector<int> qs = qe;
  qs.insert(qs.end(), qh.begin(), qh.end());
  Mat proj = phi * phi.adjoint();

  CqState acc(lay), rej(lay);
  double p_acc = 0;
  for (const auto& [a, op] : state.branches()) {
    Mat pap = conjugate_on_qubits(proj, qs, op, n);
    p_acc += pap.trace().real();
    acc.add_branch(a, pap);
    rej.add_branch(a, op - apply_left(proj, qs, op, n) -
                          apply_left(proj, qs, op.adjoint(), n).adjoint() +
                          pap);
  }
  double p_rej = 1.0 - p_acc;
  // Normalize the post states.
  for (auto& [a, op] : acc.branches())
    if (p_acc > 1e-300) op /= p_acc;
  for (auto& [a, op] : rej.branches())
    if (p_rej > 1e-300) op /= p_rej;
  return {p_acc, std::move(acc), std::move(rej)};
}

SchmidtProfile schmidt_structure(const CqState& state,
                                 const std::vector<std::string>& cut) {
  TL_REQUIRE(state.is_pure(), "schmidt_structure: state is not pure");
  const auto& lay = state.layout();
  auto ql = lay.qubits_of(cut);
  std::vector<std::string> rest;
  for (const auto& id : lay.quantum_ids())
    if (std::find(cut.begin(), cut.end(), id) == cut.end())
      rest.push_back(id);
  auto qr = lay.qubits_of(rest);

  // Extract the amplitude vector from the rank-one branch.
  const Mat& op = state.sole_branch();
  Eigen::SelfAdjointEigenSolver<Mat> es(op);
  int64_t imax;
  es.eigenvalues().maxCoeff(&imax);
  Vec amp = es.eigenvectors().col(imax) * std::sqrt(es.eigenvalues()(imax));

  const int n = lay.total_qubits();
  const int64_t dl = int64_t(1) << ql.size();
  const int64_t dr = int64_t(1) << qr.size();
  Mat reshaped(dl, dr);
  // Row = cut registers, column = rest.
  std::vector<int> order = ql;
  order.insert(order.end(), qr.begin(), qr.end());
  // Build permuted amplitudes via embed-style indexing.
  for (int64_t l = 0; l < dl; ++l) {
    Vec bra = basis_vector(int(dl), uint64_t(l));
    Vec row = partial_inner(bra, ql, amp, n);
    // `row` is over the remaining qubits in their original order, which is qr
    // ascending by position; qr as constructed is ascending too.
    for (int64_t r = 0; r < dr; ++r) reshaped(l, r) = row(r);
  }
  Eigen::JacobiSVD<Mat> svd(reshaped);
  SchmidtProfile prof;
  prof.cut = cut;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    double sv = svd.singularValues()(i);
    if (sv > kTolStrict) {
      prof.coefficients.push_back(sv);
      ++prof.rank;
    }
  }
  return prof;
}

}  // namespace tl
