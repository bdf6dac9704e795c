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

#include "tamperlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace tl {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

bool is_hermitian(const Mat& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double trace_norm(const Mat& m) {
  if (m.rows() == m.cols() && is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().sum();
}

Mat sqrt_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double fidelity(const Mat& a, const Mat& b) {
  return trace_norm(sqrt_psd(a) * sqrt_psd(b));
}

bool is_psd(const Mat& m, double tol) {
  if (!is_hermitian(m, std::max(tol, kTolLoose))) return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

bool is_unitary(const Mat& m, double tol) {
  Mat d = m.adjoint() * m - Mat::Identity(m.cols(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

Mat random_unitary(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cxd(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    cxd d = r(i, i);
    q.col(i) *= d / std::abs(d);
  }
  return q;
}

Vec random_state_vector(int dim, Rng& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = cxd(rng.gaussian(), rng.gaussian());
  v.normalize();
  return v;
}

Mat random_density(int dim, Rng& rng, int env) {
  Vec v = random_state_vector(dim * env, rng);
  Mat rho = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      for (int e = 0; e < env; ++e)
        rho(i, j) += v(i * env + e) * std::conj(v(j * env + e));
  return rho;
}

double von_neumann_entropy(const Mat& rho) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  double s = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double p = es.eigenvalues()(i);
    if (p > 1e-14) s -= p * std::log2(p);
  }
  return s;
}

namespace {

// Index helpers: qubit 0 = most significant bit of the state index.
struct SubIndex {
  uint64_t sub_stride[64];   // contribution of sub-index bit b
  uint64_t rest_mask;        // bits of the full index not covered by qs
  std::vector<uint64_t> rest_values;  // enumeration of rest patterns
  int k;

  SubIndex(const std::vector<int>& qs, int n) : k(int(qs.size())) {
    uint64_t qmask = 0;
    for (int b = 0; b < k; ++b) {
      int pos = qs[size_t(b)];
      sub_stride[b] = uint64_t(1) << (n - 1 - pos);
      qmask |= sub_stride[b];
    }
    rest_mask = ((uint64_t(1) << n) - 1) & ~qmask;
    // Enumerate all patterns of the rest bits.
    uint64_t count = uint64_t(1) << (n - k);
    rest_values.resize(count);
    // Iterate sub-masks of rest_mask in increasing order.
    uint64_t v = 0;
    for (uint64_t i = 0; i < count; ++i) {
      rest_values[i] = v;
      v = (v - rest_mask) & rest_mask;  // next submask trick (increasing)
    }
  }

  uint64_t sub_to_bits(uint64_t s) const {
    uint64_t out = 0;
    for (int b = 0; b < k; ++b)
      if ((s >> (k - 1 - b)) & 1) out |= sub_stride[b];
    return out;
  }
};

}  // namespace

Vec apply_to_qubits(const Mat& op, const std::vector<int>& qs, const Vec& v,
                    int n) {
  const int k = int(qs.size());
  const uint64_t dsub = uint64_t(1) << k;
  TL_REQUIRE(op.rows() == int64_t(dsub) && op.cols() == int64_t(dsub),
             "apply_to_qubits: operator dimension mismatch");
  TL_REQUIRE(v.size() == int64_t(uint64_t(1) << n),
             "apply_to_qubits: state dimension mismatch");
  SubIndex ix(qs, n);
  std::vector<uint64_t> offs(dsub);
  for (uint64_t s = 0; s < dsub; ++s) offs[s] = ix.sub_to_bits(s);
  Vec out = Vec::Zero(v.size());
  Vec tmp(dsub);
  for (uint64_t rest : ix.rest_values) {
    for (uint64_t s = 0; s < dsub; ++s) tmp(int64_t(s)) = v(int64_t(rest | offs[s]));
    for (uint64_t r = 0; r < dsub; ++r) {
      cxd acc = 0;
      for (uint64_t c = 0; c < dsub; ++c) acc += op(int64_t(r), int64_t(c)) * tmp(int64_t(c));
      out(int64_t(rest | offs[r])) = acc;
    }
  }
  return out;
}

Mat apply_left(const Mat& op, const std::vector<int>& qs, const Mat& m, int n) {
  const int k = int(qs.size());
  const uint64_t dsub = uint64_t(1) << k;
  SubIndex ix(qs, n);
  std::vector<uint64_t> offs(dsub);
  for (uint64_t s = 0; s < dsub; ++s) offs[s] = ix.sub_to_bits(s);
  Mat out = Mat::Zero(m.rows(), m.cols());
  for (uint64_t rest : ix.rest_values) {
    for (uint64_t r = 0; r < dsub; ++r) {
      for (uint64_t c = 0; c < dsub; ++c) {
        cxd coef = op(int64_t(r), int64_t(c));
        if (coef == cxd(0)) continue;
        out.row(int64_t(rest | offs[r])) += coef * m.row(int64_t(rest | offs[c]));
      }
    }
  }
  return out;
}

Mat conjugate_on_qubits(const Mat& k, const std::vector<int>& qs,
                        const Mat& rho, int n) {
  Mat left = apply_left(k, qs, rho, n);
  // (K rho) K^dagger = (K (K rho)^dagger)^dagger
  return apply_left(k, qs, left.adjoint(), n).adjoint();
}

Mat partial_trace_keep(const Mat& rho, const std::vector<int>& keep, int n) {
  const int k = int(keep.size());
  const uint64_t dkeep = uint64_t(1) << k;
  SubIndex ix(keep, n);
  std::vector<uint64_t> offs(dkeep);
  for (uint64_t s = 0; s < dkeep; ++s) offs[s] = ix.sub_to_bits(s);
  Mat out = Mat::Zero(int64_t(dkeep), int64_t(dkeep));
  for (uint64_t rest : ix.rest_values)
    for (uint64_t r = 0; r < dkeep; ++r)
      for (uint64_t c = 0; c < dkeep; ++c)
        out(int64_t(r), int64_t(c)) += rho(int64_t(rest | offs[r]), int64_t(rest | offs[c]));
  return out;
}

Mat pure_marginal_keep(const Vec& v, const std::vector<int>& keep, int n) {
  const int k = int(keep.size());
  const uint64_t dkeep = uint64_t(1) << k;
  SubIndex ix(keep, n);
  std::vector<uint64_t> offs(dkeep);
  for (uint64_t s = 0; s < dkeep; ++s) offs[s] = ix.sub_to_bits(s);
  Mat out = Mat::Zero(int64_t(dkeep), int64_t(dkeep));
  Vec col(static_cast<int64_t>(dkeep));
  for (uint64_t rest : ix.rest_values) {
    for (uint64_t s = 0; s < dkeep; ++s) col(int64_t(s)) = v(int64_t(rest | offs[s]));
    out.noalias() += col * col.adjoint();
  }
  return out;
}

Vec partial_inner(const Vec& bra, const std::vector<int>& qs, const Vec& ket,
                  int n) {
  const int k = int(qs.size());
  const uint64_t dsub = uint64_t(1) << k;
  TL_REQUIRE(bra.size() == int64_t(dsub), "partial_inner: bra dim mismatch");
  SubIndex ix(qs, n);
  std::vector<uint64_t> offs(dsub);
  for (uint64_t s = 0; s < dsub; ++s) offs[s] = ix.sub_to_bits(s);
  const uint64_t drest = uint64_t(1) << (n - k);
  Vec out(static_cast<int64_t>(drest));
  for (uint64_t i = 0; i < drest; ++i) {
    uint64_t rest = ix.rest_values[i];
    cxd acc = 0;
    for (uint64_t s = 0; s < dsub; ++s)
      acc += std::conj(bra(int64_t(s))) * ket(int64_t(rest | offs[s]));
    out(int64_t(i)) = acc;
  }
  return out;
}

Vec embed_product(const Vec& sub, const std::vector<int>& qs, const Vec& rest,
                  int n) {
  const int k = int(qs.size());
  const uint64_t dsub = uint64_t(1) << k;
  TL_REQUIRE(sub.size() == int64_t(dsub), "embed_product: sub dim mismatch");
  SubIndex ix(qs, n);
  TL_REQUIRE(rest.size() == int64_t(ix.rest_values.size()),
             "embed_product: rest dim mismatch");
  std::vector<uint64_t> offs(dsub);
  for (uint64_t s = 0; s < dsub; ++s) offs[s] = ix.sub_to_bits(s);
  Vec out = Vec::Zero(int64_t(uint64_t(1) << n));
  for (size_t i = 0; i < ix.rest_values.size(); ++i) {
    if (rest(int64_t(i)) == cxd(0)) continue;
    for (uint64_t s = 0; s < dsub; ++s)
      out(int64_t(ix.rest_values[i] | offs[s])) = rest(int64_t(i)) * sub(int64_t(s));
  }
  return out;
}

Vec epr_vector(int pairs) {
  const uint64_t d = uint64_t(1) << pairs;
  Vec out = Vec::Zero(int64_t(d * d));
  double amp = 1.0 / std::sqrt(double(d));
  for (uint64_t j = 0; j < d; ++j) out(int64_t(j * d + j)) = amp;
  return out;
}

Vec basis_vector(int dim, uint64_t x) {
  Vec out = Vec::Zero(dim);
  out(int64_t(x)) = 1.0;
  return out;
}

}  // namespace tl
