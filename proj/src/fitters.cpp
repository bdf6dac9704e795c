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

#include "tamperlab/fitters.hpp"

#include <Eigen/Eigenvalues>

namespace tl {

Mat choi_target_phi(int k) {
  const int dk = 1 << k;
  const int dm = dk + 1;
  Mat phi = Mat::Zero(dk * dm, dk * dm);
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) phi(a * dm + a, b * dm + b) = 1.0 / dk;
  return phi;
}

Mat choi_target_bot(int k) {
  const int dk = 1 << k;
  const int dm = dk + 1;
  Mat bot = Mat::Zero(dk * dm, dk * dm);
  for (int a = 0; a < dk; ++a) bot(a * dm + dk, a * dm + dk) = 1.0 / dk;
  return bot;
}

SecurityReport fit_td(const EffectiveChoi& j) {
  Mat phi = choi_target_phi(j.k);
  Mat bot = choi_target_bot(j.k);
  auto resid = [&](double p) {
    return trace_norm(j.j - p * phi - (1 - p) * bot);
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 100; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (resid(m1) <= resid(m2))
      hi = m2;
    else
      lo = m1;
  }
  SecurityReport rep;
  rep.p = 0.5 * (lo + hi);
  rep.residual = std::min({resid(rep.p), resid(0.0), resid(1.0)});
  if (resid(0.0) == rep.residual) rep.p = 0;
  if (resid(1.0) == rep.residual) rep.p = 1;
  return rep;
}

double fit_td_grid(const EffectiveChoi& j, int grid) {
  Mat phi = choi_target_phi(j.k);
  Mat bot = choi_target_bot(j.k);
  double best = 1e9;
  for (int i = 0; i <= grid; ++i) {
    double p = double(i) / grid;
    best = std::min(best, trace_norm(j.j - p * phi - (1 - p) * bot));
  }
  return best;
}

namespace {

// gamma(p): PSD-truncated renormalized Tr_MH(J - p Phi) / (1 - p).
Mat nm_gamma(const Mat& j, const Mat& phi, int k, double p) {
  const int dk = 1 << k;
  const int dm = dk + 1;
  Mat diff = j - p * phi;
  Mat gamma = Mat::Zero(dm, dm);
  for (int mh = 0; mh < dk; ++mh)
    for (int a = 0; a < dm; ++a)
      for (int b = 0; b < dm; ++b) gamma(a, b) += diff(mh * dm + a, mh * dm + b);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (gamma + gamma.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  double tr = ev.sum();
  Mat out;
  if (tr <= 1e-12) {
    out = Mat::Identity(dm, dm) / double(dm);
  } else {
    out = es.eigenvectors() * (ev / tr).asDiagonal() *
          es.eigenvectors().adjoint();
  }
  return out;
}

}  // namespace

SecurityReport fit_nm(const EffectiveChoi& j) {
  const int dk = 1 << j.k;
  const int dm = dk + 1;
  Mat phi = choi_target_phi(j.k);
  auto resid = [&](double p) {
    Mat gamma = nm_gamma(j.j, phi, j.k, p);
    Mat target = p * phi;
    for (int mh = 0; mh < dk; ++mh)
      for (int a = 0; a < dm; ++a)
        for (int b = 0; b < dm; ++b)
          target(mh * dm + a, mh * dm + b) += (1 - p) * gamma(a, b) / double(dk);
    return trace_norm(j.j - target);
  };
  // Coarse grid then ternary refinement around the best cell.
  double best = 1e9, best_p = 0;
  const int grid = 100;
  for (int i = 0; i <= grid; ++i) {
    double p = double(i) / grid;
    double v = resid(p);
    if (v < best) {
      best = v;
      best_p = p;
    }
  }
  double lo = std::max(0.0, best_p - 1.0 / grid);
  double hi = std::min(1.0, best_p + 1.0 / grid);
  for (int it = 0; it < 60; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (resid(m1) <= resid(m2))
      hi = m2;
    else
      lo = m1;
  }
  SecurityReport rep;
  rep.p = 0.5 * (lo + hi);
  rep.residual = std::min(best, resid(rep.p));
  if (best < resid(rep.p)) rep.p = best_p;
  return rep;
}

}  // namespace tl
