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

#include <string>

#include "tamperlab/linalg.hpp"

namespace tl {

// Effective Choi operator of a tampering experiment on (MH ⊗ M'), index
// m_hat * (2^k + 1) + m' with m' = 2^k the abort symbol.
struct EffectiveChoi {
  Mat j;
  int k = 1;
};

enum class Verdict { Certified, Violated, Inconclusive };

struct SecurityReport {
  double p = 0;          // fitted identity weight
  double residual = 0;   // upper bound on the best-fit trace distance
  double bound = 0;      // claimed bound being certified
  double slack = 0;      // numerical slack added to the bound
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

// Target Phi on the (MH, M') grid: the maximally entangled state of the
// average-case experiment (message sector only, bot column zero).
Mat choi_target_phi(int k);
// bot ⊗ U_MH.
Mat choi_target_bot(int k);

// Tamper-detection fit: residual(p) = || J - p Phi - (1-p) bot ⊗ U ||_1,
// minimized by ternary search (convex in p).
SecurityReport fit_td(const EffectiveChoi& j);

// Non-malleability fit: gamma(p) = PSD-truncated renormalized
// Tr_MH(J - p Phi) / (1 - p); residual = min_p ||J - p Phi - (1-p) gamma ⊗ U||_1.
// This upper bounds the true best-fit distance.
SecurityReport fit_nm(const EffectiveChoi& j);

// Dense-grid cross-validation value of the TD fit (testing hook).
double fit_td_grid(const EffectiveChoi& j, int grid);

}  // namespace tl
