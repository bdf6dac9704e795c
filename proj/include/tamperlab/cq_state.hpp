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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tamperlab/linalg.hpp"
#include "tamperlab/registers.hpp"

namespace tl {

// Hybrid classical-quantum state: a map from classical register assignments
// to subnormalized PSD operators over the quantum registers. Branch operators
// sum to trace one.
class CqState {
 public:
  CqState() = default;
  explicit CqState(RegisterLayout layout) : layout_(std::move(layout)) {}

  static CqState pure(RegisterLayout layout, const Vec& amplitudes);
  static CqState from_density(RegisterLayout layout, const Mat& rho);

  const RegisterLayout& layout() const { return layout_; }
  std::map<ClassicalAssignment, Mat>& branches() { return branches_; }
  const std::map<ClassicalAssignment, Mat>& branches() const {
    return branches_;
  }

  void add_branch(const ClassicalAssignment& a, const Mat& op);

  double total_trace() const;
  // PSD within tolerance per branch and total trace 1 within tolerance.
  void validate(double tol = kTolStrict) const;

  // Single-branch access for states with no classical registers.
  const Mat& sole_branch() const;

  // Sum over classical branches after erasing classical registers: forms the
  // block structure as a plain density matrix over (classical ⊗ quantum).
  Mat block_density() const;

  bool is_pure(double tol = kTolLoose) const;

 private:
  RegisterLayout layout_;
  std::map<ClassicalAssignment, Mat> branches_;
};

// Marginal on `keep` (register ids, both kinds); classical registers outside
// keep are summed out, quantum registers outside keep are traced out.
CqState tensor_and_trace(const CqState& state,
                         const std::vector<std::string>& keep);

struct Metrics {
  double trace_distance;
  double fidelity;
};

// Trace distance stacks branches block-diagonally over the union of classical
// supports; fidelity is computed branch-wise on matching assignments (zero
// contribution from unmatched ones).
Metrics metrics(const CqState& a, const CqState& b);

// Canonical purification (sqrt(rho) ⊗ I) sum_i |i>|i> of a density operator;
// the new register id is `mirror_id`.
CqState canonical_purification(const Mat& rho, const std::string& reg_id,
                               const std::string& mirror_id);

struct BellTestResult {
  double accept_prob;
  CqState post_accept;
  CqState post_reject;
};

// Binary measurement {Phi^{⊗λ}, I - Phi^{⊗λ}} between two equal-size register
// groups.
BellTestResult bell_test(const CqState& state,
                         const std::vector<std::string>& reg_e,
                         const std::vector<std::string>& reg_ehat);

struct SchmidtProfile {
  std::vector<std::string> cut;  // registers on the left side
  int rank = 0;
  std::vector<double> coefficients;  // singular values, descending
};

// Schmidt structure of a pure state across (cut | rest). Throws on mixed
// input; the Schmidt number of mixed states is tracked by construction, not
// computed.
SchmidtProfile schmidt_structure(const CqState& state,
                                 const std::vector<std::string>& cut);

}  // namespace tl
