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

#include <vector>

#include "tamperlab/linalg.hpp"

namespace tl {

enum class ChannelKind { CPTP, CP };

// Completely positive map given by an operator list on a register subset.
struct Channel {
  std::vector<Mat> kraus;
  ChannelKind kind = ChannelKind::CPTP;

  int64_t dim() const { return kraus.empty() ? 0 : kraus[0].rows(); }

  // sum K^dagger K compared against the identity: equality for CPTP,
  // domination for CP.
  void validate(double tol = kTolStrict) const;

  Mat apply(const Mat& rho) const;
  Mat apply_on(const Mat& rho, const std::vector<int>& qs, int n) const;

  // Choi matrix J = (Λ ⊗ I)(|Φ><Φ|) with Φ unnormalized sum |ii>.
  Mat choi() const;

  static Channel identity(int64_t dim);
  static Channel unitary(const Mat& u);
};

// Random CPTP channel on `qubits` qubits: a Haar-random unitary on
// (system ⊗ env_qubits fresh environment) followed by tracing the
// environment. This is the declared sampling measure for random adversaries.
Channel random_channel(int qubits, Rng& rng, int env_qubits = 2);

// Random quantum instrument on `qubits` qubits with `outcomes` classical
// outcomes: a random isometry followed by a projective measurement of an
// outcome register. The returned CP maps sum to a CPTP map.
std::vector<Channel> random_instrument(int qubits, int outcomes, Rng& rng,
                                       int env_qubits = 1);

}  // namespace tl
