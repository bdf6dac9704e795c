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

#include "tamperlab/channel.hpp"

namespace tl {

void Channel::validate(double tol) const {
  TL_REQUIRE(!kraus.empty(), "channel with no Kraus operators");
  const int64_t d = kraus[0].cols();
  Mat sum = Mat::Zero(d, d);
  for (const auto& k : kraus) sum += k.adjoint() * k;
  Mat delta = sum - Mat::Identity(d, d);
  if (kind == ChannelKind::CPTP) {
    TL_REQUIRE(delta.cwiseAbs().maxCoeff() <= tol,
               "CPTP check failed: sum K^dagger K != I");
  } else {
    Eigen::SelfAdjointEigenSolver<Mat> es(delta, Eigen::EigenvaluesOnly);
    TL_REQUIRE(es.eigenvalues().maxCoeff() <= tol,
               "CP check failed: sum K^dagger K exceeds I");
  }
}

Mat Channel::apply(const Mat& rho) const {
  Mat out = Mat::Zero(kraus[0].rows(), kraus[0].rows());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

Mat Channel::apply_on(const Mat& rho, const std::vector<int>& qs, int n) const {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) out += conjugate_on_qubits(k, qs, rho, n);
  return out;
}

Mat Channel::choi() const {
  const int64_t d = kraus[0].cols();
  Mat j = Mat::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    // vec(K) vec(K)^dagger with (out, in) index order.
    Vec v(d * d);
    for (int64_t r = 0; r < d; ++r)
      for (int64_t c = 0; c < d; ++c) v(r * d + c) = k(r, c);
    j += v * v.adjoint();
  }
  return j;
}

Channel Channel::identity(int64_t dim) {
  return Channel{{Mat::Identity(dim, dim)}, ChannelKind::CPTP};
}

Channel Channel::unitary(const Mat& u) {
  return Channel{{u}, ChannelKind::CPTP};
}

Channel random_channel(int qubits, Rng& rng, int env_qubits) {
  const int64_t ds = int64_t(1) << qubits;
  const int64_t de = int64_t(1) << env_qubits;
  Mat u = random_unitary(int(ds * de), rng);
  // K_e = (I ⊗ <e|) U (I ⊗ |0>), with the system leading.
  Channel ch;
  ch.kind = ChannelKind::CPTP;
  for (int64_t e = 0; e < de; ++e) {
    Mat k(ds, ds);
    for (int64_t r = 0; r < ds; ++r)
      for (int64_t c = 0; c < ds; ++c) k(r, c) = u(r * de + e, c * de + 0);
    ch.kraus.push_back(k);
  }
  return ch;
}

std::vector<Channel> random_instrument(int qubits, int outcomes, Rng& rng,
                                       int env_qubits) {
  TL_REQUIRE(outcomes >= 1, "instrument needs at least one outcome");
  const int64_t ds = int64_t(1) << qubits;
  const int64_t de = int64_t(1) << env_qubits;
  // Isometry onto (system ⊗ env ⊗ outcome); outcome measured projectively.
  // Build from a Haar unitary on the composite with fixed ancilla inputs.
  int64_t do_ = 1;
  while (do_ < outcomes) do_ *= 2;
  Mat u = random_unitary(int(ds * de * do_), rng);
  std::vector<Channel> out(static_cast<size_t>(outcomes));
  for (int o = 0; o < outcomes; ++o) out[size_t(o)].kind = ChannelKind::CP;
  for (int64_t e = 0; e < de; ++e) {
    for (int64_t o = 0; o < do_; ++o) {
      int oc = int(o) % outcomes;  // fold unused outcome levels
      Mat k(ds, ds);
      for (int64_t r = 0; r < ds; ++r)
        for (int64_t c = 0; c < ds; ++c)
          k(r, c) = u((r * de + e) * do_ + o, (c * de + 0) * do_ + 0);
      out[size_t(oc)].kraus.push_back(k);
    }
  }
  return out;
}

}  // namespace tl
