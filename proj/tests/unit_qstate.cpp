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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tamperlab/channel.hpp"
#include "tamperlab/cq_state.hpp"

using namespace tl;

namespace {

RegisterLayout two_qubit_layout() {
  return RegisterLayout({{"A", RegKind::Quantum, 1, 0},
                         {"B", RegKind::Quantum, 1, 1}});
}

CqState epr_state() {
  return CqState::pure(two_qubit_layout(), epr_vector(1));
}

}  // namespace

TEST_CASE("partial trace identity and EPR marginal") {
  CqState phi = epr_state();
  CqState same = tensor_and_trace(phi, {"A", "B"});
  CHECK(metrics(phi, same).trace_distance == doctest::Approx(0).epsilon(1e-12));

  CqState marg = tensor_and_trace(phi, {"A"});
  Mat expect = 0.5 * Mat::Identity(2, 2);
  CHECK(trace_distance(marg.sole_branch(), expect) < 1e-12);
}

TEST_CASE("classical register summed out as convexity") {
  RegisterLayout lay({{"c", RegKind::Classical, 1, 0},
                      {"Q", RegKind::Quantum, 1, 0}});
  Rng rng(7);
  Mat rho0 = random_density(2, rng);
  Mat rho1 = random_density(2, rng);
  CqState s(lay);
  s.add_branch({0}, 0.5 * rho0);
  s.add_branch({1}, 0.5 * rho1);
  s.validate(1e-9);
  CqState t = tensor_and_trace(s, {"Q"});
  CHECK(trace_distance(t.sole_branch(), 0.5 * rho0 + 0.5 * rho1) < 1e-12);
}

TEST_CASE("metrics on trivial pairs") {
  CqState phi = epr_state();
  auto m = metrics(phi, phi);
  CHECK(m.trace_distance == doctest::Approx(0).epsilon(1e-12));
  CHECK(m.fidelity == doctest::Approx(1).epsilon(1e-9));

  RegisterLayout lay({{"Q", RegKind::Quantum, 1, 0}});
  CqState zero = CqState::pure(lay, basis_vector(2, 0));
  CqState one = CqState::pure(lay, basis_vector(2, 1));
  auto m2 = metrics(zero, one);
  CHECK(m2.trace_distance == doctest::Approx(2).epsilon(1e-9));
  CHECK(m2.fidelity == doctest::Approx(0).epsilon(1e-9));
}

TEST_CASE("metrics of EPR vs |00> against eigendecomposition oracle") {
  CqState phi = epr_state();
  CqState zz = CqState::pure(two_qubit_layout(), basis_vector(4, 0));
  auto m = metrics(phi, zz);
  // Oracle: direct eigendecomposition of the 4x4 difference.
  Mat diff = phi.sole_branch() - zz.sole_branch();
  Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
  double expect = es.eigenvalues().cwiseAbs().sum();
  CHECK(m.trace_distance == doctest::Approx(expect).epsilon(1e-12));
  CHECK(m.fidelity == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("Fuchs-van de Graaf sandwich on random pairs") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    RegisterLayout lay({{"Q", RegKind::Quantum, 2, 0}});
    CqState a = CqState::from_density(lay, random_density(4, rng));
    CqState b = CqState::from_density(lay, random_density(4, rng));
    auto m = metrics(a, b);
    double lhs = 1 - m.fidelity;
    double mid = 0.5 * m.trace_distance;
    double rhs = std::sqrt(std::max(0.0, 1 - m.fidelity * m.fidelity));
    CHECK(lhs <= mid + 1e-8);
    CHECK(mid <= rhs + 1e-8);
  }
}

TEST_CASE("canonical purification") {
  // |0><0| purifies to |00>.
  Mat rho = Mat::Zero(2, 2);
  rho(0, 0) = 1;
  CqState p = canonical_purification(rho, "A", "Ahat");
  CHECK(trace_distance(p.sole_branch(),
                       basis_vector(4, 0) * basis_vector(4, 0).adjoint()) <
        1e-12);

  // Maximally mixed purifies to the EPR pair.
  CqState p2 = canonical_purification(0.5 * Mat::Identity(2, 2), "A", "Ahat");
  CHECK(trace_distance(p2.sole_branch(), epr_vector(1) * epr_vector(1).adjoint()) <
        1e-12);

  // diag(3/4, 1/4): Schmidt coefficients sqrt(3/4), sqrt(1/4).
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 0.75;
  d(1, 1) = 0.25;
  CqState p3 = canonical_purification(d, "A", "Ahat");
  auto prof = schmidt_structure(p3, {"A"});
  REQUIRE(prof.rank == 2);
  CHECK(prof.coefficients[0] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-9));
  CHECK(prof.coefficients[1] == doctest::Approx(std::sqrt(0.25)).epsilon(1e-9));
  // Tracing out the mirror returns rho.
  CqState back = tensor_and_trace(p3, {"A"});
  CHECK(trace_distance(back.sole_branch(), d) < 1e-9);

  Rng rng(3);
  Mat r = random_density(4, rng);
  CqState p4 = canonical_purification(r, "A", "Ahat");
  CqState back4 = tensor_and_trace(p4, {"A"});
  CHECK(trace_distance(back4.sole_branch(), r) < 1e-9);
}

TEST_CASE("bell test accepts EPR and rejects product states") {
  for (int lam = 1; lam <= 3; ++lam) {
    RegisterLayout lay({{"E", RegKind::Quantum, lam, 0},
                        {"Ehat", RegKind::Quantum, lam, 1}});
    CqState phi = CqState::pure(lay, epr_vector(lam));
    auto res = bell_test(phi, {"E"}, {"Ehat"});
    CHECK(res.accept_prob == doctest::Approx(1).epsilon(1e-9));

    CqState zeros = CqState::pure(lay, basis_vector(1 << (2 * lam), 0));
    auto res2 = bell_test(zeros, {"E"}, {"Ehat"});
    CHECK(res2.accept_prob ==
          doctest::Approx(std::pow(2.0, -lam)).epsilon(1e-9));
  }
}

TEST_CASE("bell test bound for constructed Schmidt ranks") {
  // Claim: Tr[Phi^{⊗λ} tau] <= R 2^{-λ} for pure states of Schmidt rank R.
  Rng rng(23);
  for (int lam = 2; lam <= 4; ++lam) {
    RegisterLayout lay({{"E", RegKind::Quantum, lam, 0},
                        {"Ehat", RegKind::Quantum, lam, 1}});
    for (int logr = 0; logr <= 2; ++logr) {
      int rank = 1 << logr;
      // Build a random pure state of Schmidt rank `rank` across the cut.
      const int64_t d = int64_t(1) << lam;
      Mat a = Mat::Zero(d, rank), b = Mat::Zero(d, rank);
      for (int c = 0; c < rank; ++c) {
        a.col(c) = random_state_vector(int(d), rng);
        b.col(c) = random_state_vector(int(d), rng);
      }
      // Orthonormalize columns.
      Eigen::HouseholderQR<Mat> qa(a), qb(b);
      Mat qa_q = qa.householderQ() * Mat::Identity(d, rank);
      Mat qb_q = qb.householderQ() * Mat::Identity(d, rank);
      Vec amp = Vec::Zero(d * d);
      Vec coef = random_state_vector(rank, rng);
      for (int c = 0; c < rank; ++c)
        for (int64_t i = 0; i < d; ++i)
          for (int64_t j = 0; j < d; ++j)
            amp(i * d + j) += coef(c) * qa_q(i, c) * qb_q(j, c);
      amp.normalize();
      CqState tau = CqState::pure(lay, amp);
      auto prof = schmidt_structure(tau, {"E"});
      CHECK(prof.rank <= rank);
      auto res = bell_test(tau, {"E"}, {"Ehat"});
      CHECK(res.accept_prob <= rank * std::pow(2.0, -lam) + 1e-9);
    }
  }
}

TEST_CASE("schmidt rank of EPR tensor powers") {
  for (int lam = 1; lam <= 3; ++lam) {
    RegisterLayout lay({{"E", RegKind::Quantum, lam, 0},
                        {"Ehat", RegKind::Quantum, lam, 1}});
    CqState phi = CqState::pure(lay, epr_vector(lam));
    auto prof = schmidt_structure(phi, {"E"});
    CHECK(prof.rank == (1 << lam));
  }
  // Qutrit embedded in 2-qubit pairs: (|00>+|11>+|22>)/sqrt(3), rank 3.
  RegisterLayout lay({{"E", RegKind::Quantum, 2, 0},
                      {"Ehat", RegKind::Quantum, 2, 1}});
  Vec amp = Vec::Zero(16);
  for (uint64_t j = 0; j < 3; ++j) amp(int64_t(j * 4 + j)) = 1 / std::sqrt(3.0);
  auto prof = schmidt_structure(CqState::pure(lay, amp), {"E"});
  CHECK(prof.rank == 3);
}

TEST_CASE("data processing inequality on random channel pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + int(rng.below(2));
    int64_t d = int64_t(1) << n;
    Mat a = random_density(int(d), rng);
    Mat b = random_density(int(d), rng);
    Channel ch = random_channel(n, rng);
    double before = trace_distance(a, b);
    double after = trace_distance(ch.apply(a), ch.apply(b));
    CHECK(after <= before + 1e-8);
  }
}

TEST_CASE("channel validation and Choi") {
  Rng rng(41);
  Channel ch = random_channel(2, rng);
  ch.validate(1e-9);
  Mat j = ch.choi();
  CHECK(is_psd(j, 1e-9));
  CHECK(j.trace().real() == doctest::Approx(4).epsilon(1e-9));
}

TEST_CASE("trace preserved by channels on subsets of registers") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    Mat rho = random_density(8, rng);
    Channel ch = random_channel(1, rng);
    Mat out = ch.apply_on(rho, {1}, 3);
    CHECK(out.trace().real() == doctest::Approx(1).epsilon(1e-9));
    CHECK(is_psd(out, 1e-9));
  }
}
