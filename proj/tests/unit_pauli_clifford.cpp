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
#include "tamperlab/twirl.hpp"

using namespace tl;

TEST_CASE("pauli symplectic composition matches matrix composition") {
  // Exhaustive over all single-qubit pairs.
  auto group1 = enumerate_pauli(1);
  for (const auto& p : group1)
    for (const auto& q : group1) {
      Mat expect = p.matrix() * q.matrix();
      Mat got = p.compose(q).matrix();
      CHECK((expect - got).cwiseAbs().maxCoeff() < 1e-12);
    }
  // 200 random 2-qubit pairs.
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    PauliOp p = PauliOp::from_index(2, rng.below(16));
    PauliOp q = PauliOp::from_index(2, rng.below(16));
    p.phase_log = int(rng.below(4));
    q.phase_log = int(rng.below(4));
    Mat expect = p.matrix() * q.matrix();
    Mat got = p.compose(q).matrix();
    CHECK((expect - got).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("group sizes") {
  CHECK(enumerate_pauli(1).size() == 4);
  CHECK(enumerate_pauli(2).size() == 16);
  CHECK(enumerate_clifford_mod_phase(1).size() == 24);
  CHECK(enumerate_clifford_mod_phase(2).size() == 11520);
}

TEST_CASE("clifford closure: conjugated Paulis stay Paulis") {
  const auto& group = enumerate_clifford_mod_phase(1);
  for (const auto& c : group)
    for (const auto& p : enumerate_pauli(1)) {
      auto conj = c.conjugate_pauli(p);
      REQUIRE(conj.has_value());
    }
}

TEST_CASE("uniform conjugation counting: 24/3 = 8 per pair") {
  const auto& group = enumerate_clifford_mod_phase(1);
  for (uint64_t pi = 1; pi < 4; ++pi)
    for (uint64_t qi = 1; qi < 4; ++qi) {
      PauliOp p = PauliOp::from_index(1, pi);
      PauliOp q = PauliOp::from_index(1, qi);
      int count = 0;
      for (const auto& c : group) {
        auto conj = c.conjugate_pauli(p);
        REQUIRE(conj.has_value());
        if (conj->equals_mod_phase(q)) ++count;
      }
      CHECK(count == 8);
    }
}

TEST_CASE("pauli one-design twirl closed forms") {
  // |0><0| on A alone -> I/2.
  RegisterLayout lay1({{"A", RegKind::Quantum, 1, 0}});
  CqState zero = CqState::pure(lay1, basis_vector(2, 0));
  CqState tw = pauli_one_design_twirl(zero, {"A"});
  CHECK(trace_distance(tw.sole_branch(), 0.5 * Mat::Identity(2, 2)) < 1e-12);

  // EPR on (A,B) -> I/2 ⊗ I/2.
  RegisterLayout lay2({{"A", RegKind::Quantum, 1, 0},
                       {"B", RegKind::Quantum, 1, 1}});
  CqState phi = CqState::pure(lay2, epr_vector(1));
  CqState tw2 = pauli_one_design_twirl(phi, {"A"});
  CHECK(trace_distance(tw2.sole_branch(), 0.25 * Mat::Identity(4, 4)) < 1e-12);

  // |+><+|_A ⊗ |1><1|_B -> I/2 ⊗ |1><1|.
  Vec plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  Vec one = basis_vector(2, 1);
  CqState prod = CqState::pure(lay2, kron_vec(plus, one));
  CqState tw3 = pauli_one_design_twirl(prod, {"A"});
  Mat expect = kron(0.5 * Mat::Identity(2, 2), one * one.adjoint());
  CHECK(trace_distance(tw3.sole_branch(), expect) < 1e-12);

  // General: U_A ⊗ rho_B on random states, n in {1,2}.
  Rng rng(9);
  for (int na = 1; na <= 2; ++na) {
    for (int t = 0; t < 20; ++t) {
      int nb = 1;
      RegisterLayout lay({{"A", RegKind::Quantum, na, 0},
                          {"B", RegKind::Quantum, nb, 1}});
      Mat rho = random_density(int(lay.quantum_dim()), rng);
      CqState s = CqState::from_density(lay, rho);
      CqState tws = pauli_one_design_twirl(s, {"A"});
      auto qb = lay.qubits_of("B");
      Mat margB = partial_trace_keep(rho, qb, lay.total_qubits());
      Mat want = kron(Mat::Identity(1 << na, 1 << na) / double(1 << na), margB);
      CHECK(trace_distance(tws.sole_branch(), want) < 1e-9);
    }
  }
}

TEST_CASE("clifford subgroup twirl closed forms at n=1") {
  Rng rng(13);
  // State on (B, A): B one qubit, A one qubit; A is the twirled register.
  const int n = 2;
  std::vector<int> qa{1};
  for (int t = 0; t < 5; ++t) {
    Mat rho = random_density(4, rng);
    for (uint64_t pi = 0; pi < 4; ++pi)
      for (uint64_t qi = 0; qi < 4; ++qi) {
        PauliOp p = PauliOp::from_index(1, pi);
        PauliOp q = PauliOp::from_index(1, qi);
        Mat got = clifford_pq_twirl(rho, qa, n, p, q);
        if (pi != qi) {
          CHECK(got.cwiseAbs().maxCoeff() < 1e-9);
        } else if (pi == 0) {
          CHECK(trace_distance(got, rho) < 1e-9);
        } else {
          Mat margB = partial_trace_keep(rho, {0}, n);
          Mat want =
              (4.0 * kron(margB, 0.5 * Mat::Identity(2, 2)) - rho) / 3.0;
          CHECK((got - want).cwiseAbs().maxCoeff() < 1e-9);
        }
      }
  }
}

TEST_CASE("P=Q=X twirl of |0><0| ⊗ |0><0| gives diag(1/3,2/3) on A") {
  // B fixed |0>, A = |0>; twirl with P=Q=X.
  Vec v = kron_vec(basis_vector(2, 0), basis_vector(2, 0));
  Mat rho = v * v.adjoint();
  PauliOp x{1, 0, 0, 1};
  Mat got = clifford_pq_twirl(rho, {1}, 2, x, x);
  Mat expectA(2, 2);
  expectA << 1.0 / 3, 0, 0, 2.0 / 3;
  Mat expect = kron(basis_vector(2, 0) * basis_vector(2, 0).adjoint(), expectA);
  CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("random cliffords are cliffords and average to a 1-design") {
  Rng rng(17);
  for (int n = 1; n <= 3; ++n) {
    for (int t = 0; t < 4; ++t) {
      CliffordOp c = random_clifford(n, rng);
      CHECK(is_unitary(c.unitary, 1e-9));
      if (n <= 2) CHECK(c.is_clifford(1e-7));
    }
  }
  // Empirical 1-design check at n=1 over many samples.
  Mat rho = random_density(2, rng);
  Mat acc = Mat::Zero(2, 2);
  const int samples = 4000;
  for (int s = 0; s < samples; ++s) {
    CliffordOp c = random_clifford(1, rng);
    acc += c.unitary * rho * c.unitary.adjoint();
  }
  acc /= double(samples);
  CHECK(trace_distance(acc, 0.5 * Mat::Identity(2, 2)) < 0.1);
}

TEST_CASE("keyed family: ideal grade averages to the depolarizing map") {
  KeyedUnitaryFamily fam(1, DesignGrade::Ideal);
  Rng rng(19);
  Mat rho = random_density(2, rng);
  Mat acc = Mat::Zero(2, 2);
  for (uint64_t k = 0; k < fam.key_space(); ++k) {
    Mat u = fam.sample(k).unitary;
    acc += u * rho * u.adjoint();
  }
  acc /= double(fam.key_space());
  CHECK(trace_distance(acc, 0.5 * Mat::Identity(2, 2)) < 1e-9);
}

TEST_CASE("twirl with side information: decomposition matches enumeration") {
  Rng rng(29);
  // A = 1 qubit (positions {0}), E = 1 qubit (positions {1}).
  for (int t = 0; t < 4; ++t) {
    Channel attack = random_channel(2, rng);
    auto d = twirl_with_side_info(attack.kraus, 1, 1);
    // Phi1 + Phi2 trace preserving on E.
    Mat sum = Mat::Zero(2, 2);
    for (const auto& k : d.phi1) sum += k.adjoint() * k;
    for (const auto& k : d.phi2) sum += k.adjoint() * k;
    CHECK((sum - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);

    // Exact closed form equals the enumerated group average; the approximate
    // split stays within the residual bound. Test on states over (Ahat,A,E).
    const int n = 3;
    std::vector<int> qa{1}, qe{2}, qae{1, 2};
    for (int s = 0; s < 6; ++s) {
      Mat rho = random_density(8, rng);
      Mat brute = twirl_channel_enumerated(attack.kraus, qa, qae, rho, n);
      Mat closed = twirl_decomposition_apply(d, rho, qa, qe, n);
      CHECK((brute - closed).cwiseAbs().maxCoeff() < 1e-9);
      Mat approx = twirl_decomposition_apply_approx(d, rho, qa, qe, n);
      CHECK(trace_distance(brute, approx) <= d.residual_bound);
    }
  }
}

TEST_CASE("twirl with side information: identity and single-Pauli attacks") {
  // attack = identity on (A,E): Phi1 = identity on E, Phi2 empty.
  auto d = twirl_with_side_info({Mat::Identity(4, 4)}, 1, 1);
  REQUIRE(d.phi1.size() == 1);
  CHECK(d.phi2.empty());
  CHECK((d.phi1[0] - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // attack = X conjugation on A: Phi1 empty, Phi2 = identity on E.
  PauliOp x{1, 0, 0, 1};
  auto d2 = twirl_with_side_info({kron(x.matrix(), Mat::Identity(2, 2))}, 1, 1);
  CHECK(d2.phi1.empty());
  REQUIRE(d2.phi2.size() == 1);
  CHECK((d2.phi2[0] - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // attack = full depolarizer on A: Phi1 carries weight 1/4.
  Channel dep;
  dep.kind = ChannelKind::CPTP;
  for (uint64_t i = 0; i < 4; ++i)
    dep.kraus.push_back(
        0.5 * kron(PauliOp::from_index(1, i).matrix(), Mat::Identity(2, 2)));
  auto d3 = twirl_with_side_info(dep.kraus, 1, 1);
  double w1 = 0;
  for (const auto& k : d3.phi1) w1 += (k.adjoint() * k).trace().real() / 2;
  CHECK(w1 == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("transpose method") {
  CHECK(transpose_trick_check(Mat::Identity(2, 2)));
  PauliOp x{1, 0, 0, 1};
  CHECK(transpose_trick_check(x.matrix()));
  Rng rng(37);
  CliffordOp c = random_clifford(2, rng);
  CHECK(transpose_trick_check(c.unitary));
  Mat m = random_unitary(4, rng);
  CHECK(transpose_trick_check(m));
}
