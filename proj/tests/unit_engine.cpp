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

#include "tamperlab/engine.hpp"

using namespace tl;

namespace {

// 2-split keyed code: shares (Y | X,Z), no EPR test.
KeyedCodeSpec qnmc2_spec(int k, int carrier_x, int carrier_y, int w1, int w2) {
  KeyedCodeSpec s;
  s.k = k;
  s.lambda = 0;
  s.purified = true;
  s.shares = {{carrier_y, QuantumRole::None, w1},
              {carrier_x, QuantumRole::ZBlock, w2}};
  return s;
}

// 3-split keyed code: shares (X | Y,E | Z), EPR test at decode.
KeyedCodeSpec tdc3_spec(int k, int lambda, int carrier_x, int carrier_y,
                        int w1, int w2, int w3) {
  KeyedCodeSpec s;
  s.k = k;
  s.lambda = lambda;
  s.purified = true;
  s.shares = {{carrier_x, QuantumRole::None, w1},
              {carrier_y, QuantumRole::BBlock, w2},
              {0, QuantumRole::ZBlock, w3}};
  return s;
}

double epr_fidelity_row(const ExperimentResult& r) {
  // <Phi| J |Phi> over the (mhat, m') grid, skipping the bot column.
  const int dk = 1 << r.k;
  const int dm = dk + 1;
  cxd acc = 0;
  for (int a = 0; a < dk; ++a)
    for (int b = 0; b < dk; ++b) acc += r.j(a * dm + a, b * dm + b);
  return acc.real() / dk;
}

}  // namespace

TEST_CASE("identity adversary recovers the message exactly") {
  for (auto spec : {qnmc2_spec(1, 2, 1, 0, 0), tdc3_spec(1, 2, 1, 1, 0, 0, 0)}) {
    KeyedExperiment exp(spec, 99);
    auto res = exp.run(exp.identity_adversary());
    CHECK(std::abs(res.j.trace().real() - 1.0) < 1e-9);
    CHECK(epr_fidelity_row(res) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("engine matches the enumerated-key oracle: 2-split, |Z|=1") {
  KeyedCodeSpec spec = qnmc2_spec(1, 1, 1, 0, 0);
  KeyedExperiment exp(spec, 7);
  Rng rng(3);
  for (int t = 0; t < 6; ++t) {
    auto adv = exp.sample_adversary(rng, 1);
    auto fast = exp.run(adv);
    auto slow = exp.run_enumerated_oracle(adv);
    CHECK((fast.j - slow.j).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(fast.j.trace().real() - 1.0) < 1e-8);
    CHECK(is_psd(fast.j, 1e-8));
  }
}

TEST_CASE("engine matches the enumerated-key oracle: 3-split TDC, |Z|=2") {
  KeyedCodeSpec spec = tdc3_spec(1, 1, 1, 1, 0, 0, 0);
  KeyedExperiment exp(spec, 11);
  Rng rng(5);
  for (int t = 0; t < 3; ++t) {
    auto adv = exp.sample_adversary(rng, 1);
    auto fast = exp.run(adv);
    auto slow = exp.run_enumerated_oracle(adv);
    CHECK((fast.j - slow.j).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::abs(fast.j.trace().real() - 1.0) < 1e-8);
  }
}

TEST_CASE("engine matches the oracle with shared entangled ancilla") {
  // Bounded-storage flavor: 1 ancilla qubit on shares 1 and 3.
  KeyedCodeSpec spec = tdc3_spec(1, 1, 1, 1, 1, 0, 1);
  KeyedExperiment exp(spec, 13);
  Rng rng(17);
  for (int t = 0; t < 3; ++t) {
    auto adv = exp.sample_adversary(rng, 1);
    auto fast = exp.run(adv);
    auto slow = exp.run_enumerated_oracle(adv);
    CHECK((fast.j - slow.j).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("engine matches the oracle in basis-message mode") {
  KeyedCodeSpec spec = tdc3_spec(1, 1, 1, 1, 0, 1, 0);
  spec.purified = false;
  spec.basis_message = 1;
  KeyedExperiment exp(spec, 19);
  Rng rng(23);
  for (int t = 0; t < 3; ++t) {
    auto adv = exp.sample_adversary(rng, 1);
    auto fast = exp.run(adv);
    auto slow = exp.run_enumerated_oracle(adv);
    REQUIRE(fast.probs.size() == slow.probs.size());
    for (size_t i = 0; i < fast.probs.size(); ++i)
      CHECK(fast.probs[i] == doctest::Approx(slow.probs[i]).epsilon(1e-9));
  }
}

TEST_CASE("three-out-of-three marginals of the keyed TDC are maximally mixed") {
  KeyedCodeSpec spec = tdc3_spec(1, 2, 2, 1, 0, 0, 0);
  KeyedExperiment exp(spec, 29);
  Rng rng(31);
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      CHECK(exp.two_share_marginal_distance(a, b, 3, rng) < 1e-9);
}

TEST_CASE("substitution attack pins the decoded message") {
  KeyedCodeSpec spec = tdc3_spec(1, 2, 1, 1, 0, 0, 0);
  Rng rng(37);
  auto res = substitution_attack_run(spec, 0, 41, rng);
  // Effective output: |0><0| on M' against a detached purifier.
  const int dm = (1 << 1) + 1;
  CHECK(std::abs(res.j.trace().real() - 1.0) < 1e-9);
  double mass_fixed = 0;
  for (int mh = 0; mh < 2; ++mh) mass_fixed += res.j(mh * dm + 0, mh * dm + 0).real();
  CHECK(mass_fixed == doctest::Approx(1.0).epsilon(1e-9));
  // The purifier is maximally mixed: off-diagonal MH coherence vanishes.
  CHECK(std::abs(res.j(0 * dm + 0, 1 * dm + 0)) < 1e-9);
}
