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

#include <map>

#include "tamperlab/classical.hpp"

using namespace tl;

TEST_CASE("GF(2^w) field axioms hold for the modulus table") {
  for (int w = 1; w <= 8; ++w) {
    GF2w f(w);
    for (uint32_t a = 1; a < f.size(); ++a) {
      CHECK(f.mul(a, f.inv(a)) == 1);
    }
  }
  // Spot checks at larger widths.
  Rng rng(2);
  for (int w : {12, 16, 21, 24}) {
    GF2w f(w);
    for (int t = 0; t < 200; ++t) {
      uint32_t a = uint32_t(rng.bits(w));
      if (a == 0) continue;
      CHECK(f.mul(a, f.inv(a)) == 1);
      uint32_t b = uint32_t(rng.bits(w));
      uint32_t c = uint32_t(rng.bits(w));
      CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
    }
  }
}

TEST_CASE("shamir (3,2,3): correctness exhaustive over secrets and coeffs") {
  ShamirScheme s = shamir(3, 2, 3);
  for (uint32_t secret = 0; secret < 8; ++secret) {
    for (uint32_t c = 0; c < 8; ++c) {
      auto shares = s.share(secret, {c});
      // Any 2 of 3 shares reconstruct.
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          CHECK(s.reconstruct({{i, shares[size_t(i)]}, {j, shares[size_t(j)]}}) ==
                secret);
        }
    }
  }
}

TEST_CASE("shamir single-share marginal uniform; privacy distance zero") {
  ShamirScheme s = shamir(3, 2, 3);
  for (uint32_t secret = 0; secret < 8; ++secret) {
    for (int party = 0; party < 3; ++party) {
      std::map<uint32_t, int> hist;
      for (uint32_t c = 0; c < 8; ++c) hist[s.share(secret, {c})[size_t(party)]]++;
      CHECK(hist.size() == 8);
      for (auto& [v, n] : hist) CHECK(n == 1);
    }
  }
  // Distance between single-share distributions of two secrets is zero: both
  // are uniform as shown above.
}

namespace {

ClassicalNmc repetition_toy() {
  // k=1, 1 bit per share, x = y = m; dec outputs x if x == y else bot.
  ClassicalNmc c;
  c.k = 1;
  c.n1 = 1;
  c.n2 = 1;
  c.enc = {{{0, 0}}, {{1, 1}}};
  c.dec = {0, ClassicalNmc::kBot, ClassicalNmc::kBot, 1};
  return c;
}

}  // namespace

TEST_CASE("identity tampering has zero NM error") {
  ClassicalNmc c = repetition_toy();
  c.check_perfect_correctness();
  // The exhaustive oracle includes the identity pair; error from identity
  // alone would be 0, so the oracle result is driven by other pairs. Check a
  // direct fit for the identity pair instead.
  std::vector<std::vector<double>> dist = {{1, 0, 0}, {0, 1, 0}};
  CHECK(nm_fit_distance(dist) < 1e-9);
}

TEST_CASE("negation/identity pair on the repetition toy, hand oracle") {
  // f = negation on x, g = identity: decoder sees (¬m, m) -> bot always.
  ClassicalNmc c = repetition_toy();
  std::vector<std::vector<double>> dist = {{0, 0, 1}, {0, 0, 1}};
  // Fit: p=0, D = bot exactly.
  CHECK(nm_fit_distance(dist) < 1e-9);
  // The full-negation pair f=¬, g=¬ maps m to ¬m: distance 1/2 at best fit.
  std::vector<std::vector<double>> flip = {{0, 1, 0}, {1, 0, 0}};
  CHECK(nm_fit_distance(flip) == doctest::Approx(0.5).epsilon(1e-6));
  // Repetition toy is maximally malleable: exhaustive error is 1/2 (the
  // negation pair flips both shares consistently).
  double err = nm_error_exhaustive(c, false);
  CHECK(err == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("DKO bias agreement for k=1 codes") {
  Rng rng(7);
  ClassicalNmc c = search_tiny_nmc(1, 2, 2, 6, rng);
  double err = c.verified_error;
  double bias = dko_bitflip_bias(c);
  CHECK(err == doctest::Approx(bias).epsilon(1e-10));
  // And for the repetition toy.
  ClassicalNmc rep = repetition_toy();
  CHECK(nm_error_exhaustive(rep, false) ==
        doctest::Approx(dko_bitflip_bias(rep)).epsilon(1e-10));
}

TEST_CASE("searched tiny NMC is perfectly correct with recorded error") {
  Rng rng(11);
  ClassicalNmc c = search_tiny_nmc(1, 2, 2, 8, rng);
  c.check_perfect_correctness();
  CHECK(c.verified_error >= 0);
  CHECK(c.verified_error <= 1.0);
  // Shares (1,1): best achievable error is large; still returned honestly.
  ClassicalNmc tiny = search_tiny_nmc(1, 1, 1, 8, rng);
  tiny.check_perfect_correctness();
  CHECK(tiny.verified_error >= 0.4);
}

TEST_CASE("exhaustive NM error is monotone under family restriction") {
  // Restricting to a subfamily can only lower the max; sanity-check with the
  // identity-only family (error zero) versus the full family.
  ClassicalNmc c = repetition_toy();
  double full = nm_error_exhaustive(c, false);
  CHECK(full >= 0.0 - 1e-12);
  std::vector<std::vector<double>> ident = {{1, 0, 0}, {0, 1, 0}};
  CHECK(nm_fit_distance(ident) <= full + 1e-12);
}

TEST_CASE("pigeonhole rejection") {
  Rng rng(13);
  CHECK_THROWS(search_tiny_nmc(3, 1, 1, 4, rng));
}

TEST_CASE("toeplitz extractor + inverter joint law, exhaustive") {
  // eta=4, d=6, l=3: joint law of (IExt(Ext(U,s),s), s, Ext(U,s)) equals
  // (U, s, Ext(U,s)) — exhaustively over sources, seeds and kernel coins.
  LinearExtractor ext = toeplitz_extractor(4, 3);
  CHECK(ext.d == 6);
  for (uint64_t s = 0; s < (uint64_t(1) << ext.d); ++s) {
    // Distribution of (w) given Ext(w,s)=y must be uniform over the fiber;
    // IExt samples particular + uniform kernel element, so comparing sets
    // suffices: the fiber partition must cover the source space exactly.
    std::map<uint32_t, std::set<uint32_t>> fibers;
    for (uint32_t w = 0; w < 16; ++w) fibers[ext.extract(w, s)].insert(w);
    for (auto& [y, set0] : fibers) {
      auto f = ext.fiber(y, s);
      REQUIRE(f.has_value());
      // Enumerate particular + kernel span.
      std::set<uint32_t> span;
      size_t kcount = f->second.size();
      for (uint32_t mask = 0; mask < (uint32_t(1) << kcount); ++mask) {
        uint32_t w = f->first;
        for (size_t b = 0; b < kcount; ++b)
          if ((mask >> b) & 1) w ^= f->second[b];
        span.insert(w);
      }
      CHECK(span == set0);
    }
    // Empty fibers answer bot.
    for (uint32_t y = 0; y < 8; ++y) {
      if (!fibers.count(y)) CHECK(!ext.fiber(y, s).has_value());
    }
  }
}

TEST_CASE("toeplitz: Ext(IExt(y,s),s) = y on non-empty fibers") {
  LinearExtractor ext = toeplitz_extractor(6, 2);
  Rng rng(17);
  for (int t = 0; t < 500; ++t) {
    uint64_t s = rng.bits(ext.d);
    uint32_t y = uint32_t(rng.bits(ext.l));
    auto w = ext.invert(y, s, rng);
    if (w.has_value()) CHECK(ext.extract(*w, s) == y);
    // Full-rank seeds never produce bot.
    if (ext.rank(s) == ext.l) CHECK(w.has_value());
  }
}

TEST_CASE("toy nmext measured errors") {
  ToyNmExt e = toy_nmext(2, 1);
  // IP over GF(2)^2: exact bias measured by enumeration.
  double err = e.measured_strong_error();
  CHECK(err >= 0);
  CHECK(err < 0.5);
  // One source fixed constant zero: extraction fails (output constant).
  uint32_t r0 = e.extract(0, 0);
  bool all_same = true;
  for (uint32_t y = 0; y < 4; ++y)
    if (e.extract(0, y) != r0) all_same = false;
  CHECK(all_same);
  // Identity tampering: R' = R always.
  for (uint32_t x = 0; x < 4; ++x)
    for (uint32_t y = 0; y < 4; ++y) CHECK(e.extract(x, y) == e.extract(x, y));
}
