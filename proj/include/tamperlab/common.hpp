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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tl {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Absolute tolerances used across the library. PSD / trace / unitarity checks
// run at kTolStrict; certified bounds always carry an explicit extra slack.
inline constexpr double kTolStrict = 1e-9;
inline constexpr double kTolLoose = 1e-8;
inline constexpr double kBoundSlack = 1e-6;

// Total simultaneous quantum dimension cap, as log2 (qubits).
inline constexpr int kDefaultQubitCap = 15;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TL_REQUIRE(cond, msg)            \
  do {                                   \
    if (!(cond)) throw ::tl::Error(msg); \
  } while (0)

// Deterministic RNG stream. Each trial derives its own stream from
// (master_seed, index) so reports do not depend on the worker count.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  static Rng derived(uint64_t master, uint64_t index) {
    // SplitMix64 mixing of (master, index).
    uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  double uniform() { return unif_(gen_); }
  double gaussian() { return gauss_(gen_); }
  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) {
    std::uniform_int_distribution<uint64_t> d(0, n - 1);
    return d(gen_);
  }
  uint64_t bits(int nbits) {
    return nbits == 0 ? 0 : below(uint64_t(1) << nbits);
  }
  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace tl
