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

#include "tamperlab/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

namespace tl {

// ---------------------------------------------------------------------------
// GF(2^w)
// ---------------------------------------------------------------------------

namespace {
// Minimal-weight irreducible polynomials, bit w set, for w = 1..24.
const uint32_t kModuli[25] = {
    0,        0x3,      0x7,      0xb,      0x13,     0x25,
    0x43,     0x83,     0x11b,    0x203,    0x409,    0x805,
    0x1053,   0x201b,   0x402b,   0x8003,   0x1002b,  0x20009,
    0x40081,  0x80027,  0x100009, 0x200005, 0x400003, 0x800021,
    0x1000087};
}  // namespace

GF2w::GF2w(int w) : w_(w) {
  TL_REQUIRE(w >= 1 && w <= 24, "GF2w: unsupported width");
  modulus_ = kModuli[w];
}

uint32_t GF2w::mul(uint32_t a, uint32_t b) const {
  uint64_t acc = 0;
  uint64_t aa = a;
  while (b) {
    if (b & 1) acc ^= aa;
    aa <<= 1;
    b >>= 1;
  }
  for (int bit = 2 * w_ - 2; bit >= w_; --bit)
    if ((acc >> bit) & 1) acc ^= uint64_t(modulus_) << (bit - w_);
  return uint32_t(acc);
}

uint32_t GF2w::inv(uint32_t a) const {
  TL_REQUIRE(a != 0, "GF2w: inverse of zero");
  uint32_t result = 1, base = a;
  uint64_t e = (uint64_t(1) << w_) - 2;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Shamir
// ---------------------------------------------------------------------------

ShamirScheme shamir(int parties, int threshold, int field_bits) {
  TL_REQUIRE((uint64_t(1) << field_bits) > uint64_t(parties),
             "shamir: field too small for the party count");
  TL_REQUIRE(threshold >= 1 && threshold <= parties, "shamir: bad threshold");
  return ShamirScheme{parties, threshold, field_bits};
}

std::vector<uint32_t> ShamirScheme::share(
    uint32_t secret, const std::vector<uint32_t>& coeffs) const {
  TL_REQUIRE(int(coeffs.size()) == threshold - 1,
             "shamir: coefficient arity mismatch");
  GF2w f(field_bits);
  std::vector<uint32_t> out(static_cast<size_t>(parties));
  for (int i = 0; i < parties; ++i) {
    uint32_t x = uint32_t(i + 1);
    uint32_t acc = secret;
    uint32_t xp = 1;
    for (int j = 0; j < threshold - 1; ++j) {
      xp = f.mul(xp, x);
      acc ^= f.mul(coeffs[size_t(j)], xp);
    }
    out[size_t(i)] = acc;
  }
  return out;
}

std::vector<uint32_t> ShamirScheme::share_random(uint32_t secret,
                                                 Rng& rng) const {
  std::vector<uint32_t> coeffs(static_cast<size_t>(threshold - 1));
  for (auto& c : coeffs) c = uint32_t(rng.bits(field_bits));
  return share(secret, coeffs);
}

uint32_t ShamirScheme::reconstruct(
    const std::vector<std::pair<int, uint32_t>>& pts) const {
  TL_REQUIRE(int(pts.size()) >= threshold, "shamir: not enough shares");
  GF2w f(field_bits);
  uint32_t acc = 0;
  for (int i = 0; i < threshold; ++i) {
    uint32_t xi = uint32_t(pts[size_t(i)].first + 1);
    uint32_t num = 1, den = 1;
    for (int j = 0; j < threshold; ++j) {
      if (i == j) continue;
      uint32_t xj = uint32_t(pts[size_t(j)].first + 1);
      num = f.mul(num, xj);
      den = f.mul(den, xi ^ xj);
    }
    acc ^= f.mul(pts[size_t(i)].second, f.mul(num, f.inv(den)));
  }
  return acc;
}

uint64_t ShamirScheme::randomness_space() const {
  return uint64_t(1) << (field_bits * (threshold - 1));
}

// ---------------------------------------------------------------------------
// Classical NMC
// ---------------------------------------------------------------------------

void ClassicalNmc::check_perfect_correctness() const {
  for (int m = 0; m < (1 << k); ++m) {
    TL_REQUIRE(!enc[size_t(m)].empty(), "message with no codewords");
    for (auto [x, y] : enc[size_t(m)])
      TL_REQUIRE(decode(x, y) == m, "imperfect correctness");
  }
}

double statistical_distance(const std::vector<double>& a,
                            const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

namespace {

// Worst-case-over-messages distance to the fit p·(delta_m ⊗ base_m) +
// (1-p)·D, where the "same" atom pattern per message m is given by
// same_atoms(m) (unit mass distributed per its entries) and D is shared. D is
// chosen as the truncated positive part of the average residual; p is scanned
// by ternary search (the objective is convex in p). This follows the fit
// recipe used throughout: it upper bounds the true best fit.
double fit_distance_impl(
    const std::vector<std::vector<double>>& dist,
    const std::function<std::vector<std::pair<size_t, double>>(size_t)>&
        same_atoms) {
  const size_t mcount = dist.size();
  const size_t support = dist[0].size();
  auto objective = [&](double p) {
    std::vector<double> resid(support, 0.0);
    for (size_t m = 0; m < mcount; ++m) {
      for (size_t i = 0; i < support; ++i)
        resid[i] += dist[m][i] / double(mcount);
      for (auto [i, w] : same_atoms(m)) resid[i] -= p * w / double(mcount);
    }
    double tot = 0;
    for (double& r : resid) {
      if (r < 0) r = 0;
      tot += r;
    }
    if (tot > 1e-12)
      for (double& r : resid) r *= (1.0 - p) / tot;
    double worst = 0;
    for (size_t m = 0; m < mcount; ++m) {
      double dsum = 0;
      std::vector<double> fit = resid;
      for (auto [i, w] : same_atoms(m)) fit[i] += p * w;
      for (size_t i = 0; i < support; ++i) dsum += std::abs(dist[m][i] - fit[i]);
      worst = std::max(worst, 0.5 * dsum);
    }
    return worst;
  };
  double lo = 0, hi = 1;
  for (int it = 0; it < 200; ++it) {
    double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (objective(m1) <= objective(m2))
      hi = m2;
    else
      lo = m1;
  }
  double p = 0.5 * (lo + hi);
  return std::min({objective(p), objective(0.0), objective(1.0)});
}

}  // namespace

double nm_fit_distance(
    const std::vector<std::vector<double>>& dist_per_message) {
  return fit_distance_impl(
      dist_per_message, [](size_t m) {
        return std::vector<std::pair<size_t, double>>{{m, 1.0}};
      });
}

namespace {

// Augmented fit: atoms are (m'-or-bot) × x; the "same" component for message
// m places mass on atoms (m, x) with an x-profile shared across messages,
// estimated from the data (the x-conditional at m'=m averaged over m).
double nm_fit_distance_augmented(const std::vector<std::vector<double>>& dist,
                                 int mcount, int xs) {
  std::vector<double> xf(size_t(xs), 0.0);
  double tot = 0;
  for (int m = 0; m < mcount; ++m)
    for (int x = 0; x < xs; ++x) {
      double v = dist[size_t(m)][size_t(m) * size_t(xs) + size_t(x)];
      xf[size_t(x)] += v;
      tot += v;
    }
  if (tot > 1e-12)
    for (double& v : xf) v /= tot;
  else
    xf.assign(size_t(xs), 1.0 / xs);
  return fit_distance_impl(dist, [&](size_t m) {
    std::vector<std::pair<size_t, double>> atoms;
    for (int x = 0; x < xs; ++x)
      atoms.push_back({m * size_t(xs) + size_t(x), xf[size_t(x)]});
    return atoms;
  });
}

// Iterates all functions f: [inputs] -> [outputs].
struct FunctionIter {
  int inputs, outputs;
  std::vector<int> table;

  FunctionIter(int in, int out) : inputs(in), outputs(out), table(size_t(in), 0) {}
  bool next() {
    for (int i = 0; i < inputs; ++i) {
      if (++table[size_t(i)] < outputs) return true;
      table[size_t(i)] = 0;
    }
    return false;
  }
};

uint64_t hash_doubles(const std::vector<std::vector<double>>& vv) {
  uint64_t h = 1469598103934665603ULL;
  for (const auto& v : vv)
    for (double d : v) {
      h ^= uint64_t(llround(d * (1 << 20)));
      h *= 1099511628211ULL;
    }
  return h;
}

}  // namespace

double nm_error_exhaustive(const ClassicalNmc& code, bool augmented) {
  const int xs = 1 << code.n1, ys = 1 << code.n2;
  TL_REQUIRE(code.n1 + code.n2 <= 8,
             "nm_error_exhaustive: enumeration budget exceeded");
  TL_REQUIRE(std::pow(double(xs), xs) * std::pow(double(ys), ys) < 2e9,
             "nm_error_exhaustive: function family too large");
  const int mcount = 1 << code.k;
  double worst = 0;
  std::unordered_set<uint64_t> seen;
  FunctionIter f(xs, xs);
  do {
    FunctionIter g(ys, ys);
    do {
      std::vector<std::vector<double>> dist(
          size_t(mcount),
          std::vector<double>(
              augmented ? size_t((mcount + 1) * xs) : size_t(mcount) + 1,
              0.0));
      for (int m = 0; m < mcount; ++m) {
        const auto& words = code.enc[size_t(m)];
        double w = 1.0 / double(words.size());
        for (auto [x, y] : words) {
          int out = code.decode(uint32_t(f.table[x]), uint32_t(g.table[y]));
          size_t oi = out == ClassicalNmc::kBot ? size_t(mcount) : size_t(out);
          if (augmented)
            dist[size_t(m)][oi * size_t(xs) + f.table[x]] += w;
          else
            dist[size_t(m)][oi] += w;
        }
      }
      if (!seen.insert(hash_doubles(dist)).second) continue;
      double d = augmented ? nm_fit_distance_augmented(dist, mcount, xs)
                           : nm_fit_distance(dist);
      worst = std::max(worst, d);
    } while (g.next());
  } while (f.next());
  return worst;
}

double dko_bitflip_bias(const ClassicalNmc& code) {
  TL_REQUIRE(code.k == 1, "dko_bitflip_bias: single-bit codes only");
  const int xs = 1 << code.n1, ys = 1 << code.n2;
  double best = 0;
  FunctionIter f(xs, xs);
  do {
    FunctionIter g(ys, ys);
    do {
      double flip = 0;
      for (int m = 0; m < 2; ++m) {
        const auto& words = code.enc[size_t(m)];
        double w = 0.5 / double(words.size());
        for (auto [x, y] : words)
          if (code.decode(uint32_t(f.table[x]), uint32_t(g.table[y])) == 1 - m)
            flip += w;
      }
      best = std::max(best, flip);
    } while (g.next());
  } while (f.next());
  return best - 0.5;
}

ClassicalNmc search_tiny_nmc(int k, int n1, int n2, int trials, Rng& rng) {
  const int xs = 1 << n1, ys = 1 << n2, mcount = 1 << k;
  TL_REQUIRE(mcount <= xs * ys, "search_tiny_nmc: pigeonhole violation");
  ClassicalNmc best;
  double best_err = 1e9;
  for (int t = 0; t < trials; ++t) {
    std::vector<int> pairs(size_t(xs * ys));
    std::iota(pairs.begin(), pairs.end(), 0);
    std::shuffle(pairs.begin(), pairs.end(), rng.raw());
    ClassicalNmc cand;
    cand.k = k;
    cand.n1 = n1;
    cand.n2 = n2;
    cand.enc.assign(size_t(mcount), {});
    cand.dec.assign(size_t(xs * ys), ClassicalNmc::kBot);
    int per = 1 + int(rng.below(uint64_t(std::max(1, xs * ys / mcount))));
    size_t idx = 0;
    for (int m = 0; m < mcount; ++m) {
      for (int c = 0; c < per && idx < pairs.size(); ++c, ++idx) {
        int p = pairs[idx];
        uint32_t x = uint32_t(p / ys), y = uint32_t(p % ys);
        cand.enc[size_t(m)].push_back({x, y});
        cand.dec[size_t(p)] = m;
      }
    }
    bool ok = true;
    for (int m = 0; m < mcount; ++m)
      if (cand.enc[size_t(m)].empty()) ok = false;
    if (!ok) continue;
    double err = nm_error_exhaustive(cand, false);
    if (err < best_err) {
      best_err = err;
      best = cand;
      best.verified_error = err;
      best.grade = NmcGrade::Exhaustive;
    }
  }
  TL_REQUIRE(best_err < 1e9, "search_tiny_nmc: no perfectly-correct candidate");
  return best;
}

// ---------------------------------------------------------------------------
// Toeplitz extractor
// ---------------------------------------------------------------------------

LinearExtractor toeplitz_extractor(int eta, int l) {
  TL_REQUIRE(eta >= 1 && l >= 1 && l <= eta, "toeplitz: bad dimensions");
  TL_REQUIRE(eta + l - 1 <= 30, "toeplitz: seed too long for enumeration");
  return LinearExtractor{eta, eta + l - 1, l};
}

uint32_t LinearExtractor::row(int r, uint64_t seed) const {
  uint32_t out = 0;
  for (int c = 0; c < eta; ++c) {
    int di = r - c + eta - 1;
    if ((seed >> di) & 1) out |= uint32_t(1) << (eta - 1 - c);
  }
  return out;
}

uint32_t LinearExtractor::extract(uint32_t w, uint64_t seed) const {
  uint32_t out = 0;
  for (int r = 0; r < l; ++r)
    if (std::popcount(row(r, seed) & w) & 1) out |= uint32_t(1) << (l - 1 - r);
  return out;
}

std::optional<std::pair<uint32_t, std::vector<uint32_t>>>
LinearExtractor::fiber(uint32_t y, uint64_t seed) const {
  std::vector<uint32_t> rows(static_cast<size_t>(l));
  std::vector<int> rhs(static_cast<size_t>(l));
  for (int r = 0; r < l; ++r) {
    rows[size_t(r)] = row(r, seed);
    rhs[size_t(r)] = int((y >> (l - 1 - r)) & 1);
  }
  std::vector<int> pivot_col;
  int rank = 0;
  for (int c = 0; c < eta && rank < l; ++c) {
    uint32_t mask = uint32_t(1) << (eta - 1 - c);
    int sel = -1;
    for (int r = rank; r < l; ++r)
      if (rows[size_t(r)] & mask) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[size_t(sel)], rows[size_t(rank)]);
    std::swap(rhs[size_t(sel)], rhs[size_t(rank)]);
    for (int r = 0; r < l; ++r)
      if (r != rank && (rows[size_t(r)] & mask)) {
        rows[size_t(r)] ^= rows[size_t(rank)];
        rhs[size_t(r)] ^= rhs[size_t(rank)];
      }
    pivot_col.push_back(c);
    ++rank;
  }
  for (int r = rank; r < l; ++r)
    if (rhs[size_t(r)]) return std::nullopt;
  uint32_t particular = 0;
  for (int r = 0; r < rank; ++r)
    if (rhs[size_t(r)])
      particular |= uint32_t(1) << (eta - 1 - pivot_col[size_t(r)]);
  std::vector<uint32_t> kernel;
  std::set<int> pivots(pivot_col.begin(), pivot_col.end());
  for (int c = 0; c < eta; ++c) {
    if (pivots.count(c)) continue;
    uint32_t v = uint32_t(1) << (eta - 1 - c);
    for (int r = 0; r < rank; ++r)
      if (rows[size_t(r)] & (uint32_t(1) << (eta - 1 - c)))
        v |= uint32_t(1) << (eta - 1 - pivot_col[size_t(r)]);
    kernel.push_back(v);
  }
  return std::make_pair(particular, kernel);
}

std::optional<uint32_t> LinearExtractor::invert(uint32_t y, uint64_t seed,
                                                Rng& rng) const {
  auto f = fiber(y, seed);
  if (!f) return std::nullopt;
  uint32_t w = f->first;
  for (uint32_t kv : f->second)
    if (rng.bits(1)) w ^= kv;
  return w;
}

int LinearExtractor::rank(uint64_t seed) const {
  auto f = fiber(0, seed);
  return eta - int(f->second.size());
}

double extractor_classical_error(const LinearExtractor& ext) {
  double total = 0;
  const uint64_t seeds = uint64_t(1) << ext.d;
  const uint32_t ws = uint32_t(1) << ext.eta;
  const uint32_t ls = uint32_t(1) << ext.l;
  for (uint64_t s = 0; s < seeds; ++s) {
    std::vector<double> hist(ls, 0.0);
    for (uint32_t w = 0; w < ws; ++w) hist[ext.extract(w, s)] += 1.0 / ws;
    double dist = 0;
    for (uint32_t y = 0; y < ls; ++y) dist += std::abs(hist[y] - 1.0 / ls);
    total += 0.5 * dist / double(seeds);
  }
  return total;
}

double extractor_quantum_error(const LinearExtractor& ext, int mu) {
  return 0.5 * std::sqrt(std::pow(2.0, ext.l - (ext.eta - mu)));
}

// ---------------------------------------------------------------------------
// Toy two-source extractor
// ---------------------------------------------------------------------------

ToyNmExt toy_nmext(int n_bits, int r_bits) {
  TL_REQUIRE(n_bits <= 5, "toy_nmext: sources too large for exhaustive checks");
  TL_REQUIRE(r_bits <= n_bits, "toy_nmext: output too long");
  return ToyNmExt{n_bits, r_bits};
}

uint32_t ToyNmExt::extract(uint32_t x, uint32_t y) const {
  uint32_t out = 0;
  uint32_t mask = (uint32_t(1) << n_bits) - 1;
  for (int r = 0; r < r_bits; ++r) {
    uint32_t yr = ((y << r) | (y >> (n_bits - r))) & mask;
    if (r == 0) yr = y & mask;
    if (std::popcount(x & yr) & 1) out |= uint32_t(1) << (r_bits - 1 - r);
  }
  return out;
}

double ToyNmExt::measured_strong_error() const {
  const uint32_t xs = uint32_t(1) << n_bits;
  const uint32_t rs = uint32_t(1) << r_bits;
  double worst = 0;
  for (int side = 0; side < 2; ++side) {
    double dist = 0;
    for (uint32_t a = 0; a < xs; ++a) {
      std::vector<double> hist(rs, 0.0);
      for (uint32_t b = 0; b < xs; ++b) {
        uint32_t r = side == 0 ? extract(a, b) : extract(b, a);
        hist[r] += 1.0 / xs;
      }
      for (uint32_t r = 0; r < rs; ++r)
        dist += std::abs(hist[r] - 1.0 / rs) / xs;
    }
    worst = std::max(worst, 0.5 * dist);
  }
  return worst;
}

}  // namespace tl
