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

#include "tamperlab/engine.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

namespace tl {

namespace {

uint64_t mix64(uint64_t a, uint64_t b) {
  uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 0x133711);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Assembles a product state from factors given as (positions, amplitudes).
Vec product_state(int n, const std::vector<std::pair<std::vector<int>, Vec>>& factors) {
  const int64_t dim = int64_t(1) << n;
  Vec out(dim);
  for (int64_t idx = 0; idx < dim; ++idx) {
    cxd amp = 1.0;
    for (const auto& [ps, v] : factors) {
      uint64_t sub = 0;
      for (size_t b = 0; b < ps.size(); ++b)
        if ((idx >> (n - 1 - ps[b])) & 1) sub |= uint64_t(1) << (ps.size() - 1 - b);
      amp *= v(int64_t(sub));
      if (amp == cxd(0)) break;
    }
    out(idx) = amp;
  }
  return out;
}

// Positions of `subset` within the register list that remains after deleting
// `removed` (all position lists refer to the original n-qubit order).
std::vector<int> reduced_positions(const std::vector<int>& subset,
                                   const std::vector<int>& removed, int n) {
  std::vector<int> out;
  for (int p : subset) {
    int shift = 0;
    bool gone = false;
    for (int r : removed) {
      if (r < p) ++shift;
      if (r == p) gone = true;
    }
    TL_REQUIRE(!gone, "reduced_positions: subset overlaps removed");
    out.push_back(p - shift);
  }
  return out;
}

// Sparse extraction of the Pauli-Kraus coefficients of T on (Z ⊗ Wz):
// T = sum_Q Q_Z ⊗ M^Q. Pauli X^a Z^b has entries [c^a, c] = (-1)^{b·c}.
std::vector<Mat> pauli_kraus_split(const Mat& t, int zq, int wq,
                                   std::vector<uint64_t>* indices) {
  const int64_t dz = int64_t(1) << zq;
  const int64_t dw = int64_t(1) << wq;
  std::vector<Mat> out;
  for (uint64_t a = 0; a < uint64_t(dz); ++a) {
    for (uint64_t b = 0; b < uint64_t(dz); ++b) {
      Mat m = Mat::Zero(dw, dw);
      for (uint64_t c = 0; c < uint64_t(dz); ++c) {
        double sign = (std::popcount(b & c) & 1) ? -1.0 : 1.0;
        uint64_t r = c ^ a;
        m += sign * t.block(int64_t(r * uint64_t(dw)), int64_t(c * uint64_t(dw)), dw, dw);
      }
      m /= double(dz);
      if (m.cwiseAbs().maxCoeff() < 1e-14) continue;
      out.push_back(m);
      if (indices) indices->push_back((a << zq) | b);
    }
  }
  return out;
}

// Compresses a CP map given by Kraus operators into at most dim^2 Kraus
// operators via its Choi eigendecomposition.
std::vector<Mat> compress_kraus(const std::vector<Mat>& kraus, int64_t dim) {
  if (int64_t(kraus.size()) <= dim * dim) return kraus;
  Mat choi = Mat::Zero(dim * dim, dim * dim);
  for (const auto& k : kraus) {
    Vec v(dim * dim);
    for (int64_t r = 0; r < dim; ++r)
      for (int64_t c = 0; c < dim; ++c) v(r * dim + c) = k(r, c);
    choi += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(choi);
  std::vector<Mat> out;
  for (int64_t i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev < 1e-13) continue;
    Mat k(dim, dim);
    for (int64_t r = 0; r < dim; ++r)
      for (int64_t c = 0; c < dim; ++c)
        k(r, c) = std::sqrt(ev) * es.eigenvectors()(r * dim + c, i);
    out.push_back(k);
  }
  return out;
}

struct EigMembers {
  std::vector<double> vals;
  std::vector<Vec> vecs;
};

EigMembers eig_members(const Mat& rho, double cut = 1e-13) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  EigMembers out;
  for (int64_t i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev < cut) continue;
    out.vals.push_back(ev);
    out.vecs.push_back(es.eigenvectors().col(i));
  }
  return out;
}

}  // namespace

int KeyedCodeSpec::z_share() const {
  for (size_t i = 0; i < shares.size(); ++i)
    if (shares[i].role == QuantumRole::ZBlock) return int(i);
  throw Error("spec has no Z share");
}

int KeyedCodeSpec::b_share() const {
  for (size_t i = 0; i < shares.size(); ++i)
    if (shares[i].role == QuantumRole::BBlock) return int(i);
  return -1;
}

int KeyedCodeSpec::total_ancilla() const {
  int t = 0;
  for (const auto& s : shares) t += s.ancilla_qubits;
  return t;
}

int KeyedCodeSpec::carrier_bits_x() const {
  for (const auto& s : shares)
    if (s.carrier_bits > 0) return s.carrier_bits;
  return 0;
}

KeyedExperiment::KeyedExperiment(KeyedCodeSpec spec, uint64_t key_salt)
    : spec_(std::move(spec)), key_salt_(key_salt) {
  TL_REQUIRE(spec_.k >= 1, "engine: k must be positive");
  if (spec_.lambda > 0)
    TL_REQUIRE(spec_.b_share() >= 0, "engine: lambda > 0 requires a B share");
  int pos = 0;
  auto take = [&pos](int count) {
    std::vector<int> ps(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) ps[size_t(i)] = pos++;
    return ps;
  };
  if (spec_.purified) p_mh_ = take(spec_.k);
  p_a_ = take(spec_.lambda);
  p_m_ = take(spec_.k);
  p_b_ = take(spec_.lambda);
  for (const auto& s : spec_.shares) {
    p_w_.push_back(take(s.ancilla_qubits));
    p_w_all_.insert(p_w_all_.end(), p_w_.back().begin(), p_w_.back().end());
  }
  p_z_ = p_a_;
  p_z_.insert(p_z_.end(), p_m_.begin(), p_m_.end());
  n_ = pos;
  TL_REQUIRE(n_ <= kDefaultQubitCap, "engine: quantum footprint exceeds cap");
}

Vec KeyedExperiment::initial_state(const Vec& ancilla) const {
  std::vector<std::pair<std::vector<int>, Vec>> factors;
  if (spec_.purified) {
    std::vector<int> pm = p_mh_;
    pm.insert(pm.end(), p_m_.begin(), p_m_.end());
    factors.push_back({pm, epr_vector(spec_.k)});
  } else {
    factors.push_back({p_m_, basis_vector(1 << spec_.k, spec_.basis_message)});
  }
  if (spec_.lambda > 0) {
    std::vector<int> pe = p_a_;
    pe.insert(pe.end(), p_b_.begin(), p_b_.end());
    factors.push_back({pe, epr_vector(spec_.lambda)});
  }
  if (!p_w_all_.empty()) {
    TL_REQUIRE(ancilla.size() == int64_t(1) << p_w_all_.size(),
               "engine: ancilla dimension mismatch");
    factors.push_back({p_w_all_, ancilla});
  }
  return product_state(n_, factors);
}

CliffordOp KeyedExperiment::tampered_key_clifford(uint64_t xp,
                                                  uint64_t yp) const {
  Rng rng(mix64(key_salt_ ^ 0xabcdef12345ULL, (xp << 24) ^ yp));
  return random_clifford(spec_.z_qubits(), rng);
}

KeyedAdversary KeyedExperiment::identity_adversary() const {
  KeyedAdversary adv;
  adv.label = "identity";
  for (size_t i = 0; i < spec_.shares.size(); ++i) {
    const auto& s = spec_.shares[i];
    int q = s.ancilla_qubits;
    if (s.role == QuantumRole::ZBlock) q += spec_.z_qubits();
    if (s.role == QuantumRole::BBlock) q += spec_.lambda;
    ShareAdversary sa;
    int inputs = 1 << s.carrier_bits;
    sa.per_input.resize(size_t(inputs));
    for (int in = 0; in < inputs; ++in)
      sa.per_input[size_t(in)].push_back(
          {uint64_t(in), {Mat::Identity(int64_t(1) << q, int64_t(1) << q)}});
    adv.shares.push_back(std::move(sa));
  }
  if (spec_.total_ancilla() > 0)
    adv.ancilla = basis_vector(1 << spec_.total_ancilla(), 0);
  return adv;
}

KeyedAdversary KeyedExperiment::sample_adversary(Rng& rng, int env) const {
  KeyedAdversary adv;
  adv.label = "sampled";
  for (size_t i = 0; i < spec_.shares.size(); ++i) {
    const auto& s = spec_.shares[i];
    int q = s.ancilla_qubits;
    if (s.role == QuantumRole::ZBlock) q += spec_.z_qubits();
    if (s.role == QuantumRole::BBlock) q += spec_.lambda;
    ShareAdversary sa;
    int inputs = 1 << s.carrier_bits;
    sa.per_input.resize(size_t(inputs));
    for (int in = 0; in < inputs; ++in) {
      if (q == 0) {
        // Purely classical share: random stochastic transition row.
        Mat u = random_unitary(inputs, rng);
        for (int out = 0; out < inputs; ++out) {
          Mat k(1, 1);
          k(0, 0) = u(out, in);
          sa.per_input[size_t(in)].push_back({uint64_t(out), {k}});
        }
      } else if (s.carrier_bits == 0) {
        Channel ch = random_channel(q, rng, env);
        sa.per_input[size_t(in)].push_back({0, ch.kraus});
      } else {
        auto instr = random_instrument(q, inputs, rng, env);
        for (int out = 0; out < inputs; ++out)
          sa.per_input[size_t(in)].push_back(
              {uint64_t(out), instr[size_t(out)].kraus});
      }
    }
    adv.shares.push_back(std::move(sa));
  }
  if (spec_.total_ancilla() > 0)
    adv.ancilla = random_state_vector(1 << spec_.total_ancilla(), rng);
  return adv;
}

ExperimentResult KeyedExperiment::finish(Mat j) const {
  j = 0.5 * (j + j.adjoint());
  ExperimentResult res;
  res.k = spec_.k;
  res.purified = spec_.purified;
  const int dm = (1 << spec_.k) + 1;
  if (spec_.purified) {
    res.j = std::move(j);
  } else {
    res.j = j;
    res.probs.assign(size_t(dm), 0.0);
    for (int m = 0; m < dm; ++m) res.probs[size_t(m)] = j(m, m).real();
  }
  return res;
}

void KeyedExperiment::decode_plain_member(const Vec& v, Mat& j) const {
  const int dm = (1 << spec_.k) + 1;
  const int dmh = spec_.purified ? (1 << spec_.k) : 1;
  auto add_accept = [&](const Mat& block) {
    // block indexed by (mhat, m) composite rows/cols in keep order.
    for (int mr = 0; mr < dmh; ++mr)
      for (int m = 0; m < (1 << spec_.k); ++m)
        for (int nr = 0; nr < dmh; ++nr)
          for (int nn = 0; nn < (1 << spec_.k); ++nn)
            j(mr * dm + m, nr * dm + nn) +=
                block(mr * (1 << spec_.k) + m, nr * (1 << spec_.k) + nn);
  };
  if (spec_.lambda == 0) {
    std::vector<int> keep = p_mh_;
    keep.insert(keep.end(), p_m_.begin(), p_m_.end());
    add_accept(pure_marginal_keep(v, keep, n_));
    return;
  }
  std::vector<int> ab = p_a_;
  ab.insert(ab.end(), p_b_.begin(), p_b_.end());
  Vec a = partial_inner(epr_vector(spec_.lambda), ab, v, n_);
  const int nr = n_ - 2 * spec_.lambda;
  std::vector<int> keep_r = reduced_positions(p_mh_, ab, n_);
  auto pm_r = reduced_positions(p_m_, ab, n_);
  keep_r.insert(keep_r.end(), pm_r.begin(), pm_r.end());
  add_accept(pure_marginal_keep(a, keep_r, nr));
  // Reject branch: bot ⊗ (MH marginal of v minus of the accepted part).
  if (spec_.purified) {
    Mat mv = pure_marginal_keep(v, p_mh_, n_);
    Mat ma = pure_marginal_keep(a, reduced_positions(p_mh_, ab, n_), nr);
    Mat diff = mv - ma;
    for (int r = 0; r < dmh; ++r)
      for (int c = 0; c < dmh; ++c)
        j(r * dm + (dm - 1), c * dm + (dm - 1)) += diff(r, c);
  } else {
    double w = v.squaredNorm() - a.squaredNorm();
    j(dm - 1, dm - 1) += w;
  }
}

void KeyedExperiment::accumulate_same(const TransitionCase& tc, const Vec& psi0,
                                      Mat& j) const {
  const int zq = spec_.z_qubits();
  const int64_t dz = int64_t(1) << zq;
  const int zshare = spec_.z_share();
  const int wzq = spec_.shares[size_t(zshare)].ancilla_qubits;
  const int64_t dwz = int64_t(1) << wzq;

  // Apply the non-Z-share Kraus product to psi0.
  std::vector<Vec> members{psi0 * std::sqrt(tc.weight)};
  for (const auto& [ps, kl] : tc.non_z) {
    std::vector<Vec> next;
    for (const Vec& v : members)
      for (const Mat& kmat : *kl) {
        if (kmat.rows() == 1) {
          next.push_back(kmat(0, 0) * v);
        } else {
          next.push_back(apply_to_qubits(kmat, ps, v, n_));
        }
      }
    members = std::move(next);
  }

  // Twirl split of the Z-share channel.
  std::vector<Mat> phi1, phi2;
  if (tc.z_kraus == nullptr) {
    phi1.push_back(Mat::Identity(dwz, dwz));
  } else {
    for (const Mat& t : *tc.z_kraus) {
      std::vector<uint64_t> idx;
      auto coeffs = pauli_kraus_split(t, zq, wzq, &idx);
      for (size_t i = 0; i < coeffs.size(); ++i) {
        if (idx[i] == 0)
          phi1.push_back(coeffs[i]);
        else
          phi2.push_back(coeffs[i]);
      }
    }
    phi1 = compress_kraus(phi1, dwz);
    phi2 = compress_kraus(phi2, dwz);
  }
  const auto& pwz = p_w_[size_t(zshare)];

  // zeta path through Phi1.
  for (const Vec& v : members)
    for (const Mat& kmat : phi1) {
      Vec vv = pwz.empty() ? Vec(kmat(0, 0) * v)
                           : apply_to_qubits(kmat, pwz, v, n_);
      decode_plain_member(vv, j);
    }

  if (phi2.empty()) return;

  // omega path: [D * Dec(Phi2(marg ⊗ U_Z)) - Dec(Phi2(zeta))] / (D - 1).
  Mat ja = Mat::Zero(j.rows(), j.cols());
  for (const Vec& v : members)
    for (const Mat& kmat : phi2) {
      Vec vv = pwz.empty() ? Vec(kmat(0, 0) * v)
                           : apply_to_qubits(kmat, pwz, v, n_);
      decode_plain_member(vv, ja);
    }

  // marg over (B, W) = Tr_{Z, MH}; MH factors off as U_MH exactly.
  std::vector<int> keep_bw = p_b_;
  keep_bw.insert(keep_bw.end(), p_w_all_.begin(), p_w_all_.end());
  Mat mu2 = Mat::Zero(int64_t(1) << keep_bw.size(), int64_t(1) << keep_bw.size());
  for (const Vec& v : members) mu2 += pure_marginal_keep(v, keep_bw, n_);
  // Apply Phi2 on the Wz positions inside the (B, W) space.
  std::vector<int> pwz_r = reduced_positions(
      pwz, [&] {
        std::vector<int> removed = p_mh_;
        removed.insert(removed.end(), p_z_.begin(), p_z_.end());
        std::sort(removed.begin(), removed.end());
        return removed;
      }(),
      n_);
  const int nbw = int(keep_bw.size());
  Mat mu2p = Mat::Zero(mu2.rows(), mu2.cols());
  for (const Mat& kmat : phi2) {
    if (pwz_r.empty())
      mu2p += std::norm(kmat(0, 0)) * mu2;
    else
      mu2p += conjugate_on_qubits(kmat, pwz_r, mu2, nbw);
  }
  auto em = eig_members(mu2p);

  const int dmh = spec_.purified ? (1 << spec_.k) : 1;
  const int dm = (1 << spec_.k) + 1;
  const int64_t dwall = int64_t(1) << p_w_all_.size();
  Mat jb = Mat::Zero(j.rows(), j.cols());
  for (size_t ui = 0; ui < em.vals.size(); ++ui) {
    const Vec& u = em.vecs[ui];
    for (int64_t z = 0; z < dz; ++z) {
      // z = (a_bits, m_bits) with A leading.
      int64_t zm = z & ((int64_t(1) << spec_.k) - 1);
      int64_t za = z >> spec_.k;
      double w = em.vals[ui] / double(dz * dmh);
      double acc_w;
      if (spec_.lambda > 0) {
        // Accept amplitude: B slice of u at basis za, scaled 2^{-lambda/2}.
        Vec slice = u.segment(za * dwall, dwall);
        acc_w = slice.squaredNorm() / double(int64_t(1) << spec_.lambda);
      } else {
        acc_w = u.squaredNorm();
      }
      double rej_w = u.squaredNorm() - acc_w;
      for (int mh = 0; mh < dmh; ++mh) {
        int row = mh * dm + int(zm);
        jb(row, row) += w * acc_w;
        if (spec_.lambda > 0) {
          int brow = mh * dm + (dm - 1);
          jb(brow, brow) += w * rej_w;
        }
      }
    }
  }
  const double big_d = double(dz) * double(dz);
  j += (big_d * jb - ja) / (big_d - 1.0);
}

void KeyedExperiment::accumulate_tamper(const TransitionCase& tc,
                                        const Vec& psi0, Mat& j) const {
  const int zq = spec_.z_qubits();
  const int64_t dz = int64_t(1) << zq;
  const int zshare = spec_.z_share();
  const auto& pwz = p_w_[size_t(zshare)];
  const int64_t dwall = int64_t(1) << p_w_all_.size();
  const int64_t db = int64_t(1) << spec_.lambda;
  const int dmh = spec_.purified ? (1 << spec_.k) : 1;
  const int dm = (1 << spec_.k) + 1;

  // Non-Z Kraus applied, then trace out (MH, Z): MH factors off as U_MH.
  std::vector<Vec> members{psi0 * std::sqrt(tc.weight)};
  for (const auto& [ps, kl] : tc.non_z) {
    std::vector<Vec> next;
    for (const Vec& v : members)
      for (const Mat& kmat : *kl) {
        if (kmat.rows() == 1)
          next.push_back(kmat(0, 0) * v);
        else
          next.push_back(apply_to_qubits(kmat, ps, v, n_));
      }
    members = std::move(next);
  }
  std::vector<int> keep_bw = p_b_;
  keep_bw.insert(keep_bw.end(), p_w_all_.begin(), p_w_all_.end());
  Mat mu2 = Mat::Zero(int64_t(1) << keep_bw.size(), int64_t(1) << keep_bw.size());
  for (const Vec& v : members) mu2 += pure_marginal_keep(v, keep_bw, n_);
  double branch_weight = mu2.trace().real();
  if (branch_weight < 1e-300) return;
  auto em = eig_members(mu2);

  CliffordOp cp = tampered_key_clifford(tc.xp, tc.yp);
  TL_REQUIRE(tc.z_kraus != nullptr,
             "engine: tamper branch expects an explicit Z-share channel");

  // Reduced space: [Z, B, Wall], Z leading.
  const int nred = zq + spec_.lambda + int(p_w_all_.size());
  const int64_t dred = int64_t(1) << nred;
  std::vector<int> pz_red(static_cast<size_t>(zq));
  for (int i = 0; i < zq; ++i) pz_red[size_t(i)] = i;
  std::vector<int> pzwz_red = pz_red;
  {
    // Wz positions inside the reduced space: offset of Wz within Wall.
    int base = zq + spec_.lambda;
    int off = 0;
    for (int s = 0; s < zshare; ++s)
      off += spec_.shares[size_t(s)].ancilla_qubits;
    for (int i = 0; i < int(pwz.size()); ++i)
      pzwz_red.push_back(base + off + i);
  }

  // Bras eta_{m'} ⊗ |w>.
  const int dk = 1 << spec_.k;
  std::vector<Vec> eta(static_cast<size_t>(dk));
  for (int m = 0; m < dk; ++m) {
    Vec e = Vec::Zero(dz * db);
    for (int64_t jm = 0; jm < db; ++jm) {
      // eta[(z)*db + j] = 2^{-lambda/2} C[z, j*2^k + m]
      for (int64_t z = 0; z < dz; ++z)
        e(z * db + jm) = cp.unitary(z, jm * dk + m) /
                         std::sqrt(double(db));
    }
    eta[size_t(m)] = e;
  }

  const std::vector<Mat>& zk = *tc.z_kraus;

  Mat jsmall = Mat::Zero(dk, dk);
  double accept_total = 0;
  for (const Mat& t : zk) {
    for (int64_t w = 0; w < dwall; ++w) {
      // beta = T^dagger (eta ⊗ |w>)
      std::vector<Vec> betas(static_cast<size_t>(dk));
      for (int m = 0; m < dk; ++m) {
        Vec full = Vec::Zero(dred);
        for (int64_t zb = 0; zb < dz * db; ++zb)
          full(zb * dwall + w) = eta[size_t(m)](zb);
        betas[size_t(m)] =
            apply_to_qubits(Mat(t.adjoint()), pzwz_red, full, nred);
      }
      // Projections onto (z, u).
      // proj[m][(z, u)] with weight sqrt(eig_u / dz).
      const int64_t ucount = int64_t(em.vals.size());
      Mat proj(dk, dz * ucount);
      for (int m = 0; m < dk; ++m) {
        for (int64_t z = 0; z < dz; ++z) {
          // slice at Z=z: vector over (B, Wall)
          Eigen::Map<const Vec> slice(betas[size_t(m)].data() + z * db * dwall,
                                      db * dwall);
          for (int64_t u = 0; u < ucount; ++u) {
            cxd ip = em.vecs[size_t(u)].dot(slice);  // <u|slice>
            proj(m, z * ucount + u) =
                std::sqrt(em.vals[size_t(u)] / double(dz)) * ip;
          }
        }
      }
      // (proj proj^dagger)[m,n] pairs <eta_n| · |eta_m>; the decoded
      // operator entry [m,n] is its conjugate.
      jsmall += (proj * proj.adjoint()).conjugate();
    }
  }
  for (int m = 0; m < dk; ++m) accept_total += jsmall(m, m).real();

  // Total trace of the Z channel on (U_Z ⊗ mu2).
  double total;
  {
    const int64_t dzw = int64_t(1) << (zq + int(pwz.size()));
    Mat s = Mat::Zero(dzw, dzw);
    for (const Mat& t : zk) s += t.adjoint() * t;
    // <z,u| S ⊗ I |z,u> summed with weights eig_u/dz.
    double tr = 0;
    const int64_t dwz = int64_t(1) << pwz.size();
    int woff = 0;
    for (int sidx = 0; sidx < zshare; ++sidx)
      woff += spec_.shares[size_t(sidx)].ancilla_qubits;
    const int wother = int(p_w_all_.size()) - int(pwz.size()) - woff;
    for (int64_t z = 0; z < dz; ++z) {
      Mat szz = s.block(z * dwz, z * dwz, dwz, dwz);
      // Lift szz onto the (B, Wall) space at the Wz positions.
      for (size_t u = 0; u < em.vals.size(); ++u) {
        const Vec& uv = em.vecs[u];
        // <u| (I_B ⊗ I_Wpre ⊗ szz ⊗ I_Wpost) |u>
        cxd val = 0;
        const int64_t dpost = int64_t(1) << wother;
        const int64_t dpre = int64_t(1) << woff;
        const int64_t dbv = db;
        for (int64_t bidx = 0; bidx < dbv; ++bidx)
          for (int64_t pre = 0; pre < dpre; ++pre)
            for (int64_t wr = 0; wr < dwz; ++wr)
              for (int64_t wc = 0; wc < dwz; ++wc) {
                if (szz(wr, wc) == cxd(0)) continue;
                for (int64_t post = 0; post < dpost; ++post) {
                  int64_t ir = ((bidx * dpre + pre) * dwz + wr) * dpost + post;
                  int64_t ic = ((bidx * dpre + pre) * dwz + wc) * dpost + post;
                  val += std::conj(uv(ir)) * szz(wr, wc) * uv(ic);
                }
              }
        tr += (em.vals[u] / double(dz)) * val.real();
      }
    }
    total = tr;
  }

  double reject = std::max(0.0, total - accept_total);
  for (int mh = 0; mh < dmh; ++mh) {
    for (int m = 0; m < dk; ++m)
      for (int nn = 0; nn < dk; ++nn)
        j(mh * dm + m, mh * dm + nn) += jsmall(m, nn) / double(dmh);
    if (spec_.lambda > 0)
      j(mh * dm + (dm - 1), mh * dm + (dm - 1)) += reject / double(dmh);
  }
  // With no EPR test every branch decodes to a message; `reject` should be
  // zero up to numerical error in that case.
  if (spec_.lambda == 0 && reject > 1e-9)
    throw Error("engine: unexpected reject mass without an EPR test");
}

void KeyedExperiment::accumulate_carrier_derived(const TransitionCase& tc,
                                                 const Vec& psi0,
                                                 Mat& j) const {
  // Explicit-key dense path: R is derived from the carrier inputs with the
  // same sampler the decoder uses, so intact carriers decode exactly.
  CliffordOp enc_c = tampered_key_clifford(tc.x, tc.y);
  CliffordOp dec_c = tampered_key_clifford(tc.xp, tc.yp);
  Vec start = apply_to_qubits(enc_c.unitary, p_z_, psi0, n_) *
              std::sqrt(tc.weight);
  std::vector<Vec> members{start};
  auto apply_list = [&](const std::vector<int>& ps, const std::vector<Mat>& kl,
                        std::vector<Vec>& ms) {
    std::vector<Vec> next;
    for (const Vec& v : ms)
      for (const Mat& kmat : kl) {
        if (kmat.rows() == 1)
          next.push_back(kmat(0, 0) * v);
        else
          next.push_back(apply_to_qubits(kmat, ps, v, n_));
      }
    ms = std::move(next);
  };
  for (const auto& [ps, kl] : tc.non_z) apply_list(ps, *kl, members);
  if (tc.z_kraus) {
    std::vector<int> pzw = p_z_;
    const auto& pwz = p_w_[size_t(spec_.z_share())];
    pzw.insert(pzw.end(), pwz.begin(), pwz.end());
    apply_list(pzw, *tc.z_kraus, members);
  }
  for (Vec& v : members)
    v = apply_to_qubits(Mat(dec_c.unitary.adjoint()), p_z_, v, n_);
  for (const Vec& v : members) decode_plain_member(v, j);
}

ExperimentResult KeyedExperiment::run(const KeyedAdversary& adv) const {
  TL_REQUIRE(adv.shares.size() == spec_.shares.size(),
             "engine: adversary share arity mismatch");
  Vec psi0 = initial_state(adv.ancilla);
  const int dm = (1 << spec_.k) + 1;
  const int dmh = spec_.purified ? (1 << spec_.k) : 1;
  Mat j = Mat::Zero(dmh * dm, dmh * dm);

  // Collect carrier shares in order: first = x, second = y.
  std::vector<int> carrier_shares;
  for (size_t i = 0; i < spec_.shares.size(); ++i)
    if (spec_.shares[i].carrier_bits > 0) carrier_shares.push_back(int(i));
  TL_REQUIRE(carrier_shares.size() <= 2, "engine: at most two carriers");

  const int xs = carrier_shares.size() > 0
                     ? (1 << spec_.shares[size_t(carrier_shares[0])].carrier_bits)
                     : 1;
  const int ys = carrier_shares.size() > 1
                     ? (1 << spec_.shares[size_t(carrier_shares[1])].carrier_bits)
                     : 1;
  const double prior = 1.0 / double(xs * ys);

  // Per-share quantum positions (block + ancilla).
  std::vector<std::vector<int>> share_pos(spec_.shares.size());
  for (size_t i = 0; i < spec_.shares.size(); ++i) {
    if (spec_.shares[i].role == QuantumRole::ZBlock)
      share_pos[i] = p_z_;
    else if (spec_.shares[i].role == QuantumRole::BBlock)
      share_pos[i] = p_b_;
    share_pos[i].insert(share_pos[i].end(), p_w_[i].begin(), p_w_[i].end());
  }
  const int zshare = spec_.z_share();

  for (int x = 0; x < xs; ++x) {
    for (int y = 0; y < ys; ++y) {
      // Enumerate the per-share transition combinations.
      std::vector<const std::vector<ShareAdversary::Transition>*> lists;
      for (size_t i = 0; i < spec_.shares.size(); ++i) {
        int in = 0;
        if (!carrier_shares.empty() && int(i) == carrier_shares[0]) in = x;
        if (carrier_shares.size() > 1 && int(i) == carrier_shares[1]) in = y;
        lists.push_back(&adv.shares[i].per_input[size_t(in)]);
      }
      std::vector<size_t> idx(lists.size(), 0);
      for (;;) {
        TransitionCase tc;
        tc.weight = prior;
        tc.x = uint64_t(x);
        tc.y = uint64_t(y);
        tc.xp = uint64_t(x);
        tc.yp = uint64_t(y);
        for (size_t i = 0; i < lists.size(); ++i) {
          const auto& tr = (*lists[i])[idx[i]];
          if (!carrier_shares.empty() && int(i) == carrier_shares[0])
            tc.xp = tr.carrier_out;
          if (carrier_shares.size() > 1 && int(i) == carrier_shares[1])
            tc.yp = tr.carrier_out;
          if (int(i) == zshare) {
            tc.z_kraus = &tr.kraus;
          } else {
            bool trivial = tr.kraus.size() == 1 &&
                           tr.kraus[0].isIdentity(1e-15);
            if (!trivial) tc.non_z.push_back({share_pos[i], &tr.kraus});
          }
        }
        tc.same = (tc.xp == tc.x) && (tc.yp == tc.y);
        if (spec_.key_mode == KeyMode::CarrierDerived) {
          accumulate_carrier_derived(tc, psi0, j);
        } else if (tc.same) {
          accumulate_same(tc, psi0, j);
        } else {
          accumulate_tamper(tc, psi0, j);
        }
        // Advance the product iterator.
        size_t pos = 0;
        for (; pos < lists.size(); ++pos) {
          if (++idx[pos] < lists[pos]->size()) break;
          idx[pos] = 0;
        }
        if (pos == lists.size()) break;
      }
    }
  }
  return finish(std::move(j));
}

ExperimentResult KeyedExperiment::run_enumerated_oracle(
    const KeyedAdversary& adv) const {
  TL_REQUIRE(spec_.z_qubits() <= 2, "oracle: key group not enumerable");
  const auto& group = enumerate_clifford_mod_phase(spec_.z_qubits());
  Vec psi0 = initial_state(adv.ancilla);
  const int dm = (1 << spec_.k) + 1;
  const int dmh = spec_.purified ? (1 << spec_.k) : 1;
  Mat j = Mat::Zero(dmh * dm, dmh * dm);

  std::vector<int> carrier_shares;
  for (size_t i = 0; i < spec_.shares.size(); ++i)
    if (spec_.shares[i].carrier_bits > 0) carrier_shares.push_back(int(i));
  const int xs = carrier_shares.size() > 0
                     ? (1 << spec_.shares[size_t(carrier_shares[0])].carrier_bits)
                     : 1;
  const int ys = carrier_shares.size() > 1
                     ? (1 << spec_.shares[size_t(carrier_shares[1])].carrier_bits)
                     : 1;
  std::vector<std::vector<int>> share_pos(spec_.shares.size());
  for (size_t i = 0; i < spec_.shares.size(); ++i) {
    if (spec_.shares[i].role == QuantumRole::ZBlock)
      share_pos[i] = p_z_;
    else if (spec_.shares[i].role == QuantumRole::BBlock)
      share_pos[i] = p_b_;
    share_pos[i].insert(share_pos[i].end(), p_w_[i].begin(), p_w_[i].end());
  }
  const int zshare = spec_.z_share();

  for (const auto& c : group) {
    Mat jr = Mat::Zero(j.rows(), j.cols());
    for (int x = 0; x < xs; ++x)
      for (int y = 0; y < ys; ++y) {
        std::vector<const std::vector<ShareAdversary::Transition>*> lists;
        for (size_t i = 0; i < spec_.shares.size(); ++i) {
          int in = 0;
          if (!carrier_shares.empty() && int(i) == carrier_shares[0]) in = x;
          if (carrier_shares.size() > 1 && int(i) == carrier_shares[1]) in = y;
          lists.push_back(&adv.shares[i].per_input[size_t(in)]);
        }
        std::vector<size_t> idx(lists.size(), 0);
        for (;;) {
          uint64_t xp = uint64_t(x), yp = uint64_t(y);
          std::vector<std::pair<std::vector<int>, const std::vector<Mat>*>>
              klists;
          for (size_t i = 0; i < lists.size(); ++i) {
            const auto& tr = (*lists[i])[idx[i]];
            if (!carrier_shares.empty() && int(i) == carrier_shares[0])
              xp = tr.carrier_out;
            if (carrier_shares.size() > 1 && int(i) == carrier_shares[1])
              yp = tr.carrier_out;
            klists.push_back({share_pos[i], &tr.kraus});
          }
          bool same = xp == uint64_t(x) && yp == uint64_t(y);
          Vec enc = apply_to_qubits(c.unitary, p_z_, psi0, n_) /
                    std::sqrt(double(xs * ys));
          std::vector<Vec> members{enc};
          for (const auto& [ps, kl] : klists) {
            std::vector<Vec> next;
            for (const Vec& v : members)
              for (const Mat& kmat : *kl)
                next.push_back(kmat.rows() == 1
                                   ? Vec(kmat(0, 0) * v)
                                   : apply_to_qubits(kmat, ps, v, n_));
            members = std::move(next);
          }
          Mat dec = same ? Mat(c.unitary.adjoint())
                         : Mat(tampered_key_clifford(xp, yp).unitary.adjoint());
          for (Vec& v : members) v = apply_to_qubits(dec, p_z_, v, n_);
          for (const Vec& v : members) decode_plain_member(v, jr);
          size_t pos = 0;
          for (; pos < lists.size(); ++pos) {
            if (++idx[pos] < lists[pos]->size()) break;
            idx[pos] = 0;
          }
          if (pos == lists.size()) break;
        }
      }
    j += jr / double(group.size());
  }
  return finish(std::move(j));
}

double KeyedExperiment::two_share_marginal_distance(int share_a, int share_b,
                                                    int random_messages,
                                                    Rng& rng) const {
  // Code-state marginal over the quantum registers of the named share pair;
  // classical carriers are uniform by construction and drop out. The key
  // average over the family reduces exactly to the Pauli subgroup average.
  std::vector<int> keep;
  bool touches_z = false;
  for (int s : {share_a, share_b}) {
    const auto& sh = spec_.shares[size_t(s)];
    if (sh.role == QuantumRole::ZBlock) {
      keep.insert(keep.end(), p_z_.begin(), p_z_.end());
      touches_z = true;
    }
    if (sh.role == QuantumRole::BBlock)
      keep.insert(keep.end(), p_b_.begin(), p_b_.end());
  }
  std::sort(keep.begin(), keep.end());
  if (keep.empty()) return 0.0;

  std::vector<Vec> msgs;
  for (uint64_t m = 0; m < (uint64_t(1) << spec_.k); ++m)
    msgs.push_back(basis_vector(1 << spec_.k, m));
  for (int t = 0; t < random_messages; ++t)
    msgs.push_back(random_state_vector(1 << spec_.k, rng));

  // Engine registers without ancillas or MH: A, M, B.
  const int nq = 2 * spec_.lambda + spec_.k;
  std::vector<int> qa(static_cast<size_t>(spec_.lambda));
  std::vector<int> qm(static_cast<size_t>(spec_.k));
  std::vector<int> qb(static_cast<size_t>(spec_.lambda));
  for (int i = 0; i < spec_.lambda; ++i) qa[size_t(i)] = i;
  for (int i = 0; i < spec_.k; ++i) qm[size_t(i)] = spec_.lambda + i;
  for (int i = 0; i < spec_.lambda; ++i)
    qb[size_t(i)] = spec_.lambda + spec_.k + i;
  std::vector<int> qz = qa;
  qz.insert(qz.end(), qm.begin(), qm.end());
  // Remap keep positions into this reduced ordering.
  std::vector<int> keep_q;
  for (int p : keep) {
    // p indexes the engine layout (MH?, A, M, B, W); map it.
    int mh = spec_.purified ? spec_.k : 0;
    TL_REQUIRE(p >= mh && p < mh + nq, "marginal: unexpected register");
    keep_q.push_back(p - mh);
  }

  double worst = 0;
  for (const Vec& m : msgs) {
    std::vector<std::pair<std::vector<int>, Vec>> factors;
    factors.push_back({qm, m});
    if (spec_.lambda > 0) {
      std::vector<int> pe = qa;
      pe.insert(pe.end(), qb.begin(), qb.end());
      factors.push_back({pe, epr_vector(spec_.lambda)});
    }
    Vec psi = product_state(nq, factors);
    Mat rho = psi * psi.adjoint();
    Mat avg;
    if (touches_z) {
      avg = Mat::Zero(rho.rows(), rho.cols());
      const uint64_t pc = uint64_t(1) << (2 * spec_.z_qubits());
      for (uint64_t i = 0; i < pc; ++i) {
        Mat pm = PauliOp::from_index(spec_.z_qubits(), i).matrix();
        avg += conjugate_on_qubits(pm, qz, rho, nq);
      }
      avg /= double(pc);
    } else {
      avg = rho;
    }
    Mat marg = partial_trace_keep(avg, keep_q, nq);
    Mat mm = Mat::Identity(marg.rows(), marg.cols()) / double(marg.rows());
    worst = std::max(worst, trace_distance(marg, mm));
  }
  return worst;
}

double KeyedExperiment::single_share_message_distance(int share,
                                                      const Vec& msg0,
                                                      const Vec& msg1) const {
  Rng dummy(0);
  // Reuse the two-share machinery with the pair (share, share).
  // Build marginals for each message and compare.
  const auto& sh = spec_.shares[size_t(share)];
  std::vector<int> keep;
  bool touches_z = false;
  if (sh.role == QuantumRole::ZBlock) {
    touches_z = true;
  } else if (sh.role != QuantumRole::BBlock) {
    return 0.0;  // classical-only share: uniform carriers either way
  }
  const int nq = 2 * spec_.lambda + spec_.k;
  std::vector<int> qa(static_cast<size_t>(spec_.lambda));
  std::vector<int> qm(static_cast<size_t>(spec_.k));
  std::vector<int> qb(static_cast<size_t>(spec_.lambda));
  for (int i = 0; i < spec_.lambda; ++i) qa[size_t(i)] = i;
  for (int i = 0; i < spec_.k; ++i) qm[size_t(i)] = spec_.lambda + i;
  for (int i = 0; i < spec_.lambda; ++i)
    qb[size_t(i)] = spec_.lambda + spec_.k + i;
  std::vector<int> qz = qa;
  qz.insert(qz.end(), qm.begin(), qm.end());
  std::vector<int> keep_q = touches_z ? qz : qb;

  auto marg_of = [&](const Vec& m) {
    std::vector<std::pair<std::vector<int>, Vec>> factors;
    factors.push_back({qm, m});
    if (spec_.lambda > 0) {
      std::vector<int> pe = qa;
      pe.insert(pe.end(), qb.begin(), qb.end());
      factors.push_back({pe, epr_vector(spec_.lambda)});
    }
    Vec psi = product_state(nq, factors);
    Mat rho = psi * psi.adjoint();
    if (touches_z) {
      Mat avg = Mat::Zero(rho.rows(), rho.cols());
      const uint64_t pc = uint64_t(1) << (2 * spec_.z_qubits());
      for (uint64_t i = 0; i < pc; ++i) {
        Mat pm = PauliOp::from_index(spec_.z_qubits(), i).matrix();
        avg += conjugate_on_qubits(pm, qz, rho, nq);
      }
      rho = avg / double(pc);
    }
    return partial_trace_keep(rho, keep_q, nq);
  };
  return trace_distance(marg_of(msg0), marg_of(msg1));
}

ExperimentResult substitution_attack_run(const KeyedCodeSpec& spec,
                                         uint64_t fixed_message,
                                         uint64_t key_salt, Rng& rng) {
  // Honest dense simulation of the wholesale substitution attack: the
  // adversaries pre-share a valid codeword of `fixed_message` (its EPR halves
  // distributed across their ancillas) and each share swaps its content with
  // the matching ancilla register. Carrier-derived keys are used so that the
  // swapped codeword decodes; the attack needs no key knowledge.
  KeyedCodeSpec s = spec;
  s.key_mode = KeyMode::CarrierDerived;
  (void)rng;
  const int k = s.k;
  const int lam = s.lambda;
  const int dk = 1 << k;
  const int64_t db = int64_t(1) << lam;
  const int64_t dz = int64_t(1) << (k + lam);
  const int dm = dk + 1;
  const int dmh = s.purified ? dk : 1;

  // Engine-local layout: MH?(k), A(lam), M(k), B(lam), Z2(k+lam), B2(lam).
  int pos = 0;
  auto take = [&pos](int c) {
    std::vector<int> ps(static_cast<size_t>(c));
    for (int i = 0; i < c; ++i) ps[size_t(i)] = pos++;
    return ps;
  };
  std::vector<int> pmh = take(s.purified ? k : 0);
  std::vector<int> pa = take(lam);
  std::vector<int> pm = take(k);
  std::vector<int> pb = take(lam);
  std::vector<int> pz2 = take(k + lam);
  std::vector<int> pb2 = take(lam);
  const int n = pos;
  TL_REQUIRE(n <= kDefaultQubitCap, "substitution: footprint exceeds cap");
  std::vector<int> pz = pa;
  pz.insert(pz.end(), pm.begin(), pm.end());

  KeyedExperiment keyer(s, key_salt);  // reused only for key sampling

  std::vector<int> carrier_bits;
  for (const auto& sh : s.shares)
    if (sh.carrier_bits > 0) carrier_bits.push_back(sh.carrier_bits);
  const int xs = carrier_bits.size() > 0 ? (1 << carrier_bits[0]) : 1;
  const int ys = carrier_bits.size() > 1 ? (1 << carrier_bits[1]) : 1;

  Mat j = Mat::Zero(dmh * dm, dmh * dm);
  for (int x = 0; x < xs; ++x)
    for (int y = 0; y < ys; ++y)
      for (int x2 = 0; x2 < xs; ++x2)
        for (int y2 = 0; y2 < ys; ++y2) {
          double w = 1.0 / double(xs * ys * xs * ys);
          CliffordOp cr = keyer.tampered_key_clifford(uint64_t(x), uint64_t(y));
          CliffordOp c2 =
              keyer.tampered_key_clifford(uint64_t(x2), uint64_t(y2));
          // Substitute codeword on (Z2, B2).
          Vec sub = Vec::Zero(dz * db);
          for (int64_t jj = 0; jj < db; ++jj)
            for (int64_t z = 0; z < dz; ++z)
              sub(z * db + jj) =
                  c2.unitary(z, jj * dk + int64_t(fixed_message)) /
                  std::sqrt(double(db));
          std::vector<std::pair<std::vector<int>, Vec>> factors;
          if (s.purified) {
            std::vector<int> pmm = pmh;
            pmm.insert(pmm.end(), pm.begin(), pm.end());
            factors.push_back({pmm, epr_vector(k)});
          } else {
            factors.push_back({pm, basis_vector(dk, s.basis_message)});
          }
          if (lam > 0) {
            std::vector<int> pab = pa;
            pab.insert(pab.end(), pb.begin(), pb.end());
            factors.push_back({pab, epr_vector(lam)});
          }
          std::vector<int> psub = pz2;
          psub.insert(psub.end(), pb2.begin(), pb2.end());
          factors.push_back({psub, sub});
          Vec v = product_state(n, factors) * std::sqrt(w);
          // Encode, swap (Z <-> Z2 and B <-> B2), decode under the swapped
          // carriers (x2, y2) whose key is exactly c2.
          v = apply_to_qubits(cr.unitary, pz, v, n);
          {
            // Swap via index permutation.
            Vec sw = Vec::Zero(v.size());
            auto bit = [&](int64_t idx, int p) { return (idx >> (n - 1 - p)) & 1; };
            for (int64_t idx = 0; idx < v.size(); ++idx) {
              int64_t out = idx;
              for (size_t q = 0; q < pz.size(); ++q) {
                int pA = pz[q], pB = pz2[q];
                int64_t ba = bit(idx, pA), bb = bit(idx, pB);
                if (ba != bb) {
                  out ^= int64_t(1) << (n - 1 - pA);
                  out ^= int64_t(1) << (n - 1 - pB);
                }
              }
              for (size_t q = 0; q < pb.size(); ++q) {
                int pA = pb[q], pB = pb2[q];
                int64_t ba = bit(idx, pA), bb = bit(idx, pB);
                if (ba != bb) {
                  out ^= int64_t(1) << (n - 1 - pA);
                  out ^= int64_t(1) << (n - 1 - pB);
                }
              }
              sw(out) = v(idx);
            }
            v = sw;
          }
          v = apply_to_qubits(Mat(c2.unitary.adjoint()), pz, v, n);
          // Decode: EPR test between A and B, message marginal, bot on fail.
          if (lam > 0) {
            std::vector<int> ab = pa;
            ab.insert(ab.end(), pb.begin(), pb.end());
            Vec a = partial_inner(epr_vector(lam), ab, v, n);
            const int nr = n - 2 * lam;
            std::vector<int> keep = reduced_positions(pmh, ab, n);
            auto pmr = reduced_positions(pm, ab, n);
            keep.insert(keep.end(), pmr.begin(), pmr.end());
            Mat blk = pure_marginal_keep(a, keep, nr);
            for (int mr = 0; mr < dmh; ++mr)
              for (int mc = 0; mc < dk; ++mc)
                for (int nr2 = 0; nr2 < dmh; ++nr2)
                  for (int nc = 0; nc < dk; ++nc)
                    j(mr * dm + mc, nr2 * dm + nc) +=
                        blk(mr * dk + mc, nr2 * dk + nc);
            if (s.purified) {
              Mat mv = pure_marginal_keep(v, pmh, n);
              Mat ma = pure_marginal_keep(a, reduced_positions(pmh, ab, n), nr);
              Mat diff = mv - ma;
              for (int r = 0; r < dmh; ++r)
                for (int c = 0; c < dmh; ++c)
                  j(r * dm + dk, c * dm + dk) += diff(r, c);
            } else {
              j(dk, dk) += v.squaredNorm() - a.squaredNorm();
            }
          } else {
            std::vector<int> keep = pmh;
            keep.insert(keep.end(), pm.begin(), pm.end());
            Mat blk = pure_marginal_keep(v, keep, n);
            for (int mr = 0; mr < dmh; ++mr)
              for (int mc = 0; mc < dk; ++mc)
                for (int nr2 = 0; nr2 < dmh; ++nr2)
                  for (int nc = 0; nc < dk; ++nc)
                    j(mr * dm + mc, nr2 * dm + nc) +=
                        blk(mr * dk + mc, nr2 * dk + nc);
          }
        }
  ExperimentResult res;
  res.k = k;
  res.purified = s.purified;
  res.j = 0.5 * (j + j.adjoint());
  if (!s.purified) {
    res.probs.assign(size_t(dm), 0.0);
    for (int m = 0; m < dm; ++m) res.probs[size_t(m)] = res.j(m, m).real();
  }
  return res;
}

}  // namespace tl
