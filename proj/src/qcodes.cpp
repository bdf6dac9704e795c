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

#include "tamperlab/qcodes.hpp"

#include <bit>
#include <cmath>

namespace tl {

KeyedCode build_qnmc2_lo(int k, int carrier_x, int carrier_y, uint64_t salt) {
  KeyedCode c;
  c.name = "qnmc2-lo";
  c.spec.k = k;
  c.spec.lambda = 0;
  c.spec.purified = true;
  c.spec.shares = {{carrier_y, QuantumRole::None, 0},
                   {carrier_x, QuantumRole::ZBlock, 0}};
  c.bound_formula = "eps_key + 2^{2-k}";
  c.bound_value = std::pow(2.0, 2 - k);
  c.key_salt = salt;
  return c;
}

KeyedCode build_tdc3(int k, int lambda, int e3, bool conjugate_inner_half,
                     int carrier_x, int carrier_y, uint64_t salt) {
  // Both wirings conjugate one EPR half together with the message and keep
  // the other half on the Y share; they differ only by the E <-> Ehat label
  // swap, which the engine layout absorbs. The flag is kept for report
  // provenance.
  (void)conjugate_inner_half;
  KeyedCode c;
  c.name = "tdc3-bounded";
  c.spec.k = k;
  c.spec.lambda = lambda;
  c.spec.purified = true;
  c.spec.shares = {{carrier_x, QuantumRole::None, 0},
                   {carrier_y, QuantumRole::BBlock, 0},
                   {0, QuantumRole::ZBlock, e3}};
  c.bound_formula = "2 eps_key + 6 * 2^{e3-lambda}";
  c.bound_value = 6.0 * std::pow(2.0, e3 - lambda);
  c.key_salt = salt;
  return c;
}

KeyedCode build_reduction_tdc(int k, int lambda, int a_budget, int carrier_x,
                              int carrier_y, uint64_t salt) {
  KeyedCode c;
  c.name = "reduction-tdc";
  c.spec.k = k;
  c.spec.lambda = lambda;
  c.spec.purified = true;
  c.spec.shares = {{carrier_y, QuantumRole::None, 0},
                   {carrier_x, QuantumRole::ZBlock, 0},
                   {0, QuantumRole::BBlock, a_budget}};
  if (a_budget == 0) {
    c.bound_formula = "eps + 2^{1-lambda}";
    c.bound_value = std::pow(2.0, 1 - lambda);
  } else {
    c.bound_formula = "eps + 2^{1+a-lambda}";
    c.bound_value = std::pow(2.0, 1 + a_budget - lambda);
  }
  c.key_salt = salt;
  return c;
}

PaddedCode pad_compiler(const KeyedCode& code, int pad) {
  TL_REQUIRE(pad >= 0 && pad < code.spec.k, "pad_compiler: pad too large");
  PaddedCode p;
  p.base = code;
  p.pad = pad;
  p.privacy_bound = 4.0 * std::sqrt(code.bound_value + std::pow(2.0, 1 - pad));
  return p;
}

// ---------------------------------------------------------------------------
// Bit NMC against LOCC^2
// ---------------------------------------------------------------------------

BitNmcLocc2 build_bitnmc_locc2(int n) {
  TL_REQUIRE(n >= 1 && n <= 5, "bitnmc: n out of range");
  return BitNmcLocc2{n};
}

std::vector<int> BitNmcLocc2::share_a() const {
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[size_t(i)] = i;
  return out;
}

std::vector<int> BitNmcLocc2::share_b() const {
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[size_t(i)] = n + i;
  return out;
}

Mat BitNmcLocc2::encode(int bit) const {
  Vec phi = epr_vector(n);
  Mat phi_op = phi * phi.adjoint();
  if (bit == 0) return phi_op;
  // Uniform over (X^a Z^b ⊗ I) Phi with (a,b) != 0: equals
  // (4^n U ⊗ U - Phi) / (4^n - 1).
  const double dn = std::pow(4.0, n);
  Mat mm = Mat::Identity(phi_op.rows(), phi_op.cols()) / double(phi_op.rows());
  return (dn * mm - phi_op) / (dn - 1.0);
}

double BitNmcLocc2::decode_zero_prob(const Mat& rho) const {
  Vec phi = epr_vector(n);
  return ((phi.adjoint() * rho * phi)(0, 0)).real();
}

double BitNmcLocc2::flip_oracle(const std::vector<Mat>& kraus,
                                const std::vector<int>& qs) const {
  // Enumerate the 4^n - 1 Bell branches of Enc(1) explicitly.
  const uint64_t total = uint64_t(1) << (2 * n);
  Vec phi = epr_vector(n);
  double p = 0;
  for (uint64_t ab = 1; ab < total; ++ab) {
    PauliOp op = PauliOp::from_index(n, ab);
    Vec branch = apply_to_qubits(op.matrix(), share_a(), phi, 2 * n);
    Mat rho = branch * branch.adjoint();
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& k : kraus) out += conjugate_on_qubits(k, qs, rho, 2 * n);
    p += decode_zero_prob(out) / double(total - 1);
  }
  return p;
}

void LoccTamperAdversary::validate(int64_t da, int64_t db) const {
  // sum over branches of (sum K_A^dagger K_A) ⊗ (sum K_B^dagger K_B) = I.
  Mat total = Mat::Zero(da * db, da * db);
  for (const auto& br : branches) {
    Mat sa = Mat::Zero(da, da);
    for (const auto& k : br.kraus_a) sa += k.adjoint() * k;
    Mat sb = Mat::Zero(db, db);
    for (const auto& k : br.kraus_b) sb += k.adjoint() * k;
    total += kron(sa, sb);
  }
  TL_REQUIRE((total - Mat::Identity(da * db, da * db)).cwiseAbs().maxCoeff() <
                 1e-8,
             "locc adversary: not trace preserving on average");
}

Mat LoccTamperAdversary::apply(const Mat& rho, const std::vector<int>& qa,
                               const std::vector<int>& qb, int n) const {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& br : branches) {
    for (const auto& ka : br.kraus_a) {
      Mat mid = conjugate_on_qubits(ka, qa, rho, n);
      for (const auto& kb : br.kraus_b)
        out += conjugate_on_qubits(kb, qb, mid, n);
    }
  }
  return out;
}

LoccTamperAdversary sample_locc_tamper(int qubits_a, int qubits_b, int rounds,
                                       Rng& rng) {
  TL_REQUIRE(rounds >= 1 && rounds <= 2, "locc tamper: rounds in {1,2}");
  const int64_t da = int64_t(1) << qubits_a;
  const int64_t db = int64_t(1) << qubits_b;
  LoccTamperAdversary adv;
  // Round 1: A applies a local pre-unitary, measures in the computational
  // basis, keeps a conditioned local post-unitary; B applies a conditioned
  // unitary. Round 2 (optional): B also measures one designated qubit and A
  // applies a conditioned Pauli; flattening multiplies the transcripts.
  Mat pre = random_unitary(int(da), rng);
  std::vector<Mat> post_a(static_cast<size_t>(da));
  std::vector<Mat> resp_b(static_cast<size_t>(da));
  for (int64_t c = 0; c < da; ++c) {
    post_a[size_t(c)] = random_unitary(int(da), rng);
    resp_b[size_t(c)] = random_unitary(int(db), rng);
  }
  if (rounds == 1) {
    for (int64_t c = 0; c < da; ++c) {
      Mat proj = basis_vector(int(da), uint64_t(c)) *
                 basis_vector(int(da), uint64_t(c)).adjoint();
      LoccTamperAdversary::Branch br;
      br.kraus_a = {post_a[size_t(c)] * proj * pre};
      br.kraus_b = {resp_b[size_t(c)]};
      adv.branches.push_back(std::move(br));
    }
    return adv;
  }
  // Two rounds: B measures its first qubit in a random basis after its
  // response; A applies a conditioned Pauli on its first qubit.
  Mat basis_b = random_unitary(2, rng);
  for (int64_t c = 0; c < da; ++c) {
    for (int ob = 0; ob < 2; ++ob) {
      Mat proj_a = basis_vector(int(da), uint64_t(c)) *
                   basis_vector(int(da), uint64_t(c)).adjoint();
      Mat proj_b1 = basis_b.col(ob) * basis_b.col(ob).adjoint();
      Mat kb = Mat::Identity(db, db);
      // Embed the 1-qubit projector on B's first qubit.
      Mat full_proj = kron(proj_b1, Mat::Identity(db / 2, db / 2));
      kb = full_proj * resp_b[size_t(c)];
      PauliOp pa = PauliOp::from_index(1, uint64_t(1 + ((c + ob) % 3)));
      Mat ka_pauli = kron(pa.matrix(), Mat::Identity(da / 2, da / 2));
      LoccTamperAdversary::Branch br;
      br.kraus_a = {ka_pauli * post_a[size_t(c)] * proj_a * pre};
      br.kraus_b = {kb};
      adv.branches.push_back(std::move(br));
    }
  }
  return adv;
}

// ---------------------------------------------------------------------------
// Bell parity hiding
// ---------------------------------------------------------------------------

BellParityHiding hiding_bell_parity(int n) {
  TL_REQUIRE(n >= 1 && n <= 4, "hiding: n out of range");
  return BellParityHiding{n};
}

std::vector<int> BellParityHiding::share_a() const {
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[size_t(i)] = i;
  return out;
}

std::vector<int> BellParityHiding::share_b() const {
  std::vector<int> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[size_t(i)] = n + i;
  return out;
}

int BellParityHiding::decode_outcome_parity(uint64_t a_bits,
                                            uint64_t b_bits) const {
  // Singlet outcome on pair i: (a_i, b_i) = (1, 1).
  return std::popcount(a_bits & b_bits) & 1;
}

Mat BellParityHiding::encode(int bit) const {
  const int64_t dim = int64_t(1) << (2 * n);
  Mat rho = Mat::Zero(dim, dim);
  Vec phi = epr_vector(n);
  int count = 0;
  for (uint64_t a = 0; a < (uint64_t(1) << n); ++a)
    for (uint64_t b = 0; b < (uint64_t(1) << n); ++b) {
      if ((std::popcount(a & b) & 1) != bit) continue;
      PauliOp op{uint32_t(a), uint32_t(b), 0, n};
      Vec v = apply_to_qubits(op.matrix(), share_a(), phi, 2 * n);
      rho += v * v.adjoint();
      ++count;
    }
  return rho / double(count);
}

double BellParityHiding::decode_correct_prob(const Mat& rho, int bit) const {
  Vec phi = epr_vector(n);
  double p = 0;
  for (uint64_t a = 0; a < (uint64_t(1) << n); ++a)
    for (uint64_t b = 0; b < (uint64_t(1) << n); ++b) {
      if ((std::popcount(a & b) & 1) != bit) continue;
      PauliOp op{uint32_t(a), uint32_t(b), 0, n};
      Vec v = apply_to_qubits(op.matrix(), share_a(), phi, 2 * n);
      p += ((v.adjoint() * rho * v)(0, 0)).real();
    }
  return p;
}

// ---------------------------------------------------------------------------
// 4-split NMC against LOCC with the ideal hiding mock
// ---------------------------------------------------------------------------

Nmc4Locc build_nmc4_locc(ClassicalNmc inner, int syndrome_pairs) {
  TL_REQUIRE(syndrome_pairs >= 1 && syndrome_pairs <= 2,
             "nmc4: syndrome pairs in {1,2}");
  TL_REQUIRE(inner.n1 <= 2 * syndrome_pairs && inner.n2 <= 2 * syndrome_pairs,
             "nmc4: hiding mask too short for the share size");
  return Nmc4Locc{std::move(inner), syndrome_pairs};
}

Nmc4Locc::RunRecord Nmc4Locc::run_adversary(Rng& rng) const {
  // Physical registers: one syndrome instance of `sp` EPR pairs per hiding
  // scheme (L and R); halves L1/L2 and R1/R2 are the four shares. The hidden
  // values ride along classically; tampering perturbs the decoded value by
  // XOR with a mask derived from the Bell defect pattern, independently of
  // the value (the ideal hiding mock).
  const int sp = syndrome_pairs;
  const int n = 4 * sp;  // qubit order: [L1][L2][R1][R2]
  std::vector<int> l1(static_cast<size_t>(sp)), l2(static_cast<size_t>(sp));
  std::vector<int> r1(static_cast<size_t>(sp)), r2(static_cast<size_t>(sp));
  for (int i = 0; i < sp; ++i) {
    l1[size_t(i)] = i;
    l2[size_t(i)] = sp + i;
    r1[size_t(i)] = 2 * sp + i;
    r2[size_t(i)] = 3 * sp + i;
  }
  const std::vector<std::vector<int>> shares{l1, l2, r1, r2};
  const int64_t dim = int64_t(1) << n;

  // One-round LOCC^4: a random actor measures its qubits in a random product
  // basis and broadcasts; the others apply conditioned unitaries.
  int actor = int(rng.below(4));
  Mat basis1 = random_unitary(2, rng);
  const int64_t oc = int64_t(1) << sp;
  std::vector<std::vector<Mat>> responses(static_cast<size_t>(oc));
  for (int64_t c = 0; c < oc; ++c)
    for (int s = 0; s < 4; ++s)
      responses[size_t(c)].push_back(s == actor ? Mat::Identity(oc, oc)
                                                : random_unitary(int(oc), rng));

  // Initial syndrome state: Phi^{sp} on (L1,L2) and on (R1,R2).
  Vec phi_sp = epr_vector(sp);
  Vec psi(dim);
  {
    std::vector<int> pl = l1;
    pl.insert(pl.end(), l2.begin(), l2.end());
    std::vector<int> pr = r1;
    pr.insert(pr.end(), r2.begin(), r2.end());
    for (int64_t idx = 0; idx < dim; ++idx) {
      uint64_t subl = 0, subr = 0;
      for (size_t b = 0; b < pl.size(); ++b)
        if ((idx >> (n - 1 - pl[b])) & 1)
          subl |= uint64_t(1) << (pl.size() - 1 - b);
      for (size_t b = 0; b < pr.size(); ++b)
        if ((idx >> (n - 1 - pr[b])) & 1)
          subr |= uint64_t(1) << (pr.size() - 1 - b);
      psi(idx) = phi_sp(int64_t(subl)) * phi_sp(int64_t(subr));
    }
  }
  Mat rho0 = psi * psi.adjoint();

  // Bell-product decode vectors, transcript independent.
  std::vector<int> local_first(static_cast<size_t>(sp));
  for (int i = 0; i < sp; ++i) local_first[size_t(i)] = i;
  struct BellVec {
    uint64_t a, b;
    Vec v;  // on 2*sp qubits
  };
  std::vector<BellVec> bells;
  for (uint64_t a = 0; a < (uint64_t(1) << sp); ++a)
    for (uint64_t b = 0; b < (uint64_t(1) << sp); ++b) {
      PauliOp op{uint32_t(a), uint32_t(b), 0, sp};
      bells.push_back(
          {a, b, apply_to_qubits(op.matrix(), local_first, phi_sp, 2 * sp)});
    }
  std::vector<Vec> fulls;
  std::vector<std::pair<size_t, size_t>> full_idx;
  {
    std::vector<int> pl = l1;
    pl.insert(pl.end(), l2.begin(), l2.end());
    std::vector<int> pr = r1;
    pr.insert(pr.end(), r2.begin(), r2.end());
    for (size_t il = 0; il < bells.size(); ++il)
      for (size_t ir = 0; ir < bells.size(); ++ir) {
        Vec full(dim);
        for (int64_t idx = 0; idx < dim; ++idx) {
          uint64_t subl = 0, subr = 0;
          for (size_t b = 0; b < pl.size(); ++b)
            if ((idx >> (n - 1 - pl[b])) & 1)
              subl |= uint64_t(1) << (pl.size() - 1 - b);
          for (size_t b = 0; b < pr.size(); ++b)
            if ((idx >> (n - 1 - pr[b])) & 1)
              subr |= uint64_t(1) << (pr.size() - 1 - b);
          full(idx) = bells[il].v(int64_t(subl)) * bells[ir].v(int64_t(subr));
        }
        fulls.push_back(std::move(full));
        full_idx.push_back({il, ir});
      }
  }

  // Defect-to-mask map: one mask bit per pair, set when the Bell outcome on
  // that pair is not (0,0); truncated to the share width.
  auto mask_of = [&](uint64_t a, uint64_t b, int width) {
    uint64_t g = 0;
    for (int i = 0; i < sp && i < width; ++i)
      if (((a >> i) & 1) || ((b >> i) & 1)) g |= uint64_t(1) << i;
    return g;
  };

  RunRecord rec;
  const int mcount = 1 << inner.k;
  const int wl = inner.n1, wr = inner.n2;
  rec.message_dists.assign(size_t(mcount),
                           std::vector<double>(size_t(mcount) + 1, 0.0));

  std::vector<std::vector<double>> mask_joint;
  double total_prob = 0;
  for (int64_t c = 0; c < oc; ++c) {
    Mat rot = Mat::Identity(1, 1);
    for (int i = 0; i < sp; ++i) rot = kron(rot, basis1);
    Vec col = rot * basis_vector(int(oc), uint64_t(c));
    Mat proj = col * col.adjoint();
    Mat after = conjugate_on_qubits(proj, shares[size_t(actor)], rho0, n);
    for (int s = 0; s < 4; ++s) {
      if (s == actor) continue;
      after = conjugate_on_qubits(responses[size_t(c)][size_t(s)],
                                  shares[size_t(s)], after, n);
    }
    total_prob += after.trace().real();
    std::vector<double> joint(size_t(1) << (wl + wr), 0.0);
    for (size_t fi = 0; fi < fulls.size(); ++fi) {
      double w = ((fulls[fi].adjoint() * after * fulls[fi])(0, 0)).real();
      if (w < 1e-16) continue;
      auto [il, ir] = full_idx[fi];
      uint64_t gl = mask_of(bells[il].a, bells[il].b, wl);
      uint64_t gr = mask_of(bells[ir].a, bells[ir].b, wr);
      joint[size_t((gl << wr) | gr)] += w;
    }
    mask_joint.push_back(std::move(joint));
  }
  TL_REQUIRE(std::abs(total_prob - 1.0) < 1e-8,
             "nmc4: transcript probabilities do not sum to one");

  double worst_fact = 0;
  for (const auto& joint : mask_joint) {
    double tot = 0;
    for (double v : joint) tot += v;
    if (tot < 1e-14) continue;
    std::vector<double> ml(size_t(1) << wl, 0.0), mr(size_t(1) << wr, 0.0);
    for (uint64_t gl = 0; gl < (uint64_t(1) << wl); ++gl)
      for (uint64_t gr = 0; gr < (uint64_t(1) << wr); ++gr) {
        ml[gl] += joint[size_t((gl << wr) | gr)] / tot;
        mr[gr] += joint[size_t((gl << wr) | gr)] / tot;
      }
    double tv = 0;
    for (uint64_t gl = 0; gl < (uint64_t(1) << wl); ++gl)
      for (uint64_t gr = 0; gr < (uint64_t(1) << wr); ++gr)
        tv += std::abs(joint[size_t((gl << wr) | gr)] / tot - ml[gl] * mr[gr]);
    worst_fact = std::max(worst_fact, 0.5 * tv);
  }
  rec.factorization_tv = worst_fact;
  // The physical simulation never touches the hidden values, so the
  // transcript law is identical across share-value fixings.
  rec.transcript_tv = 0.0;

  for (int m = 0; m < mcount; ++m) {
    const auto& words = inner.enc[size_t(m)];
    double w0 = 1.0 / double(words.size());
    for (auto [x, y] : words)
      for (const auto& joint : mask_joint)
        for (uint64_t gl = 0; gl < (uint64_t(1) << wl); ++gl)
          for (uint64_t gr = 0; gr < (uint64_t(1) << wr); ++gr) {
            double w = w0 * joint[size_t((gl << wr) | gr)];
            if (w < 1e-16) continue;
            int out = inner.decode(uint32_t(x ^ gl), uint32_t(y ^ gr));
            rec.message_dists[size_t(m)]
                             [out == ClassicalNmc::kBot ? size_t(mcount)
                                                        : size_t(out)] += w;
          }
  }
  return rec;
}

}  // namespace tl
