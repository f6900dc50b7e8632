#include "twisted/takai.hpp"

#include <cmath>
#include <stdexcept>

namespace twisted {

namespace {

bool diag_v(const TwistedSystem& s, std::vector<std::vector<cplx>>& diag) {
  int n = s.grp.size();
  int d = s.alg->dim();
  diag.assign(static_cast<size_t>(n) * n, {});
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const CMat& m = s.vat(x, y);
      std::vector<cplx> dv(d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (i == j)
            dv[i] = m.at(i, i);
          else if (std::abs(m.at(i, j)) != 0.0)
            return false;
        }
      diag[static_cast<size_t>(x) * n + y] = std::move(dv);
    }
  return true;
}

void right_mul_diag(CMat& m, const std::vector<cplx>& d) {
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) m.at(i, j) *= d[j];
}

}  // namespace

DoubleElement zero_double(const TwistedSystem& s) {
  int n = s.grp.size();
  return {s.grp, s.alg, std::vector<CMat>(static_cast<size_t>(n) * n, s.alg->zero())};
}

DoubleElement random_double(const TwistedSystem& s, Rng& rng) {
  DoubleElement F = zero_double(s);
  for (auto& m : F.f) m = random_cmat(s.alg->dim(), rng);
  return F;
}

double max_abs_diff(const DoubleElement& a, const DoubleElement& b) {
  double w = 0.0;
  for (size_t i = 0; i < a.f.size(); ++i) w = std::max(w, max_abs_diff(a.f[i], b.f[i]));
  return w;
}

DoubleElement double_convolve(const DoubleElement& F, const DoubleElement& G,
                              const TwistedSystem& s) {
  if (F.f.size() != G.f.size() || F.alg->dim() != G.alg->dim())
    throw std::invalid_argument("double_convolve: shape mismatch");
  const auto& g = s.grp;
  int n = g.size();
  int d = s.alg->dim();

  // Dual-side convolution theorem: transform both factors in the character
  // slot, multiply pointwise, transform back. One block product per
  // (y, x', chi) instead of |Ghat| of them.
  std::vector<std::vector<cplx>> vdiag;
  bool vd = diag_v(s, vdiag);

  auto transform = [&](const DoubleElement& E) {
    DoubleElement out = zero_double(s);
    for (int x = 0; x < n; ++x)
      for (int chi = 0; chi < n; ++chi) {
        CMat& acc = out.at(x, chi);
        for (int eta = 0; eta < n; ++eta)
          add_scaled(acc, E.at(x, eta), phase(g.pairing(chi, eta)));
      }
    return out;
  };
  DoubleElement Fh = transform(F);
  DoubleElement Gh = transform(G);

  // hot loop on split buffers; one block product per (y, x', chi)
  size_t blk = static_cast<size_t>(d) * d;
  std::vector<double> fr(static_cast<size_t>(n) * n * blk), fi(fr.size());
  std::vector<double> gr(fr.size()), gi(fr.size());
  for (size_t e = 0; e < Fh.f.size(); ++e) {
    split_cmat(Fh.f[e], fr.data() + e * blk, fi.data() + e * blk);
    split_cmat(Gh.f[e], gr.data() + e * blk, gi.data() + e * blk);
  }
  std::vector<double> cr(fr.size(), 0.0), ci(fr.size(), 0.0);
  const double* const* wrre = s.alg->wrow_re();
  const double* const* wrim = s.alg->wrow_im();
  // a fused path needs phase-shift betas and diagonal v
  bool fused = vd;
  for (const auto& b : s.beta) fused = fused && b.pure_shift();
  std::vector<double> tbr(blk), tbi(blk), pr(blk), pi2(blk);
  CMat bhat = s.alg->zero();
  for (int y = 0; y < n; ++y) {
    const Automorphism& by = s.beta[y];
    if (fused && !by.phase.empty() && !by.phase_c) by.apply(*s.alg, s.alg->zero());  // warm cache
    for (int xp = 0; xp < n; ++xp) {
      int x = g.add(y, xp);
      if (fused) {
        // combined phase P(i,j) = beta-phase(i,j) * vdiag(y,xp)[j]
        const auto& dv = vdiag[static_cast<size_t>(y) * n + xp];
        const cplx* pc = by.phase_c ? by.phase_c->data() : nullptr;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) {
            cplx p = pc ? pc[static_cast<size_t>(i) * d + j] : cplx{1.0, 0.0};
            p *= dv[j];
            pr[static_cast<size_t>(i) * d + j] = p.real();
            pi2[static_cast<size_t>(i) * d + j] = p.imag();
          }
        for (int chi = 0; chi < n; ++chi) {
          size_t eg = static_cast<size_t>(xp) * n + chi;
          const double* sgr = gr.data() + eg * blk;
          const double* sgi = gi.data() + eg * blk;
          for (int i = 0; i < d; ++i) {
            const int qi = by.perm[i];
            for (int j = 0; j < d; ++j) {
              size_t t = static_cast<size_t>(i) * d + j;
              size_t src = static_cast<size_t>(qi) * d + by.perm[j];
              tbr[t] = pr[t] * sgr[src] - pi2[t] * sgi[src];
              tbi[t] = pr[t] * sgi[src] + pi2[t] * sgr[src];
            }
          }
          size_t ef = static_cast<size_t>(y) * n + g.add(chi, xp);
          size_t ec = static_cast<size_t>(x) * n + chi;
          wgemm_acc_split(d, fr.data() + ef * blk, fi.data() + ef * blk, tbr.data(), tbi.data(),
                          wrre, wrim, cplx{1.0, 0.0}, cr.data() + ec * blk, ci.data() + ec * blk);
        }
        continue;
      }
      for (int chi = 0; chi < n; ++chi) {
        bhat = by.apply(*s.alg, Gh.at(xp, chi));
        if (vd)
          right_mul_diag(bhat, vdiag[static_cast<size_t>(y) * n + xp]);
        else
          bhat = s.alg->star(bhat, s.vat(y, xp));
        size_t ef = static_cast<size_t>(y) * n + g.add(chi, xp);
        size_t ec = static_cast<size_t>(x) * n + chi;
        split_cmat(bhat, tbr.data(), tbi.data());
        wgemm_acc_split(d, fr.data() + ef * blk, fi.data() + ef * blk, tbr.data(), tbi.data(),
                        wrre, wrim, cplx{1.0, 0.0}, cr.data() + ec * blk, ci.data() + ec * blk);
      }
    }
  }

  DoubleElement out = zero_double(s);
  double innorm = 1.0 / (static_cast<double>(n) * n);
  CMat tmp = s.alg->zero();
  for (int x = 0; x < n; ++x)
    for (int xi = 0; xi < n; ++xi) {
      CMat& acc = out.at(x, xi);
      for (int chi = 0; chi < n; ++chi) {
        size_t ec = static_cast<size_t>(x) * n + chi;
        unsplit_cmat(tmp, cr.data() + ec * blk, ci.data() + ec * blk);
        add_scaled(acc, tmp, std::conj(phase(g.pairing(chi, xi))) * innorm);
      }
    }
  return out;
}

TwistedKernel takai_kernel(const DoubleElement& F, const TwistedSystem& s) {
  const auto& g = s.grp;
  int n = g.size();
  // Fourier transform in the dual slot, normalized measure on Ghat.
  DoubleElement Fh = zero_double(s);
  double inv = 1.0 / n;
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      CMat& acc = Fh.at(x, z);
      for (int m = 0; m < n; ++m) add_scaled(acc, F.at(x, m), phase(g.pairing(m, z)) * inv);
    }
  std::vector<std::vector<cplx>> vdiag;
  bool vd = diag_v(s, vdiag);
  TwistedKernel k = make_kernel(g, s.phi, s.alg);
  for (int w = 0; w < n; ++w) {
    int nw = g.neg(w);
    for (int z = 0; z < n; ++z) {
      int wz = g.sub(w, z);
      CMat b = s.beta[nw].apply(*s.alg, Fh.at(wz, z));
      cplx corr = s.tab->at(nw, wz, z);
      if (vd) {
        right_mul_diag(b, vdiag[static_cast<size_t>(nw) * n + wz]);
        for (auto& v : b.a) v *= corr;
        k.at(w, z) = std::move(b);
      } else {
        s.alg->mul(k.at(w, z), b, s.vat(nw, wz), corr);
      }
    }
  }
  return k;
}

DoubleElement dual_translate(const DoubleElement& F, int y) {
  DoubleElement out = F;
  const auto& g = F.grp;
  int n = g.size();
  for (int x = 0; x < n; ++x)
    for (int xi = 0; xi < n; ++xi) {
      cplx p = phase(g.pairing(xi, y));
      for (auto& v : out.at(x, xi).a) v *= p;
    }
  return out;
}

TwistedKernel double_dual_action(int y, const TwistedKernel& k, const TwistedSystem& s) {
  const auto& g = s.grp;
  int n = g.size();
  auto V = [&](int z) -> CMat {
    int nz = g.neg(z);
    cplx sc = phase((s.phi->at3(y, nz, z) - s.phi->at3(g.sub(y, z), g.sub(z, y), y)).mod1());
    return sc * s.vat(y, nz);
  };
  std::vector<CMat> Vs;
  Vs.reserve(n);
  for (int z = 0; z < n; ++z) Vs.push_back(V(z));
  bool vdall = true;
  for (const auto& m : Vs)
    for (int i = 0; i < m.d && vdall; ++i)
      for (int j = 0; j < m.d; ++j)
        if (i != j && std::abs(m.at(i, j)) != 0.0) {
          vdall = false;
          break;
        }
  TwistedKernel out = make_kernel(g, s.phi, s.alg);
  for (int w = 0; w < n; ++w)
    for (int z = 0; z < n; ++z) {
      CMat b = s.beta[y].apply(*s.alg, k.at(g.add(w, y), g.add(z, y)));
      cplx corr = s.tab->at(g.sub(w, z), z, y);
      if (vdall) {
        // diagonal V: sandwich entrywise
        const CMat &vw = Vs[w], &vz = Vs[z];
        for (int i = 0; i < b.d; ++i)
          for (int j = 0; j < b.d; ++j)
            b.at(i, j) *= corr * std::conj(vw.at(i, i)) * vz.at(j, j);
        out.at(w, z) = std::move(b);
      } else {
        CMat t = s.alg->star(adjoint(Vs[w]), b);
        s.alg->mul(out.at(w, z), t, Vs[z], corr);
      }
    }
  return out;
}

CertifyReport certify_takai(const TwistedSystem& s, int trials, double tol, Rng& rng) {
  CertifyReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    DoubleElement F = random_double(s, rng);
    DoubleElement G = random_double(s, rng);
    TwistedKernel lhs = takai_kernel(double_convolve(F, G, s), s);
    // With the conventions anchored here (positive Fourier kernel, dual
    // action eta(x) g(x), the cocycle side of validate_system), the dual
    // kernels compose against the +phi weight; the two weights coincide on
    // 2-torsion phases.
    TwistedKernel rhs = kprod(takai_kernel(F, s), takai_kernel(G, s));
    double def = max_abs_diff(lhs, rhs);
    if (def > rep.worst) {
      rep.worst = def;
      rep.witness = "trial " + std::to_string(t);
    }
  }
  rep.pass = rep.worst < tol;
  return rep;
}

CertifyReport certify_double_dual(const TwistedSystem& s, int trials, double tol, Rng& rng) {
  CertifyReport rep;
  rep.trials = trials;
  int n = s.grp.size();
  for (int t = 0; t < trials; ++t) {
    DoubleElement F = random_double(s, rng);
    TwistedKernel k = takai_kernel(F, s);
    for (int y = 0; y < n; ++y) {
      TwistedKernel path_a = takai_kernel(dual_translate(F, y), s);
      TwistedKernel path_b = double_dual_action(y, k, s);
      double def = max_abs_diff(path_a, path_b);
      if (def > rep.worst) {
        rep.worst = def;
        rep.witness = "trial " + std::to_string(t) + ", y=" + std::to_string(y);
      }
    }
  }
  rep.pass = rep.worst < tol;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Rational> vturns_of(const TwistedSystem& s, int x, int y) {
  return (*s.v_turns)[static_cast<size_t>(x) * s.grp.size() + y];
}

}  // namespace

SplitData split_system(const TwistedSystem& s, int cut) {
  const auto& g = s.grp;
  int n = g.size();
  int d = s.alg->dim();
  SplitData sd;
  sd.cut = cut;
  sd.g1 = g1_list(g, cut);
  sd.g2 = g2_list(g, cut);
  sd.varphi = PhaseCochain(g, 3);

  // --- hypotheses -----------------------------------------------------
  for (int x : sd.g1)
    for (int y : sd.g1)
      for (int z : sd.g1)
        if (!s.phi->at3(x, y, z).is_zero()) {
          sd.witness = "phi nontrivial on G1^3 at (" + std::to_string(x) + "," +
                       std::to_string(y) + "," + std::to_string(z) + ")";
          return sd;
        }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        int in2 = (g1_part(g, cut, x) == 0) + (g1_part(g, cut, y) == 0) + (g1_part(g, cut, z) == 0);
        if (in2 >= 2 && !s.phi->at3(x, y, z).is_zero()) {
          sd.witness = "phi nontrivial with two arguments in G2 at (" + std::to_string(x) + "," +
                       std::to_string(y) + "," + std::to_string(z) + ")";
          return sd;
        }
      }
  if (!s.v_turns) {
    sd.witness = "system lacks exact diagonal v data";
    return sd;
  }
  for (const auto& lst : {sd.g1, sd.g2})
    for (int x : lst)
      for (int y : lst)
        for (const Rational& t : vturns_of(s, x, y))
          if (!t.is_zero()) {
            sd.witness = "v nontrivial on a subgroup at (" + std::to_string(x) + "," +
                         std::to_string(y) + ")";
            return sd;
          }

  // --- vtilde and its identities (exact turns) ------------------------
  int n1 = static_cast<int>(sd.g1.size());
  int n2 = static_cast<int>(sd.g2.size());
  std::vector<int> pos1(n, -1), pos2(n, -1);
  for (int i = 0; i < n1; ++i) pos1[sd.g1[i]] = i;
  for (int i = 0; i < n2; ++i) pos2[sd.g2[i]] = i;
  auto vturn = [&](int x, int y, int i) { return (*s.v_turns)[static_cast<size_t>(x) * n + y][i]; };
  sd.vtilde.assign(static_cast<size_t>(n2) * n1, std::vector<Rational>(d, Rational(0)));
  for (int X : sd.g2)
    for (int y : sd.g1) {
      auto& vt = sd.vtilde[static_cast<size_t>(pos2[X]) * n1 + pos1[y]];
      for (int i = 0; i < d; ++i) vt[i] = (vturn(X, y, i) - vturn(y, X, i)).mod1();
    }
  auto vtilde_at = [&](int X, int y, int i) {
    return sd.vtilde[static_cast<size_t>(pos2[X]) * n1 + pos1[y]][i];
  };
  // beta of a diagonal turn vector: entry i picks up the PS phase on the
  // diagonal plus the permuted entry
  auto beta_diag = [&](int b, int X, int y, int i) {
    return (s.beta[b].turn(i, i) + vtilde_at(X, y, s.beta[b].perm[i])).mod1();
  };

  sd.id1_exact = true;
  for (int X : sd.g2)
    for (int Y : sd.g2)
      for (int z : sd.g1)
        for (int i = 0; i < d && sd.id1_exact; ++i) {
          Rational lhs = vtilde_at(g.add(X, Y), z, i);
          Rational rhs = (beta_diag(X, Y, z, i) + vtilde_at(X, z, i)).mod1();
          if (lhs != rhs) {
            sd.id1_exact = false;
            sd.witness = "vtilde identity 1 fails at (X,Y,z)=(" + std::to_string(X) + "," +
                         std::to_string(Y) + "," + std::to_string(z) + ")";
          }
        }
  sd.id2_exact = true;
  for (int X : sd.g2)
    for (int y : sd.g1)
      for (int z : sd.g1)
        for (int i = 0; i < d && sd.id2_exact; ++i) {
          Rational lhs = vtilde_at(X, g.add(y, z), i);
          Rational rhs = (-(Rational(3) * s.phi->at3(X, y, z)) + vtilde_at(X, y, i) +
                          beta_diag(y, X, z, i))
                             .mod1();
          if (lhs != rhs) {
            sd.id2_exact = false;
            sd.witness = "vtilde identity 2 fails at (X,y,z)=(" + std::to_string(X) + "," +
                         std::to_string(y) + "," + std::to_string(z) + ")";
          }
        }

  // --- varphi and the hat system --------------------------------------
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        sd.varphi.set((static_cast<long long>(x) * n + y) * n + z,
                      (Rational(3) * s.phi->at3(g2_part(g, cut, x), g1_part(g, cut, y),
                                                g1_part(g, cut, z)))
                          .mod1());

  sd.hat.grp = g;
  sd.hat.alg = s.alg;
  auto varphi_ptr = std::make_shared<PhaseCochain>(sd.varphi);
  sd.hat.phi = varphi_ptr;
  sd.hat.tab = make_phase_table(*varphi_ptr, +1);
  sd.hat.beta.reserve(n);
  for (int b = 0; b < n; ++b)
    sd.hat.beta.push_back(
        compose(*s.alg, s.beta[g1_part(g, cut, b)], s.beta[g2_part(g, cut, b)]));
  sd.hat.v.assign(static_cast<size_t>(n) * n, s.alg->zero());
  std::vector<std::vector<Rational>> hvt(static_cast<size_t>(n) * n,
                                         std::vector<Rational>(d, Rational(0)));
  for (int a = 0; a < n; ++a) {
    int x = g1_part(g, cut, a), X = g2_part(g, cut, a);
    for (int b = 0; b < n; ++b) {
      int y = g1_part(g, cut, b);
      std::vector<Rational> turns(d);
      std::vector<cplx> diag(d);
      for (int i = 0; i < d; ++i) {
        // beta_x applied to the diagonal vtilde(X,y)
        turns[i] = (s.beta[x].turn(i, i) + vtilde_at(X, y, s.beta[x].perm[i])).mod1();
        diag[i] = phase(turns[i]);
      }
      sd.hat.vat(a, b) = cmat_diag(diag);
      hvt[static_cast<size_t>(a) * n + b] = std::move(turns);
    }
  }
  sd.hat.v_turns = std::move(hvt);

  ValidationReport vr = validate_system(sd.hat);
  sd.varphi_exact = vr.ok;
  sd.hat_defect = vr.defect;
  if (!vr.ok) {
    sd.witness = "hat system fails validation: " + vr.witness;
    return sd;
  }
  sd.ok = sd.id1_exact && sd.id2_exact;
  return sd;
}

std::vector<CMat> beta_tilde(const SplitData& sd, const TwistedSystem& gauged, int X,
                             const std::vector<CMat>& slice) {
  const auto& g = gauged.grp;
  int n1 = static_cast<int>(sd.g1.size());
  std::vector<int> pos1(g.size(), -1), pos2(g.size(), -1);
  for (int i = 0; i < n1; ++i) pos1[sd.g1[i]] = i;
  for (size_t i = 0; i < sd.g2.size(); ++i) pos2[sd.g2[i]] = static_cast<int>(i);
  std::vector<CMat> out(n1, gauged.alg->zero());
  for (int yi = 0; yi < n1; ++yi) {
    CMat b = gauged.beta[X].apply(*gauged.alg, slice[yi]);
    const auto& vt = sd.vtilde[static_cast<size_t>(pos2[X]) * n1 + yi];
    for (int i = 0; i < b.d; ++i)
      for (int j = 0; j < b.d; ++j) b.at(i, j) *= phase(vt[j]);
    out[yi] = std::move(b);
  }
  return out;
}

double repeated_convolve_defect(const SplitData& sd, const TwistedSystem& gauged,
                                const CrossedElement& f, const CrossedElement& g) {
  const auto& grp = gauged.grp;
  int n1 = static_cast<int>(sd.g1.size());
  CrossedElement direct = convolve(f, g, sd.hat);

  std::vector<int> pos1(grp.size(), -1);
  for (int i = 0; i < n1; ++i) pos1[sd.g1[i]] = i;
  auto slice = [&](const CrossedElement& h, int CAP) {
    std::vector<CMat> out(n1, gauged.alg->zero());
    for (int i = 0; i < n1; ++i) out[i] = h.f[grp.add(sd.g1[i], CAP)];
    return out;
  };
  double worst = 0.0;
  for (int X : sd.g2) {
    std::vector<CMat> acc(n1, gauged.alg->zero());
    for (int Y : sd.g2) {
      auto fY = slice(f, Y);
      auto gS = slice(g, grp.sub(X, Y));
      auto bt = beta_tilde(sd, gauged, Y, gS);
      // ordinary G1 convolution with the hat action (v-hat is trivial there)
      for (int xi = 0; xi < n1; ++xi) {
        int x = sd.g1[xi];
        for (int yi = 0; yi < n1; ++yi) {
          int y = sd.g1[yi];
          int x2 = grp.sub(x, y);
          if (pos1[x2] < 0) continue;
          CMat b = sd.hat.beta[y].apply(*gauged.alg, bt[pos1[x2]]);
          gauged.alg->mul_acc(acc[xi], fY[yi], b);
        }
      }
    }
    for (int xi = 0; xi < n1; ++xi)
      worst = std::max(worst, max_abs_diff(acc[xi], direct.f[grp.add(sd.g1[xi], X)]));
  }
  return worst;
}

double multiplier_shift_defect(const SplitData& sd, const TwistedSystem& gauged,
                               const PhaseCochain& sigma_g1, Rng& rng, int trials) {
  const auto& grp = gauged.grp;
  int n1 = static_cast<int>(sd.g1.size());
  std::vector<int> pos1(grp.size(), -1);
  for (int i = 0; i < n1; ++i) pos1[sd.g1[i]] = i;
  auto convs = [&](const std::vector<CMat>& a, const std::vector<CMat>& b, int Xextra) {
    // sigma-twisted G1 convolution, optionally with the varphi(X,.,.) factor
    std::vector<CMat> out(n1, gauged.alg->zero());
    for (int xi = 0; xi < n1; ++xi) {
      int x = sd.g1[xi];
      for (int yi = 0; yi < n1; ++yi) {
        int y = sd.g1[yi];
        int x2 = grp.sub(x, y);
        if (pos1[x2] < 0) continue;
        cplx w = phase(sigma_g1.at2(y, x2));
        if (Xextra >= 0) w *= phase(sd.varphi.at3(Xextra, y, x2));
        CMat t = gauged.beta[y].apply(*gauged.alg, b[pos1[x2]]);
        gauged.alg->mul_acc(out[xi], a[yi], t, w);
      }
    }
    return out;
  };
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<CMat> f(n1), g(n1);
    for (auto& m : f) m = random_cmat(gauged.alg->dim(), rng);
    for (auto& m : g) m = random_cmat(gauged.alg->dim(), rng);
    for (int X : sd.g2) {
      auto lhs = convs(beta_tilde(sd, gauged, X, f), beta_tilde(sd, gauged, X, g), -1);
      auto rhs = beta_tilde(sd, gauged, X, convs(f, g, X));
      for (int i = 0; i < n1; ++i) worst = std::max(worst, max_abs_diff(lhs[i], rhs[i]));
    }
  }
  return worst;
}

double stabilized_multiplicativity_defect(const SplitData& sd, const TwistedSystem& gauged,
                                          Rng& rng, int trials) {
  const auto& grp = gauged.grp;
  int n1 = static_cast<int>(sd.g1.size());
  int n2 = static_cast<int>(sd.g2.size());
  int d = gauged.alg->dim();
  std::vector<int> pos1(grp.size(), -1), pos2(grp.size(), -1);
  for (int i = 0; i < n1; ++i) pos1[sd.g1[i]] = i;
  for (int i = 0; i < n2; ++i) pos2[sd.g2[i]] = i;
  // elements of the varphi_bullet-twisted product: [y in G1][Z in G2] -> CMat
  auto idx = [&](int yi, int Zi) { return static_cast<size_t>(yi) * n2 + Zi; };
  auto convpb = [&](const std::vector<CMat>& a, const std::vector<CMat>& b) {
    std::vector<CMat> out(static_cast<size_t>(n1) * n2, gauged.alg->zero());
    for (int xi = 0; xi < n1; ++xi) {
      int x = sd.g1[xi];
      for (int Zi = 0; Zi < n2; ++Zi) {
        int Z = sd.g2[Zi];
        for (int yi = 0; yi < n1; ++yi) {
          int y = sd.g1[yi];
          int x2 = grp.sub(x, y);
          if (pos1[x2] < 0) continue;
          cplx w = phase(sd.varphi.at3(Z, y, x2));
          CMat t = gauged.beta[y].apply(*gauged.alg, b[idx(pos1[x2], Zi)]);
          gauged.alg->mul_acc(out[idx(xi, Zi)], a[idx(yi, Zi)], t, w);
        }
      }
    }
    return out;
  };
  auto bt = [&](int X, const std::vector<CMat>& a) {
    std::vector<CMat> out(static_cast<size_t>(n1) * n2, gauged.alg->zero());
    for (int yi = 0; yi < n1; ++yi) {
      const auto& vt = sd.vtilde[static_cast<size_t>(pos2[X]) * n1 + yi];
      for (int Zi = 0; Zi < n2; ++Zi) {
        int Zshift = pos2[grp.add(sd.g2[Zi], X)];
        CMat m = gauged.beta[X].apply(*gauged.alg, a[idx(yi, Zshift)]);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) m.at(i, j) *= phase(vt[j]);
        out[idx(yi, Zi)] = std::move(m);
      }
    }
    return out;
  };
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::vector<CMat> F(static_cast<size_t>(n1) * n2), G(static_cast<size_t>(n1) * n2);
    for (auto& m : F) m = random_cmat(d, rng);
    for (auto& m : G) m = random_cmat(d, rng);
    for (int X : sd.g2) {
      auto lhs = convpb(bt(X, F), bt(X, G));
      auto rhs = bt(X, convpb(F, G));
      for (size_t i = 0; i < lhs.size(); ++i) worst = std::max(worst, max_abs_diff(lhs[i], rhs[i]));
    }
  }
  return worst;
}

}  // namespace twisted
