#include "twisted/kernel.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twisted {

namespace {

void check_compatible(const TwistedKernel& a, const TwistedKernel& b, const char* who) {
  if (!(a.grp == b.grp)) throw std::invalid_argument(std::string(who) + ": group mismatch");
  if (!(*a.phi == *b.phi)) throw std::invalid_argument(std::string(who) + ": cocycle mismatch");
  if (a.alg->dim() != b.alg->dim())
    throw std::invalid_argument(std::string(who) + ": coefficient shape mismatch");
}

void require_tricharacter(const PhaseCochain& phi, const char* who) {
  if (!is_tricharacter(phi))
    throw std::invalid_argument(std::string(who) + ": antisymmetric tricharacter required");
}

}  // namespace

TwistedKernel make_kernel(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                          std::shared_ptr<const CoeffAlgebra> alg) {
  if (phi->degree() != 3 || !(phi->group() == g))
    throw std::invalid_argument("make_kernel: degree-3 cochain on the kernel group");
  TwistedKernel k;
  k.grp = g;
  k.phi = std::move(phi);
  k.tab = make_phase_table(*k.phi, +1);
  k.alg = std::move(alg);
  k.e.assign(static_cast<size_t>(g.size()) * g.size(), k.alg->zero());
  return k;
}

TwistedKernel delta_kernel(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                           std::shared_ptr<const CoeffAlgebra> alg, int a, int b) {
  TwistedKernel k = make_kernel(g, std::move(phi), std::move(alg));
  k.at(a, b) = k.alg->id();
  return k;
}

TwistedKernel identity_kernel(const FiniteAbelianGroup& g,
                              std::shared_ptr<const PhaseCochain> phi,
                              std::shared_ptr<const CoeffAlgebra> alg) {
  TwistedKernel k = make_kernel(g, std::move(phi), std::move(alg));
  for (int x = 0; x < g.size(); ++x) k.at(x, x) = k.alg->id();
  return k;
}

TwistedKernel random_kernel(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                            std::shared_ptr<const CoeffAlgebra> alg, Rng& rng) {
  TwistedKernel k = make_kernel(g, std::move(phi), std::move(alg));
  for (auto& m : k.e) m = random_cmat(k.alg->dim(), rng);
  return k;
}

namespace {

TwistedKernel kprod_impl(const TwistedKernel& k1, const TwistedKernel& k2, bool invert) {
  check_compatible(k1, k2, invert ? "kprod_inv" : "kprod");
  const auto& g = k1.grp;
  int n = g.size();
  TwistedKernel out = make_kernel(g, k1.phi, k1.alg);
  const auto& alg = *k1.alg;
  int d = alg.dim();
  // split the operands once and accumulate split; convert at the end
  size_t blk = static_cast<size_t>(d) * d;
  std::vector<double> ar(static_cast<size_t>(n) * n * blk), ai(ar.size());
  std::vector<double> br(ar.size()), bi(ar.size());
  std::vector<double> outr(ar.size(), 0.0), outi(ar.size(), 0.0);
  for (size_t e = 0; e < k1.e.size(); ++e) {
    split_cmat(k1.e[e], ar.data() + e * blk, ai.data() + e * blk);
    split_cmat(k2.e[e], br.data() + e * blk, bi.data() + e * blk);
  }
  const double* const* wrre = alg.wrow_re();
  const double* const* wrim = alg.wrow_im();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      size_t exy = static_cast<size_t>(x) * n + y;
      if (max_abs(k1.e[exy]) == 0.0) continue;
      int xy = g.sub(x, y);
      for (int z = 0; z < n; ++z) {
        cplx w = k1.tab->at(xy, g.sub(y, z), z);
        if (invert) w = std::conj(w);
        size_t eyz = static_cast<size_t>(y) * n + z;
        size_t exz = static_cast<size_t>(x) * n + z;
        wgemm_acc_split(d, ar.data() + exy * blk, ai.data() + exy * blk, br.data() + eyz * blk,
                        bi.data() + eyz * blk, wrre, wrim, w, outr.data() + exz * blk,
                        outi.data() + exz * blk);
      }
    }
  for (size_t e = 0; e < out.e.size(); ++e)
    unsplit_cmat(out.e[e], outr.data() + e * blk, outi.data() + e * blk);
  return out;
}

}  // namespace

TwistedKernel kprod(const TwistedKernel& k1, const TwistedKernel& k2) {
  return kprod_impl(k1, k2, false);
}

TwistedKernel kprod_inv(const TwistedKernel& k1, const TwistedKernel& k2) {
  return kprod_impl(k1, k2, true);
}

TwistedKernel adjoint(const TwistedKernel& k) {
  TwistedKernel out = make_kernel(k.grp, k.phi, k.alg);
  int n = k.grp.size();
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) out.at(x, z) = adjoint(k.at(z, x));
  return out;
}

double associator_defect(const TwistedKernel& k1, const TwistedKernel& k2,
                         const TwistedKernel& k3) {
  check_compatible(k1, k2, "associator_defect");
  check_compatible(k2, k3, "associator_defect");
  const auto& g = k1.grp;
  int n = g.size();
  TwistedKernel lhs = kprod(kprod(k1, k2), k3);
  // Phi-corrected right bracketing as an explicit triple sum.
  TwistedKernel rhs = make_kernel(g, k1.phi, k1.alg);
  if (k1.alg->dim() == 1) {
    // scalar fast path: raw complex arithmetic over the n^4 sum
    std::vector<cplx> acc(static_cast<size_t>(n) * n, cplx{0, 0});
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        cplx a = k1.at(x, y).a[0];
        if (a.real() == 0.0 && a.imag() == 0.0) continue;
        int xy = g.sub(x, y);
        for (int z = 0; z < n; ++z) {
          cplx t = a * k2.at(y, z).a[0];
          if (t.real() == 0.0 && t.imag() == 0.0) continue;
          int yz = g.sub(y, z);
          for (int w = 0; w < n; ++w) {
            cplx ph = k1.tab->at(xy, yz, g.sub(z, w)) * k1.tab->at(xy, g.sub(y, w), w) *
                      k1.tab->at(yz, g.sub(z, w), w);
            acc[static_cast<size_t>(x) * n + w] += t * k3.at(z, w).a[0] * ph;
          }
        }
      }
    for (int x = 0; x < n; ++x)
      for (int w = 0; w < n; ++w) rhs.at(x, w).a[0] = acc[static_cast<size_t>(x) * n + w];
    return max_abs_diff(lhs, rhs);
  }
  CMat t = k1.alg->zero();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const CMat& a = k1.at(x, y);
      if (max_abs(a) == 0.0) continue;
      int xy = g.sub(x, y);
      for (int z = 0; z < n; ++z) {
        k1.alg->mul(t, a, k2.at(y, z));
        int yz = g.sub(y, z);
        for (int w = 0; w < n; ++w) {
          cplx ph = k1.tab->at(xy, yz, g.sub(z, w)) * k1.tab->at(xy, g.sub(y, w), w) *
                    k1.tab->at(yz, g.sub(z, w), w);
          k1.alg->mul_acc(rhs.at(x, w), t, k3.at(z, w), ph);
        }
      }
    }
  return max_abs_diff(lhs, rhs);
}

TwistedKernel g_action(int x, const TwistedKernel& k) {
  const auto& g = k.grp;
  int n = g.size();
  TwistedKernel out = make_kernel(g, k.phi, k.alg);
  for (int z = 0; z < n; ++z)
    for (int w = 0; w < n; ++w) out.at(z, w) = k.tab->at(x, z, w) * k.at(g.add(z, x), g.add(w, x));
  return out;
}

TwistedKernel rank_one(const HilbertVector& psi0, const HilbertVector& psi1,
                       std::shared_ptr<const PhaseCochain> phi) {
  require_tricharacter(*phi, "rank_one");
  TwistedKernel out = make_kernel(psi0.grp, std::move(phi), psi0.alg);
  int n = psi0.grp.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) out.at(x, y) = psi0.alg->star(psi0.v[x], adjoint(psi1.v[y]));
  return out;
}

HilbertVector apply(const TwistedKernel& k, const HilbertVector& psi) {
  require_tricharacter(*k.phi, "apply");
  int n = k.grp.size();
  HilbertVector out{k.grp, k.alg, std::vector<CMat>(n, k.alg->zero())};
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) k.alg->mul_acc(out.v[x], k.at(x, y), psi.v[y]);
  return out;
}

CMat inner(const HilbertVector& a, const HilbertVector& b) {
  CMat out = a.alg->zero();
  for (size_t y = 0; y < a.v.size(); ++y) a.alg->mul_acc(out, adjoint(a.v[y]), b.v[y]);
  return out;
}

double operator_norm(const TwistedKernel& k) {
  int n = k.grp.size();
  int d = k.alg->dim();
  int N = n * d;
  // flatten to the plain matrix it represents on l2(G) (x) C^d
  std::vector<cplx> m(static_cast<size_t>(N) * N);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          m[static_cast<size_t>(x * d + i) * N + y * d + j] = k.at(x, y).at(i, j);
  auto matvec = [&](const std::vector<cplx>& v, std::vector<cplx>& out, bool adj) {
    out.assign(N, cplx{0, 0});
    if (!adj) {
      for (int i = 0; i < N; ++i) {
        cplx acc{0, 0};
        const cplx* row = m.data() + static_cast<size_t>(i) * N;
        for (int j = 0; j < N; ++j) acc += row[j] * v[j];
        out[i] = acc;
      }
    } else {
      for (int j = 0; j < N; ++j) {
        const cplx vj = v[j];
        const cplx* row = m.data() + static_cast<size_t>(j) * N;
        for (int i = 0; i < N; ++i) out[i] += std::conj(row[i]) * vj;
      }
    }
  };
  Rng rng(0x6f70726e6f6d6bull);
  double best = 0.0;
  std::vector<cplx> v(N), t(N), u(N);
  for (int restart = 0; restart < 2; ++restart) {
    for (auto& x : v) x = rng.cnum();
    double lam = 0.0;
    for (int it = 0; it < 20000; ++it) {
      matvec(v, t, false);
      matvec(t, u, true);
      double nu = 0.0;
      for (const auto& x : u) nu += std::norm(x);
      nu = std::sqrt(nu);
      if (nu == 0.0) break;
      for (int i = 0; i < N; ++i) v[i] = u[i] / nu;
      if (std::abs(nu - lam) <= 1e-9 * std::max(1.0, nu) && it > 2) {
        lam = nu;
        break;
      }
      lam = nu;
    }
    best = std::max(best, std::sqrt(lam));
  }
  return best;
}

double max_abs(const TwistedKernel& k) {
  double w = 0.0;
  for (const auto& m : k.e) w = std::max(w, max_abs(m));
  return w;
}

double max_abs_diff(const TwistedKernel& a, const TwistedKernel& b) {
  double w = 0.0;
  for (size_t i = 0; i < a.e.size(); ++i) w = std::max(w, max_abs_diff(a.e[i], b.e[i]));
  return w;
}

std::string kernel_to_json(const TwistedKernel& k) {
  std::ostringstream os;
  os << "[";
  int n = k.grp.size();
  bool first = true;
  for (int x = 0; x < n; ++x)
    for (int z = 0; z < n; ++z) {
      const CMat& m = k.at(x, z);
      if (max_abs(m) == 0.0) continue;
      if (!first) os << ",";
      first = false;
      os << "{\"x\":" << x << ",\"z\":" << z;
      if (k.alg->dim() == 1) {
        os << ",\"re\":" << m.a[0].real() << ",\"im\":" << m.a[0].imag() << "}";
      } else {
        os << ",\"block\":[";
        for (size_t i = 0; i < m.a.size(); ++i)
          os << (i ? "," : "") << "[" << m.a[i].real() << "," << m.a[i].imag() << "]";
        os << "]}";
      }
    }
  os << "]";
  return os.str();
}

}  // namespace twisted
