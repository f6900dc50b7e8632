#include "twisted/coeff.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace twisted {

CMat cmat_zero(int d) {
  CMat m;
  m.d = d;
  m.a.assign(static_cast<size_t>(d) * d, cplx{0.0, 0.0});
  return m;
}

CMat cmat_id(int d) {
  CMat m = cmat_zero(d);
  for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
  return m;
}

CMat cmat_diag(const std::vector<cplx>& diag) {
  CMat m = cmat_zero(static_cast<int>(diag.size()));
  for (size_t i = 0; i < diag.size(); ++i) m.a[i * diag.size() + i] = diag[i];
  return m;
}

CMat adjoint(const CMat& m) {
  CMat out = cmat_zero(m.d);
  for (int i = 0; i < m.d; ++i)
    for (int j = 0; j < m.d; ++j) out.at(i, j) = std::conj(m.at(j, i));
  return out;
}

CMat operator+(const CMat& a, const CMat& b) {
  CMat out = a;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] += b.a[i];
  return out;
}

CMat operator-(const CMat& a, const CMat& b) {
  CMat out = a;
  for (size_t i = 0; i < out.a.size(); ++i) out.a[i] -= b.a[i];
  return out;
}

CMat operator*(const cplx& s, const CMat& m) {
  CMat out = m;
  for (auto& v : out.a) v *= s;
  return out;
}

void add_scaled(CMat& into, const CMat& m, const cplx& s) {
  for (size_t i = 0; i < into.a.size(); ++i) into.a[i] += s * m.a[i];
}

double max_abs(const CMat& m) {
  double w = 0.0;
  for (const auto& v : m.a) w = std::max(w, std::abs(v));
  return w;
}

double max_abs_diff(const CMat& a, const CMat& b) {
  double w = 0.0;
  for (size_t i = 0; i < a.a.size(); ++i) w = std::max(w, std::abs(a.a[i] - b.a[i]));
  return w;
}

CMat random_cmat(int d, Rng& rng) {
  CMat m = cmat_zero(d);
  for (auto& v : m.a) v = rng.cnum();
  return m;
}

CMat random_diag_unitary(int d, Rng& rng) {
  std::vector<cplx> diag(d);
  for (auto& v : diag) {
    double t = rng.unit();
    v = cplx{std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)};
  }
  return cmat_diag(diag);
}

std::shared_ptr<const CoeffAlgebra> CoeffAlgebra::scalars() { return matrices(1); }

std::shared_ptr<const CoeffAlgebra> CoeffAlgebra::matrices(int d) {
  auto a = std::make_shared<CoeffAlgebra>();
  a->dim_ = d;
  return a;
}

std::shared_ptr<const CoeffAlgebra> CoeffAlgebra::twisted_kernels(
    const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi, int sgn, int extra) {
  if (phi->degree() != 3 || !(phi->group() == g))
    throw std::invalid_argument("twisted_kernels: degree-3 cochain on the same group");
  auto a = std::make_shared<CoeffAlgebra>();
  int n = g.size();
  a->dim_ = n * extra;
  a->extra_ = extra;
  a->npt_ = n;
  a->grp_ = g;
  a->phi_ = phi;
  a->sgn_ = sgn;
  a->point_.resize(a->dim_);
  for (int i = 0; i < a->dim_; ++i) a->point_[i] = i / extra;
  size_t n3 = static_cast<size_t>(n) * n * n;
  a->wre_.resize(n3);
  a->wim_.resize(n3);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r) {
        Rational t = phi->at3(g.sub(p, q), g.sub(q, r), r);
        cplx w = phase(sgn > 0 ? t : -t);
        size_t f = (static_cast<size_t>(p) * n + q) * n + r;
        a->wre_[f] = w.real();
        a->wim_[f] = w.imag();
      }
  // dedupe weight rows: the row over the last index is a character for
  // tricharacter twists, so only a handful of distinct rows exist
  {
    std::map<std::vector<long long>, int> seen;
    std::vector<int> rowid(static_cast<size_t>(n) * n);
    std::vector<std::vector<long long>> keys;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        std::vector<long long> key;
        key.reserve(2 * n);
        for (int r = 0; r < n; ++r) {
          Rational t = phi->at3(g.sub(p, q), g.sub(q, r), r);
          if (sgn < 0) t = (-t).mod1();
          key.push_back(t.num());
          key.push_back(t.den());
        }
        auto [it, fresh] = seen.emplace(std::move(key), static_cast<int>(seen.size()));
        rowid[static_cast<size_t>(p) * n + q] = it->second;
        (void)fresh;
      }
    int nrows = static_cast<int>(seen.size());
    a->rowstore_re_.resize(static_cast<size_t>(nrows) * a->dim_);
    a->rowstore_im_.resize(a->rowstore_re_.size());
    for (const auto& [key, id] : seen)
      for (int k = 0; k < a->dim_; ++k) {
        Rational t(key[2 * a->point_[k]], key[2 * a->point_[k] + 1]);
        cplx w = phase(t);
        a->rowstore_re_[static_cast<size_t>(id) * a->dim_ + k] = w.real();
        a->rowstore_im_[static_cast<size_t>(id) * a->dim_ + k] = w.imag();
      }
    a->wrowre_.resize(static_cast<size_t>(a->dim_) * a->dim_);
    a->wrowim_.resize(a->wrowre_.size());
    for (int i = 0; i < a->dim_; ++i)
      for (int j = 0; j < a->dim_; ++j) {
        int id = rowid[static_cast<size_t>(a->point_[i]) * n + a->point_[j]];
        a->wrowre_[static_cast<size_t>(i) * a->dim_ + j] =
            a->rowstore_re_.data() + static_cast<size_t>(id) * a->dim_;
        a->wrowim_[static_cast<size_t>(i) * a->dim_ + j] =
            a->rowstore_im_.data() + static_cast<size_t>(id) * a->dim_;
      }
  }
  return a;
}

void split_cmat(const CMat& m, double* re, double* im) {
  size_t n = m.a.size();
  for (size_t i = 0; i < n; ++i) {
    re[i] = m.a[i].real();
    im[i] = m.a[i].imag();
  }
}

void unsplit_cmat(CMat& m, const double* re, const double* im) {
  size_t n = m.a.size();
  for (size_t i = 0; i < n; ++i) m.a[i] = cplx{re[i], im[i]};
}

void wgemm_acc_split(int d, const double* xr, const double* xi, const double* yr,
                     const double* yi, const double* const* wrre, const double* const* wrim,
                     cplx s, double* outr, double* outi) {
  const double sr = s.real(), si = s.imag();
  for (int i = 0; i < d; ++i) {
    double* __restrict__ orow = outr + static_cast<size_t>(i) * d;
    double* __restrict__ oirow = outi + static_cast<size_t>(i) * d;
    for (int j = 0; j < d; ++j) {
      const double x0r = xr[static_cast<size_t>(i) * d + j];
      const double x0i = xi[static_cast<size_t>(i) * d + j];
      if (x0r == 0.0 && x0i == 0.0) continue;
      const double ar = x0r * sr - x0i * si;
      const double ai = x0r * si + x0i * sr;
      const double* __restrict__ br = yr + static_cast<size_t>(j) * d;
      const double* __restrict__ bi = yi + static_cast<size_t>(j) * d;
      if (!wrre) {
        for (int k = 0; k < d; ++k) {
          orow[k] += ar * br[k] - ai * bi[k];
          oirow[k] += ar * bi[k] + ai * br[k];
        }
      } else {
        const double* __restrict__ cr = wrre[static_cast<size_t>(i) * d + j];
        const double* __restrict__ ci = wrim[static_cast<size_t>(i) * d + j];
        for (int k = 0; k < d; ++k) {
          const double pr = ar * cr[k] - ai * ci[k];
          const double pi = ar * ci[k] + ai * cr[k];
          orow[k] += pr * br[k] - pi * bi[k];
          oirow[k] += pr * bi[k] + pi * br[k];
        }
      }
    }
  }
}

namespace {

// out += s * (x [*] y) with the weight row folded into a pre-scaled copy of
// x's entry, split re/im so the k-loop vectorizes.
void mul_acc_twisted(int d, int extra, int npt, const int* point, const double* wre,
                     const double* wim, const cplx* x, const cplx* y, cplx s, cplx* out) {
  thread_local std::vector<double> scratch;
  scratch.resize(static_cast<size_t>(4) * d);
  double* yr = scratch.data();
  double* yi = yr + d;
  double* or_ = yi + d;
  double* oi = or_ + d;
  for (int i = 0; i < d; ++i) {
    const int pi = point[i];
    cplx* orow = out + static_cast<size_t>(i) * d;
    for (int k = 0; k < d; ++k) {
      or_[k] = 0.0;
      oi[k] = 0.0;
    }
    for (int j = 0; j < d; ++j) {
      cplx xv = x[static_cast<size_t>(i) * d + j] * s;
      if (xv.real() == 0.0 && xv.imag() == 0.0) continue;
      const double xr = xv.real(), xi = xv.imag();
      const double* wrow_r = wre + (static_cast<size_t>(pi) * npt + point[j]) * npt;
      const double* wrow_i = wim + (static_cast<size_t>(pi) * npt + point[j]) * npt;
      const cplx* yrow = y + static_cast<size_t>(j) * d;
      if (extra == 1) {
        for (int k = 0; k < d; ++k) {
          const double ar = xr * wrow_r[k] - xi * wrow_i[k];
          const double ai = xr * wrow_i[k] + xi * wrow_r[k];
          const double br = yrow[k].real(), bi = yrow[k].imag();
          or_[k] += ar * br - ai * bi;
          oi[k] += ar * bi + ai * br;
        }
      } else {
        for (int k = 0; k < d; ++k) {
          const int pk = point[k];
          const double ar = xr * wrow_r[pk] - xi * wrow_i[pk];
          const double ai = xr * wrow_i[pk] + xi * wrow_r[pk];
          const double br = yrow[k].real(), bi = yrow[k].imag();
          or_[k] += ar * br - ai * bi;
          oi[k] += ar * bi + ai * br;
        }
      }
      (void)yr;
      (void)yi;
    }
    for (int k = 0; k < d; ++k) orow[k] += cplx{or_[k], oi[k]};
  }
}

void mul_acc_plain(int d, const cplx* x, const cplx* y, cplx s, cplx* out) {
  thread_local std::vector<double> scratch;
  scratch.resize(static_cast<size_t>(2) * d);
  double* or_ = scratch.data();
  double* oi = or_ + d;
  for (int i = 0; i < d; ++i) {
    cplx* orow = out + static_cast<size_t>(i) * d;
    for (int k = 0; k < d; ++k) {
      or_[k] = 0.0;
      oi[k] = 0.0;
    }
    for (int j = 0; j < d; ++j) {
      cplx xv = x[static_cast<size_t>(i) * d + j] * s;
      if (xv.real() == 0.0 && xv.imag() == 0.0) continue;
      const double xr = xv.real(), xi = xv.imag();
      const cplx* yrow = y + static_cast<size_t>(j) * d;
      for (int k = 0; k < d; ++k) {
        const double br = yrow[k].real(), bi = yrow[k].imag();
        or_[k] += xr * br - xi * bi;
        oi[k] += xr * bi + xi * br;
      }
    }
    for (int k = 0; k < d; ++k) orow[k] += cplx{or_[k], oi[k]};
  }
}

}  // namespace

void CoeffAlgebra::mul_acc(CMat& out, const CMat& x, const CMat& y, cplx scale) const {
  if (x.d != dim_ || y.d != dim_ || out.d != dim_)
    throw std::invalid_argument("coeff mul: shape mismatch");
  if (twisted())
    mul_acc_twisted(dim_, extra_, npt_, point_.data(), wre_.data(), wim_.data(), x.a.data(),
                    y.a.data(), scale, out.a.data());
  else
    mul_acc_plain(dim_, x.a.data(), y.a.data(), scale, out.a.data());
}

void CoeffAlgebra::mul(CMat& out, const CMat& x, const CMat& y, cplx scale) const {
  if (out.d != dim_) out = cmat_zero(dim_);
  std::fill(out.a.begin(), out.a.end(), cplx{0.0, 0.0});
  mul_acc(out, x, y, scale);
}

}  // namespace twisted
