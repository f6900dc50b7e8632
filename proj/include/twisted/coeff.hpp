#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "twisted/cochain.hpp"
#include "twisted/group.hpp"
#include "twisted/rng.hpp"

namespace twisted {

using cplx = std::complex<double>;

/// Square complex matrix value of a coefficient algebra (d = 1 for scalars).
struct CMat {
  int d = 0;
  std::vector<cplx> a;  // row-major d*d

  cplx& at(int i, int j) { return a[static_cast<size_t>(i) * d + j]; }
  const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * d + j]; }
};

CMat cmat_zero(int d);
CMat cmat_id(int d);
CMat cmat_diag(const std::vector<cplx>& diag);
CMat adjoint(const CMat& m);
CMat operator+(const CMat& a, const CMat& b);
CMat operator-(const CMat& a, const CMat& b);
CMat operator*(const cplx& s, const CMat& m);
void add_scaled(CMat& into, const CMat& m, const cplx& s);
double max_abs(const CMat& m);
double max_abs_diff(const CMat& a, const CMat& b);
CMat random_cmat(int d, Rng& rng);          // entries uniform in [-1,1]^2
CMat random_diag_unitary(int d, Rng& rng);  // diag of unit phases

/// Coefficient *-algebra: scalars, d x d matrices, or a twisted matrix
/// algebra whose product carries a phase weight indexed by kernel points
/// (twisted kernels as coefficient values). The weight acts on the kernel
/// part of the index; an `extra` tensor factor M_extra sits inside each
/// point, so dim = |G| * extra.
class CoeffAlgebra {
 public:
  static std::shared_ptr<const CoeffAlgebra> scalars();
  static std::shared_ptr<const CoeffAlgebra> matrices(int d);
  /// Weight W(i,j,k) = exp(2 pi i * sgn * phi(pt_i - pt_j, pt_j - pt_k, pt_k)).
  static std::shared_ptr<const CoeffAlgebra> twisted_kernels(
      const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi, int sgn,
      int extra = 1);

  int dim() const { return dim_; }
  bool twisted() const { return !wre_.empty(); }
  int extra() const { return extra_; }
  const FiniteAbelianGroup& kernel_group() const { return grp_; }
  const std::shared_ptr<const PhaseCochain>& twist_cochain() const { return phi_; }
  int twist_sign() const { return sgn_; }

  /// Per-(i,j) weight-row pointers for the batched product kernels (rows are
  /// deduplicated, so tricharacter weights stay cache-resident); nullptr for
  /// plain algebras.
  const double* const* wrow_re() const { return wrowre_.empty() ? nullptr : wrowre_.data(); }
  const double* const* wrow_im() const { return wrowim_.empty() ? nullptr : wrowim_.data(); }

  cplx weight(int i, int j, int k) const {
    if (wre_.empty()) return {1.0, 0.0};
    size_t f = (static_cast<size_t>(point_[i]) * npt_ + point_[j]) * npt_ + point_[k];
    return {wre_[f], wim_[f]};
  }

  /// out = scale * (x [*] y), the algebra product (twisted when applicable).
  void mul(CMat& out, const CMat& x, const CMat& y, cplx scale = {1.0, 0.0}) const;
  /// out += scale * (x [*] y).
  void mul_acc(CMat& out, const CMat& x, const CMat& y, cplx scale = {1.0, 0.0}) const;
  CMat star(const CMat& x, const CMat& y) const {
    CMat out = cmat_zero(dim_);
    mul_acc(out, x, y);
    return out;
  }

  CMat id() const { return cmat_id(dim_); }
  CMat zero() const { return cmat_zero(dim_); }

 private:
  int dim_ = 1;
  int extra_ = 1;
  int npt_ = 0;
  FiniteAbelianGroup grp_;
  std::shared_ptr<const PhaseCochain> phi_;
  int sgn_ = 0;
  std::vector<int> point_;        // dim -> kernel point
  std::vector<double> wre_, wim_;  // npt^3 split weight table (empty = plain)
  std::vector<double> rowstore_re_, rowstore_im_;   // deduplicated rows, length dim each
  std::vector<const double*> wrowre_, wrowim_;      // dim^2 row pointers
};

/// Batched split-complex product: out += s * (x [w] y) with d x d blocks laid
/// out as separate re/im arrays; weight rows via d*d pointer tables (nullptr
/// = plain product).
void wgemm_acc_split(int d, const double* xr, const double* xi, const double* yr,
                     const double* yi, const double* const* wrre, const double* const* wrim,
                     cplx s, double* outr, double* outi);

void split_cmat(const CMat& m, double* re, double* im);
void unsplit_cmat(CMat& m, const double* re, const double* im);

}  // namespace twisted
