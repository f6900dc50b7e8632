#pragma once

#include "twisted/crossed.hpp"

namespace twisted {

/// B-valued function on G x Ghat; f[x * n + xi] with the dual group
/// identified with G through the standard pairing.
struct DoubleElement {
  FiniteAbelianGroup grp;
  std::shared_ptr<const CoeffAlgebra> alg;
  std::vector<CMat> f;

  const CMat& at(int x, int xi) const { return f[static_cast<size_t>(x) * grp.size() + xi]; }
  CMat& at(int x, int xi) { return f[static_cast<size_t>(x) * grp.size() + xi]; }
};

DoubleElement zero_double(const TwistedSystem& s);
DoubleElement random_double(const TwistedSystem& s, Rng& rng);
double max_abs_diff(const DoubleElement& a, const DoubleElement& b);

/// (F*G)(x,xi) = (1/|Ghat|) sum_{y,eta} eta(y^{-1}x) F(y,eta) ⋆
/// beta_y[G(y^{-1}x, eta^{-1}xi)] ⋆ v(y, y^{-1}x); computed through the dual
/// convolution theorem (exact to roundoff, one block product per (y, x', chi)).
DoubleElement double_convolve(const DoubleElement& F, const DoubleElement& G,
                              const TwistedSystem& s);

/// khat(w,z) = beta_{-w}[Fhat(w-z, z)] ⋆ v(-w, w-z), Fhat the normalized
/// Fourier transform in the dual slot; k(w,u) = khat(w,u) phi(-w, w-u, u).
/// Under this project's conventions the transform intertwines the double
/// convolution with the +phi-weighted kernel product (see certify_takai).
TwistedKernel takai_kernel(const DoubleElement& F, const TwistedSystem& s);

/// F(x,xi) -> xi(y) F(x,xi): the plain double-dual action upstairs.
DoubleElement dual_translate(const DoubleElement& F, int y);

/// (bbeta_y k)(w,z) = phi(w-z,z,y) V_y(w)* ⋆ beta_y[k(w+y,z+y)] ⋆ V_y(z) with
/// V_y(z) = [phi(y,-z,z) - phi(y-z,z-y,y)]-phase * v(y,-z).
TwistedKernel double_dual_action(int y, const TwistedKernel& k, const TwistedSystem& s);

struct CertifyReport {
  bool pass = false;
  double worst = 0.0;
  int trials = 0;
  std::string witness;
};

/// Runs `trials` random pairs (F,G) and compares
/// takai_kernel(F*G) against kprod_inv(takai_kernel F, takai_kernel G).
CertifyReport certify_takai(const TwistedSystem& s, int trials, double tol, Rng& rng);

/// Same loop for the double-dual clause: formula vs transported action,
/// across all y, random F.
CertifyReport certify_double_dual(const TwistedSystem& s, int trials, double tol, Rng& rng);

struct SplitData {
  bool ok = false;
  std::string witness;          // hypothesis violation or identity failure
  int cut = 0;
  std::vector<int> g1, g2;      // embedded subgroup element lists
  TwistedSystem hat;            // (beta-hat, v-hat) with obstruction varphi
  PhaseCochain varphi;          // 3 phi(X,y,z) as a cochain on G
  // vtilde(X,y) diagonal turn vectors, indexed [pos2(X) * |g1| + pos1(y)]
  std::vector<std::vector<Rational>> vtilde;
  bool id1_exact = false;       // vtilde(X+Y,z) = beta_X[vtilde(Y,z)] vtilde(X,z)
  bool id2_exact = false;       // vtilde(X,y+z) = phi(X,y,z)^{-3} vtilde(X,y) beta_y[vtilde(X,z)]
  bool varphi_exact = false;    // vhat identity carries obstruction varphi (validator)
  double hat_defect = 0.0;
};

/// Splits a twisted action along G = G1 x G2 (cut = number of G1
/// coordinates) into an exterior-equivalent product form. Preconditions (phi trivial on G1^3 and when two
/// arguments lie in G2; v trivial on both subgroups) are checked exactly and
/// reported. The identity checks run in exact turn arithmetic.
SplitData split_system(const TwistedSystem& s, int cut);

/// Slice formula (f*g)_X = sum_Y f_Y *_1 beta-tilde_Y[g_{Y^{-1}X}] evaluated
/// against the direct hat-system convolution; returns the max-abs gap.
double repeated_convolve_defect(const SplitData& sd, const TwistedSystem& gauged,
                                const CrossedElement& f, const CrossedElement& g);

/// beta-tilde_X[f](y) = beta_X[f(y)] ⋆ vtilde(X,y) on G1-supported slices.
std::vector<CMat> beta_tilde(const SplitData& sd, const TwistedSystem& gauged, int X,
                             const std::vector<CMat>& slice);

/// Multiplier-shift law: btX[f] *_sigma btX[g] = btX[f *_{varphi_X sigma} g]
/// for a scalar 2-cochain sigma on G1; max-abs defect over random data.
double multiplier_shift_defect(const SplitData& sd, const TwistedSystem& gauged,
                               const PhaseCochain& sigma_g1, Rng& rng, int trials);

/// Stabilized-split multiplicativity: with the C(G2)-valued multiplier
/// varphi_bullet, beta-tilde becomes multiplicative for the twisted product.
double stabilized_multiplicativity_defect(const SplitData& sd, const TwistedSystem& gauged,
                                          Rng& rng, int trials);

}  // namespace twisted
