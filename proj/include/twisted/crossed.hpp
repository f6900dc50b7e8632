#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twisted/kernel.hpp"

namespace twisted {

/// Generalized permutation matrix: W[i, src[i]] = val[i], one entry per row
/// and column. All conjugating unitaries arising in this project's systems
/// (diagonal gauges, regular-representation shifts, stabilization operators)
/// have this shape, which keeps conjugation of sparse values cheap.
struct Monomial {
  std::vector<int> src;
  std::vector<cplx> val;
  CMat dense() const;
};

/// *-automorphism of a coefficient algebra in the normal form
///   a -> W ⋆ PS(a) ⋆ W*,  PS(a)[i,j] = phase(i,j) · a[perm[i], perm[j]],
/// where W is optional (monomial fast path or dense) and phases are exact
/// turns. Phase-shift maps of this kind compose exactly.
struct Automorphism {
  std::vector<int> perm;             // PS source index per target index
  std::vector<Rational> phase;       // dim*dim turns; empty = all zero
  std::optional<Monomial> w_mono;
  std::optional<CMat> w_dense;
  // complex phases, built on first apply (mutable cache of `phase`)
  mutable std::shared_ptr<const std::vector<cplx>> phase_c;

  int dim() const { return static_cast<int>(perm.size()); }
  bool pure_shift() const { return !w_mono && !w_dense; }
  const Rational& turn(int i, int j) const;
  CMat apply(const CoeffAlgebra& alg, const CMat& a) const;
  static Automorphism identity(int dim);
};

/// f then g... composition f∘g (apply g first is false: this is (f.g)[a] = f[g[a]]).
Automorphism compose(const CoeffAlgebra& alg, const Automorphism& f, const Automorphism& g);

/// Twisted action (beta, v) on a coefficient algebra with declared degree-3
/// obstruction phi (the convention with phi multiplying the v(x,y+z) side).
struct TwistedSystem {
  FiniteAbelianGroup grp;
  std::shared_ptr<const CoeffAlgebra> alg;
  std::vector<Automorphism> beta;  // per element
  std::vector<CMat> v;             // n*n
  std::shared_ptr<const PhaseCochain> phi;
  std::shared_ptr<const PhaseTable3> tab;  // +phi phases
  int canonical_sign = 0;                  // recorded exponent sign, 0 = n/a
  // exact diagonal turns of v when all values are phase diagonals
  std::optional<std::vector<std::vector<Rational>>> v_turns;

  const CMat& vat(int x, int y) const { return v[static_cast<size_t>(x) * grp.size() + y]; }
  CMat& vat(int x, int y) { return v[static_cast<size_t>(x) * grp.size() + y]; }
};

struct ValidationReport {
  bool ok = false;
  double defect = 0.0;
  std::string witness;
};

/// Checks v-normalization, beta_x beta_y = ad(v(x,y)) beta_{x+y} on the
/// matrix-unit spanning set, and the deformed cocycle identity
/// v(x,y) v(x+y,z) = phi(x,y,z) beta_x[v(y,z)] v(x,y+z) over all triples.
ValidationReport validate_system(const TwistedSystem& s, double tol = 1e-10);

TwistedSystem trivial_system(const FiniteAbelianGroup& g,
                             std::shared_ptr<const CoeffAlgebra> alg);

/// beta = id, v(x,y) = exp(2 pi i c(x,y)) I; obstruction = coboundary(c).
TwistedSystem scalar_system(const FiniteAbelianGroup& g, const PhaseCochain& c,
                            std::shared_ptr<const CoeffAlgebra> alg);

/// Twisted-kernel realization on the |G| x |G| (x extra) matrix algebra:
/// beta are phase-shift maps, v(x,y) the diagonal z -> phi(x,y,z)^s, with the
/// exponent sign s in {-1,+1} chosen so the validator passes for the declared
/// phi; the choice lands in canonical_sign. Throws when neither sign
/// validates (not expected for antisymmetric tricharacters or coboundaries
/// of scalar cochains).
TwistedSystem build_canonical_system(const FiniteAbelianGroup& g,
                                     std::shared_ptr<const PhaseCochain> phi, int extra = 1);

/// (beta, c·v): rescaling by a scalar 2-cochain shifts the obstruction to
/// phi + coboundary(c).
TwistedSystem rescale_v(const TwistedSystem& s, const PhaseCochain& c);

struct CrossedElement {
  FiniteAbelianGroup grp;
  std::shared_ptr<const CoeffAlgebra> alg;
  std::vector<CMat> f;
};

CrossedElement zero_element(const TwistedSystem& s);
CrossedElement delta_element(const TwistedSystem& s, int x, const CMat& a);
CrossedElement random_element(const TwistedSystem& s, Rng& rng);
double max_abs_diff(const CrossedElement& a, const CrossedElement& b);
double max_abs(const CrossedElement& a);

/// (f * g)(x) = sum_y f(y) ⋆ beta_y[g(y^{-1}x)] ⋆ v(y, y^{-1}x); products are
/// taken left to right (immaterial whenever v is diagonal).
CrossedElement convolve(const CrossedElement& f, const CrossedElement& g,
                        const TwistedSystem& s);

/// f*(x) = v(x,-x)^{-1} ⋆ (beta_x[f(-x)])^*.
CrossedElement crossed_adjoint(const CrossedElement& f, const TwistedSystem& s);

/// f_w(x) = f(x) ⋆ w_x.
CrossedElement exterior_transport(const CrossedElement& f, const std::vector<CMat>& w,
                                  const TwistedSystem& s);

/// The exterior-equivalent system (alpha, u) with alpha_x = ad(w_x*) beta_x
/// and u(x,y) = alpha_x[w_y]* ⋆ w_x* ⋆ v(x,y) ⋆ w_{x+y}; same obstruction.
TwistedSystem transported_system(const TwistedSystem& s, const std::vector<CMat>& w);

/// Packer-Raeburn stabilization to A (x) M_{|G|}: beta'_x = ad(w_x)(beta_x
/// (x) id) with (w_x a)(z) = v(x, z-x) a(z-x), and v'(x,y) the central
/// diagonal z -> phi(x,y, z-x-y). Same obstruction phi.
TwistedSystem packer_raeburn_stabilize(const TwistedSystem& s);
/// The same system with the original action and v (x) 1 (the transport
/// partner of the stabilized system under w).
TwistedSystem tensor_stabilized_identity(const TwistedSystem& s);
std::vector<CMat> packer_raeburn_w(const TwistedSystem& s);

/// Gauges v to the identity on the subgroups G1 (first `cut` coordinates)
/// and G2 (rest) by an exact diagonal exterior equivalence (the turns solve a
/// coboundary system over Z_M). Requires exact diagonal v data.
TwistedSystem subgroup_trivialize(const TwistedSystem& s, int cut);

// subgroup helpers for a split at coordinate `cut`
int g1_part(const FiniteAbelianGroup& g, int cut, int i);
int g2_part(const FiniteAbelianGroup& g, int cut, int i);
std::vector<int> g1_list(const FiniteAbelianGroup& g, int cut);
std::vector<int> g2_list(const FiniteAbelianGroup& g, int cut);

}  // namespace twisted
