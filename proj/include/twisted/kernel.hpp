#pragma once

#include <memory>
#include <vector>

#include "twisted/coeff.hpp"

namespace twisted {

/// Kernel on G x G with coefficient values in a *-algebra, composed with the
/// phase weight of a pentagon cocycle phi. Entries are dense; e[x*n+z].
struct TwistedKernel {
  FiniteAbelianGroup grp;
  std::shared_ptr<const PhaseCochain> phi;
  std::shared_ptr<const PhaseTable3> tab;  // complex phases of +phi
  std::shared_ptr<const CoeffAlgebra> alg;
  std::vector<CMat> e;

  const CMat& at(int x, int z) const { return e[static_cast<size_t>(x) * grp.size() + z]; }
  CMat& at(int x, int z) { return e[static_cast<size_t>(x) * grp.size() + z]; }
};

struct HilbertVector {
  FiniteAbelianGroup grp;
  std::shared_ptr<const CoeffAlgebra> alg;
  std::vector<CMat> v;
};

TwistedKernel make_kernel(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                          std::shared_ptr<const CoeffAlgebra> alg);
TwistedKernel delta_kernel(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                           std::shared_ptr<const CoeffAlgebra> alg, int a, int b);
TwistedKernel identity_kernel(const FiniteAbelianGroup& g,
                              std::shared_ptr<const PhaseCochain> phi,
                              std::shared_ptr<const CoeffAlgebra> alg);
TwistedKernel random_kernel(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                            std::shared_ptr<const CoeffAlgebra> alg, Rng& rng);

/// (k1 * k2)(x,z) = sum_y phi(x-y, y-z, z) k1(x,y) k2(y,z).
TwistedKernel kprod(const TwistedKernel& k1, const TwistedKernel& k2);
/// Same sum against the pointwise inverse cocycle (phase conjugated).
TwistedKernel kprod_inv(const TwistedKernel& k1, const TwistedKernel& k2);

/// Entry (x,y) becomes the coefficient adjoint of entry (y,x).
TwistedKernel adjoint(const TwistedKernel& k);

/// Max-abs difference between ((k1*k2)*k3) and the Phi-corrected right
/// bracketing; vanishes for every pentagon cocycle.
double associator_defect(const TwistedKernel& k1, const TwistedKernel& k2,
                         const TwistedKernel& k3);

/// theta_x[k](z,w) = phi(x,z,w) k(z+x, w+x).
TwistedKernel g_action(int x, const TwistedKernel& k);

/// Entries psi0(x) adj(psi1(y)); requires phi to be an antisymmetric
/// tricharacter (the closed form is only available in that case).
TwistedKernel rank_one(const HilbertVector& psi0, const HilbertVector& psi1,
                       std::shared_ptr<const PhaseCochain> phi);

/// (k * psi)(x) = sum_y k(x,y) psi(y); tricharacter phi required.
HilbertVector apply(const TwistedKernel& k, const HilbertVector& psi);

/// <psi1, psi2> = sum_y adj(psi1(y)) psi2(y), coefficient-valued.
CMat inner(const HilbertVector& a, const HilbertVector& b);

/// Spectral norm of the flattened plain matrix, by power iteration on
/// adjoint-times-self to relative tolerance 1e-9.
double operator_norm(const TwistedKernel& k);

double max_abs(const TwistedKernel& k);
double max_abs_diff(const TwistedKernel& a, const TwistedKernel& b);

std::string kernel_to_json(const TwistedKernel& k);

}  // namespace twisted
