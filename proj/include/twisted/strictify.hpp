#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "twisted/cochain.hpp"
#include "twisted/rng.hpp"

namespace twisted {

/// Scalar kernel-valued function k(u,w;x) on G x G x G.
struct KernelField {
  FiniteAbelianGroup grp;
  std::shared_ptr<const PhaseCochain> phi;
  std::shared_ptr<const PhaseTable3> tab;
  std::vector<std::complex<double>> k;  // [(u * n + w) * n + x]

  std::complex<double>& at(int u, int w, int x) {
    int n = grp.size();
    return k[(static_cast<size_t>(u) * n + w) * n + x];
  }
  const std::complex<double>& at(int u, int w, int x) const {
    int n = grp.size();
    return k[(static_cast<size_t>(u) * n + w) * n + x];
  }
};

KernelField make_field(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi);
KernelField random_field(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                         Rng& rng);
double max_abs_diff(const KernelField& a, const KernelField& b);

/// (k1 ⋆ k2)(u,w;x) = sum_v k1(u,v; v-w+x) k2(v,w;x) phi(u-v, v-w, w).
KernelField field_product(const KernelField& k1, const KernelField& k2);

/// The associativity-corrected product: the same sum with the extra factor
/// phi(u-v, v-w, x)^{-1} per term.
KernelField deformed_field_product(const KernelField& k1, const KernelField& k2);

/// k^F(u,w;x) = k(u,w; w+x) phi(u-w, w, x)^{-1}; intertwines the deformed
/// product with fiberwise kernel composition.
KernelField strictify(const KernelField& k);
KernelField strictify_inverse(const KernelField& k);

/// Fiberwise composition (k1 k2)(u,w;x) = sum_v k1(u,v;x) k2(v,w;x).
KernelField fiberwise_product(const KernelField& k1, const KernelField& k2);

/// Sign table of a twisted real group algebra on Z2^3 whose basis product
/// e_a e_b = F(a,b) e_{a+b} has associator (-1)^{a.(b x c)}.
struct OctonionAlgebra {
  FiniteAbelianGroup grp;            // Z2^3
  std::vector<int8_t> F;             // 8x8 signs
  int sign(int a, int b) const { return F[static_cast<size_t>(a) * grp.size() + b]; }
  /// product of basis vectors: index a+b with sign F(a,b)
  std::vector<double> mul(const std::vector<double>& x, const std::vector<double>& y) const;
};

struct OctonionSearchReport {
  bool found = false;
  OctonionAlgebra algebra;
  long long nodes_visited = 0;
};

/// Constrained depth-first search for the sign table: F(0,.) = F(.,0) = 1,
/// F(a,a) = -1, antisymmetric off the diagonal, coboundary equal to the
/// volume cocycle.
OctonionSearchReport find_octonion_signs();

/// C(Z2^3, O) with the deformed product on the graded basis (s, a):
///   (s,a) * (t,b) = [s  == b + t] F(a,b) phi(a,b,t) (t, a+b),
/// where phi is the octonion cocycle sign. Associativity is an exact integer
/// statement checked over all 64^3 basis triples.
struct StrictifiedOctonions {
  OctonionAlgebra base;
  int dim = 64;
  // basis index: s * 8 + a
  struct Term {
    int index = -1;  // -1: zero
    int sign = 0;
  };
  Term mul(int i, int j) const;
  bool associative_on_basis(std::array<int, 3>* witness) const;
  /// A pair of grades (a,b) whose constant-function product is not constant.
  bool constants_not_closed(std::array<int, 2>* witness) const;
};

StrictifiedOctonions strictified_octonions(const OctonionAlgebra& o);

std::string sign_table_csv(const OctonionAlgebra& o);

}  // namespace twisted
