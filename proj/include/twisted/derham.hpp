#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "twisted/crossed.hpp"
#include "twisted/rational.hpp"

namespace twisted {

using Vec3 = std::array<long long, 3>;

/// Polynomial in x1,x2,x3 with rational coefficients, sparse on exponents.
class Poly3 {
 public:
  Poly3() = default;
  static Poly3 constant(const Rational& c);
  static Poly3 monomial(const Rational& c, int e1, int e2, int e3);

  Poly3 operator+(const Poly3& o) const;
  Poly3 operator-(const Poly3& o) const;
  Poly3 operator-() const;
  Poly3 scaled(const Rational& c) const;
  Poly3 derivative(int axis) const;
  /// Substitute x -> x + t (componentwise integer shift).
  Poly3 translated(const Vec3& t) const;
  Rational eval(const Vec3& x) const;
  bool is_zero() const;
  bool operator==(const Poly3& o) const;
  std::string str() const;

  const std::map<std::array<int, 3>, Rational>& terms() const { return c_; }
  void add_term(const std::array<int, 3>& e, const Rational& v);

 private:
  std::map<std::array<int, 3>, Rational> c_;
};

/// Exterior form on R^3 with Poly3 coefficients; increasing-index bases
/// (q=1: dx1,dx2,dx3; q=2: dx12,dx13,dx23; q=3: dx123).
struct PolyForm {
  int q = 0;
  std::vector<Poly3> comp;

  static PolyForm zero(int q);
  bool is_zero() const;
  PolyForm operator+(const PolyForm& o) const;
  PolyForm operator-(const PolyForm& o) const;
  PolyForm operator-() const;
  PolyForm scaled(const Rational& c) const;
  PolyForm translated(const Vec3& t) const;  // coefficients only; dx_i invariant
  bool operator==(const PolyForm& o) const;
  std::string str() const;
};

/// De Rham differential; on degree 3 the result is zero and *flagged is set.
PolyForm exterior_d(const PolyForm& w, bool* flagged = nullptr);

/// Lattice action convention: gamma.w = w(x + gamma) or w(x - gamma).
enum class LatticeAction { kPlus, kMinus };
PolyForm act(LatticeAction a, const Vec3& gamma, const PolyForm& w);

/// Group cochain valued in polynomial forms, as an evaluator.
struct FormCochain {
  int p = 0;
  std::function<PolyForm(const std::vector<Vec3>&)> eval;
};

/// (delta f)_{g1..g_{p+1}} = g1.f_{g2..} - f_{g1g2,..} + ... + (-1)^{p+1} f_{g1..gp}.
FormCochain group_delta(const FormCochain& f, LatticeAction a);

/// Zigzag primitives: B (2-form), A (1-form per lattice vector), f (function
/// per pair). The rotation-invariant primitives and a product-form variant
/// are provided.
struct ZigzagChoices {
  std::function<PolyForm()> B;
  std::function<PolyForm(const Vec3&)> A;
  std::function<PolyForm(const Vec3&, const Vec3&)> f;
};
ZigzagChoices antisymmetric_choices(const Rational& k);
ZigzagChoices product_choices(const Rational& k);

struct CalibrationReport {
  bool ok = false;
  LatticeAction action = LatticeAction::kMinus;
  int sign_A = 1;  // sign applied to the displayed A to make the chain exact
  int sign_f = 1;
  std::string log;
};

/// Picks the translation direction (and the sign normalization of the
/// displayed A and f) under which all four descent equations hold exactly
/// with c(l,m,n) = (k/6) l.(m x n). Only one combination validates.
CalibrationReport calibrate_action(const Rational& k);

struct ZigzagResult {
  bool ok = false;
  std::string log;        // per-step residual report
  LatticeAction action = LatticeAction::kMinus;
  std::function<Rational(const Vec3&, const Vec3&, const Vec3&)> cocycle;
};

/// Runs the four-step descent H = dB, (dB)_g = dA_g, (dA) = df, (df) = c for
/// the supplied primitives, certifying each equation as an exact polynomial
/// identity over the lattice box [-box, box]^3. The returned cocycle
/// evaluates (delta f) at x = 0 (f is normalized to vanish there).
ZigzagResult zigzag(const Rational& k, const ZigzagChoices& choices, LatticeAction action,
                    int box = 2);

/// Constant 2-cochain g(m,n) (polynomial in the lattice entries) with
/// (delta g)(l,m,n) = c1 - c2, solved exactly over Q; empty optional when the
/// ansatz fails. Verified exhaustively on the box before returning.
std::optional<std::function<Rational(const Vec3&, const Vec3&)>> solve_lattice_cohomologous(
    const std::function<Rational(const Vec3&, const Vec3&, const Vec3&)>& c1,
    const std::function<Rational(const Vec3&, const Vec3&, const Vec3&)>& c2, int box = 2);

struct TorusReport {
  bool covariance_exact = false;
  long long tuples_checked = 0;
  TwistedSystem system;
  ValidationReport validation;
};

/// Finite nonassociative torus: sigma(a,b,c) = exp(2 pi i theta a.(b x c)) on
/// Z_N^3; certifies the covariance identity of the diagonal multiplication
/// operators under the right-regular adjoint action exhaustively (exact turn
/// arithmetic over all |G|^4 tuples), and returns the twisted-kernel
/// realization carrying sigma as its obstruction.
TorusReport nonassociative_torus(int N, const Rational& theta);

}  // namespace twisted
