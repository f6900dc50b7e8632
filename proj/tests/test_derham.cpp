#include "doctest.h"
#include "twisted/derham.hpp"

using namespace twisted;

TEST_CASE("exterior derivative basics") {
  // d(x1 dx2) = dx1 ^ dx2
  PolyForm w = PolyForm::zero(1);
  w.comp[1] = Poly3::monomial(Rational(1), 1, 0, 0);
  auto dw = exterior_d(w);
  CHECK(dw.comp[0] == Poly3::constant(Rational(1)));
  CHECK(dw.comp[1].is_zero());
  CHECK(dw.comp[2].is_zero());

  // dB = H for the antisymmetric example
  Rational k(6);
  auto ch = antisymmetric_choices(k);
  auto dB = exterior_d(ch.B());
  CHECK(dB.comp[0] == Poly3::constant(k));

  // d(d omega) = 0 on a random-ish polynomial 1-form
  PolyForm a = PolyForm::zero(1);
  a.comp[0] = Poly3::monomial(Rational(3, 2), 2, 1, 0) + Poly3::monomial(Rational(-1, 3), 0, 0, 2);
  a.comp[1] = Poly3::monomial(Rational(5), 1, 1, 1);
  a.comp[2] = Poly3::monomial(Rational(2, 7), 0, 3, 0);
  CHECK(exterior_d(exterior_d(a)).is_zero());

  bool flagged = false;
  PolyForm top = PolyForm::zero(3);
  top.comp[0] = Poly3::constant(Rational(1));
  CHECK(exterior_d(top, &flagged).is_zero());
  CHECK(flagged);
}

TEST_CASE("group delta on constant-form cochains and delta^2 = 0") {
  Rational k(6);
  auto ch = antisymmetric_choices(k);
  FormCochain B0;
  B0.p = 0;
  PolyForm B = ch.B();
  B0.eval = [B](const std::vector<Vec3>&) { return B; };
  auto dB0 = group_delta(B0, LatticeAction::kMinus);
  // (delta B)_g = g.B - B
  Vec3 g{1, -2, 0};
  CHECK(dB0.eval({g}) == act(LatticeAction::kMinus, g, B) - B);

  auto ddB0 = group_delta(dB0, LatticeAction::kMinus);
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b) {
      PolyForm r = ddB0.eval({{a, b, 1}, {b, 1, a}});
      CHECK(r.is_zero());
    }
}

TEST_CASE("calibration and the antisymmetric descent") {
  Rational k(6);
  auto cal = calibrate_action(k);
  REQUIRE(cal.ok);
  CHECK(cal.action == LatticeAction::kMinus);

  auto anti = antisymmetric_choices(k);
  ZigzagChoices fixed;
  fixed.B = anti.B;
  int sA = cal.sign_A, sf = cal.sign_f;
  fixed.A = [anti, sA](const Vec3& n) { return sA > 0 ? anti.A(n) : -anti.A(n); };
  fixed.f = [anti, sf](const Vec3& m, const Vec3& n) {
    return sf > 0 ? anti.f(m, n) : -anti.f(m, n);
  };
  auto z = zigzag(k, fixed, cal.action, 2);
  REQUIRE(z.ok);
  // anchor: c(e1,e2,e3) = k/6 = 1
  CHECK(z.cocycle({1, 0, 0}, {0, 1, 0}, {0, 0, 1}) == Rational(1));
  // full antisymmetric form on a box
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b) {
      Vec3 l{a, b, 1}, m{b, 1, a}, n{1, a, b};
      Rational det((l[0] * (m[1] * n[2] - m[2] * n[1]) - l[1] * (m[0] * n[2] - m[2] * n[0]) +
                    l[2] * (m[0] * n[1] - m[1] * n[0])));
      CHECK(z.cocycle(l, m, n) == det);  // k/6 = 1 here
      CHECK(z.cocycle(m, l, n) == -det);
    }

  // a perturbed primitive is rejected with a residual report
  ZigzagChoices badch = fixed;
  badch.A = [fixed](const Vec3& n) {
    PolyForm a = fixed.A(n);
    a.comp[0] = a.comp[0] + Poly3::monomial(Rational(1, 7), 1, 0, 0);
    return a;
  };
  auto zb = zigzag(k, badch, cal.action, 1);
  CHECK_FALSE(zb.ok);
  CHECK(zb.log.find("residual") != std::string::npos);
}

TEST_CASE("product representative and the cohomologous witness") {
  Rational k(6);
  auto cal = calibrate_action(k);
  REQUIRE(cal.ok);
  auto zp = zigzag(k, product_choices(k), cal.action, 2);
  REQUIRE(zp.ok);
  for (long long a = -2; a <= 2; ++a)
    for (long long b = -2; b <= 2; ++b)
      for (long long c = -2; c <= 2; ++c)
        CHECK(zp.cocycle({a, 5, -3}, {2, b, 7}, {-1, 4, c}) == k * Rational(a * b * c));

  auto anti = antisymmetric_choices(k);
  ZigzagChoices fixed;
  fixed.B = anti.B;
  int sA = cal.sign_A, sf = cal.sign_f;
  fixed.A = [anti, sA](const Vec3& n) { return sA > 0 ? anti.A(n) : -anti.A(n); };
  fixed.f = [anti, sf](const Vec3& m, const Vec3& n) {
    return sf > 0 ? anti.f(m, n) : -anti.f(m, n);
  };
  auto za = zigzag(k, fixed, cal.action, 1);
  REQUIRE(za.ok);

  auto g = solve_lattice_cohomologous(za.cocycle, zp.cocycle, 2);
  REQUIRE(g.has_value());
  // spot-verify delta g = c_anti - c_prod beyond the solver's own box
  for (long long t = -3; t <= 3; ++t) {
    Vec3 l{t, 1, -2}, m{2, t, 1}, n{-1, 2, t};
    Vec3 lm{l[0] + m[0], l[1] + m[1], l[2] + m[2]};
    Vec3 mn{m[0] + n[0], m[1] + n[1], m[2] + n[2]};
    Rational dg = (*g)(m, n) - (*g)(lm, n) + (*g)(l, mn) - (*g)(l, m);
    CHECK(dg == za.cocycle(l, m, n) - zp.cocycle(l, m, n));
  }
}

TEST_CASE("nonassociative torus") {
  auto t0 = nonassociative_torus(2, Rational(0));
  CHECK(t0.covariance_exact);
  CHECK(t0.validation.ok);
  bool triv = true;
  for (long long f = 0; f < t0.system.phi->table_size(); ++f)
    triv = triv && t0.system.phi->at(f).is_zero();
  CHECK(triv);

  auto t1 = nonassociative_torus(2, Rational(1, 2));
  CHECK(t1.covariance_exact);
  CHECK(t1.tuples_checked == 4096);
  CHECK(t1.validation.ok);
  CHECK(*t1.system.phi == volume_tricharacter(2, Rational(1, 2)));
  CHECK(t1.system.canonical_sign == -1);

  CHECK_THROWS_AS(nonassociative_torus(2, Rational(1, 3)), std::invalid_argument);

  // sharp associator witness on diagonal-valued delta elements
  Rng rng(51);
  const TwistedSystem& s = t1.system;
  for (int t = 0; t < 4; ++t) {
    int x = rng.below(8), y = rng.below(8), z = rng.below(8);
    auto f = delta_element(s, x, random_diag_unitary(8, rng));
    auto g2 = delta_element(s, y, random_diag_unitary(8, rng));
    auto h = delta_element(s, z, random_diag_unitary(8, rng));
    auto lhs = convolve(convolve(f, g2, s), h, s);
    auto rhs = convolve(f, convolve(g2, h, s), s);
    for (auto& m : rhs.f)
      for (auto& v : m.a) v *= s.tab->at(x, y, z);
    CHECK(max_abs_diff(lhs, rhs) < 1e-13);
  }
}
