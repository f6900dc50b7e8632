#include <cmath>

#include "doctest.h"
#include "twisted/crossed.hpp"

using namespace twisted;

namespace {

struct Fix {
  FiniteAbelianGroup g = FiniteAbelianGroup::parse("Z2^3");
  std::shared_ptr<const PhaseCochain> oct =
      std::make_shared<PhaseCochain>(volume_tricharacter(2, Rational(1, 2)));
};

// independent double-loop convolution oracle
CrossedElement convolve_oracle(const CrossedElement& f, const CrossedElement& g,
                               const TwistedSystem& s) {
  int n = s.grp.size();
  CrossedElement out = zero_element(s);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int x2 = s.grp.sub(x, y);
      CMat bg = s.beta[y].apply(*s.alg, g.f[x2]);
      CMat t = s.alg->star(f.f[y], bg);
      CMat t2 = s.alg->star(t, s.vat(y, x2));
      out.f[x] = out.f[x] + t2;
    }
  return out;
}

}  // namespace

TEST_CASE("validate: trivial, canonical octonion, canonical volume, mutation") {
  Fix fx;
  auto triv = trivial_system(fx.g, CoeffAlgebra::scalars());
  CHECK(validate_system(triv).ok);

  TwistedSystem s = build_canonical_system(fx.g, fx.oct);
  auto rep = validate_system(s);
  CHECK(rep.ok);
  CHECK(rep.defect < 1e-12);
  CHECK(s.canonical_sign == -1);
  CHECK(s.alg->dim() == 8);

  auto g3 = FiniteAbelianGroup::parse("Z3^3");
  auto vol3 = std::make_shared<PhaseCochain>(volume_tricharacter(3, Rational(1, 3)));
  TwistedSystem s3 = build_canonical_system(g3, vol3);
  auto rep3 = validate_system(s3);
  CHECK(rep3.ok);
  CHECK(s3.alg->dim() == 27);

  // one perturbed v entry is caught with a witness
  TwistedSystem bad = s;
  bad.vat(3, 5).at(2, 2) *= cplx{0.0, 1.0};
  auto brep = validate_system(bad);
  CHECK_FALSE(brep.ok);
  CHECK(brep.defect > 0.1);
  CHECK(!brep.witness.empty());
}

TEST_CASE("scalar systems have coboundary obstruction") {
  Fix fx;
  Rng rng(21);
  PhaseCochain c(fx.g, 2);
  for (int x = 1; x < 8; ++x)
    for (int y = 1; y < 8; ++y)
      c.set(static_cast<long long>(x) * 8 + y, Rational(rng.below(8), 8));
  auto s = scalar_system(fx.g, c, CoeffAlgebra::scalars());
  CHECK(validate_system(s).ok);
  CHECK(*s.phi == coboundary(c));
}

TEST_CASE("convolve: trivial deltas, single-term evaluation, random oracle") {
  Fix fx;
  auto z2 = FiniteAbelianGroup::parse("Z2");
  auto triv = trivial_system(z2, CoeffAlgebra::scalars());
  auto da = delta_element(triv, 1, cmat_id(1));
  auto db = delta_element(triv, 1, cmat_id(1));
  auto dd = convolve(da, db, triv);
  CHECK(std::abs(dd.f[0].a[0] - cplx{1.0, 0.0}) < 1e-15);
  CHECK(max_abs(dd.f[1]) == 0.0);

  TwistedSystem s = build_canonical_system(fx.g, fx.oct);
  Rng rng(22);
  // delta elements: single-term formula
  int x = 3, y = 6;
  CMat A = random_cmat(8, rng), B = random_cmat(8, rng);
  auto fa = delta_element(s, y, A);
  auto fb = delta_element(s, fx.g.sub(x, y), B);
  auto prod = convolve(fa, fb, s);
  CMat bg = s.beta[y].apply(*s.alg, B);
  CMat want = s.alg->star(s.alg->star(A, bg), s.vat(y, fx.g.sub(x, y)));
  CHECK(max_abs_diff(prod.f[x], want) < 1e-13);

  auto f = random_element(s, rng);
  auto g2 = random_element(s, rng);
  CHECK(max_abs_diff(convolve(f, g2, s), convolve_oracle(f, g2, s)) < 1e-13);
}

TEST_CASE("crossed adjoint is an involution and reverses products") {
  Fix fx;
  TwistedSystem s = build_canonical_system(fx.g, fx.oct);
  Rng rng(23);
  auto f = random_element(s, rng);
  auto g2 = random_element(s, rng);
  CHECK(max_abs_diff(crossed_adjoint(crossed_adjoint(f, s), s), f) < 1e-12);
  auto lhs = crossed_adjoint(convolve(f, g2, s), s);
  auto rhs = convolve(crossed_adjoint(g2, s), crossed_adjoint(f, s), s);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);

  // trivial system: f*(x) = conj transpose of f(-x)
  auto triv = trivial_system(fx.g, CoeffAlgebra::matrices(2));
  auto h = random_element(triv, rng);
  auto hs = crossed_adjoint(h, triv);
  for (int xx = 0; xx < 8; ++xx)
    CHECK(max_abs_diff(hs.f[xx], adjoint(h.f[fx.g.neg(xx)])) == 0.0);
}

TEST_CASE("sharp delta associator law on diagonal values") {
  Fix fx;
  TwistedSystem s = build_canonical_system(fx.g, fx.oct);
  Rng rng(24);
  for (int t = 0; t < 6; ++t) {
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

TEST_CASE("exterior transport: identity gauge, diagonal gauge, Lemma 6.2 rescale") {
  Fix fx;
  TwistedSystem s = build_canonical_system(fx.g, fx.oct);
  Rng rng(25);

  std::vector<CMat> wid(8, s.alg->id());
  auto f = random_element(s, rng);
  CHECK(max_abs_diff(exterior_transport(f, wid, s), f) == 0.0);

  std::vector<CMat> w;
  for (int x = 0; x < 8; ++x) w.push_back(x == 0 ? s.alg->id() : random_diag_unitary(8, rng));
  TwistedSystem su = transported_system(s, w);
  CHECK(validate_system(su).ok);  // precondition via the derived system
  auto g2 = random_element(s, rng);
  auto lhs = exterior_transport(convolve(f, g2, s), w, s);
  auto rhs = convolve(exterior_transport(f, w, s), exterior_transport(g2, w, s), su);
  CHECK(max_abs_diff(lhs, rhs) < 1e-12);

  // scalar rescale: (beta, c v) validates with obstruction phi + dc
  PhaseCochain c(fx.g, 2);
  for (int x = 1; x < 8; ++x)
    for (int y = 1; y < 8; ++y)
      c.set(static_cast<long long>(x) * 8 + y, Rational(rng.below(8), 8));
  TwistedSystem sr = rescale_v(s, c);
  CHECK(validate_system(sr).ok);
  PhaseCochain dc = coboundary(c);
  for (long long idx = 0; idx < dc.table_size(); ++idx)
    CHECK(sr.phi->at(idx) == (fx.oct->at(idx) + dc.at(idx)).mod1());
}

TEST_CASE("packer-raeburn: trivial input, canonical input, transport isomorphism") {
  Fix fx;
  auto z2 = FiniteAbelianGroup::parse("Z2");
  auto triv = trivial_system(z2, CoeffAlgebra::scalars());
  auto pt = packer_raeburn_stabilize(triv);
  CHECK(validate_system(pt).ok);
  for (const auto& m : pt.v) CHECK(max_abs_diff(m, cmat_id(2)) == 0.0);

  TwistedSystem s = build_canonical_system(fx.g, fx.oct);
  TwistedSystem sp = packer_raeburn_stabilize(s);
  CHECK(sp.alg->dim() == 64);
  auto rep = validate_system(sp);
  CHECK(rep.ok);
  CHECK(*sp.phi == *s.phi);

  // v' is a scalar diagonal on the coefficient slot: entries phi(x,y,z-x-y)
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      for (int p = 0; p < 8; ++p)
        for (int z = 0; z < 8; ++z) {
          cplx got = sp.vat(x, y).at(p * 8 + z, p * 8 + z);
          cplx want = phase(fx.oct->at3(x, y, fx.g.sub(z, fx.g.add(x, y))));
          CHECK(std::abs(got - want) < 1e-15);
        }

  // pairwise commutation of the stabilized multipliers (diagonals commute)
  Rng rng(26);
  for (int t = 0; t < 4; ++t) {
    int x1 = rng.below(8), y1 = rng.below(8), x2 = rng.below(8), y2 = rng.below(8);
    auto ab = sp.alg->star(sp.vat(x1, y1), sp.vat(x2, y2));
    auto ba = sp.alg->star(sp.vat(x2, y2), sp.vat(x1, y1));
    CHECK(max_abs_diff(ab, ba) < 1e-15);
  }

  // Thm 6.3 isomorphism between s (x) 1 and the stabilized system
  TwistedSystem s1 = tensor_stabilized_identity(s);
  auto w = packer_raeburn_w(s);
  auto f = random_element(sp, rng);
  auto g2 = random_element(sp, rng);
  auto lhs = exterior_transport(convolve(f, g2, sp), w, sp);
  auto rhs = convolve(exterior_transport(f, w, sp), exterior_transport(g2, w, sp), s1);
  CHECK(max_abs_diff(lhs, rhs) < 1e-11);
}

TEST_CASE("subgroup trivialization gauges v to 1 on both subgroups") {
  Fix fx;
  TwistedSystem s0 = build_canonical_system(fx.g, fx.oct);
  TwistedSystem s = subgroup_trivialize(s0, 2);
  CHECK(validate_system(s).ok);
  auto g1 = g1_list(fx.g, 2), g2 = g2_list(fx.g, 2);
  for (int x : g1)
    for (int y : g1) CHECK(max_abs_diff(s.vat(x, y), s.alg->id()) < 1e-15);
  for (int x : g2)
    for (int y : g2) CHECK(max_abs_diff(s.vat(x, y), s.alg->id()) < 1e-15);
  CHECK(*s.phi == *s0.phi);
}
