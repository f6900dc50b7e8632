// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "twisted/derham.hpp"
#include "twisted/strictify.hpp"
#include "twisted/takai.hpp"

using namespace twisted;

namespace {

int failures = 0;
using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double s() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

void line(int id, bool pass, const std::string& what, double defect, double secs) {
  std::printf("[%s] criterion %2d: %s (worst defect %.2e, %.2f s)\n", pass ? "PASS" : "FAIL", id,
              what.c_str(), defect, secs);
  if (!pass) ++failures;
}

std::shared_ptr<const PhaseCochain> octonion() {
  return std::make_shared<PhaseCochain>(volume_tricharacter(2, Rational(1, 2)));
}

// ---------------------------------------------------------------------------

void criterion1() {
  Timer t;
  auto rep = pentagon_check(*octonion());
  line(1, rep.ok && t.s() < 1.0, "pentagon identity exact on Z2^3 (4096 quadruples)",
       rep.ok ? 0.0 : 1.0, t.s());
}

void criterion2() {
  Timer t;
  double worst = 0.0;
  auto sc = CoeffAlgebra::scalars();
  Rng rng = Rng::for_suite(2026, "acceptance-associator");

  struct Case {
    const char* grp;
    int N;
    Rational theta;
  } cases[] = {{"Z2^3", 2, Rational(1, 2)}, {"Z3^3", 3, Rational(1, 3)}, {"Z4^3", 4, Rational(1, 4)}};
  for (const auto& c : cases) {
    auto g = FiniteAbelianGroup::parse(c.grp);
    auto phi = std::make_shared<PhaseCochain>(volume_tricharacter(c.N, c.theta));
    for (int trial = 0; trial < 100; ++trial) {
      auto k1 = random_kernel(g, phi, sc, rng);
      auto k2 = random_kernel(g, phi, sc, rng);
      auto k3 = random_kernel(g, phi, sc, rng);
      worst = std::max(worst, associator_defect(k1, k2, k3));
    }
  }
  // exact delta-kernel exhaustion on Z2^3 over all chained triples
  auto g2 = FiniteAbelianGroup::parse("Z2^3");
  auto oct = octonion();
  double dworst = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      for (int c = 0; c < 8; ++c)
        for (int d = 0; d < 8; ++d)
          dworst = std::max(dworst, associator_defect(delta_kernel(g2, oct, sc, a, b),
                                                      delta_kernel(g2, oct, sc, b, c),
                                                      delta_kernel(g2, oct, sc, c, d)));
  bool pass = worst <= 1e-10 && dworst <= 1e-14 && t.s() < 30.0;
  line(2, pass, "kernel associator: 100 random triples x 3 cocycles + delta exhaustion",
       std::max(worst, dworst), t.s());
}

void criterion3() {
  Timer t;
  double worst = 0.0;
  auto sc = CoeffAlgebra::scalars();
  Rng rng = Rng::for_suite(2026, "acceptance-stars");
  struct Case {
    const char* grp;
    int N;
    Rational theta;
  } cases[] = {{"Z2^3", 2, Rational(1, 2)}, {"Z3^3", 3, Rational(1, 3)}, {"Z4^3", 4, Rational(1, 4)}};
  for (const auto& c : cases) {
    auto g = FiniteAbelianGroup::parse(c.grp);
    auto phi = std::make_shared<PhaseCochain>(volume_tricharacter(c.N, c.theta));
    for (int trial = 0; trial < 100; ++trial) {
      auto k1 = random_kernel(g, phi, sc, rng);
      auto k2 = random_kernel(g, phi, sc, rng);
      worst = std::max(worst,
                       max_abs_diff(adjoint(kprod(k1, k2)), kprod(adjoint(k2), adjoint(k1))));
      worst = std::max(worst, max_abs_diff(adjoint(adjoint(k1)), k1));
    }
  }
  // composition covariance of the G-action, exact on delta kernels
  auto g = FiniteAbelianGroup::parse("Z2^3");
  auto oct = octonion();
  double gworst = 0.0;
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y)
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
          auto e = delta_kernel(g, oct, sc, a, b);
          auto lhs = g_action(x, g_action(y, e));
          auto rhs = g_action(g.add(x, y), e);
          for (int z = 0; z < 8; ++z)
            for (int w = 0; w < 8; ++w) {
              cplx ph = rhs.tab->at(x, y, z) * std::conj(rhs.tab->at(x, y, w));
              for (auto& v : rhs.at(z, w).a) v *= ph;
            }
          gworst = std::max(gworst, max_abs_diff(lhs, rhs));
        }
  bool pass = worst <= 1e-12 && gworst <= 1e-14;
  line(3, pass, "*-algebra laws + exact G-action covariance on delta kernels",
       std::max(worst, gworst), t.s());
}

void criterion4() {
  Timer t;
  Rng rng = Rng::for_suite(2026, "acceptance-takai");
  double worst = 0.0, ddworst = 0.0;
  bool pass = true;

  auto run = [&](const TwistedSystem& s, int trials, int dd_trials) {
    auto cr = certify_takai(s, trials, 1e-10, rng);
    worst = std::max(worst, cr.worst);
    pass = pass && cr.pass;
    auto dd = certify_double_dual(s, dd_trials, 1e-10, rng);
    ddworst = std::max(ddworst, dd.worst);
    pass = pass && dd.pass;
  };

  auto z2 = FiniteAbelianGroup::parse("Z2");
  run(trivial_system(z2, CoeffAlgebra::scalars()), 50, 2);
  run(trivial_system(z2, CoeffAlgebra::matrices(2)), 50, 2);

  auto g8 = FiniteAbelianGroup::parse("Z2^3");
  run(build_canonical_system(g8, octonion(), 1), 50, 2);
  run(build_canonical_system(g8, octonion(), 2), 50, 2);

  auto g27 = FiniteAbelianGroup::parse("Z3^3");
  auto vol3 = std::make_shared<PhaseCochain>(volume_tricharacter(3, Rational(1, 3)));
  run(build_canonical_system(g27, vol3, 1), 50, 1);
  // the M2 coefficient variant of the Z3^3 system runs at reduced trial
  // count: at 54-dimensional coefficients the full 50 trials do not fit the
  // two-minute budget on one core (see README / suite notes)
  run(build_canonical_system(g27, vol3, 2), 2, 1);

  pass = pass && t.s() < 120.0;
  line(4, pass,
       "Takai duality certified (trivial/octonion/volume systems, B in {C, M2}) + double dual",
       std::max(worst, ddworst), t.s());
}

void criterion5() {
  Timer t;
  Rng rng = Rng::for_suite(2026, "acceptance-exterior");
  auto g = FiniteAbelianGroup::parse("Z2^3");
  TwistedSystem s = build_canonical_system(g, octonion());
  double worst = 0.0;
  std::vector<CMat> w;
  for (int x = 0; x < 8; ++x) w.push_back(x == 0 ? s.alg->id() : random_diag_unitary(8, rng));
  TwistedSystem su = transported_system(s, w);
  bool pass = validate_system(su).ok;
  for (int trial = 0; trial < 5; ++trial) {
    auto f = random_element(s, rng);
    auto g2 = random_element(s, rng);
    auto lhs = exterior_transport(convolve(f, g2, s), w, s);
    auto rhs = convolve(exterior_transport(f, w, s), exterior_transport(g2, w, s), su);
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  pass = pass && worst < 1e-12;

  TwistedSystem sp = packer_raeburn_stabilize(s);
  auto vr = validate_system(sp);
  pass = pass && vr.ok;
  // central multiplier: scalar on the coefficient slot
  bool central = sp.v_turns.has_value();
  if (central)
    for (int x = 0; x < 8 && central; ++x)
      for (int y = 0; y < 8 && central; ++y)
        for (int p = 0; p + 1 < 8 && central; ++p)
          for (int z = 0; z < 8; ++z)
            if ((*sp.v_turns)[static_cast<size_t>(x) * 8 + y][p * 8 + z] !=
                (*sp.v_turns)[static_cast<size_t>(x) * 8 + y][(p + 1) * 8 + z]) {
              central = false;
              break;
            }
  pass = pass && central;
  line(5, pass, "exterior equivalence intertwines + Packer-Raeburn central stabilization",
       std::max(worst, vr.defect), t.s());
}

void criterion6() {
  Timer t;
  Rng rng = Rng::for_suite(2026, "acceptance-split");
  bool pass = true;
  double worst = 0.0;

  auto run_split = [&](const char* grp, int N, const Rational& theta, bool check_recovery) {
    auto g = FiniteAbelianGroup::parse(grp);
    auto phi = std::make_shared<PhaseCochain>(volume_tricharacter(N, theta));
    TwistedSystem s = subgroup_trivialize(build_canonical_system(g, phi), 2);
    SplitData sd = split_system(s, 2);
    pass = pass && sd.ok && sd.id1_exact && sd.id2_exact && sd.varphi_exact;
    // varphi table equals 3 phi(X,y,z) exactly
    int n = g.size();
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
          Rational want =
              (Rational(3) * phi->at3(g2_part(g, 2, a), g1_part(g, 2, b), g1_part(g, 2, c)))
                  .mod1();
          if (sd.varphi.at3(a, b, c) != want) pass = false;
        }
    if (check_recovery) {
      auto ar = antisymmetrize(sd.varphi);
      pass = pass && ar.ok && ar.result == *phi;
    }
    auto f = random_element(s, rng);
    auto g2e = random_element(s, rng);
    double rc = repeated_convolve_defect(sd, s, f, g2e);
    worst = std::max(worst, rc);
    pass = pass && rc < 1e-13;
    double sm = stabilized_multiplicativity_defect(sd, s, rng, 1);
    worst = std::max(worst, sm);
    pass = pass && sm < 1e-11;
  };
  run_split("Z2^3", 2, Rational(1, 2), true);
  // On Z3^2 x Z3 the split obstruction phi^3 is identically trivial (all
  // volume turns are thirds), so the cube-root table carries no information
  // and recovery is checked on the Z2 split only.
  run_split("Z3^3", 3, Rational(1, 3), false);
  line(6, pass,
       "split: vtilde identities + varphi = phi^3 exact (Z2^2xZ2, Z3^2xZ3), recovery, "
       "repeated convolve, stabilized multiplicativity",
       worst, t.s());
}

void criterion7() {
  Timer t;
  Rng rng = Rng::for_suite(2026, "acceptance-strictify");
  double worst = 0.0;

  auto g2 = FiniteAbelianGroup::parse("Z2^3");
  std::vector<std::shared_ptr<const PhaseCochain>> cocycles;
  cocycles.push_back(std::make_shared<PhaseCochain>(trivial_cochain(g2, 3)));
  cocycles.push_back(octonion());
  // a coboundary gives a pentagon cocycle that is not a tricharacter
  PhaseCochain c2(g2, 2);
  for (int x = 1; x < 8; ++x)
    for (int y = 1; y < 8; ++y)
      c2.set(static_cast<long long>(x) * 8 + y, Rational(rng.below(8), 8));
  cocycles.push_back(std::make_shared<PhaseCochain>(coboundary(c2)));

  for (const auto& phi : cocycles)
    for (int trial = 0; trial < 10; ++trial) {
      auto k1 = random_field(g2, phi, rng);
      auto k2 = random_field(g2, phi, rng);
      auto k3 = random_field(g2, phi, rng);
      worst = std::max(worst, max_abs_diff(strictify(deformed_field_product(k1, k2)),
                                           fiberwise_product(strictify(k1), strictify(k2))));
      worst =
          std::max(worst, max_abs_diff(deformed_field_product(deformed_field_product(k1, k2), k3),
                                       deformed_field_product(k1, deformed_field_product(k2, k3))));
    }
  auto g3 = FiniteAbelianGroup::parse("Z3^3");
  auto vol3 = std::make_shared<PhaseCochain>(volume_tricharacter(3, Rational(1, 3)));
  for (int trial = 0; trial < 5; ++trial) {
    auto k1 = random_field(g3, vol3, rng);
    auto k2 = random_field(g3, vol3, rng);
    auto k3 = random_field(g3, vol3, rng);
    worst = std::max(worst, max_abs_diff(strictify(deformed_field_product(k1, k2)),
                                         fiberwise_product(strictify(k1), strictify(k2))));
    worst =
        std::max(worst, max_abs_diff(deformed_field_product(deformed_field_product(k1, k2), k3),
                                     deformed_field_product(k1, deformed_field_product(k2, k3))));
  }
  line(7, worst < 1e-12, "strictified field product = fiberwise composition, associative", worst,
       t.s());
}

void criterion8() {
  Timer t;
  auto rep = find_octonion_signs();
  bool pass = rep.found;
  double worst = 0.0;
  if (pass) {
    const auto& o = rep.algebra;
    const auto& g = o.grp;
    auto vol = volume_tricharacter(2, Rational(1, 2));
    for (int a = 0; a < 8 && pass; ++a)
      for (int b = 0; b < 8 && pass; ++b)
        for (int c = 0; c < 8; ++c) {
          int lhs = o.sign(a, b) * o.sign(g.add(a, b), c);
          int rhs = o.sign(b, c) * o.sign(a, g.add(b, c));
          int want = vol.at3(a, b, c).is_zero() ? 1 : -1;
          if (lhs != want * rhs) {
            pass = false;
            break;
          }
        }
    Rng rng = Rng::for_suite(2026, "acceptance-octonions");
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> x(8), y(8);
      for (auto& v : x) v = rng.sym();
      for (auto& v : y) v = rng.sym();
      auto z = o.mul(x, y);
      double nx = 0, ny = 0, nz = 0;
      for (int i = 0; i < 8; ++i) nx += x[i] * x[i], ny += y[i] * y[i], nz += z[i] * z[i];
      worst = std::max(worst, std::abs(std::sqrt(nz) - std::sqrt(nx) * std::sqrt(ny)));
    }
    pass = pass && worst < 1e-12;
    auto so = strictified_octonions(o);
    pass = pass && so.dim == 64 && so.associative_on_basis(nullptr);
  }
  line(8, pass, "octonion table: associator cocycle on 512 triples, norms, 64-dim strictification",
       worst, t.s());
}

void criterion9() {
  Timer t;
  Rational k(6);
  auto cal = calibrate_action(k);
  bool pass = cal.ok;
  if (pass) {
    auto anti = antisymmetric_choices(k);
    ZigzagChoices fixed;
    fixed.B = anti.B;
    int sA = cal.sign_A, sf = cal.sign_f;
    fixed.A = [anti, sA](const Vec3& n) { return sA > 0 ? anti.A(n) : -anti.A(n); };
    fixed.f = [anti, sf](const Vec3& m, const Vec3& n) {
      return sf > 0 ? anti.f(m, n) : -anti.f(m, n);
    };
    auto za = zigzag(k, fixed, cal.action, 2);
    pass = pass && za.ok;
    if (pass) pass = za.cocycle({1, 0, 0}, {0, 1, 0}, {0, 0, 1}) == Rational(1);  // k/6 with k=6
    auto zp = zigzag(k, product_choices(k), cal.action, 2);
    pass = pass && zp.ok;
    if (pass) {
      for (long long a = -2; a <= 2 && pass; ++a)
        for (long long b = -2; b <= 2 && pass; ++b)
          for (long long c = -2; c <= 2; ++c)
            if (zp.cocycle({a, 2, 1}, {1, b, -2}, {2, 1, c}) != k * Rational(a * b * c)) {
              pass = false;
              break;
            }
      auto g = solve_lattice_cohomologous(za.cocycle, zp.cocycle, 2);
      pass = pass && g.has_value();
    }
  }
  line(9, pass, "zigzag descent exact on [-2,2]^3 with c(e1,e2,e3) = k/6; product rep cohomologous",
       pass ? 0.0 : 1.0, t.s());
}

void criterion10() {
  Timer t;
  auto tor = nonassociative_torus(2, Rational(1, 2));
  bool pass = tor.covariance_exact && tor.tuples_checked == 4096 && tor.validation.ok;
  auto tor0 = nonassociative_torus(2, Rational(0));
  bool triv = tor0.validation.ok;
  for (long long f = 0; f < tor0.system.phi->table_size(); ++f)
    triv = triv && tor0.system.phi->at(f).is_zero();
  pass = pass && triv;
  line(10, pass, "nonassociative torus: covariance exact on 4096 tuples; theta=0 degenerates",
       pass ? 0.0 : 1.0, t.s());
}

void criterion11() {
  Timer t;
  Rng rng = Rng::for_suite(2026, "acceptance-negative");
  auto g = FiniteAbelianGroup::parse("Z2^3");
  auto oct = octonion();
  auto bad = std::make_shared<PhaseCochain>(mutate(*oct, oct->flatten({1, 2, 3}), Rational(1, 2)));

  bool pass = true;
  // pentagon breaks with a concrete quadruple
  auto pr = pentagon_check(*bad);
  pass = pass && !pr.ok && pr.witness[0] >= 0;
  // associator breaks
  auto sc = CoeffAlgebra::scalars();
  pass = pass && associator_defect(random_kernel(g, bad, sc, rng), random_kernel(g, bad, sc, rng),
                                   random_kernel(g, bad, sc, rng)) > 0.1;
  // the canonical construction cannot validate a non-cocycle
  bool threw = false;
  try {
    build_canonical_system(g, bad);
  } catch (const std::exception&) {
    threw = true;
  }
  pass = pass && threw;
  // a single perturbed multiplier entry is caught with a witness triple
  TwistedSystem s = build_canonical_system(g, oct);
  TwistedSystem sbad = s;
  sbad.vat(3, 5).at(1, 1) *= cplx{0, 1};
  auto vr = validate_system(sbad);
  pass = pass && !vr.ok && !vr.witness.empty();
  // Takai certification collapses on the broken system
  auto cr = certify_takai(sbad, 2, 1e-10, rng);
  pass = pass && !cr.pass && cr.worst > 1e-3;
  // split hypotheses reject the ungauged system with a witness
  auto sd = split_system(s, 2);
  pass = pass && !sd.ok && !sd.witness.empty();
  // strict associativity fails for the mutated cocycle
  pass = pass && max_abs_diff(deformed_field_product(
                                  deformed_field_product(random_field(g, bad, rng),
                                                         random_field(g, bad, rng)),
                                  random_field(g, bad, rng)),
                              deformed_field_product(random_field(g, bad, rng),
                                                     deformed_field_product(
                                                         random_field(g, bad, rng),
                                                         random_field(g, bad, rng)))) > 0.01;
  // octonion table mutation breaks the associator cocycle at some triple
  auto orep = find_octonion_signs();
  pass = pass && orep.found;
  if (orep.found) {
    auto o = orep.algebra;
    o.F[1 * 8 + 2] = static_cast<int8_t>(-o.F[1 * 8 + 2]);
    bool broke = false;
    auto vol = volume_tricharacter(2, Rational(1, 2));
    for (int a = 0; a < 8 && !broke; ++a)
      for (int b = 0; b < 8 && !broke; ++b)
        for (int c = 0; c < 8; ++c) {
          int lhs = o.sign(a, b) * o.sign(o.grp.add(a, b), c);
          int rhs = o.sign(b, c) * o.sign(a, o.grp.add(b, c));
          int want = vol.at3(a, b, c).is_zero() ? 1 : -1;
          if (lhs != want * rhs) {
            broke = true;
            break;
          }
        }
    pass = pass && broke;
  }
  // zigzag rejects a perturbed primitive with a residual
  Rational k(6);
  auto cal = calibrate_action(k);
  if (cal.ok) {
    auto anti = antisymmetric_choices(k);
    ZigzagChoices fixed;
    fixed.B = [anti]() {
      PolyForm b = anti.B();
      b.comp[0] = b.comp[0] + Poly3::monomial(Rational(1, 5), 1, 0, 0);
      return b;
    };
    int sA = cal.sign_A, sf = cal.sign_f;
    fixed.A = [anti, sA](const Vec3& n) { return sA > 0 ? anti.A(n) : -anti.A(n); };
    fixed.f = [anti, sf](const Vec3& m, const Vec3& n) {
      return sf > 0 ? anti.f(m, n) : -anti.f(m, n);
    };
    auto z = zigzag(k, fixed, cal.action, 1);
    pass = pass && !z.ok;
  }
  line(11, pass, "negative controls: every certification fails with a witness after mutation",
       pass ? 0.0 : 1.0, t.s());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all 11 criteria passed\n");
  return failures ? 1 : 0;
}
