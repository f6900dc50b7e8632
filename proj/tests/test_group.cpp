#include <complex>
#include <map>

#include "doctest.h"
#include "twisted/group.hpp"
#include "twisted/rng.hpp"

using namespace twisted;

TEST_CASE("enumeration is lexicographic and total") {
  FiniteAbelianGroup z2({2});
  CHECK(z2.size() == 2);
  CHECK(z2.coords(0) == std::vector<int>{0});
  CHECK(z2.coords(1) == std::vector<int>{1});

  FiniteAbelianGroup z22({2, 2});
  CHECK(z22.size() == 4);
  CHECK(z22.coords(0) == std::vector<int>{0, 0});
  CHECK(z22.coords(1) == std::vector<int>{0, 1});
  CHECK(z22.coords(2) == std::vector<int>{1, 0});
  CHECK(z22.coords(3) == std::vector<int>{1, 1});

  CHECK(FiniteAbelianGroup::parse("Z4^3").size() == 64);
  for (int i = 0; i < 64; ++i) {
    auto g = FiniteAbelianGroup::parse("Z4^3");
    CHECK(g.index(g.coords(i)) == i);
  }
}

TEST_CASE("group axioms exhaustively on |G| <= 64") {
  for (const char* spec : {"Z2", "Z3", "Z2^3", "Z2^2xZ3", "Z4^3", "Z12"}) {
    auto g = FiniteAbelianGroup::parse(spec);
    REQUIRE(g.size() <= 64);
    for (int a = 0; a < g.size(); ++a) {
      CHECK(g.add(a, g.identity()) == a);
      CHECK(g.add(a, g.neg(a)) == g.identity());
      for (int b = 0; b < g.size(); ++b) {
        CHECK(g.add(a, b) == g.add(b, a));
        for (int c = 0; c < g.size(); ++c)
          CHECK(g.add(g.add(a, b), c) == g.add(a, g.add(b, c)));
      }
    }
  }
}

TEST_CASE("character multiplicativity and orthogonality are exact") {
  auto g = FiniteAbelianGroup::parse("Z2^2xZ3");
  for (int m = 0; m < g.size(); ++m)
    for (int x = 0; x < g.size(); ++x)
      for (int y = 0; y < g.size(); ++y)
        CHECK(g.pairing(m, g.add(x, y)) == (g.pairing(m, x) + g.pairing(m, y)).mod1());

  // sum_x xi_m(x) conj xi_m'(x) = |G| [m = m']: the difference character's
  // turn values fill (1/q)Z/Z uniformly with q > 1 unless m = m'.
  for (int m = 0; m < g.size(); ++m)
    for (int mp = 0; mp < g.size(); ++mp) {
      std::map<Rational, int, bool (*)(const Rational&, const Rational&)> buckets(
          [](const Rational& a, const Rational& b) { return a < b; });
      for (int x = 0; x < g.size(); ++x)
        buckets[(g.pairing(m, x) - g.pairing(mp, x)).mod1()]++;
      if (m == mp) {
        CHECK(buckets.size() == 1);
        CHECK(buckets.begin()->first == Rational(0));
      } else {
        CHECK(buckets.size() > 1);
        int count = buckets.begin()->second;
        for (const auto& [t, c] : buckets) {
          (void)t;
          CHECK(c == count);  // equal fibers => the phase sum vanishes exactly
        }
      }
    }
}

TEST_CASE("fourier: constants, shifts, round trip") {
  auto g = FiniteAbelianGroup::parse("Z3");
  std::vector<std::complex<double>> ones(3, {1.0, 0.0});
  auto hat = fourier(g, ones);
  CHECK(std::abs(hat[0] - std::complex<double>{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(hat[1]) < 1e-15);
  CHECK(std::abs(hat[2]) < 1e-15);

  // F(xi_m) = xi_m(a) has transform concentrated at -a
  int a = 2;
  std::vector<std::complex<double>> shifted(3);
  for (int m = 0; m < 3; ++m) shifted[m] = phase(g.pairing(m, a));
  auto hat2 = fourier(g, shifted);
  for (int z = 0; z < 3; ++z)
    CHECK(std::abs(hat2[z] - (z == g.neg(a) ? 1.0 : 0.0)) < 1e-14);

  auto g8 = FiniteAbelianGroup::parse("Z2^3");
  Rng rng(42);
  std::vector<std::complex<double>> f(8);
  for (auto& v : f) v = rng.cnum();
  auto back = fourier_inverse(g8, fourier(g8, f));
  for (int i = 0; i < 8; ++i) CHECK(std::abs(back[i] - f[i]) < 1e-12);
}

TEST_CASE("group parse errors") {
  CHECK_THROWS_AS(FiniteAbelianGroup::parse("Q8"), std::invalid_argument);
  CHECK_THROWS_AS(FiniteAbelianGroup::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(FiniteAbelianGroup::parse("Z"), std::invalid_argument);

  // index-set mismatch
  auto g = FiniteAbelianGroup::parse("Z3");
  std::vector<std::complex<double>> wrong(2, {1.0, 0.0});
  CHECK_THROWS_AS(fourier(g, wrong), std::invalid_argument);
  CHECK_THROWS_AS(fourier_inverse(g, wrong), std::invalid_argument);
}
