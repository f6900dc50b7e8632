#include "twisted/derham.hpp"

#include <sstream>
#include <stdexcept>

namespace twisted {

Poly3 Poly3::constant(const Rational& c) { return monomial(c, 0, 0, 0); }

Poly3 Poly3::monomial(const Rational& c, int e1, int e2, int e3) {
  Poly3 p;
  if (!c.is_zero()) p.c_[{e1, e2, e3}] = c;
  return p;
}

void Poly3::add_term(const std::array<int, 3>& e, const Rational& v) {
  if (v.is_zero()) return;
  auto it = c_.find(e);
  if (it == c_.end()) {
    c_[e] = v;
  } else {
    it->second += v;
    if (it->second.is_zero()) c_.erase(it);
  }
}

Poly3 Poly3::operator+(const Poly3& o) const {
  Poly3 out = *this;
  for (const auto& [e, v] : o.c_) out.add_term(e, v);
  return out;
}

Poly3 Poly3::operator-(const Poly3& o) const {
  Poly3 out = *this;
  for (const auto& [e, v] : o.c_) out.add_term(e, -v);
  return out;
}

Poly3 Poly3::operator-() const {
  Poly3 out;
  for (const auto& [e, v] : c_) out.c_[e] = -v;
  return out;
}

Poly3 Poly3::scaled(const Rational& c) const {
  Poly3 out;
  if (c.is_zero()) return out;
  for (const auto& [e, v] : c_) out.c_[e] = v * c;
  return out;
}

Poly3 Poly3::derivative(int axis) const {
  Poly3 out;
  for (const auto& [e, v] : c_) {
    if (e[axis] == 0) continue;
    auto e2 = e;
    e2[axis] -= 1;
    out.add_term(e2, v * Rational(e[axis]));
  }
  return out;
}

namespace {
long long binom(int n, int k) {
  long long r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}
long long ipow(long long b, int e) {
  long long r = 1;
  while (e--) r *= b;
  return r;
}
}  // namespace

Poly3 Poly3::translated(const Vec3& t) const {
  Poly3 out;
  for (const auto& [e, v] : c_) {
    // expand (x1+t1)^e1 (x2+t2)^e2 (x3+t3)^e3
    for (int a = 0; a <= e[0]; ++a)
      for (int b = 0; b <= e[1]; ++b)
        for (int c = 0; c <= e[2]; ++c) {
          Rational coef = v * Rational(binom(e[0], a) * ipow(t[0], e[0] - a)) *
                          Rational(binom(e[1], b) * ipow(t[1], e[1] - b)) *
                          Rational(binom(e[2], c) * ipow(t[2], e[2] - c));
          out.add_term({a, b, c}, coef);
        }
  }
  return out;
}

Rational Poly3::eval(const Vec3& x) const {
  Rational acc(0);
  for (const auto& [e, v] : c_)
    acc += v * Rational(ipow(x[0], e[0]) * ipow(x[1], e[1]) * ipow(x[2], e[2]));
  return acc;
}

bool Poly3::is_zero() const { return c_.empty(); }

bool Poly3::operator==(const Poly3& o) const { return c_ == o.c_; }

std::string Poly3::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, v] : c_) {
    if (!first) os << " + ";
    first = false;
    os << v.str();
    const char* names[3] = {"x1", "x2", "x3"};
    for (int j = 0; j < 3; ++j)
      for (int r = 0; r < e[j]; ++r) os << "*" << names[j];
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {
int ncomp(int q) { return q == 0 || q == 3 ? 1 : 3; }
}  // namespace

PolyForm PolyForm::zero(int q) {
  PolyForm f;
  f.q = q;
  f.comp.assign(ncomp(q), Poly3());
  return f;
}

bool PolyForm::is_zero() const {
  for (const auto& p : comp)
    if (!p.is_zero()) return false;
  return true;
}

PolyForm PolyForm::operator+(const PolyForm& o) const {
  PolyForm out = *this;
  for (size_t i = 0; i < comp.size(); ++i) out.comp[i] = comp[i] + o.comp[i];
  return out;
}

PolyForm PolyForm::operator-(const PolyForm& o) const {
  PolyForm out = *this;
  for (size_t i = 0; i < comp.size(); ++i) out.comp[i] = comp[i] - o.comp[i];
  return out;
}

PolyForm PolyForm::operator-() const {
  PolyForm out = *this;
  for (auto& p : out.comp) p = -p;
  return out;
}

PolyForm PolyForm::scaled(const Rational& c) const {
  PolyForm out = *this;
  for (auto& p : out.comp) p = p.scaled(c);
  return out;
}

PolyForm PolyForm::translated(const Vec3& t) const {
  PolyForm out = *this;
  for (auto& p : out.comp) p = p.translated(t);
  return out;
}

bool PolyForm::operator==(const PolyForm& o) const { return q == o.q && comp == o.comp; }

std::string PolyForm::str() const {
  static const char* bases[4][3] = {{"", nullptr, nullptr},
                                    {"dx1", "dx2", "dx3"},
                                    {"dx1^dx2", "dx1^dx3", "dx2^dx3"},
                                    {"dx1^dx2^dx3", nullptr, nullptr}};
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < comp.size(); ++i) {
    if (comp[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << comp[i].str() << ")";
    if (bases[q][i] && *bases[q][i]) os << " " << bases[q][i];
  }
  return first ? "0" : os.str();
}

PolyForm exterior_d(const PolyForm& w, bool* flagged) {
  if (flagged) *flagged = false;
  switch (w.q) {
    case 0: {
      PolyForm out = PolyForm::zero(1);
      for (int j = 0; j < 3; ++j) out.comp[j] = w.comp[0].derivative(j);
      return out;
    }
    case 1: {
      PolyForm out = PolyForm::zero(2);
      out.comp[0] = w.comp[1].derivative(0) - w.comp[0].derivative(1);  // dx1^dx2
      out.comp[1] = w.comp[2].derivative(0) - w.comp[0].derivative(2);  // dx1^dx3
      out.comp[2] = w.comp[2].derivative(1) - w.comp[1].derivative(2);  // dx2^dx3
      return out;
    }
    case 2: {
      PolyForm out = PolyForm::zero(3);
      out.comp[0] =
          w.comp[0].derivative(2) - w.comp[1].derivative(1) + w.comp[2].derivative(0);
      return out;
    }
    default:
      if (flagged) *flagged = true;
      return PolyForm::zero(3);
  }
}

PolyForm act(LatticeAction a, const Vec3& gamma, const PolyForm& w) {
  Vec3 t = gamma;
  if (a == LatticeAction::kMinus)
    for (auto& v : t) v = -v;
  return w.translated(t);
}

FormCochain group_delta(const FormCochain& f, LatticeAction a) {
  FormCochain out;
  out.p = f.p + 1;
  int p = f.p;
  out.eval = [f, a, p](const std::vector<Vec3>& g) {
    std::vector<Vec3> inner(p);
    for (int j = 0; j < p; ++j) inner[j] = g[j + 1];
    PolyForm acc = act(a, g[0], f.eval(inner));
    int sign = 1;
    for (int i = 1; i <= p; ++i) {
      sign = -sign;
      for (int j = 0; j < p; ++j) inner[j] = g[j < i - 1 ? j : j + 1];
      for (int c = 0; c < 3; ++c) inner[i - 1][c] = g[i - 1][c] + g[i][c];
      PolyForm t = f.eval(inner);
      acc = sign > 0 ? acc + t : acc - t;
    }
    sign = -sign;
    for (int j = 0; j < p; ++j) inner[j] = g[j];
    PolyForm t = f.eval(inner);
    return sign > 0 ? acc + t : acc - t;
  };
  return out;
}

// ---------------------------------------------------------------------------

ZigzagChoices antisymmetric_choices(const Rational& k) {
  ZigzagChoices ch;
  Rational k3 = k / Rational(3), k6 = k / Rational(6);
  ch.B = [k3]() {
    // (k/3)(x1 dx2^dx3 + x2 dx3^dx1 + x3 dx1^dx2)
    PolyForm b = PolyForm::zero(2);
    b.comp[0] = Poly3::monomial(k3, 0, 0, 1);   // x3 dx1^dx2
    b.comp[1] = Poly3::monomial(-k3, 0, 1, 0);  // -x2 dx1^dx3
    b.comp[2] = Poly3::monomial(k3, 1, 0, 0);   // x1 dx2^dx3
    return b;
  };
  ch.A = [k6](const Vec3& n) {
    // (k/6)(n1(x2 dx3 - x3 dx2) + n2(x3 dx1 - x1 dx3) + n3(x1 dx2 - x2 dx1))
    PolyForm a = PolyForm::zero(1);
    a.comp[0] = Poly3::monomial(k6 * Rational(n[1]), 0, 0, 1) -
                Poly3::monomial(k6 * Rational(n[2]), 0, 1, 0);
    a.comp[1] = Poly3::monomial(k6 * Rational(n[2]), 1, 0, 0) -
                Poly3::monomial(k6 * Rational(n[0]), 0, 0, 1);
    a.comp[2] = Poly3::monomial(k6 * Rational(n[0]), 0, 1, 0) -
                Poly3::monomial(k6 * Rational(n[1]), 1, 0, 0);
    return a;
  };
  ch.f = [k6](const Vec3& m, const Vec3& n) {
    PolyForm f0 = PolyForm::zero(0);
    f0.comp[0] = Poly3::monomial(k6 * Rational(m[0] * n[1] - m[1] * n[0]), 0, 0, 1) +
                 Poly3::monomial(k6 * Rational(m[2] * n[0] - m[0] * n[2]), 0, 1, 0) +
                 Poly3::monomial(k6 * Rational(m[1] * n[2] - m[2] * n[1]), 1, 0, 0);
    return f0;
  };
  return ch;
}

ZigzagChoices product_choices(const Rational& k) {
  // B = k x3 dx1^dx2, A_g = k g3 x2 dx1, f_{m,n} = -k m2 n3 x1;
  // descends (under the minus action) to c(l,m,n) = k l1 m2 n3.
  ZigzagChoices ch;
  ch.B = [k]() {
    PolyForm b = PolyForm::zero(2);
    b.comp[0] = Poly3::monomial(k, 0, 0, 1);
    return b;
  };
  ch.A = [k](const Vec3& g) {
    PolyForm a = PolyForm::zero(1);
    a.comp[0] = Poly3::monomial(k * Rational(g[2]), 0, 1, 0);
    return a;
  };
  ch.f = [k](const Vec3& m, const Vec3& n) {
    PolyForm f0 = PolyForm::zero(0);
    f0.comp[0] = Poly3::monomial(-k * Rational(m[1] * n[2]), 1, 0, 0);
    return f0;
  };
  return ch;
}

namespace {

Rational det3r(const Vec3& a, const Vec3& b, const Vec3& c) {
  return Rational(a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                  a[2] * (b[0] * c[1] - b[1] * c[0]));
}

std::vector<Vec3> box_points(int box) {
  std::vector<Vec3> pts;
  for (long long a = -box; a <= box; ++a)
    for (long long b = -box; b <= box; ++b)
      for (long long c = -box; c <= box; ++c) pts.push_back({a, b, c});
  return pts;
}

}  // namespace

CalibrationReport calibrate_action(const Rational& k) {
  CalibrationReport rep;
  std::ostringstream log;
  Rational k6 = k / Rational(6);
  for (LatticeAction a : {LatticeAction::kPlus, LatticeAction::kMinus})
    for (int sA : {1, -1})
      for (int sf : {1, -1}) {
        ZigzagChoices base = antisymmetric_choices(k);
        ZigzagChoices ch;
        ch.B = base.B;
        ch.A = [base, sA](const Vec3& n) {
          return sA > 0 ? base.A(n) : -base.A(n);
        };
        ch.f = [base, sf](const Vec3& m, const Vec3& n) {
          return sf > 0 ? base.f(m, n) : -base.f(m, n);
        };
        ZigzagResult r = zigzag(k, ch, a, 1);
        if (!r.ok) continue;
        bool cmatch = true;
        for (const Vec3& l : box_points(1))
          for (const Vec3& m : box_points(1)) {
            Vec3 n{1, 0, 1};
            if (r.cocycle(l, m, n) != k6 * det3r(l, m, n)) {
              cmatch = false;
              break;
            }
          }
        if (!cmatch) continue;
        rep.ok = true;
        rep.action = a;
        rep.sign_A = sA;
        rep.sign_f = sf;
        log << "selected action x -> x " << (a == LatticeAction::kPlus ? "+" : "-")
            << " gamma with A sign " << sA << ", f sign " << sf;
        rep.log = log.str();
        return rep;
      }
  rep.log = "no convention reproduces the antisymmetric descent";
  return rep;
}

ZigzagResult zigzag(const Rational& k, const ZigzagChoices& choices, LatticeAction action,
                    int box) {
  ZigzagResult res;
  res.action = action;
  std::ostringstream log;
  PolyForm B = choices.B();

  // step 1: dB = H
  PolyForm H = PolyForm::zero(3);
  H.comp[0] = Poly3::constant(k);
  PolyForm r1 = exterior_d(B) - H;
  log << "dB - H = " << r1.str() << "\n";
  if (!r1.is_zero()) {
    res.log = log.str() + "primitive B fails dB = H";
    return res;
  }

  auto pts = box_points(box);

  // step 2: (delta B)_g = dA_g
  for (const Vec3& g : pts) {
    PolyForm lhs = act(action, g, B) - B;
    PolyForm rhs = exterior_d(choices.A(g));
    if (!(lhs == rhs)) {
      res.log = log.str() + "(delta B)_g != dA_g at g=(" + std::to_string(g[0]) + "," +
                std::to_string(g[1]) + "," + std::to_string(g[2]) +
                "), residual " + (lhs - rhs).str();
      return res;
    }
  }
  log << "(delta B)_g = dA_g on the box\n";

  // step 3: (delta A)_{b,g} = d f_{b,g}
  for (const Vec3& b : pts)
    for (const Vec3& g : pts) {
      PolyForm lhs = act(action, b, choices.A(g)) - choices.A({b[0] + g[0], b[1] + g[1], b[2] + g[2]}) +
                     choices.A(b);
      PolyForm rhs = exterior_d(choices.f(b, g));
      if (!(lhs == rhs)) {
        res.log = log.str() + "(delta A) != df at (b,g), residual " + (lhs - rhs).str();
        return res;
      }
    }
  log << "(delta A)_{b,g} = df_{b,g} on the box\n";

  // normalization f(x0)=0 at x0=0
  for (const Vec3& b : pts)
    for (const Vec3& g : pts)
      if (!choices.f(b, g).comp[0].eval({0, 0, 0}).is_zero()) {
        res.log = log.str() + "f is not normalized at x0=0";
        return res;
      }

  // step 4: (delta f)_{a,b,g} is constant; that constant is the cocycle
  auto f = choices.f;
  auto delta_f = [f, action](const Vec3& a, const Vec3& b, const Vec3& g) {
    PolyForm t = act(action, a, f(b, g));
    t = t - f({a[0] + b[0], a[1] + b[1], a[2] + b[2]}, g);
    t = t + f(a, {b[0] + g[0], b[1] + g[1], b[2] + g[2]});
    t = t - f(a, b);
    return t;
  };
  for (const Vec3& a : pts)
    for (const Vec3& b : pts) {
      Vec3 g{1, 1, 0};
      PolyForm t = delta_f(a, b, g);
      Poly3 cst = Poly3::constant(t.comp[0].eval({0, 0, 0}));
      if (!(t.comp[0] == cst)) {
        res.log = log.str() + "(delta f) has x-dependence, residual " + t.str();
        return res;
      }
    }
  log << "(delta f) is x-independent; cocycle extracted at x0 = 0\n";

  res.ok = true;
  res.log = log.str();
  res.cocycle = [f, action](const Vec3& a, const Vec3& b, const Vec3& g) {
    PolyForm t = act(action, a, f(b, g));
    t = t - f({a[0] + b[0], a[1] + b[1], a[2] + b[2]}, g);
    t = t + f(a, {b[0] + g[0], b[1] + g[1], b[2] + g[2]});
    t = t - f(a, b);
    return t.comp[0].eval({0, 0, 0});
  };
  return res;
}

// ---------------------------------------------------------------------------

std::optional<std::function<Rational(const Vec3&, const Vec3&)>> solve_lattice_cohomologous(
    const std::function<Rational(const Vec3&, const Vec3&, const Vec3&)>& c1,
    const std::function<Rational(const Vec3&, const Vec3&, const Vec3&)>& c2, int box) {
  // ansatz: monomials in (m,n) of degree <= 3 with at least one m and one n
  struct Mono {
    std::array<int, 3> em, en;
  };
  std::vector<Mono> monos;
  auto degs = [](int total) {
    std::vector<std::array<int, 3>> out;
    for (int a = 0; a <= total; ++a)
      for (int b = 0; a + b <= total; ++b)
        for (int c = 0; a + b + c <= total; ++c) out.push_back({a, b, c});
    return out;
  };
  for (const auto& em : degs(2))
    for (const auto& en : degs(2)) {
      int dm = em[0] + em[1] + em[2], dn = en[0] + en[1] + en[2];
      if (dm == 0 || dn == 0 || dm + dn > 3) continue;
      monos.push_back({em, en});
    }
  auto eval_mono = [](const Mono& mo, const Vec3& m, const Vec3& n) {
    long long r = 1;
    for (int j = 0; j < 3; ++j) {
      for (int t = 0; t < mo.em[j]; ++t) r *= m[j];
      for (int t = 0; t < mo.en[j]; ++t) r *= n[j];
    }
    return Rational(r);
  };
  auto delta_g_coeff = [&](const Mono& mo, const Vec3& l, const Vec3& m, const Vec3& n) {
    // (delta g)(l,m,n) = g(m,n) - g(l+m,n) + g(l,m+n) - g(l,m), trivial action
    Vec3 lm{l[0] + m[0], l[1] + m[1], l[2] + m[2]};
    Vec3 mn{m[0] + n[0], m[1] + n[1], m[2] + n[2]};
    return eval_mono(mo, m, n) - eval_mono(mo, lm, n) + eval_mono(mo, l, mn) -
           eval_mono(mo, l, m);
  };

  // small deterministic sample of triples for the solve
  std::vector<Vec3> sample;
  for (long long a = -1; a <= 1; ++a)
    for (long long b = -1; b <= 1; ++b)
      for (long long c = -1; c <= 1; ++c) sample.push_back({a, b, c});
  sample.push_back({2, 0, 1});
  sample.push_back({0, 2, -1});
  sample.push_back({1, -2, 2});

  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (size_t i = 0; i < sample.size(); ++i)
    for (size_t j = 0; j < sample.size(); j += 3)
      for (size_t t = 0; t < sample.size(); t += 5) {
        const Vec3 &l = sample[i], &m = sample[j], &n = sample[t];
        std::vector<Rational> row(monos.size());
        for (size_t q = 0; q < monos.size(); ++q) row[q] = delta_g_coeff(monos[q], l, m, n);
        rows.push_back(std::move(row));
        rhs.push_back(c1(l, m, n) - c2(l, m, n));
      }

  // exact Gaussian elimination over Q
  size_t ncols = monos.size();
  size_t r = 0;
  std::vector<int> pivot_col;
  for (size_t col = 0; col < ncols && r < rows.size(); ++col) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][col].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    std::swap(rhs[piv], rhs[r]);
    Rational inv = Rational(1) / rows[r][col];
    for (size_t c2i = col; c2i < ncols; ++c2i) rows[r][c2i] = rows[r][c2i] * inv;
    rhs[r] = rhs[r] * inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][col].is_zero()) continue;
      Rational f = rows[i][col];
      for (size_t c2i = col; c2i < ncols; ++c2i) rows[i][c2i] -= f * rows[r][c2i];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++r;
  }
  for (size_t i = r; i < rows.size(); ++i)
    if (!rhs[i].is_zero()) return std::nullopt;
  std::vector<Rational> coef(ncols, Rational(0));
  for (size_t i = 0; i < r; ++i) coef[pivot_col[i]] = rhs[i];

  auto g = [monos, coef, eval_mono](const Vec3& m, const Vec3& n) {
    Rational acc(0);
    for (size_t q = 0; q < monos.size(); ++q)
      if (!coef[q].is_zero()) acc += coef[q] * eval_mono(monos[q], m, n);
    return acc;
  };
  // exhaustive verification on the box
  auto pts = box_points(box);
  for (const Vec3& l : pts)
    for (const Vec3& m : pts)
      for (const Vec3& n : pts) {
        Vec3 lm{l[0] + m[0], l[1] + m[1], l[2] + m[2]};
        Vec3 mn{m[0] + n[0], m[1] + n[1], m[2] + n[2]};
        Rational dg = g(m, n) - g(lm, n) + g(l, mn) - g(l, m);
        if (dg != c1(l, m, n) - c2(l, m, n)) return std::nullopt;
      }
  return g;
}

// ---------------------------------------------------------------------------

TorusReport nonassociative_torus(int N, const Rational& theta) {
  TorusReport rep;
  auto vol = std::make_shared<PhaseCochain>(volume_tricharacter(N, theta));
  const auto& g = vol->group();
  int n = g.size();
  // covariance of the diagonal multiplication operators u(b,c) under the
  // right-regular adjoint action: for all (w,a,b,c),
  //   sigma(a,b,c) + sigma(w,a,b) + sigma(w,a+b,c) = sigma(w+a,b,c) + sigma(w,a,b+c)
  rep.covariance_exact = true;
  for (int w = 0; w < n && rep.covariance_exact; ++w)
    for (int a = 0; a < n && rep.covariance_exact; ++a)
      for (int b = 0; b < n; ++b) {
        bool stop = false;
        for (int c = 0; c < n; ++c) {
          Rational lhs = (vol->at3(a, b, c) + vol->at3(w, a, b) + vol->at3(w, g.add(a, b), c)).mod1();
          Rational rhs = (vol->at3(g.add(w, a), b, c) + vol->at3(w, a, g.add(b, c))).mod1();
          ++rep.tuples_checked;
          if (lhs != rhs) {
            rep.covariance_exact = false;
            stop = true;
            break;
          }
        }
        if (stop) break;
      }
  rep.system = build_canonical_system(g, vol);
  rep.validation = validate_system(rep.system);
  return rep;
}

}  // namespace twisted
