#include "twisted/cochain.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "twisted/zmodsolve.hpp"

namespace twisted {

PhaseCochain::PhaseCochain(FiniteAbelianGroup g, int degree)
    : grp_(std::move(g)), degree_(degree), n_(grp_.size()) {
  if (degree < 1) throw std::invalid_argument("cochain: degree must be >= 1");
  long long sz = 1;
  for (int i = 0; i < degree; ++i) sz *= n_;
  table_.assign(sz, Rational(0));
}

long long PhaseCochain::flatten(const std::vector<int>& args) const {
  if (static_cast<int>(args.size()) != degree_) throw std::invalid_argument("cochain: arity");
  long long f = 0;
  for (int a : args) f = f * n_ + a;
  return f;
}

std::vector<int> PhaseCochain::unflatten(long long flat) const {
  std::vector<int> a(degree_);
  for (int i = degree_ - 1; i >= 0; --i) {
    a[i] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return a;
}

long long PhaseCochain::modulus() const {
  long long m = 1;
  for (const auto& t : table_) m = lcm_ll(m, t.den());
  return m;
}

bool PhaseCochain::is_normalized() const {
  for (long long f = 0; f < table_size(); ++f) {
    if (table_[f].is_zero()) continue;
    for (int a : unflatten(f))
      if (a == grp_.identity()) return false;
  }
  return true;
}

PhaseCochain trivial_cochain(const FiniteAbelianGroup& g, int degree) {
  return PhaseCochain(g, degree);
}

PhaseCochain coboundary(const PhaseCochain& c) {
  const auto& g = c.group();
  int p = c.degree();
  PhaseCochain out(g, p + 1);
  std::vector<int> args(p + 1), inner(p);
  for (long long f = 0; f < out.table_size(); ++f) {
    args = out.unflatten(f);
    // negative of the standard alternating sum
    Rational acc(0);
    // term i=0: f(x2..x_{p+1})
    for (int j = 0; j < p; ++j) inner[j] = args[j + 1];
    acc -= c.at(c.flatten(inner));
    int sign = 1;  // standard sign of term i (will be negated overall)
    for (int i = 1; i <= p; ++i) {
      sign = -sign;
      for (int j = 0; j < p; ++j) inner[j] = args[j < i - 1 ? j : j + 1];
      inner[i - 1] = g.add(args[i - 1], args[i]);
      if (sign > 0)
        acc -= c.at(c.flatten(inner));
      else
        acc += c.at(c.flatten(inner));
    }
    sign = -sign;
    for (int j = 0; j < p; ++j) inner[j] = args[j];
    if (sign > 0)
      acc -= c.at(c.flatten(inner));
    else
      acc += c.at(c.flatten(inner));
    out.set(f, acc);
  }
  return out;
}

PentagonReport pentagon_check(const PhaseCochain& phi) {
  if (phi.degree() != 3) throw std::invalid_argument("pentagon_check: degree 3 expected");
  const auto& g = phi.group();
  int n = g.size();
  PentagonReport rep;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          Rational lhs = (phi.at3(x, y, z) + phi.at3(x, g.add(y, z), w) + phi.at3(y, z, w)).mod1();
          Rational rhs = (phi.at3(g.add(x, y), z, w) + phi.at3(x, y, g.add(z, w))).mod1();
          if (lhs != rhs) {
            rep.ok = false;
            rep.witness = {x, y, z, w};
            return rep;
          }
        }
  return rep;
}

PhaseCochain volume_tricharacter(int N, const Rational& theta) {
  if (!(theta * Rational(N)).is_integer())
    throw std::invalid_argument("volume_tricharacter: theta*N must be an integer");
  FiniteAbelianGroup g({N, N, N});
  PhaseCochain out(g, 3);
  int n = g.size();
  auto det = [&](const std::vector<int>& a, const std::vector<int>& b,
                 const std::vector<int>& c) -> long long {
    return static_cast<long long>(a[0]) * (b[1] * c[2] - b[2] * c[1]) -
           static_cast<long long>(a[1]) * (b[0] * c[2] - b[2] * c[0]) +
           static_cast<long long>(a[2]) * (b[0] * c[1] - b[1] * c[0]);
  };
  for (int x = 0; x < n; ++x) {
    auto cx = g.coords(x);
    for (int y = 0; y < n; ++y) {
      auto cy = g.coords(y);
      for (int z = 0; z < n; ++z) {
        out.set((static_cast<long long>(x) * n + y) * n + z,
                (theta * Rational(det(cx, cy, g.coords(z)))).mod1());
      }
    }
  }
  return out;
}

bool is_tricharacter(const PhaseCochain& phi) {
  if (phi.degree() != 3) return false;
  const auto& g = phi.group();
  int n = g.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const Rational& t = phi.at3(x, y, z);
        if ((x == y || y == z || x == z) && !t.is_zero()) return false;
        if ((t + phi.at3(y, x, z)).mod1() != Rational(0)) return false;
        if ((t + phi.at3(x, z, y)).mod1() != Rational(0)) return false;
        for (int x2 = 0; x2 < n; ++x2)
          if ((phi.at3(g.add(x, x2), y, z) - t - phi.at3(x2, y, z)).mod1() != Rational(0))
            return false;
      }
  return true;
}

AntisymmetrizeReport antisymmetrize(const PhaseCochain& phi) {
  if (phi.degree() != 3) throw std::invalid_argument("antisymmetrize: degree 3 expected");
  const auto& g = phi.group();
  int n = g.size();
  long long M = phi.modulus();
  AntisymmetrizeReport rep;
  rep.result = PhaseCochain(g, 3);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const Rational& t1 = phi.at3(x, y, z);
        const Rational& t2 = phi.at3(y, z, x);
        const Rational& t3 = phi.at3(z, x, y);
        Rational r;
        if (t1 == t2 && t2 == t3) {
          r = t1;  // cube root of an equal-cyclic cube is the term itself
        } else {
          Rational s = t1 + t2 + t3;
          int hits = 0;
          for (int m = 0; m < 3; ++m) {
            Rational cand = (s / Rational(3) + Rational(m, 3)).mod1();
            if (M % cand.den() == 0) {
              r = cand;
              ++hits;
            }
          }
          if (hits != 1) {
            rep.ok = false;
            rep.witness = {x, y, z};
            rep.error = hits == 0 ? "phase sum not divisible by 3 in (1/M)Z"
                                  : "cube-root branch ambiguous in (1/M)Z";
            return rep;
          }
        }
        rep.result.set((static_cast<long long>(x) * n + y) * n + z, r);
      }
  return rep;
}

std::optional<PhaseCochain> solve_cohomologous(const PhaseCochain& phi1,
                                               const PhaseCochain& phi2) {
  if (phi1.degree() != 3 || phi2.degree() != 3 || !(phi1.group() == phi2.group()))
    throw std::invalid_argument("solve_cohomologous: two degree-3 cochains on one group");
  const auto& g = phi1.group();
  int n = g.size();
  long long M = lcm_ll(phi1.modulus(), phi2.modulus());

  // Unknowns: c(x,y), x != e, y != e (normalization pins the rest to 0).
  auto uidx = [&](int x, int y) { return (x - 1) * (n - 1) + (y - 1); };
  int ncols = (n - 1) * (n - 1);
  std::vector<std::vector<long long>> rows;
  std::vector<long long> rhs;
  rows.reserve(static_cast<size_t>(n) * n * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        std::vector<long long> row(ncols, 0);
        auto acc = [&](int a, int b, long long s) {
          if (a != 0 && b != 0) row[uidx(a, b)] = ((row[uidx(a, b)] + s) % M + M) % M;
        };
        acc(x, y, 1);
        acc(g.add(x, y), z, 1);
        acc(x, g.add(y, z), M - 1);
        acc(y, z, M - 1);
        Rational d = (phi1.at3(x, y, z) - phi2.at3(x, y, z)).mod1();
        rows.push_back(std::move(row));
        rhs.push_back((d * Rational(M)).num());  // integral since den | M
      }
  auto sol = solve_mod(rows, rhs, M);
  if (!sol) return std::nullopt;
  PhaseCochain c(g, 2);
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y)
      c.set(static_cast<long long>(x) * n + y, Rational((*sol)[uidx(x, y)], M));
  // Soundness gate: d c must reproduce the difference exactly.
  PhaseCochain dc = coboundary(c);
  for (long long f = 0; f < dc.table_size(); ++f)
    if (dc.at(f) != (phi1.at(f) - phi2.at(f)).mod1()) return std::nullopt;
  return c;
}

PhaseCochain mackey_multiplier(const FiniteAbelianGroup& g) {
  FiniteAbelianGroup h = FiniteAbelianGroup::product(g, g);
  PhaseCochain out(h, 2);
  int nh = h.size();
  int k = g.rank();
  for (int a = 0; a < nh; ++a) {
    auto ca = h.coords(a);
    std::vector<int> eta(ca.begin() + k, ca.end());
    int m = g.index(eta);
    for (int b = 0; b < nh; ++b) {
      auto cb = h.coords(b);
      std::vector<int> x(cb.begin(), cb.begin() + k);
      out.set(static_cast<long long>(a) * nh + b, g.pairing(m, g.index(x)));
    }
  }
  return out;
}

PhaseCochain mutate(const PhaseCochain& phi, long long flat, const Rational& delta) {
  PhaseCochain out = phi;
  out.set(flat, (out.at(flat) + delta).mod1());
  return out;
}

std::shared_ptr<const PhaseTable3> make_phase_table(const PhaseCochain& phi, int sgn) {
  if (phi.degree() != 3) throw std::invalid_argument("phase table: degree 3 expected");
  auto t = std::make_shared<PhaseTable3>();
  t->n = phi.group().size();
  t->p.resize(phi.table_size());
  for (long long f = 0; f < phi.table_size(); ++f)
    t->p[f] = phase(sgn > 0 ? phi.at(f) : -phi.at(f));
  return t;
}

std::string cochain_to_csv(const PhaseCochain& c) {
  std::ostringstream os;
  for (long long f = 0; f < c.table_size(); ++f) {
    for (int a : c.unflatten(f)) os << a << ",";
    os << c.at(f).num() << "," << c.at(f).den() << "\n";
  }
  return os.str();
}

std::string cochain_to_json(const PhaseCochain& c) {
  std::ostringstream os;
  os << "[";
  for (long long f = 0; f < c.table_size(); ++f) {
    if (f) os << ",";
    os << "{\"args\":[";
    auto a = c.unflatten(f);
    for (size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << "],\"num\":" << c.at(f).num() << ",\"den\":" << c.at(f).den() << "}";
  }
  os << "]";
  return os.str();
}

PhaseCochain cochain_from_csv(const FiniteAbelianGroup& g, int degree, const std::string& csv) {
  PhaseCochain out(g, degree);
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<long long> vals;
    while (std::getline(ls, tok, ',')) vals.push_back(std::stoll(tok));
    if (static_cast<int>(vals.size()) != degree + 2)
      throw std::invalid_argument("cochain csv: bad row \"" + line + "\"");
    std::vector<int> args(vals.begin(), vals.begin() + degree);
    for (int& a : args) {
      // reduce coordinates are not needed; args are element indices
      if (a < 0 || a >= g.size()) throw std::invalid_argument("cochain csv: index out of range");
    }
    out.set(out.flatten(args), Rational(vals[degree], vals[degree + 1]));
  }
  return out;
}

}  // namespace twisted
