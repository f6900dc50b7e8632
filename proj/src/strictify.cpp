#include "twisted/strictify.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace twisted {

KernelField make_field(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi) {
  if (phi->degree() != 3 || !(phi->group() == g))
    throw std::invalid_argument("make_field: degree-3 cochain on the field group");
  KernelField f;
  f.grp = g;
  f.phi = phi;
  f.tab = make_phase_table(*phi, +1);
  f.k.assign(static_cast<size_t>(g.size()) * g.size() * g.size(), {0.0, 0.0});
  return f;
}

KernelField random_field(const FiniteAbelianGroup& g, std::shared_ptr<const PhaseCochain> phi,
                         Rng& rng) {
  KernelField f = make_field(g, std::move(phi));
  for (auto& v : f.k) v = rng.cnum();
  return f;
}

double max_abs_diff(const KernelField& a, const KernelField& b) {
  double w = 0.0;
  for (size_t i = 0; i < a.k.size(); ++i) w = std::max(w, std::abs(a.k[i] - b.k[i]));
  return w;
}

namespace {

KernelField field_product_impl(const KernelField& k1, const KernelField& k2, bool corrected) {
  if (!(k1.grp == k2.grp) || !(*k1.phi == *k2.phi))
    throw std::invalid_argument("field_product: mismatched fields");
  const auto& g = k1.grp;
  int n = g.size();
  KernelField out = make_field(g, k1.phi);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x) {
        std::complex<double> acc{0.0, 0.0};
        for (int v = 0; v < n; ++v) {
          int uv = g.sub(u, v), vw = g.sub(v, w);
          std::complex<double> ph = k1.tab->at(uv, vw, w);
          if (corrected) ph *= std::conj(k1.tab->at(uv, vw, x));
          acc += k1.at(u, v, g.add(vw, x)) * k2.at(v, w, x) * ph;
        }
        out.at(u, w, x) = acc;
      }
  return out;
}

}  // namespace

KernelField field_product(const KernelField& k1, const KernelField& k2) {
  return field_product_impl(k1, k2, false);
}

KernelField deformed_field_product(const KernelField& k1, const KernelField& k2) {
  return field_product_impl(k1, k2, true);
}

KernelField strictify(const KernelField& k) {
  const auto& g = k.grp;
  int n = g.size();
  KernelField out = make_field(g, k.phi);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x)
        out.at(u, w, x) =
            k.at(u, w, g.add(w, x)) * std::conj(k.tab->at(g.sub(u, w), w, x));
  return out;
}

KernelField strictify_inverse(const KernelField& k) {
  const auto& g = k.grp;
  int n = g.size();
  KernelField out = make_field(g, k.phi);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x)
        out.at(u, w, g.add(w, x)) = k.at(u, w, x) * k.tab->at(g.sub(u, w), w, x);
  return out;
}

KernelField fiberwise_product(const KernelField& k1, const KernelField& k2) {
  const auto& g = k1.grp;
  int n = g.size();
  KernelField out = make_field(g, k1.phi);
  for (int u = 0; u < n; ++u)
    for (int w = 0; w < n; ++w)
      for (int x = 0; x < n; ++x) {
        std::complex<double> acc{0.0, 0.0};
        for (int v = 0; v < n; ++v) acc += k1.at(u, v, x) * k2.at(v, w, x);
        out.at(u, w, x) = acc;
      }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> OctonionAlgebra::mul(const std::vector<double>& x,
                                         const std::vector<double>& y) const {
  int n = grp.size();
  std::vector<double> out(n, 0.0);
  for (int a = 0; a < n; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < n; ++b) out[grp.add(a, b)] += x[a] * y[b] * sign(a, b);
  }
  return out;
}

namespace {

int vol_sign(const FiniteAbelianGroup& g, int a, int b, int c) {
  auto ca = g.coords(a), cb = g.coords(b), cc = g.coords(c);
  long long det = static_cast<long long>(ca[0]) * (cb[1] * cc[2] - cb[2] * cc[1]) -
                  static_cast<long long>(ca[1]) * (cb[0] * cc[2] - cb[2] * cc[0]) +
                  static_cast<long long>(ca[2]) * (cb[0] * cc[1] - cb[1] * cc[0]);
  return (det % 2 + 2) % 2 ? -1 : 1;
}

struct Search {
  FiniteAbelianGroup g{std::vector<int>{2, 2, 2}};
  std::vector<int8_t> F;  // 0 = unset, else +-1
  std::vector<std::pair<int, int>> pairs;
  long long nodes = 0;
  bool done = false;
  std::vector<int8_t> out;

  int sgn(int a, int b) const { return F[static_cast<size_t>(a) * 8 + b]; }
  void set(int a, int b, int8_t v) { F[static_cast<size_t>(a) * 8 + b] = v; }

  // coboundary sign of a determined triple, 0 if not yet determined
  int dF(int a, int b, int c) const {
    int s = 1;
    for (auto [p, q] : {std::pair{a, b}, std::pair{g.add(a, b), c}, std::pair{b, c},
                        std::pair{a, g.add(b, c)}}) {
      if (p == 0 || q == 0) continue;
      int v = sgn(p, q);
      if (v == 0) return 0;
      s *= v;
    }
    return s;
  }

  bool consistent() const {
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        for (int c = 0; c < 8; ++c) {
          int v = dF(a, b, c);
          if (v != 0 && v != vol_sign(g, a, b, c)) return false;
        }
    return true;
  }

  void dfs(size_t i) {
    if (done) return;
    ++nodes;
    if (i == pairs.size()) {
      if (consistent()) {
        out = F;
        done = true;
      }
      return;
    }
    auto [a, b] = pairs[i];
    for (int8_t v : {int8_t{1}, int8_t{-1}}) {
      set(a, b, v);
      set(b, a, static_cast<int8_t>(-v));
      if (consistent()) dfs(i + 1);
      if (done) return;
    }
    set(a, b, 0);
    set(b, a, 0);
  }
};

}  // namespace

OctonionSearchReport find_octonion_signs() {
  Search s;
  s.F.assign(64, 0);
  for (int a = 0; a < 8; ++a) {
    s.set(0, a, 1);
    s.set(a, 0, 1);
  }
  for (int a = 1; a < 8; ++a) s.set(a, a, -1);
  for (int a = 1; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b) s.pairs.emplace_back(a, b);
  s.dfs(0);
  OctonionSearchReport rep;
  rep.nodes_visited = s.nodes;
  if (!s.done) return rep;
  rep.found = true;
  rep.algebra.grp = s.g;
  rep.algebra.F = s.out;
  return rep;
}

StrictifiedOctonions::Term StrictifiedOctonions::mul(int i, int j) const {
  int s = i / 8, a = i % 8, t = j / 8, b = j % 8;
  const auto& g = base.grp;
  if (s != g.add(b, t)) return {};
  Term out;
  out.index = t * 8 + g.add(a, b);
  out.sign = base.sign(a, b) * vol_sign(g, a, b, t);
  return out;
}

bool StrictifiedOctonions::associative_on_basis(std::array<int, 3>* witness) const {
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Term ij = mul(i, j);
      for (int k = 0; k < dim; ++k) {
        Term l = ij.index < 0 ? Term{} : mul(ij.index, k);
        if (ij.index >= 0 && l.index >= 0) l.sign *= ij.sign;
        Term jk = mul(j, k);
        Term r = jk.index < 0 ? Term{} : mul(i, jk.index);
        if (jk.index >= 0 && r.index >= 0) r.sign *= jk.sign;
        bool lz = ij.index < 0 || l.index < 0;
        bool rz = jk.index < 0 || r.index < 0;
        bool equal = (lz && rz) || (!lz && !rz && l.index == r.index && l.sign == r.sign);
        if (!equal) {
          if (witness) *witness = {i, j, k};
          return false;
        }
      }
    }
  return true;
}

bool StrictifiedOctonions::constants_not_closed(std::array<int, 2>* witness) const {
  // constant functions sum over s: (sum_s (s,a)) * (sum_t (t,b)) has
  // coefficient phi(a,b,t) at (t, a+b); non-constant whenever that sign
  // varies with t.
  const auto& g = base.grp;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int first = vol_sign(g, a, b, 0);
      for (int t = 1; t < 8; ++t)
        if (vol_sign(g, a, b, t) != first) {
          if (witness) *witness = {a, b};
          return true;
        }
    }
  return false;
}

StrictifiedOctonions strictified_octonions(const OctonionAlgebra& o) {
  StrictifiedOctonions s;
  s.base = o;
  return s;
}

std::string sign_table_csv(const OctonionAlgebra& o) {
  std::ostringstream os;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) os << (b ? "," : "") << static_cast<int>(o.sign(a, b));
    os << "\n";
  }
  return os.str();
}

}  // namespace twisted
