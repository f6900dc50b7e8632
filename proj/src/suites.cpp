#include "twisted/report.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "twisted/derham.hpp"
#include "twisted/strictify.hpp"
#include "twisted/takai.hpp"

namespace twisted {

namespace {

using Clock = std::chrono::steady_clock;

struct Ctx {
  const SuiteConfig& cfg;
  FiniteAbelianGroup grp;
  std::shared_ptr<const PhaseCochain> phi;
  std::shared_ptr<const CoeffAlgebra> alg;  // configured coefficient algebra
  int extra = 1;
};

int parse_coeff(const std::string& s) {
  if (s == "scalar" || s.empty()) return 1;
  if (s[0] == 'M' || s[0] == 'm') return std::stoi(s.substr(1));
  if (s.rfind("matrix(", 0) == 0) return std::stoi(s.substr(7));
  throw std::invalid_argument("coeff spec: want scalar or M<d>, got \"" + s + "\"");
}

std::shared_ptr<const PhaseCochain> make_cocycle(const FiniteAbelianGroup& g,
                                                 const std::string& name, const Rational& theta) {
  if (name == "trivial") return std::make_shared<PhaseCochain>(trivial_cochain(g, 3));
  if (name == "octonion") {
    if (!(g == FiniteAbelianGroup({2, 2, 2})))
      throw std::invalid_argument("octonion cocycle lives on Z2^3, group is " + g.str());
    return std::make_shared<PhaseCochain>(volume_tricharacter(2, Rational(1, 2)));
  }
  if (name == "volume") {
    const auto& o = g.orders();
    if (o.size() != 3 || o[0] != o[1] || o[1] != o[2])
      throw std::invalid_argument("volume cocycle needs Z_N^3, group is " + g.str());
    return std::make_shared<PhaseCochain>(volume_tricharacter(o[0], theta));
  }
  if (name.rfind("custom:", 0) == 0) {
    std::ifstream in(name.substr(7));
    if (!in) throw std::invalid_argument("cannot open cocycle file " + name.substr(7));
    std::stringstream ss;
    ss << in.rdbuf();
    return std::make_shared<PhaseCochain>(cochain_from_csv(g, 3, ss.str()));
  }
  throw std::invalid_argument("unknown cocycle \"" + name + "\"");
}

Ctx make_ctx(const SuiteConfig& cfg) {
  Ctx c{cfg, FiniteAbelianGroup::parse(cfg.group), nullptr, nullptr, 1};
  c.phi = make_cocycle(c.grp, cfg.cocycle, cfg.theta);
  c.extra = parse_coeff(cfg.coeff);
  c.alg = CoeffAlgebra::matrices(c.extra);
  return c;
}

void put(SuiteReport& rep, const std::string& key, const std::string& val) {
  rep.details.emplace_back(key, val);
}

void defect(SuiteReport& rep, const std::string& key, double d, double tol,
            const std::string& wit = "") {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << d;
  put(rep, key, os.str());
  if (d > rep.worst_defect) {
    rep.worst_defect = d;
    if (d >= tol) rep.witness = wit.empty() ? key : key + ": " + wit;
  }
  if (d >= tol) rep.pass = false;
}

// ---------------------------------------------------------------------------

SuiteReport suite_pentagon(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "pentagon";
  rep.pass = true;
  auto pr = pentagon_check(*c.phi);
  put(rep, "pentagon", pr.ok ? "exact" : "violated");
  if (!pr.ok) {
    rep.pass = false;
    rep.worst_defect = 1.0;
    rep.witness = "quadruple (" + std::to_string(pr.witness[0]) + "," +
                  std::to_string(pr.witness[1]) + "," + std::to_string(pr.witness[2]) + "," +
                  std::to_string(pr.witness[3]) + ")";
  }
  put(rep, "normalized", c.phi->is_normalized() ? "yes" : "no");
  if (!c.phi->is_normalized()) rep.pass = false;
  put(rep, "tricharacter", is_tricharacter(*c.phi) ? "yes" : "no");
  // d(dc) vanishes from degree 2 (coboundaries of random data are cocycles)
  Rng rng = Rng::for_suite(c.cfg.seed, "pentagon");
  PhaseCochain c2(c.grp, 2);
  long long m = std::max<long long>(c.phi->modulus(), 4);
  for (int x = 1; x < c.grp.size(); ++x)
    for (int y = 1; y < c.grp.size(); ++y)
      c2.set(static_cast<long long>(x) * c.grp.size() + y, Rational(rng.below(static_cast<int>(m)), m));
  auto ddc = coboundary(coboundary(c2));
  bool dd0 = true;
  for (long long f = 0; f < ddc.table_size(); ++f) dd0 = dd0 && ddc.at(f).is_zero();
  put(rep, "d(d c) = 0", dd0 ? "exact" : "violated");
  if (!dd0) rep.pass = false;
  return rep;
}

SuiteReport suite_kernels(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "kernels";
  rep.pass = true;
  Rng rng = Rng::for_suite(c.cfg.seed, "kernels");
  auto alg = c.extra == 1 ? CoeffAlgebra::scalars() : CoeffAlgebra::matrices(c.extra);

  double worst = 0.0;
  for (int t = 0; t < c.cfg.trials; ++t) {
    auto k1 = random_kernel(c.grp, c.phi, alg, rng);
    auto k2 = random_kernel(c.grp, c.phi, alg, rng);
    auto k3 = random_kernel(c.grp, c.phi, alg, rng);
    double a = associator_defect(k1, k2, k3);
    if (a >= c.cfg.tol_pipeline && c.cfg.dump_kernels) {
      std::ofstream dump("kernels_dump.json");
      dump << "[" << kernel_to_json(k1) << "," << kernel_to_json(k2) << ","
           << kernel_to_json(k3) << "]\n";
    }
    worst = std::max(worst, a);
    // *-laws
    worst = std::max(worst, max_abs_diff(adjoint(kprod(k1, k2)), kprod(adjoint(k2), adjoint(k1))));
    worst = std::max(worst, max_abs_diff(adjoint(adjoint(k1)), k1));
    // nondegeneracy: k*k = 0 only for k = 0
    if (max_abs(k1) > 1e-6 && max_abs(kprod(adjoint(k1), k1)) <= 0.0) {
      rep.pass = false;
      rep.witness = "kprod(k*, k) vanished on a nonzero kernel";
    }
  }
  defect(rep, "associator+stars(random)", worst, c.cfg.tol_pipeline);

  // G-action covariance on delta kernels, exact statement via phases
  double gworst = 0.0;
  for (int x = 0; x < c.grp.size(); ++x)
    for (int y = 0; y < c.grp.size(); ++y) {
      auto k = random_kernel(c.grp, c.phi, alg, rng);
      auto lhs = g_action(x, g_action(y, k));
      auto t = g_action(c.grp.add(x, y), k);
      // ad(sigma(x,y)): entry (z,w) scaled by phi(x,y,z) / phi(x,y,w)
      for (int z = 0; z < c.grp.size(); ++z)
        for (int w = 0; w < c.grp.size(); ++w) {
          cplx ph = t.tab->at(x, y, z) * std::conj(t.tab->at(x, y, w));
          for (auto& vvv : t.at(z, w).a) vvv *= ph;
        }
      gworst = std::max(gworst, max_abs_diff(lhs, t));
    }
  defect(rep, "theta composition law", gworst, c.cfg.tol_product);
  return rep;
}

SuiteReport suite_crossed(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "crossed";
  rep.pass = true;
  Rng rng = Rng::for_suite(c.cfg.seed, "crossed");
  TwistedSystem s = build_canonical_system(c.grp, c.phi, c.extra);
  auto vr = validate_system(s);
  defect(rep, "canonical validate", vr.defect, c.cfg.tol_pipeline, vr.witness);
  put(rep, "canonical sign", std::to_string(s.canonical_sign));

  double conv = 0.0, adj = 0.0;
  for (int t = 0; t < std::max(2, c.cfg.trials / 4); ++t) {
    auto f = random_element(s, rng);
    auto g2 = random_element(s, rng);
    auto fg = convolve(f, g2, s);
    adj = std::max(adj, max_abs_diff(crossed_adjoint(fg, s),
                                     convolve(crossed_adjoint(g2, s), crossed_adjoint(f, s), s)));
    adj = std::max(adj, max_abs_diff(crossed_adjoint(crossed_adjoint(f, s), s), f));
    (void)fg;
  }
  defect(rep, "adjoint laws", adj, c.cfg.tol_pipeline);

  // transport along a random diagonal unitary gauge
  std::vector<CMat> w;
  for (int x = 0; x < c.grp.size(); ++x)
    w.push_back(x == 0 ? s.alg->id() : random_diag_unitary(s.alg->dim(), rng));
  TwistedSystem su = transported_system(s, w);
  auto vr2 = validate_system(su);
  defect(rep, "transported validate", vr2.defect, c.cfg.tol_pipeline, vr2.witness);
  for (int t = 0; t < 2; ++t) {
    auto f = random_element(s, rng);
    auto g2 = random_element(s, rng);
    auto lhs = exterior_transport(convolve(f, g2, s), w, s);
    auto rhs = convolve(exterior_transport(f, w, s), exterior_transport(g2, w, s), su);
    conv = std::max(conv, max_abs_diff(lhs, rhs));
  }
  defect(rep, "transport intertwines", conv, c.cfg.tol_product);

  // Packer-Raeburn
  TwistedSystem sp = packer_raeburn_stabilize(s);
  auto vr3 = validate_system(sp);
  defect(rep, "stabilized validate", vr3.defect, c.cfg.tol_pipeline, vr3.witness);
  bool central = sp.v_turns.has_value();
  if (central) {
    int n = c.grp.size();
    int dA = s.alg->dim();
    for (int x = 0; x < n && central; ++x)
      for (int y = 0; y < n && central; ++y)
        for (int p = 0; p + 1 < dA && central; ++p)
          for (int z = 0; z < n; ++z)
            if ((*sp.v_turns)[static_cast<size_t>(x) * n + y][p * n + z] !=
                (*sp.v_turns)[static_cast<size_t>(x) * n + y][(p + 1) * n + z]) {
              central = false;
              break;
            }
  }
  put(rep, "stabilized v central", central ? "yes" : "no");
  if (!central) {
    rep.pass = false;
    rep.witness = "stabilized multiplier is not scalar on the coefficient slot";
  }
  return rep;
}

SuiteReport suite_takai(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "takai";
  rep.pass = true;
  Rng rng = Rng::for_suite(c.cfg.seed, "takai");
  TwistedSystem s = c.cfg.cocycle == "trivial"
                        ? trivial_system(c.grp, CoeffAlgebra::matrices(c.extra))
                        : build_canonical_system(c.grp, c.phi, c.extra);
  auto cr = certify_takai(s, c.cfg.trials, c.cfg.tol_pipeline, rng);
  defect(rep, "takai product", cr.worst, c.cfg.tol_pipeline, cr.witness);
  auto dd = certify_double_dual(s, std::max(1, c.cfg.trials / 10), c.cfg.tol_pipeline, rng);
  defect(rep, "double dual", dd.worst, c.cfg.tol_pipeline, dd.witness);
  return rep;
}

SuiteReport suite_split(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "split";
  rep.pass = true;
  Rng rng = Rng::for_suite(c.cfg.seed, "split");
  int cut = c.grp.rank() - 1;
  TwistedSystem s0 = build_canonical_system(c.grp, c.phi, 1);
  TwistedSystem s = subgroup_trivialize(s0, cut);
  auto vr = validate_system(s);
  defect(rep, "gauged validate", vr.defect, c.cfg.tol_pipeline, vr.witness);
  SplitData sd = split_system(s, cut);
  put(rep, "hypotheses+identities", sd.ok ? "exact" : sd.witness);
  if (!sd.ok) {
    rep.pass = false;
    rep.worst_defect = std::max(rep.worst_defect, 1.0);
    rep.witness = sd.witness;
    return rep;
  }
  put(rep, "vtilde identity 1", sd.id1_exact ? "exact" : "violated");
  put(rep, "vtilde identity 2", sd.id2_exact ? "exact" : "violated");
  defect(rep, "hat validate (varphi)", sd.hat_defect, c.cfg.tol_pipeline);

  auto ar = antisymmetrize(sd.varphi);
  if (ar.ok) {
    bool match = *c.phi == ar.result;
    put(rep, "antisymmetrize(varphi) = phi", match ? "exact" : "mismatch");
    if (!match) {
      rep.pass = false;
      rep.witness = "antisymmetrized varphi differs from phi";
    }
  } else {
    put(rep, "antisymmetrize(varphi)", ar.error);
  }

  double rc = 0.0;
  for (int t = 0; t < 2; ++t) {
    auto f = random_element(s, rng);
    auto g2 = random_element(s, rng);
    rc = std::max(rc, repeated_convolve_defect(sd, s, f, g2));
  }
  defect(rep, "repeated convolve", rc, 1e-13);

  PhaseCochain sig(c.grp, 2);
  for (long long fidx = 0; fidx < sig.table_size(); ++fidx)
    sig.set(fidx, Rational(rng.below(8), 8));
  defect(rep, "multiplier shift", multiplier_shift_defect(sd, s, sig, rng, 1),
         c.cfg.tol_pipeline);
  defect(rep, "stabilized multiplicativity", stabilized_multiplicativity_defect(sd, s, rng, 1),
         1e-11);
  return rep;
}

SuiteReport suite_strictify(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "strictify";
  rep.pass = true;
  Rng rng = Rng::for_suite(c.cfg.seed, "strictify");
  double worst = 0.0, assoc = 0.0;
  for (int t = 0; t < std::max(2, c.cfg.trials / 4); ++t) {
    auto k1 = random_field(c.grp, c.phi, rng);
    auto k2 = random_field(c.grp, c.phi, rng);
    auto k3 = random_field(c.grp, c.phi, rng);
    worst = std::max(worst, max_abs_diff(strictify(deformed_field_product(k1, k2)),
                                         fiberwise_product(strictify(k1), strictify(k2))));
    assoc = std::max(assoc, max_abs_diff(deformed_field_product(deformed_field_product(k1, k2), k3),
                                         deformed_field_product(k1, deformed_field_product(k2, k3))));
    worst = std::max(worst, max_abs_diff(strictify_inverse(strictify(k1)), k1));
  }
  defect(rep, "strictified = fiberwise", worst, c.cfg.tol_product);
  defect(rep, "strict associativity", assoc, c.cfg.tol_product);
  return rep;
}

SuiteReport suite_octonions(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "octonions";
  rep.pass = true;
  auto sr = find_octonion_signs();
  put(rep, "sign table", sr.found ? "found" : "search failed");
  if (!sr.found) {
    rep.pass = false;
    rep.worst_defect = 1.0;
    rep.witness = "no sign table";
    return rep;
  }
  Rng rng = Rng::for_suite(c.cfg.seed, "octonions");
  double nworst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> x(8), y(8);
    for (auto& v : x) v = rng.sym();
    for (auto& v : y) v = rng.sym();
    auto z = sr.algebra.mul(x, y);
    double nx = 0, ny = 0, nz = 0;
    for (int i = 0; i < 8; ++i) {
      nx += x[i] * x[i];
      ny += y[i] * y[i];
      nz += z[i] * z[i];
    }
    nworst = std::max(nworst, std::abs(std::sqrt(nz) - std::sqrt(nx) * std::sqrt(ny)));
  }
  defect(rep, "norm multiplicativity", nworst, c.cfg.tol_product);
  auto so = strictified_octonions(sr.algebra);
  std::array<int, 3> wit{};
  bool ok = so.associative_on_basis(&wit);
  put(rep, "strictified associative (64^3)", ok ? "exact" : "violated");
  if (!ok) {
    rep.pass = false;
    rep.witness = "basis triple (" + std::to_string(wit[0]) + "," + std::to_string(wit[1]) + "," +
                  std::to_string(wit[2]) + ")";
  }
  std::array<int, 2> cw{};
  put(rep, "constants not closed", so.constants_not_closed(&cw) ? "witness found" : "closed");
  if (c.cfg.dump_kernels) {
    std::ofstream out("octonion_signs.csv");
    out << sign_table_csv(sr.algebra);
    put(rep, "sign table csv", "octonion_signs.csv");
  }
  return rep;
}

SuiteReport suite_zigzag(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "zigzag";
  rep.pass = true;
  Rational k = c.cfg.zig_k;
  auto cal = calibrate_action(k);
  put(rep, "calibration", cal.ok ? cal.log : "failed");
  if (!cal.ok) {
    rep.pass = false;
    rep.worst_defect = 1.0;
    rep.witness = "no action convention validates";
    return rep;
  }
  ZigzagChoices anti = antisymmetric_choices(k);
  ZigzagChoices fixed;
  fixed.B = anti.B;
  int sA = cal.sign_A, sf = cal.sign_f;
  fixed.A = [anti, sA](const Vec3& n) { return sA > 0 ? anti.A(n) : -anti.A(n); };
  fixed.f = [anti, sf](const Vec3& m, const Vec3& n) {
    return sf > 0 ? anti.f(m, n) : -anti.f(m, n);
  };
  auto za = zigzag(k, fixed, cal.action, 2);
  put(rep, "antisymmetric descent", za.ok ? "exact" : za.log);
  put(rep, "derivation log", za.log);
  if (!za.ok) {
    rep.pass = false;
    rep.witness = "antisymmetric descent failed";
    return rep;
  }
  Rational expect = (k / Rational(6));
  bool anchor = za.cocycle({1, 0, 0}, {0, 1, 0}, {0, 0, 1}) == expect;
  put(rep, "c(e1,e2,e3) = k/6", anchor ? "exact" : "mismatch");
  if (!anchor) rep.pass = false;

  auto zp = zigzag(k, product_choices(k), cal.action, 2);
  put(rep, "product descent", zp.ok ? "exact" : zp.log);
  if (!zp.ok) rep.pass = false;
  if (zp.ok) {
    bool prod_ok = true;
    for (long long a = -2; a <= 2 && prod_ok; ++a)
      for (long long b = -2; b <= 2 && prod_ok; ++b)
        for (long long d3 = -2; d3 <= 2 && prod_ok; ++d3)
          prod_ok = zp.cocycle({a, 1, -1}, {1, b, 2}, {0, 1, d3}) == k * Rational(a * b * d3);
    put(rep, "product rep = k l1 m2 n3", prod_ok ? "exact" : "mismatch");
    if (!prod_ok) rep.pass = false;
  }
  auto g = solve_lattice_cohomologous(za.cocycle, zp.cocycle, 2);
  put(rep, "cohomologous witness", g ? "solved+verified" : "not found");
  if (!g) {
    rep.pass = false;
    rep.witness = "no 2-cochain between the representatives";
  }
  return rep;
}

SuiteReport suite_natorus(const Ctx& c) {
  SuiteReport rep;
  rep.suite = "natorus";
  rep.pass = true;
  const auto& o = c.grp.orders();
  if (o.size() != 3 || o[0] != o[1] || o[1] != o[2])
    throw std::invalid_argument("natorus needs Z_N^3");
  auto tr = nonassociative_torus(o[0], c.cfg.cocycle == "trivial" ? Rational(0) : c.cfg.theta);
  put(rep, "covariance", tr.covariance_exact ? "exact" : "violated");
  put(rep, "tuples", std::to_string(tr.tuples_checked));
  if (!tr.covariance_exact) {
    rep.pass = false;
    rep.worst_defect = 1.0;
    rep.witness = "covariance identity fails";
  }
  defect(rep, "system validate", tr.validation.defect, c.cfg.tol_pipeline,
         tr.validation.witness);
  // sharp associator witness on diagonal-valued delta elements
  Rng rng = Rng::for_suite(c.cfg.seed, "natorus");
  const TwistedSystem& s = tr.system;
  double aw = 0.0;
  for (int t = 0; t < 4; ++t) {
    int x = rng.below(c.grp.size()), y = rng.below(c.grp.size()), z = rng.below(c.grp.size());
    auto f = delta_element(s, x, random_diag_unitary(s.alg->dim(), rng));
    auto g2 = delta_element(s, y, random_diag_unitary(s.alg->dim(), rng));
    auto h = delta_element(s, z, random_diag_unitary(s.alg->dim(), rng));
    auto lhs = convolve(convolve(f, g2, s), h, s);
    auto rhs = convolve(f, convolve(g2, h, s), s);
    for (auto& m : rhs.f)
      for (auto& vv : m.a) vv *= s.tab->at(x, y, z);
    aw = std::max(aw, max_abs_diff(lhs, rhs));
  }
  defect(rep, "delta associator (diagonal values)", aw, c.cfg.tol_product);
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"pentagon", "kernels",   "crossed",
                                                 "takai",    "split",     "strictify",
                                                 "octonions", "zigzag",   "natorus"};
  return names;
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  auto t0 = Clock::now();
  Ctx c = make_ctx(cfg);
  SuiteReport rep;
  if (cfg.suite == "pentagon")
    rep = suite_pentagon(c);
  else if (cfg.suite == "kernels")
    rep = suite_kernels(c);
  else if (cfg.suite == "crossed")
    rep = suite_crossed(c);
  else if (cfg.suite == "takai")
    rep = suite_takai(c);
  else if (cfg.suite == "split")
    rep = suite_split(c);
  else if (cfg.suite == "strictify")
    rep = suite_strictify(c);
  else if (cfg.suite == "octonions")
    rep = suite_octonions(c);
  else if (cfg.suite == "zigzag")
    rep = suite_zigzag(c);
  else if (cfg.suite == "natorus")
    rep = suite_natorus(c);
  else
    throw std::invalid_argument("unknown suite \"" + cfg.suite + "\"");
  rep.ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return rep;
}

std::vector<SuiteReport> run_all(const SuiteConfig& cfg) {
  const auto& names = suite_names();
  std::vector<SuiteReport> out(names.size());
  if (cfg.parallel) {
    std::vector<std::future<SuiteReport>> futs;
    futs.reserve(names.size());
    for (const auto& name : names) {
      SuiteConfig c2 = cfg;
      c2.suite = name;
      futs.push_back(std::async(std::launch::async, [c2] { return run_suite(c2); }));
    }
    for (size_t i = 0; i < futs.size(); ++i) out[i] = futs[i].get();
  } else {
    for (size_t i = 0; i < names.size(); ++i) {
      SuiteConfig c2 = cfg;
      c2.suite = names[i];
      out[i] = run_suite(c2);
    }
  }
  return out;  // fixed suite order keeps merged reports deterministic
}

std::string report_json(const std::vector<SuiteReport>& reps, const SuiteConfig& cfg,
                        bool with_timing) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["config"] = {{"group", cfg.group},   {"cocycle", cfg.cocycle},
                 {"theta", cfg.theta.str()}, {"coeff", cfg.coeff},
                 {"trials", cfg.trials}, {"seed", cfg.seed}};
  j["suites"] = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : reps) {
    nlohmann::ordered_json s;
    s["suite"] = r.suite;
    s["pass"] = r.pass;
    s["worst_defect"] = r.worst_defect;
    s["witness"] = r.witness;
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.details) d[k] = v;
    s["details"] = d;
    if (with_timing) s["ms"] = r.ms;
    j["suites"].push_back(s);
    all = all && r.pass;
  }
  j["pass"] = all;
  return j.dump(2);
}

}  // namespace twisted
