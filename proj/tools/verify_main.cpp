#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "twisted/report.hpp"

using twisted::SuiteConfig;
using twisted::SuiteReport;

int main(int argc, char** argv) {
  CLI::App app{"verification suites for twisted kernel algebras over finite abelian groups"};
  SuiteConfig cfg;
  std::string theta = "1/2", kstr = "6", json_path, config_path;

  app.add_option("suite", cfg.suite,
                 "pentagon|kernels|crossed|takai|split|strictify|octonions|zigzag|natorus|all")
      ->required();
  app.add_option("--group", cfg.group, "group spec, e.g. Z2^3 or Z2xZ2xZ2");
  app.add_option("--cocycle", cfg.cocycle, "trivial|octonion|volume|custom:<csv>");
  app.add_option("--theta", theta, "volume parameter p/q");
  app.add_option("--coeff", cfg.coeff, "coefficient algebra: scalar or M<d>");
  app.add_option("--trials", cfg.trials, "randomized trials per check");
  app.add_option("--seed", cfg.seed, "master seed (determines every draw)");
  app.add_option("--k", kstr, "level k for the zigzag suite");
  int torus_n = 0;
  app.add_option("--N", torus_n, "shorthand for --group Z<N>^3 (natorus suite)");
  app.add_option("--json", json_path, "write the JSON report here");
  app.add_option("--config", config_path, "JSON config file (same keys as the flags)");
  app.add_flag("--dump-kernels", cfg.dump_kernels, "dump kernels on failure");
  app.add_flag("--parallel", cfg.parallel, "run independent suites concurrently");
  app.add_option("--tol-product", cfg.tol_product, "tolerance for single products");
  app.add_option("--tol-pipeline", cfg.tol_pipeline, "tolerance for composed pipelines");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config " + config_path);
      nlohmann::json j;
      in >> j;
      if (j.contains("group")) cfg.group = j["group"];
      if (j.contains("cocycle")) cfg.cocycle = j["cocycle"];
      if (j.contains("theta")) theta = j["theta"];
      if (j.contains("coeff")) cfg.coeff = j["coeff"];
      if (j.contains("trials")) cfg.trials = j["trials"];
      if (j.contains("seed")) cfg.seed = j["seed"];
      if (j.contains("k")) kstr = j["k"];
    }
    cfg.theta = twisted::Rational::parse(theta);
    cfg.zig_k = twisted::Rational::parse(kstr);
    if (torus_n > 0) {
      cfg.group = "Z" + std::to_string(torus_n) + "^3";
      if (cfg.cocycle == "octonion" && torus_n != 2) cfg.cocycle = "volume";
    }

    std::vector<SuiteReport> reps;
    if (cfg.suite == "all")
      reps = twisted::run_all(cfg);
    else
      reps.push_back(twisted::run_suite(cfg));

    bool pass = true;
    for (const auto& r : reps) {
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite
                << "  worst_defect=" << r.worst_defect;
      if (!r.witness.empty()) std::cout << "  witness: " << r.witness;
      std::cout << "\n";
      for (const auto& [k, v] : r.details) std::cout << "    " << k << ": " << v << "\n";
      pass = pass && r.pass;
    }
    std::string js = twisted::report_json(reps, cfg, /*with_timing=*/false);
    if (!json_path.empty()) {
      std::ofstream out(json_path);
      out << js << "\n";
    }
    return pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
