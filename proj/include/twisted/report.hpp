#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "twisted/rational.hpp"

namespace twisted {

struct SuiteConfig {
  std::string suite = "all";
  std::string group = "Z2^3";
  std::string cocycle = "octonion";  // trivial | octonion | volume | custom:<csv>
  Rational theta{1, 2};
  std::string coeff = "scalar";  // scalar | M<d>
  int trials = 20;
  uint64_t seed = 1;
  double tol_exact = 0.0;
  double tol_product = 1e-12;
  double tol_pipeline = 1e-10;
  Rational zig_k{6, 1};
  bool dump_kernels = false;
  bool parallel = false;
};

struct SuiteReport {
  std::string suite;
  bool pass = false;
  double worst_defect = 0.0;
  std::string witness;
  double ms = 0.0;
  // named sub-results in execution order
  std::vector<std::pair<std::string, std::string>> details;
};

/// Dispatches to the named suite. Throws std::invalid_argument for unknown
/// suites or malformed specs.
SuiteReport run_suite(const SuiteConfig& cfg);

/// All suites under one config (suite name "all").
std::vector<SuiteReport> run_all(const SuiteConfig& cfg);

/// Versioned machine-readable report; timing fields only when requested, so
/// reports are byte-identical across runs of the same config.
std::string report_json(const std::vector<SuiteReport>& reps, const SuiteConfig& cfg,
                        bool with_timing);

const std::vector<std::string>& suite_names();

}  // namespace twisted
