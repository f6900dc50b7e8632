#pragma once

#include <complex>
#include <cstdint>
#include <string>

namespace twisted {

// xorshift64* generator. The exact update rule is part of the report contract:
//   s ^= s >> 12; s ^= s << 25; s ^= s >> 27; out = s * 0x2545F4914F6CDD1D.
// Each suite derives its stream from the master seed and the suite name so
// reports are reproducible independently of suite ordering.
class Rng {
 public:
  explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9E3779B97F4A7C15ull) {}

  uint64_t next() {
    s_ ^= s_ >> 12;
    s_ ^= s_ << 25;
    s_ ^= s_ >> 27;
    return s_ * 0x2545F4914F6CDD1Dull;
  }

  // Uniform in [0,1), 53-bit resolution.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform in [-1,1].
  double sym() { return 2.0 * unit() - 1.0; }
  std::complex<double> cnum() {
    double re = sym();
    return {re, sym()};
  }
  // Uniform integer in [0, n).
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }

  static uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }
  static Rng for_suite(uint64_t master_seed, const std::string& suite) {
    return Rng(master_seed ^ fnv1a(suite));
  }

 private:
  uint64_t s_;
};

}  // namespace twisted
