#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace twisted {

// Exact rational arithmetic for phases ("turns", phase = exp(2*pi*i*turn)) and
// polynomial coefficients. Intermediates go through __int128; denominators in
// this project stay tiny, so int64 storage is ample.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("Rational: division by zero");
    return make128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }
  Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
  Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }
  Rational& operator*=(const Rational& o) { *this = *this * o; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }

  // Representative in [0,1); the canonical form for turns.
  Rational mod1() const {
    long long m = num_ % den_;
    if (m < 0) m += den_;
    Rational r;
    r.num_ = m;
    r.den_ = den_;
    return r;
  }

  // Parses "p", "-p", "p/q".
  static Rational parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stoll(s));
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  using i128 = __int128;
  static Rational make128(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) { n = -n; d = -d; }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) { n /= g; d /= g; }
    Rational r;
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("Rational: overflow");
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }
  static i128 gcd128(i128 a, i128 b) {
    while (b) { i128 t = a % b; a = b; b = t; }
    return a < 0 ? -a : a;
  }
  void reduce() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
  }

  long long num_{0};
  long long den_{1};
};

inline long long lcm_ll(long long a, long long b) { return a / std::gcd(a, b) * b; }

}  // namespace twisted
