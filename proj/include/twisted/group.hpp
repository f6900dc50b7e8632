#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "twisted/rational.hpp"

namespace twisted {

/// Finite abelian group G = Z_{n1} x ... x Z_{nk}. Elements are handled as
/// flat indices in lexicographic coordinate order; coordinate views are
/// available for parsing and display. The dual group is identified with G
/// through the standard pairing, so character labels are plain elements.
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;
  explicit FiniteAbelianGroup(std::vector<int> orders);

  int size() const { return size_; }
  const std::vector<int>& orders() const { return orders_; }
  int rank() const { return static_cast<int>(orders_.size()); }

  std::vector<int> coords(int index) const;
  int index(const std::vector<int>& coords) const;  // coords reduced mod orders

  int add(int a, int b) const { return add_[a * size_ + b]; }
  int sub(int a, int b) const { return add_[a * size_ + neg_[b]]; }
  int neg(int a) const { return neg_[a]; }
  int identity() const { return 0; }

  /// Turn of the pairing <m, x> = sum_j m_j x_j / n_j; xi_m(x) = exp(2 pi i <m,x>).
  Rational pairing(int m, int x) const;

  /// "Z4^3", "Z2xZ2xZ2", "Z2^2xZ3", "Z12".
  static FiniteAbelianGroup parse(const std::string& spec);
  std::string str() const;

  friend bool operator==(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return a.orders_ == b.orders_;
  }
  friend bool operator!=(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    return !(a == b);
  }

  /// G x H with H's coordinates appended.
  static FiniteAbelianGroup product(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b);

 private:
  std::vector<int> orders_;
  std::vector<int> strides_;
  int size_ = 0;
  std::vector<int> add_;  // size^2 table
  std::vector<int> neg_;
};

/// Coordinate-vector view of a group element (API/parse boundary; the
/// arithmetic lives on indices).
struct GroupElement {
  std::vector<int> coords;
};

std::complex<double> phase(const Rational& turn);

/// Fhat(z) = (1/|G|) sum_m F[m] * xi_m(z), the Fourier transform in the dual
/// variable with normalized dual measure. V needs v += v, v * complex.
template <typename V>
std::vector<V> fourier(const FiniteAbelianGroup& g, const std::vector<V>& f);

/// F(m) = sum_z Fhat[z] * conj(xi_m(z)); exact inverse of `fourier`.
template <typename V>
std::vector<V> fourier_inverse(const FiniteAbelianGroup& g, const std::vector<V>& fhat);

template <typename V>
std::vector<V> fourier(const FiniteAbelianGroup& g, const std::vector<V>& f) {
  if (static_cast<int>(f.size()) != g.size())
    throw std::invalid_argument("fourier: index set does not match group");
  std::vector<V> out;
  out.reserve(g.size());
  double inv = 1.0 / g.size();
  for (int z = 0; z < g.size(); ++z) {
    V acc = f[0] * (phase(g.pairing(0, z)) * inv);
    for (int m = 1; m < g.size(); ++m) acc += f[m] * (phase(g.pairing(m, z)) * inv);
    out.push_back(acc);
  }
  return out;
}

template <typename V>
std::vector<V> fourier_inverse(const FiniteAbelianGroup& g, const std::vector<V>& fhat) {
  if (static_cast<int>(fhat.size()) != g.size())
    throw std::invalid_argument("fourier_inverse: index set does not match group");
  std::vector<V> out;
  out.reserve(g.size());
  for (int m = 0; m < g.size(); ++m) {
    V acc = fhat[0] * std::conj(phase(g.pairing(m, 0)));
    for (int z = 1; z < g.size(); ++z) acc += fhat[z] * std::conj(phase(g.pairing(m, z)));
    out.push_back(acc);
  }
  return out;
}

}  // namespace twisted
