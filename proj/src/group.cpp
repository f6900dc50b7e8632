#include "twisted/group.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace twisted {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<int> orders) : orders_(std::move(orders)) {
  if (orders_.empty()) throw std::invalid_argument("group: empty order list");
  size_ = 1;
  for (int n : orders_) {
    if (n <= 0) throw std::invalid_argument("group: orders must be positive");
    size_ *= n;
  }
  strides_.assign(orders_.size(), 1);
  for (int j = static_cast<int>(orders_.size()) - 2; j >= 0; --j)
    strides_[j] = strides_[j + 1] * orders_[j + 1];

  add_.resize(static_cast<size_t>(size_) * size_);
  neg_.resize(size_);
  for (int a = 0; a < size_; ++a) {
    auto ca = coords(a);
    for (auto& c : ca) c = -c;
    neg_[a] = index(ca);
  }
  for (int a = 0; a < size_; ++a) {
    auto ca = coords(a);
    for (int b = 0; b < size_; ++b) {
      auto cb = coords(b);
      for (size_t j = 0; j < cb.size(); ++j) cb[j] += ca[j];
      add_[a * size_ + b] = index(cb);
    }
  }
}

std::vector<int> FiniteAbelianGroup::coords(int index) const {
  std::vector<int> c(orders_.size());
  for (size_t j = 0; j < orders_.size(); ++j) {
    c[j] = (index / strides_[j]) % orders_[j];
  }
  return c;
}

int FiniteAbelianGroup::index(const std::vector<int>& coords) const {
  if (coords.size() != orders_.size()) throw std::invalid_argument("group: coordinate rank");
  int idx = 0;
  for (size_t j = 0; j < orders_.size(); ++j) {
    int c = coords[j] % orders_[j];
    if (c < 0) c += orders_[j];
    idx += c * strides_[j];
  }
  return idx;
}

Rational FiniteAbelianGroup::pairing(int m, int x) const {
  auto cm = coords(m), cx = coords(x);
  Rational t(0);
  for (size_t j = 0; j < orders_.size(); ++j)
    t += Rational(static_cast<long long>(cm[j]) * cx[j], orders_[j]);
  return t.mod1();
}

FiniteAbelianGroup FiniteAbelianGroup::parse(const std::string& spec) {
  std::vector<int> orders;
  size_t i = 0;
  auto fail = [&spec]() -> int {
    throw std::invalid_argument("group: cannot parse \"" + spec + "\" (want e.g. Z4^3, Z2xZ2)");
  };
  while (i < spec.size()) {
    if (spec[i] != 'Z' && spec[i] != 'z') fail();
    ++i;
    size_t start = i;
    while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) ++i;
    if (start == i) fail();
    int n = std::stoi(spec.substr(start, i - start));
    int rep = 1;
    if (i < spec.size() && spec[i] == '^') {
      ++i;
      size_t rs = i;
      while (i < spec.size() && std::isdigit(static_cast<unsigned char>(spec[i]))) ++i;
      if (rs == i) fail();
      rep = std::stoi(spec.substr(rs, i - rs));
    }
    for (int r = 0; r < rep; ++r) orders.push_back(n);
    if (i < spec.size()) {
      if (spec[i] != 'x' && spec[i] != 'X' && spec[i] != '*') fail();
      ++i;
    }
  }
  if (orders.empty()) fail();
  return FiniteAbelianGroup(std::move(orders));
}

std::string FiniteAbelianGroup::str() const {
  std::string s;
  for (size_t j = 0; j < orders_.size(); ++j) {
    if (j) s += "x";
    s += "Z" + std::to_string(orders_[j]);
  }
  return s;
}

FiniteAbelianGroup FiniteAbelianGroup::product(const FiniteAbelianGroup& a,
                                               const FiniteAbelianGroup& b) {
  std::vector<int> orders = a.orders();
  orders.insert(orders.end(), b.orders().begin(), b.orders().end());
  return FiniteAbelianGroup(std::move(orders));
}

std::complex<double> phase(const Rational& turn) {
  double t = turn.value();
  return {std::cos(2.0 * M_PI * t), std::sin(2.0 * M_PI * t)};
}

}  // namespace twisted
