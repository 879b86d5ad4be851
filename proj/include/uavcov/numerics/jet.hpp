#pragma once

// Truncated Taylor series ("jets"). A Jet of order K holds the coefficients
// f(x0), f'(x0), f''(x0)/2!, ..., f^(K)(x0)/K! of a function around a fixed
// expansion point. Arithmetic propagates all K+1 coefficients exactly (up to
// rounding), which gives high-order derivatives without finite differences.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "uavcov/error.hpp"
#include "uavcov/numerics/special.hpp"

namespace uavcov::numerics {

class Jet {
public:
  Jet() : coeffs_(1, 0.0) {}
  explicit Jet(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw ShapeError("jet needs at least one coefficient");
  }
  Jet(std::initializer_list<double> coeffs) : Jet(std::vector<double>(coeffs)) {}

  static Jet constant(double value, int order) {
    check_order(order);
    std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = value;
    return Jet(std::move(c));
  }

  // The identity function expanded around `center`.
  static Jet variable(double center, int order) {
    Jet j = constant(center, order);
    if (order > 0) j.coeffs_[1] = 1.0;
    return j;
  }

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double value() const noexcept { return coeffs_[0]; }
  double operator[](std::size_t k) const { return coeffs_.at(k); }
  double& operator[](std::size_t k) { return coeffs_.at(k); }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  // k-th derivative at the expansion point.
  double derivative(int k) const { return coeffs_.at(static_cast<std::size_t>(k)) * factorial(k); }

  Jet& operator+=(const Jet& o) {
    same_order(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    same_order(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    return *this;
  }
  Jet& operator*=(double s) noexcept {
    for (double& c : coeffs_) c *= s;
    return *this;
  }
  Jet& operator+=(double s) noexcept {
    coeffs_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, Jet a) { return (a *= -1.0) += s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.same_order(b);
    const std::size_t n = a.coeffs_.size();
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Jet(std::move(c));
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    a.same_order(b);
    if (b.coeffs_[0] == 0.0) throw DomainError("jet division by a series with zero constant term");
    const std::size_t n = a.coeffs_.size();
    std::vector<double> q(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      double s = a.coeffs_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.coeffs_[j] * q[k - j];
      q[k] = s / b.coeffs_[0];
    }
    return Jet(std::move(q));
  }

  friend Jet operator/(double s, const Jet& b) { return Jet::constant(s, b.order()) / b; }

private:
  static void check_order(int order) {
    if (order < 0) throw InvalidParameter("jet order must be non-negative");
  }
  void same_order(const Jet& o) const {
    if (o.coeffs_.size() != coeffs_.size()) throw ShapeError("jets of different order combined");
  }

  std::vector<double> coeffs_;
};

inline double quad_norm(const Jet& j) noexcept {
  double m = 0.0;
  for (double c : j.coeffs()) m = std::max(m, std::fabs(c));
  return m;
}

inline Jet exp(const Jet& a) {
  const auto& x = a.coeffs();
  const std::size_t n = x.size();
  std::vector<double> e(n, 0.0);
  e[0] = std::exp(x[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * x[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return Jet(std::move(e));
}

inline Jet log(const Jet& a) {
  const auto& x = a.coeffs();
  if (!(x[0] > 0.0)) throw DomainError("jet log of a series with non-positive constant term");
  const std::size_t n = x.size();
  std::vector<double> l(n, 0.0);
  l[0] = std::log(x[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double s = x[k];
    for (std::size_t j = 1; j < k; ++j) s -= static_cast<double>(j) * l[j] * x[k - j] / static_cast<double>(k);
    l[k] = s / x[0];
  }
  return Jet(std::move(l));
}

// a^p for real p; requires a positive constant term unless p is a
// non-negative integer.
inline Jet pow(const Jet& a, double p) {
  const auto& x = a.coeffs();
  const std::size_t n = x.size();
  if (x[0] == 0.0) {
    if (p >= 0.0 && p == std::floor(p)) {
      Jet r = Jet::constant(1.0, a.order());
      for (int i = 0; i < static_cast<int>(p); ++i) r = r * a;
      return r;
    }
    throw DomainError("jet pow: non-integer power of a series with zero constant term");
  }
  if (x[0] < 0.0 && p != std::floor(p)) throw DomainError("jet pow: non-integer power of a negative value");
  std::vector<double> b(n, 0.0);
  b[0] = std::pow(x[0], p);
  for (std::size_t k = 1; k < n; ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j)
      s += ((p + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * x[j] * b[k - j];
    b[k] = s / (static_cast<double>(k) * x[0]);
  }
  return Jet(std::move(b));
}

inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

namespace detail {
inline void sin_cos(const Jet& a, Jet& s, Jet& c) {
  const auto& x = a.coeffs();
  const std::size_t n = x.size();
  std::vector<double> sv(n, 0.0), cv(n, 0.0);
  sv[0] = std::sin(x[0]);
  cv[0] = std::cos(x[0]);
  for (std::size_t k = 1; k < n; ++k) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      ss += static_cast<double>(j) * x[j] * cv[k - j];
      cc -= static_cast<double>(j) * x[j] * sv[k - j];
    }
    sv[k] = ss / static_cast<double>(k);
    cv[k] = cc / static_cast<double>(k);
  }
  s = Jet(std::move(sv));
  c = Jet(std::move(cv));
}
}  // namespace detail

inline Jet sin(const Jet& a) {
  Jet s, c;
  detail::sin_cos(a, s, c);
  return s;
}

inline Jet cos(const Jet& a) {
  Jet s, c;
  detail::sin_cos(a, s, c);
  return c;
}

/// Re-expands a jet around the same point in the variable eps = dx / factor,
/// i.e. multiplies coefficient k by factor^k.
inline Jet rescale(const Jet& a, double factor) {
  std::vector<double> c = a.coeffs();
  double f = 1.0;
  for (double& x : c) {
    x *= f;
    f *= factor;
  }
  return Jet(std::move(c));
}

/// Taylor jet of `f` of the given order around `center`. `f` must be written
/// generically (templated or overloaded) so it can be called with a Jet.
template <class F>
Jet jet_eval(F&& f, double center, int order) {
  return f(Jet::variable(center, order));
}

}  // namespace uavcov::numerics
