#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "uavcov/error.hpp"

namespace uavcov::numerics {

namespace detail {

// Lanczos approximation, g = 7, nine terms (relative error ~1e-15).
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline double lanczos_sum(double xm1) noexcept {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (xm1 + static_cast<double>(i));
  return a;
}

}  // namespace detail

/// Euler Gamma function for x > 0.
inline double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  if (x < 0.5) return gamma_fn(x + 1.0) / x;
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::kLanczosG + 0.5;
  // t^(x-1/2) is split in two halves so the power does not overflow before e^-t.
  const double half = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) *
         detail::lanczos_sum(xm1);
}

/// log Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  const double xm1 = x - 1.0;
  const double t = xm1 + detail::kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (xm1 + 0.5) * std::log(t) - t +
         std::log(detail::lanczos_sum(xm1));
}

namespace detail {

// erf(z) = 2/sqrt(pi) e^{-z^2} sum_n 2^n z^{2n+1} / (2n+1)!!, all terms positive.
inline double erf_series(double z) noexcept {
  const double z2 = z * z;
  double term = z;
  double sum = z;
  for (int n = 0; n < 500; ++n) {
    term *= 2.0 * z2 / (2.0 * n + 3.0);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-z2) * sum;
}

// erfc(z) via its continued fraction (modified Lentz), accurate for z >= 2.
inline double erfc_continued_fraction(double z) noexcept {
  constexpr double tiny = 1e-300;
  double f = z;
  double c = z;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = z + a * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z * z) / (std::sqrt(std::numbers::pi) * f);
}

inline constexpr double kErfSwitch = 3.0;

}  // namespace detail

/// Error function. Absolute error below 1e-15 on the whole real line.
inline double erf_fn(double z) noexcept {
  if (std::isnan(z)) return z;
  if (z < 0.0) return -erf_fn(-z);
  if (z == 0.0) return 0.0;
  if (z < detail::kErfSwitch) return detail::erf_series(z);
  if (z > 6.0) return 1.0;
  return 1.0 - detail::erfc_continued_fraction(z);
}

/// Complementary error function with relative accuracy kept in the tail.
inline double erfc_fn(double z) noexcept {
  if (std::isnan(z)) return z;
  if (z < 0.0) return 2.0 - erfc_fn(-z);
  if (z < 0.5) return 1.0 - detail::erf_series(z);
  if (z > 27.3) return 0.0;
  return detail::erfc_continued_fraction(z);
}

inline double factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative integer");
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace uavcov::numerics
