#pragma once

// Numerical inverse Laplace transform by the Fourier-series method with
// Euler summation (Abate & Whitt). The Bromwich integral is discretized on the
// line Re(s) = A/(2t); the discretization error is about e^{-A} times the size
// of f, and the alternating tail is accelerated by binomial averaging of m+1
// successive partial sums. The number of series terms is doubled until two
// successive Euler sums agree to the requested tolerance.
//
// Only the right half-plane is sampled, so transforms with a branch point at
// s = 0 (such as s^{2/alpha}) are evaluated on their principal branch.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "uavcov/error.hpp"

namespace uavcov::numerics {

struct LaplaceParams {
  double damping = 26.0;      // A; discretization error ~ e^{-A}
  int euler_terms = 11;       // m
  int initial_terms = 16;     // n at the first sweep
  int max_terms = 1 << 14;
  double tolerance = 1e-10;   // stop when successive sweeps differ by less
};

struct LaplaceResult {
  double value = 0.0;
  double change = 0.0;  // |difference| between the last two sweeps
  int terms = 0;
};

template <class F>
LaplaceResult inverse_laplace_detailed(F&& transform, double t, const LaplaceParams& p = {}) {
  if (!(t > 0.0)) throw DomainError("inverse Laplace transform needs t > 0");
  if (p.euler_terms < 1 || p.initial_terms < 1 || p.max_terms < p.initial_terms)
    throw InvalidParameter("invalid Laplace inversion term counts");

  using cd = std::complex<double>;
  const double a = p.damping;
  const double scale = std::exp(0.5 * a) / t;
  const int m = p.euler_terms;

  // Series terms a_k, cached and extended as the sweep grows.
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(p.max_terms + m + 1));
  auto extend_to = [&](int k_max) {
    for (int k = static_cast<int>(terms.size()); k <= k_max; ++k) {
      const cd s((a / (2.0 * t)), k * std::numbers::pi / t);
      const double re = std::real(transform(s));
      if (!std::isfinite(re))
        throw AccuracyError("inverse Laplace: transform not finite on the contour", 0.0, INFINITY);
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      terms.push_back(k == 0 ? 0.5 * scale * re : sign * scale * re);
    }
  };

  std::vector<double> binom(static_cast<std::size_t>(m) + 1);
  binom[0] = std::pow(2.0, -m);
  for (int k = 1; k <= m; ++k) binom[k] = binom[k - 1] * (m - k + 1) / k;

  auto euler_sum = [&](int n) {
    extend_to(n + m);
    double partial = 0.0;
    for (int k = 0; k <= n; ++k) partial += terms[k];
    double sum = binom[0] * partial;
    for (int j = 1; j <= m; ++j) {
      partial += terms[n + j];
      sum += binom[j] * partial;
    }
    return sum;
  };

  int n = p.initial_terms;
  double previous = euler_sum(n);
  double change = INFINITY;
  while (2 * n <= p.max_terms) {
    n *= 2;
    const double current = euler_sum(n);
    change = std::fabs(current - previous);
    previous = current;
    if (change < p.tolerance) return {current, change, n};
  }
  throw AccuracyError("inverse Laplace: series did not settle (last change " + std::to_string(change) +
                          ")",
                      previous, change);
}

/// Inverse Laplace transform of `transform` evaluated at t > 0.
template <class F>
double inverse_laplace(F&& transform, double t, const LaplaceParams& p = {}) {
  return inverse_laplace_detailed(std::forward<F>(transform), t, p).value;
}

struct CdfInversion {
  double value = 0.0;       // clamped to [0, 1]
  double clamped_by = 0.0;  // |raw - value|
  double change = 0.0;
};

/// CDF at t of the positive random variable with Laplace transform
/// exp(-kappa s^{2/alpha}), obtained by inverting (1/s) exp(-kappa s^{2/alpha}).
inline CdfInversion inverse_laplace_cdf(double kappa, double alpha, double t,
                                        const LaplaceParams& p = {}) {
  if (!(kappa >= 0.0)) throw DomainError("inverse_laplace_cdf: kappa must be non-negative");
  if (!(alpha > 2.0)) throw DomainError("inverse_laplace_cdf: alpha must exceed 2");
  if (!(t > 0.0)) throw DomainError("inverse_laplace_cdf: t must be positive");
  const double v = 2.0 / alpha;
  auto transform = [kappa, v](std::complex<double> s) {
    return std::exp(-kappa * std::pow(s, v)) / s;
  };
  const auto r = inverse_laplace_detailed(transform, t, p);
  const double clamped = std::clamp(r.value, 0.0, 1.0);
  return {clamped, std::fabs(r.value - clamped), r.change};
}

}  // namespace uavcov::numerics
