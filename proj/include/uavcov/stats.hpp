#pragma once

// Goodness-of-fit helpers used by the validation battery.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "uavcov/error.hpp"

namespace uavcov::stats {

/// Kolmogorov limiting survival function Q(x) = P[sup |B(t)| > x].
inline double kolmogorov_q(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 1.18) {
    // Jacobi-transformed series converges fast for small x.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double s = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double k = 2.0 * j - 1.0;
      s += std::exp(-k * k * pi2 / (8.0 * x * x));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / x * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    s += (j % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

struct KsResult {
  double statistic = 0.0;  // sup |F_n - F|
  double p_value = 1.0;
  std::size_t n = 0;
};

/// One-sample Kolmogorov-Smirnov test against a continuous CDF. The p-value
/// uses the asymptotic law with Stephens' finite-n correction.
template <class Cdf>
KsResult ks_test(std::vector<double> samples, Cdf&& cdf) {
  if (samples.empty()) throw InvalidParameter("ks_test needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_q((sn + 0.12 + 0.11 / sn) * d), samples.size()};
}

inline double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidParameter("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw InvalidParameter("variance needs two samples");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ShapeError("pearson needs two equal-length samples");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace uavcov::stats
