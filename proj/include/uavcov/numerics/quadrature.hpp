#pragma once

// Adaptive Gauss-Kronrod integration and Gauss-Laguerre rules.
//
// integrate() is generic over the integrand's value type: anything closed
// under +, - and scalar * with a quad_norm() overload (double, Jet) works.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "uavcov/error.hpp"

namespace uavcov::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 200;
};

template <class V>
struct QuadratureResult {
  V value;
  double error = 0.0;
  int intervals = 0;
};

inline double quad_norm(double x) noexcept { return std::fabs(x); }

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
  double a, b;
  V value;
  double error;
};

// 15-point Kronrod estimate with the embedded 7-point Gauss rule as error.
template <class V, class F>
Segment<V> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const V fc = f(c);
  V kron = kWgk[7] * fc;
  V gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const V f1 = f(c - dx);
    const V f2 = f(c + dx);
    kron = kron + kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss = gauss + kWg[j / 2] * (f1 + f2);
  }
  kron = h * kron;
  gauss = h * gauss;
  return {a, b, kron, quad_norm(kron - gauss)};
}

template <class V>
struct ByError {
  bool operator()(const Segment<V>& l, const Segment<V>& r) const { return l.error < r.error; }
};

}  // namespace detail

namespace detail {

template <class V, class F>
QuadratureResult<V> integrate_finite(F& f, double a, double b, const QuadratureSpec& spec) {
  if (a == b) return {0.0 * f(a), 0.0, 0};

  std::priority_queue<Segment<V>, std::vector<Segment<V>>, ByError<V>> heap;
  auto first = kronrod15<V>(f, a, b);
  V total = first.value;
  double total_err = first.error;
  heap.push(std::move(first));
  int intervals = 1;

  auto converged = [&] {
    return total_err <= std::max(spec.abs_tol, spec.rel_tol * quad_norm(total));
  };
  while (!converged() && intervals < spec.max_subdivisions) {
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(std::move(worst));
      break;  // interval no longer divisible in floating point
    }
    auto left = kronrod15<V>(f, worst.a, mid);
    auto right = kronrod15<V>(f, mid, worst.b);
    total = total - worst.value + left.value + right.value;
    total_err += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++intervals;
  }
  // Re-sum to shed drift from the incremental updates.
  double err = 0.0;
  V sum = 0.0 * total;
  while (!heap.empty()) {
    sum = sum + heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  if (err > std::max(spec.abs_tol, spec.rel_tol * quad_norm(sum))) {
    double estimate = 0.0;
    if constexpr (std::is_same_v<V, double>) estimate = sum;
    throw AccuracyError("integrate: no convergence within " + std::to_string(intervals) +
                            " subdivisions (error bound " + std::to_string(err) + ")",
                        estimate, err);
  }
  return {sum, err, intervals};
}

}  // namespace detail

/// Globally adaptive G7-K15 quadrature over [a, b]. `b` may be +infinity. Throws AccuracyError (best estimate attached)
/// when the tolerance is not met within spec.max_subdivisions intervals.
template <class F>
auto integrate_detailed(F&& f, double a, double b, const QuadratureSpec& spec = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, double>>> {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0) || spec.max_subdivisions < 1)
    throw InvalidParameter("quadrature tolerances must be positive");
  if (std::isnan(a) || std::isnan(b) || std::isinf(a))
    throw InvalidParameter("integration limits must be finite on the left");

  if (std::isinf(b)) {
    if (b < 0) throw InvalidParameter("upper limit -inf is not supported");
    // x = a + expm1(y), y = t/(1-t): algebraic tails become exponential in y.
    auto mapped = [&f, a](double t) -> V {
      const double s = 1.0 - t;
      const double y = t / s;
      if (!(s > 0.0) || y > 700.0) return 0.0 * f(a);
      const double ey = std::exp(y);
      return (ey / (s * s)) * f(a + std::expm1(y));
    };
    return detail::integrate_finite<V>(mapped, 0.0, 1.0, spec);
  }
  return detail::integrate_finite<V>(f, a, b, spec);
}

template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  return integrate_detailed(std::forward<F>(f), a, b, spec).value;
}

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule for the weight e^{-x} on [0, inf).
inline GaussRule gauss_laguerre(int n) {
  if (n < 1 || n > 180) throw InvalidParameter("gauss_laguerre: node count must be in [1, 180]");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  double z = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      z = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      z += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1;
      z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
    }
    // L_n(x) and L_n'(x) from the recurrences for L_k and L_k' = L_{k-1}' - L_{k-1}.
    auto laguerre = [n](double x, double& ln, double& dln) {
      double lm1 = 0.0, dlm1 = 0.0;
      ln = 1.0;
      dln = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double lm2 = lm1, dlm2 = dlm1;
        lm1 = ln;
        dlm1 = dln;
        ln = ((2.0 * j - 1.0 - x) * lm1 - (j - 1.0) * lm2) / j;
        dln = ((2.0 * j - 1.0 - x) * dlm1 - lm1 - (j - 1.0) * dlm2) / j;
      }
    };
    double p1 = 0.0, pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      laguerre(z, p1, pp);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) <= 1e-15 * std::fabs(z)) break;
    }
    laguerre(z, p1, pp);
    rule.nodes[i] = z;
    rule.weights[i] = 1.0 / (z * pp * pp);
  }
  return rule;
}

}  // namespace uavcov::numerics
