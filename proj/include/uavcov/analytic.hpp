#pragma once

// Closed-form and semi-analytical coverage expressions for the UAV network.
//
// Everything here depends on the elevation model only through expectations
// over the angle (omega and friends), computed by direct evaluation for a
// constant angle and by quadrature against the Gamma density of tan(theta)
// otherwise.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string_view>
#include <variant>
#include <vector>

#include "uavcov/error.hpp"
#include "uavcov/model.hpp"
#include "uavcov/numerics/jet.hpp"
#include "uavcov/numerics/laplace.hpp"
#include "uavcov/numerics/quadrature.hpp"
#include "uavcov/numerics/special.hpp"

namespace uavcov::analytic {

using numerics::Jet;
using numerics::QuadratureSpec;

/// E[f(theta)] under the elevation model.
template <class F>
double expect_over_elevation(const ElevationModel& elev, F&& f, const QuadratureSpec& spec = {}) {
  if (elev.is_constant()) return f(elev.theta_bar());

  const double a = elev.shape();
  const double b = elev.rate();
  const double log_norm = a * std::log(b) - numerics::log_gamma(a);
  auto weighted = [&](double g) {
    if (g <= 0.0) return 0.0;
    return f(std::atan(g)) * std::exp(log_norm + (a - 1.0) * std::log(g) - b * g);
  };

  const double mean = a / b;
  const double sd = std::sqrt(a) / b;
  const double hi = mean + 12.0 * sd;
  double total = 0.0;
  double lo = 0.0;
  if (a < 1.0) {
    // g = w^{1/a} removes the g^{a-1} singularity at the origin.
    const double w_max = std::pow(mean, a);
    auto head = [&](double w) {
      if (w <= 0.0) return 0.0;
      const double g = std::pow(w, 1.0 / a);
      return f(std::atan(g)) * std::exp(log_norm - b * g) / a;
    };
    total += numerics::integrate(head, 0.0, w_max, spec);
    lo = mean;
  } else {
    lo = std::max(0.0, mean - 12.0 * sd);
    if (lo > 0.0) total += numerics::integrate(weighted, 0.0, lo, spec);
  }
  if (lo < mean) total += numerics::integrate(weighted, lo, mean, spec);
  total += numerics::integrate(weighted, mean, hi, spec);
  total += numerics::integrate(weighted, hi, INFINITY, spec);
  return total;
}

/// omega = E{cos^2(theta) [rho(theta)(1 - ell^{2/alpha}) + ell^{2/alpha}]}.
inline double omega(const NetworkParams& p, const ElevationModel& elev) {
  p.validate();
  const double lv = std::pow(p.ell, 2.0 / p.alpha);
  return expect_over_elevation(elev, [&](double th) {
    const double c = std::cos(th);
    return c * c * (los_probability(th, p.c1, p.c2) * (1.0 - lv) + lv);
  });
}

inline double mean_cos2(const ElevationModel& elev) {
  return expect_over_elevation(elev, [](double th) {
    const double c = std::cos(th);
    return c * c;
  });
}

inline double mean_los_cos2(const NetworkParams& p, const ElevationModel& elev) {
  return expect_over_elevation(elev, [&](double th) {
    const double c = std::cos(th);
    return c * c * los_probability(th, p.c1, p.c2);
  });
}

/// Distribution of the non-negative weights W_i.
struct WeightModel {
  struct Unit {};
  struct MomentOnly {
    double moment;  // E[W^{2/alpha}]
  };
  struct Sampler {
    std::function<double(double)> density;
    double lower = 0.0;
    double upper = INFINITY;
    std::function<double(random::Engine&)> draw;
  };

  std::variant<Unit, MomentOnly, Sampler> kind = Unit{};

  static WeightModel unit() { return {}; }
  static WeightModel moment_only(double m) {
    if (!(m > 0.0 && std::isfinite(m))) throw InvalidParameter("weight moment must be positive and finite");
    return {MomentOnly{m}};
  }
  static WeightModel sampler(Sampler s) {
    if (!s.density) throw InvalidParameter("weight sampler needs a density");
    return {std::move(s)};
  }
};

/// E[W^{2/alpha}]. Sampler models use quadrature against their density.
inline double weight_moment(const WeightModel& w, double alpha) {
  const double v = 2.0 / alpha;
  if (std::holds_alternative<WeightModel::Unit>(w.kind)) return 1.0;
  if (const auto* m = std::get_if<WeightModel::MomentOnly>(&w.kind)) return m->moment;
  const auto& s = std::get<WeightModel::Sampler>(w.kind);
  const double lo = std::max(0.0, s.lower);
  auto f = [&](double x) { return x > 0.0 ? std::pow(x, v) * s.density(x) : 0.0; };
  return numerics::integrate(f, lo, s.upper);
}

/// CDF of R* = max_i W_i L_i |U_i|^{-alpha}.
inline double cdf_r_star(double r, const NetworkParams& p, const ElevationModel& elev,
                         const WeightModel& weight = WeightModel::unit()) {
  if (!(r > 0.0)) throw DomainError("cdf_r_star: r must be positive");
  if (std::isinf(r)) return 1.0;
  const double v = 2.0 / p.alpha;
  return std::exp(-kPi * p.lambda * weight_moment(weight, p.alpha) * omega(p, elev) * std::pow(r, -v));
}

enum class NearestCase {
  AllLosUnit,   // W = L = 1: nearest 3D distance
  LosWeighted,  // W = 1: nearest distance after scaling by L^{-1/alpha}
  PureLos,      // ell = 0: nearest LoS distance
};

/// Rate of the exponential law of R*^{-2/alpha} in the selected special case.
inline double nearest_sq_rate(const NetworkParams& p, const ElevationModel& elev, NearestCase c) {
  p.validate();
  switch (c) {
    case NearestCase::AllLosUnit: return kPi * p.lambda * mean_cos2(elev);
    case NearestCase::LosWeighted: return kPi * p.lambda * omega(p, elev);
    case NearestCase::PureLos: return kPi * p.lambda * mean_los_cos2(p, elev);
  }
  throw InvalidParameter("unknown nearest-distance case");
}

/// CCDF of R*^{-2/alpha} at y.
inline double ccdf_nearest_sq(double y, const NetworkParams& p, const ElevationModel& elev, NearestCase c) {
  if (!(y >= 0.0)) throw DomainError("ccdf_nearest_sq: y must be non-negative");
  return std::exp(-nearest_sq_rate(p, elev, c) * y);
}

struct Point3 {
  double x, y, z;
  double norm2() const noexcept { return x * x + y * y + z * z; }
};

/// Each UAV position scaled by L^{-1/alpha}. With ell = 0 the NLoS points move
/// to infinity and are dropped.
inline std::vector<Point3> thinned_points(const NetworkRealization& net, double ell, double alpha) {
  if (!(ell >= 0.0 && ell <= 1.0)) throw InvalidParameter("ell must lie in [0, 1]");
  if (!(alpha > 2.0)) throw InvalidParameter("alpha must exceed 2");
  std::vector<Point3> out;
  out.reserve(net.uavs.size());
  const double nlos_scale = ell > 0.0 ? std::pow(ell, -1.0 / alpha) : INFINITY;
  for (const UavPoint& u : net.uavs) {
    if (u.los == LinkState::LoS) {
      out.push_back({u.x, u.y, u.altitude});
    } else if (ell > 0.0) {
      out.push_back({u.x * nlos_scale, u.y * nlos_scale, u.altitude * nlos_scale});
    }
  }
  return out;
}

namespace detail {
inline void check_ig_args(double u, double v) {
  if (!(u >= 0.0) || std::isnan(u)) throw DomainError("i_g: u must be non-negative");
  if (!(v > 0.0 && v < 1.0)) throw DomainError("i_g: v must lie in (0, 1)");
}
}  // namespace detail

/// I_G(u, v) = u^v (pi v / sin(pi v) - int_0^{u^{-v}} dr / (1 + r^{1/v})).
///
/// Evaluated through the equivalent smooth form
///   I_G(u, v) = v/(1-v) * int_0^1 u / (1 + u w^{1/(1-v)}) dw,
/// obtained from the tail integral u^v int_{u^{-v}}^inf dr/(1+r^{1/v}) with
/// r = u^{-v} w^{-v/(1-v)}. It has no cancellation as u -> 0.
inline double i_g(double u, double v, const QuadratureSpec& spec = {}) {
  detail::check_ig_args(u, v);
  if (u == 0.0) return 0.0;
  if (std::isinf(u)) return INFINITY;
  const double power = 1.0 / (1.0 - v);
  auto f = [u, power](double w) { return u / (1.0 + u * std::pow(w, power)); };
  return v / (1.0 - v) * numerics::integrate(f, 0.0, 1.0, spec);
}

/// Taylor jet in tau, around tau0, of tau -> I_G(scale / tau, v).
inline Jet ig_tau_jet(double tau0, double scale, double v, int order, const QuadratureSpec& spec = {}) {
  detail::check_ig_args(scale / tau0, v);
  if (!(tau0 > 0.0) || !(scale > 0.0)) throw DomainError("ig_tau_jet: tau0 and scale must be positive");
  const double power = 1.0 / (1.0 - v);
  // scale / (tau + scale c(w)) expands as sum_k (-1)^k scale / (tau0 + scale c)^{k+1} dtau^k.
  auto f = [&](double w) {
    const double denom = tau0 + scale * std::pow(w, power);
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    double term = scale / denom;
    for (int k = 0; k <= order; ++k) {
      c[k] = term;
      term *= -1.0 / denom;
    }
    return Jet(std::move(c));
  };
  return (v / (1.0 - v)) * numerics::integrate(f, 0.0, 1.0, spec);
}

enum class Method { ExactIntegration, ClosedForm, Bound };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::ExactIntegration: return "exact-integration";
    case Method::ClosedForm: return "closed-form";
    case Method::Bound: return "bound";
  }
  return "unknown";
}

struct CoverageResult {
  double value = 0.0;            // in [0, 1]
  Method method = Method::ExactIntegration;
  double numerical_error = 0.0;  // estimated error, including any clamp applied
};

namespace detail {

inline CoverageResult clamped(double raw, Method m, double err) {
  const double v = std::clamp(raw, 0.0, 1.0);
  return {v, m, err + std::fabs(raw - v)};
}

// E over D ~ Exp(mu) of a jet-valued integrand g(d), returning the expected
// jet and an error estimate for its coefficient `order`. Gauss-Laguerre with
// 64 nodes after d = u/mu, checked against 48 nodes; adaptive quadrature takes
// over when the two rules disagree.
template <class G>
std::pair<Jet, double> expect_exponential(G&& g, double mu, int order) {
  const auto k = static_cast<std::size_t>(order);
  auto laguerre = [&](int n) {
    const auto rule = numerics::gauss_laguerre(n);
    Jet acc = Jet::constant(0.0, order);
    for (int i = 0; i < n; ++i) acc += rule.weights[i] * g(rule.nodes[i] / mu);
    return acc;
  };
  Jet fine = laguerre(64);
  const double diff = std::fabs(fine[k] - laguerre(48)[k]);
  if (diff <= 1e-11) return {fine, diff};

  auto integrand = [&](double u) { return std::exp(-u) * g(u / mu); };
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  spec.max_subdivisions = 2000;
  auto r = numerics::integrate_detailed(integrand, 0.0, INFINITY, spec);
  return {r.value, r.error};
}

}  // namespace detail

/// Downlink coverage P[SINR >= beta] of the typical user:
///   d^{N-1}/dtau^{N-1} E[ tau^{N-1}/(N-1)! exp(-sigma D^{alpha/2}/(tau P)
///                        - pi lambda omega D I_G(1/tau, 2/alpha)) ] at tau = 1/beta,
/// D ~ Exp(pi lambda omega). The derivative is taken by jet arithmetic of order
/// N-1 and moved inside the expectation.
inline CoverageResult downlink_coverage(const NetworkParams& p, const ElevationModel& elev) {
  p.validate();
  const int order = p.n_antennas - 1;
  const double v = 2.0 / p.alpha;
  const double tau0 = 1.0 / p.beta;
  const double mu = kPi * p.lambda * omega(p, elev);
  if (!(mu > 0.0)) return {0.0, Method::ExactIntegration, 0.0};

  // Expand in eps with tau = tau0 (1 + eps); the tau0^{N-1} factors cancel, so
  // the eps^{N-1} coefficient of E[(1+eps)^{N-1} exp(...)] is the coverage.
  const Jet eps = Jet::variable(0.0, order);
  const Jet inv_tau = 1.0 / (tau0 * (1.0 + eps));
  const Jet tau_pow = numerics::pow(1.0 + eps, order);
  const Jet ig = numerics::rescale(ig_tau_jet(tau0, 1.0, v, order), tau0);
  const double noise_scale = p.noise / p.power;

  auto integrand = [&](double d) {
    const double noise_term = noise_scale * std::pow(d, p.alpha / 2.0);
    return tau_pow * numerics::exp(-noise_term * inv_tau - (mu * d) * ig);
  };
  const auto [mean, err] = detail::expect_exponential(integrand, mu, order);
  return detail::clamped(mean[static_cast<std::size_t>(order)], Method::ExactIntegration, err);
}

/// Jensen lower bound on downlink coverage. N = 1 uses the closed form
/// exp[-beta sigma Gamma(1+alpha/2) / (P (pi lambda omega)^{alpha/2}) - I_G(beta, 2/alpha)];
/// N > 1 differentiates
///   tau^{N-1} exp[-N sigma Gamma(1+alpha/2)/(tau P (pi lambda omega)^{alpha/2}) - I_G(N/tau, 2/alpha)]
/// N-1 times at tau = 1/beta and divides by (N-1)!.
inline CoverageResult jensen_bound(const NetworkParams& p, const ElevationModel& elev) {
  p.validate();
  const int n = p.n_antennas;
  const double v = 2.0 / p.alpha;
  const double mu = kPi * p.lambda * omega(p, elev);
  if (!(mu > 0.0)) return {0.0, Method::Bound, 0.0};
  const double noise_coeff = p.noise * numerics::gamma_fn(1.0 + p.alpha / 2.0) / (p.power * std::pow(mu, p.alpha / 2.0));

  if (n == 1) return detail::clamped(std::exp(-p.beta * noise_coeff - i_g(p.beta, v)), Method::Bound, 0.0);

  const int order = n - 1;
  const double tau0 = 1.0 / p.beta;
  const Jet eps = Jet::variable(0.0, order);  // tau = tau0 (1 + eps)
  const Jet body = numerics::pow(1.0 + eps, order) *
                   numerics::exp(-(n * noise_coeff) * (1.0 / (tau0 * (1.0 + eps))) -
                                 numerics::rescale(ig_tau_jet(tau0, n, v, order), tau0));
  return detail::clamped(body[static_cast<std::size_t>(order)], Method::Bound, 0.0);
}

/// kappa in the cell-free Laplace transform exp(-kappa s^{2/alpha}).
inline double cellfree_kappa(const NetworkParams& p, const ElevationModel& elev) {
  const double v = 2.0 / p.alpha;
  const int n = p.n_antennas;
  // Gamma(N + v) / (N-1)! = E[G^v] for G ~ Gamma(N, 1).
  const double gain_moment = std::exp(numerics::log_gamma(n + v) - numerics::log_gamma(n));
  return kPi * p.lambda * omega(p, elev) * gain_moment * numerics::gamma_fn(1.0 - v);
}

/// Cell-free coverage under non-coherent joint transmission by all UAVs:
/// 1 - L^{-1}{ (1/s) exp(-kappa s^{2/alpha}) }(beta sigma / P).
inline CoverageResult cellfree_coverage(const NetworkParams& p, const ElevationModel& elev,
                                        const numerics::LaplaceParams& lp = {}) {
  p.validate();
  if (!(p.noise > 0.0)) throw InvalidParameter("cell-free coverage needs positive noise power");
  const double kappa = cellfree_kappa(p, elev);
  const double t = p.beta * p.noise / p.power;
  const auto cdf = numerics::inverse_laplace_cdf(kappa, p.alpha, t, lp);
  return detail::clamped(1.0 - cdf.value, Method::ExactIntegration, cdf.change + cdf.clamped_by);
}

/// Closed form of the cell-free coverage for alpha = 4:
/// erf( pi^{3/2} lambda omega Gamma(N + 1/2) / (2 (N-1)!) * sqrt(P / (beta sigma)) ).
inline CoverageResult cellfree_coverage_alpha4(const NetworkParams& p, const ElevationModel& elev) {
  p.validate();
  if (p.alpha != 4.0) throw InvalidParameter("closed-form cell-free coverage requires alpha = 4");
  if (!(p.noise > 0.0)) throw InvalidParameter("cell-free coverage needs positive noise power");
  const int n = p.n_antennas;
  const double ratio = std::exp(numerics::log_gamma(n + 0.5) - numerics::log_gamma(n));
  const double z = std::pow(kPi, 1.5) * p.lambda * omega(p, elev) * ratio / 2.0 *
                   std::sqrt(p.power / (p.beta * p.noise));
  return {numerics::erf_fn(z), Method::ClosedForm, 1e-15};
}

}  // namespace uavcov::analytic
