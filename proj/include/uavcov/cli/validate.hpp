#pragma once

// Cross-check battery: numeric identities, distribution laws (KS), and
// analytic-vs-Monte-Carlo coverage. Each check yields a named pass/fail entry.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "uavcov/analytic.hpp"
#include "uavcov/cli/sweep.hpp"
#include "uavcov/montecarlo.hpp"
#include "uavcov/numerics/jet.hpp"
#include "uavcov/numerics/laplace.hpp"
#include "uavcov/numerics/quadrature.hpp"
#include "uavcov/numerics/special.hpp"
#include "uavcov/stats.hpp"

namespace uavcov::cli {

struct Check {
  std::string suite;
  std::string name;
  bool passed = false;
  double value = 0.0;  // the measured quantity (error, p-value, |z|, ...)
  double limit = 0.0;  // the bound it was held to
  std::string detail;
};

struct ValidateOptions {
  std::uint64_t seed = 20240901;
  std::uint64_t coverage_samples = 20000;  // per grid point
  std::size_t ks_samples = 10000;
  double guard_tolerance = 0.05;
  unsigned workers = 0;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }

  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back({{"suite", c.suite},
                     {"name", c.name},
                     {"passed", c.passed},
                     {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                     {"limit", c.limit},
                     {"detail", c.detail}});
    }
    return {{"passed", passed()}, {"checks", std::move(arr)}};
  }
};

// ---------------------------------------------------------------------------
// Random smooth compositions for jet checks. Each op is written once and
// instantiated for double, complex and Jet.

struct Composition {
  struct Step {
    int op;
    double a;
    double b;
  };
  std::vector<Step> steps;
  double center = 0.0;

  template <class T>
  static T apply(const Step& s, const T& x) {
    using std::cos, std::exp, std::log, std::pow, std::sin, std::sqrt;
    using numerics::cos, numerics::exp, numerics::log, numerics::pow, numerics::sin, numerics::sqrt;
    switch (s.op) {
      case 0: return sin(s.a * x + s.b);
      case 1: return cos(s.a * x + s.b);
      case 2: return exp(0.5 * s.a * x);
      case 3: return sqrt(x * x + (1.0 + s.b * s.b));
      case 4: return 1.0 / (x * x + (1.0 + s.b * s.b));
      case 5: return pow(x * x + 2.0, s.a);
      default: return log(x * x + (1.5 + s.b * s.b));
    }
  }

  template <class T>
  T operator()(T x) const {
    for (const Step& s : steps) x = apply(s, x);
    return x;
  }

  static Composition random(std::uint64_t seed) {
    auto rng = random::make_engine(seed);
    Composition c;
    const int depth = 2 + static_cast<int>(random::uniform01(rng) * 3.0);
    for (int i = 0; i < depth; ++i) {
      const int op = static_cast<int>(random::uniform01(rng) * 7.0);
      c.steps.push_back({op, -1.0 + 2.0 * random::uniform01(rng), -1.0 + 2.0 * random::uniform01(rng)});
    }
    c.center = -1.0 + 2.0 * random::uniform01(rng);
    return c;
  }
};

struct StencilCoefficients {
  std::vector<double> coeffs;
  std::vector<double> floor;  // roundoff scale of each coefficient, ~ max|f| / r^k
};

/// Taylor coefficients f^{(k)}(x0)/k!, k = 0..order, from the trapezoid rule
/// on a circle of radius r in the complex plane: a finite-difference stencil
/// whose truncation error decays geometrically in the node count.
template <class F>
StencilCoefficients contour_coefficients(F&& f, double x0, int order, double r = 0.15, int nodes = 128) {
  std::vector<std::complex<double>> vals(static_cast<std::size_t>(nodes));
  double peak = 0.0;
  for (int j = 0; j < nodes; ++j) {
    vals[j] = f(x0 + std::polar(r, 2.0 * kPi * j / nodes));
    peak = std::max(peak, std::abs(vals[j]));
  }
  StencilCoefficients out;
  for (int k = 0; k <= order; ++k) {
    std::complex<double> acc = 0.0;
    for (int j = 0; j < nodes; ++j) acc += vals[j] * std::polar(1.0, -2.0 * kPi * k * j / nodes);
    out.coeffs.push_back(std::real(acc) / (nodes * std::pow(r, k)));
    out.floor.push_back(peak / std::pow(r, k));
  }
  return out;
}

/// Largest relative disagreement between jet coefficients and the contour
/// stencil, over 'count' random compositions and orders 0..7. Coefficients
/// below the stencil's resolution (1e-8 of max|f|/r^k) are compared against
/// that resolution instead of their own size.
inline double jet_vs_stencil_error(std::uint64_t seed, int count = 20, int order = 7) {
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const auto comp = Composition::random(random::derive_seed(seed, static_cast<std::uint64_t>(i)));
    const numerics::Jet j = numerics::jet_eval(comp, comp.center, order);
    const auto ref = contour_coefficients([&](std::complex<double> z) { return comp(z); }, comp.center, order);
    for (int k = 0; k <= order; ++k) {
      const double denom = std::max(std::fabs(ref.coeffs[k]), 1e-8 * ref.floor[k]);
      worst = std::max(worst, std::fabs(j[static_cast<std::size_t>(k)] - ref.coeffs[k]) / denom);
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Distribution-law samples.

enum class LawStatistic {
  NearestSq,         // min |U|^2 ignoring LoS marks      ~ Exp(pi lambda E[cos^2])
  ThinnedNearestSq,  // min |U~|^2, U~ = L^{-1/alpha} U    ~ Exp(pi lambda omega)
  LosNearestSq,      // min |U|^2 over LoS points          ~ Exp(pi lambda E[rho cos^2])
  RStar,             // max L |U|^{-alpha}                 ~ F_R*(r)
};

inline double law_rate(const NetworkParams& p, const ElevationModel& e, LawStatistic s) {
  using analytic::NearestCase;
  switch (s) {
    case LawStatistic::NearestSq: return analytic::nearest_sq_rate(p, e, NearestCase::AllLosUnit);
    case LawStatistic::LosNearestSq: return analytic::nearest_sq_rate(p, e, NearestCase::PureLos);
    default: return analytic::nearest_sq_rate(p, e, NearestCase::LosWeighted);
  }
}

/// CDF the statistic should follow.
inline double law_cdf(const NetworkParams& p, const ElevationModel& e, LawStatistic s, double x) {
  if (s == LawStatistic::RStar) return x > 0.0 ? analytic::cdf_r_star(x, p, e, analytic::WeightModel::unit()) : 0.0;
  return x > 0.0 ? -std::expm1(-law_rate(p, e, s) * x) : 0.0;
}

/// One draw of the statistic per realization. The disk is large enough that
/// the probability of missing the true extreme point is e^{-45}: a point
/// beyond radius R has every transformed squared distance above R^2.
inline std::vector<double> sample_law(const NetworkParams& p, const ElevationModel& e, LawStatistic s, std::size_t n,
                                      std::uint64_t seed) {
  const double radius = std::sqrt(45.0 / law_rate(p, e, s));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto net = realize_network(p, e, radius, random::derive_seed(seed, i));
    double best = INFINITY;
    switch (s) {
      case LawStatistic::NearestSq:
        for (const auto& u : net.uavs) best = std::min(best, u.distance() * u.distance());
        break;
      case LawStatistic::LosNearestSq:
        for (const auto& u : net.uavs)
          if (u.los == LinkState::LoS) best = std::min(best, u.distance() * u.distance());
        break;
      case LawStatistic::ThinnedNearestSq:
        for (const auto& q : analytic::thinned_points(net, p.ell, p.alpha)) best = std::min(best, q.norm2());
        break;
      case LawStatistic::RStar: {
        double m = 0.0;
        for (const auto& u : net.uavs) m = std::max(m, u.attenuation(p.ell) * std::pow(u.distance(), -p.alpha));
        best = m;
        break;
      }
    }
    out[i] = best;
  }
  return out;
}

inline stats::KsResult ks_law(const NetworkParams& p, const ElevationModel& e, LawStatistic s, std::size_t n,
                              std::uint64_t seed) {
  return stats::ks_test(sample_law(p, e, s, n, seed), [&](double x) { return law_cdf(p, e, s, x); });
}

// ---------------------------------------------------------------------------
// Coverage comparisons.

struct GridPoint {
  int n_antennas;
  double theta_deg;
  double lambda;
};

/// N in {1,4,8} x theta in {10,20,40} deg x lambda in {1e-7,1e-6}.
inline std::vector<GridPoint> coverage_grid() {
  std::vector<GridPoint> g;
  for (int n : {1, 4, 8})
    for (double th : {10.0, 20.0, 40.0})
      for (double lam : {1e-7, 1e-6}) g.push_back({n, th, lam});
  return g;
}

inline NetworkParams grid_params(const GridPoint& g) {
  NetworkParams p;
  p.n_antennas = g.n_antennas;
  p.lambda = g.lambda;
  return p;
}

inline std::string describe(const GridPoint& g) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "N=%d theta=%g deg lambda=%g", g.n_antennas, g.theta_deg, g.lambda);
  return buf;
}

/// Analytic and Monte Carlo evaluation of one metric at one parameter set.
inline PointResult compare_point(const NetworkParams& p, const ElevationModel& e, Metric metric, std::uint64_t n,
                                 std::uint64_t seed, double guard_tolerance, unsigned workers) {
  RunConfig cfg;
  cfg.mode = Mode::Both;
  cfg.metric = metric;
  cfg.n_samples = n;
  cfg.guard_tolerance = guard_tolerance;
  return evaluate_point(cfg, p, e, seed, workers);
}

// ---------------------------------------------------------------------------
// Suites.

namespace detail {

inline Check make_check(std::string suite, std::string name, double value, double limit, bool ok,
                        std::string detail = {}) {
  return {std::move(suite), std::move(name), ok, value, limit, std::move(detail)};
}

}  // namespace detail

inline void run_numerics(ValidationReport& rep, const ValidateOptions& opt) {
  using namespace numerics;
  using detail::make_check;
  const std::string s = "numerics";

  double worst = 0.0;
  for (double x : {0.3, 1.7, 6.4}) worst = std::max(worst, std::fabs(gamma_fn(x + 1.0) / (x * gamma_fn(x)) - 1.0));
  rep.checks.push_back(make_check(s, "gamma recurrence", worst, 1e-12, worst <= 1e-12));

  const double g_half = std::fabs(gamma_fn(0.5) - std::sqrt(kPi));
  rep.checks.push_back(make_check(s, "gamma(1/2) = sqrt(pi)", g_half, 1e-13, g_half <= 1e-13));

  const double e1 = std::fabs(erf_fn(1.0) - 0.8427007929497149);
  rep.checks.push_back(make_check(s, "erf(1)", e1, 1e-10, e1 <= 1e-10));

  const double jet_err = jet_vs_stencil_error(opt.seed);
  rep.checks.push_back(make_check(s, "jet vs stencil, 20 compositions, orders 0-7", jet_err, 1e-5, jet_err <= 1e-5));

  double step_err = 0.0;
  for (double t : {0.5, 1.0, 5.0})
    step_err = std::max(step_err, std::fabs(inverse_laplace([](std::complex<double> z) { return 1.0 / z; }, t) - 1.0));
  rep.checks.push_back(make_check(s, "inverse Laplace 1/s", step_err, 1e-8, step_err <= 1e-8));

  const double pair_err = std::fabs(
      inverse_laplace([](std::complex<double> z) { return 1.0 / (z * (z + 1.0)); }, 1.0) - (1.0 - std::exp(-1.0)));
  rep.checks.push_back(make_check(s, "inverse Laplace 1/(s(s+1)) at t=1", pair_err, 1e-8, pair_err <= 1e-8));

  double levy_err = 0.0;
  for (double kappa : {0.1, 1.0, 3.0})
    for (double t : {0.05, 1.0, 20.0})
      levy_err = std::max(levy_err, std::fabs(inverse_laplace_cdf(kappa, 4.0, t).value -
                                              erfc_fn(kappa / (2.0 * std::sqrt(t)))));
  rep.checks.push_back(make_check(s, "inverse Laplace vs Levy erfc (alpha=4)", levy_err, 1e-6, levy_err <= 1e-6));

  const double v = 2.0 / 2.75;
  const double q = std::fabs(integrate([&](double r) { return 1.0 / (1.0 + std::pow(r, 1.0 / v)); }, 0.0, INFINITY) -
                             kPi * v / std::sin(kPi * v));
  rep.checks.push_back(make_check(s, "integral of 1/(1+r^(1/v)) on [0,inf)", q, 1e-8, q <= 1e-8));

  const double ig = std::fabs(analytic::i_g(1.0, 0.5) - kPi / 4.0);
  rep.checks.push_back(make_check(s, "I_G(1, 1/2) = pi/4", ig, 1e-10, ig <= 1e-10));
}

inline void run_distributions(ValidationReport& rep, const ValidateOptions& opt) {
  using detail::make_check;
  const std::string s = "distributions";
  NetworkParams p;
  p.lambda = 1e-6;
  const auto e = ElevationModel::constant(deg_to_rad(25.0));
  const auto eg = ElevationModel::gamma_tan(3.0, deg_to_rad(25.0));
  const auto low = ElevationModel::constant(deg_to_rad(10.0));  // rho ~ 0.35: many NLoS points

  struct Case {
    const char* name;
    LawStatistic stat;
    const ElevationModel* elev;
  };
  const Case cases[] = {
      {"R* CDF (constant 25 deg)", LawStatistic::RStar, &e},
      {"min |U|^2 ~ Exp(pi lambda E[cos^2])", LawStatistic::NearestSq, &eg},
      {"min |U~|^2 ~ Exp(pi lambda omega)", LawStatistic::ThinnedNearestSq, &eg},
      {"min LoS |U|^2 ~ Exp(pi lambda E[rho cos^2]) (10 deg)", LawStatistic::LosNearestSq, &low},
  };
  std::uint64_t stream = 0;
  for (const Case& c : cases) {
    const auto ks = ks_law(p, *c.elev, c.stat, opt.ks_samples, random::derive_seed(opt.seed, ++stream));
    rep.checks.push_back(make_check(s, std::string("KS ") + c.name, ks.p_value, 0.01, ks.p_value > 0.01,
                                    "D=" + std::to_string(ks.statistic)));
  }

  // Poisson counts: index of dispersion.
  {
    auto rng = random::make_engine(random::derive_seed(opt.seed, ++stream));
    std::vector<double> counts;
    for (std::size_t i = 0; i < opt.ks_samples; ++i)
      counts.push_back(static_cast<double>(sample_projections(1e-7, 1e4, rng).size()));
    const double idx = stats::variance(counts) / stats::mean(counts);
    rep.checks.push_back(make_check(s, "Poisson index of dispersion (mean 31.4)", idx, 0.1, std::fabs(idx - 1.0) <= 0.1,
                                    "mean=" + std::to_string(stats::mean(counts))));
  }

  // Angle and projection independence.
  {
    std::vector<double> th, r;
    const auto e1 = ElevationModel::gamma_tan(1.0, deg_to_rad(30.0));
    for (std::uint64_t i = 0; th.size() < opt.ks_samples; ++i) {
      const auto net = realize_network(p, e1, 3000.0, random::derive_seed(opt.seed + 1, i));
      for (const auto& u : net.uavs) {
        th.push_back(u.theta);
        r.push_back(u.horizontal_distance());
      }
    }
    const double corr = std::fabs(stats::pearson(th, r));
    const double lim = 3.0 / std::sqrt(static_cast<double>(th.size()));
    rep.checks.push_back(make_check(s, "corr(theta, |X|) ~ 0", corr, lim, corr < lim));
  }

  // tan(Theta) ~ Exp(1) for shape 1, mean angle 45 deg.
  {
    auto rng = random::make_engine(random::derive_seed(opt.seed, ++stream));
    const auto e45 = ElevationModel::gamma_tan(1.0, deg_to_rad(45.0));
    std::vector<double> t(opt.ks_samples);
    for (auto& x : t) x = std::tan(sample_elevation(e45, rng));
    const auto ks = stats::ks_test(t, [](double x) { return x > 0.0 ? -std::expm1(-x) : 0.0; });
    rep.checks.push_back(make_check(s, "KS tan(Theta) ~ Exp(1)", ks.p_value, 0.01, ks.p_value > 0.01));
  }
}

inline void run_coverage(ValidationReport& rep, const ValidateOptions& opt) {
  using detail::make_check;
  const std::string s = "coverage";
  const auto grid = coverage_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid_params(grid[i]);
    const auto e = ElevationModel::constant(deg_to_rad(grid[i].theta_deg));
    const auto r = compare_point(p, e, Metric::Downlink, opt.coverage_samples, random::derive_seed(opt.seed, i),
                                 opt.guard_tolerance, opt.workers);
    if (!r.error.empty()) {
      rep.checks.push_back(make_check(s, "downlink z " + describe(grid[i]), NAN, 3.0, false, r.error));
      continue;
    }
    const double z = std::fabs(*r.z_score());
    char d[96];
    std::snprintf(d, sizeof d, "analytic=%.6f mc=%.6f se=%.2e", r.analytic->value, r.mc->mean, r.mc->std_error);
    rep.checks.push_back(make_check(s, "downlink z " + describe(grid[i]), z, 3.0, z <= 3.0, d));

    const double jb = analytic::jensen_bound(p, e).value;
    const double cf = analytic::cellfree_coverage(p, e).value;
    const double gap = std::max(jb - r.analytic->value, r.analytic->value - cf);
    rep.checks.push_back(make_check(s, "jensen <= downlink <= cellfree " + describe(grid[i]), gap, 1e-6, gap <= 1e-6));
  }

  // Closed form at alpha = 4.
  double worst = 0.0;
  for (int n : {1, 2, 4, 8})
    for (double bdb = -20.0; bdb <= 10.0; bdb += 5.0) {
      NetworkParams p;
      p.alpha = 4.0;
      p.lambda = 1e-6;
      p.n_antennas = n;
      p.beta = db_to_linear(bdb);
      const auto e = ElevationModel::constant(deg_to_rad(25.0));
      worst = std::max(worst, std::fabs(analytic::cellfree_coverage(p, e).value -
                                        analytic::cellfree_coverage_alpha4(p, e).value));
    }
  rep.checks.push_back(make_check(s, "cell-free inversion vs erf (alpha=4)", worst, 1e-6, worst <= 1e-6));

  // Cell-free against simulation where coverage is not saturated.
  NetworkParams p;
  p.lambda = 1e-6;
  p.n_antennas = 1;
  const auto e = ElevationModel::constant(deg_to_rad(25.0));
  std::uint64_t k = 1000;
  for (double bdb : {35.0, 45.0}) {
    p.beta = db_to_linear(bdb);
    const auto r = compare_point(p, e, Metric::Cellfree, opt.coverage_samples, random::derive_seed(opt.seed, k++),
                                 opt.guard_tolerance, opt.workers);
    const double z = r.error.empty() ? std::fabs(*r.z_score()) : NAN;
    rep.checks.push_back(make_check(s, "cell-free z beta=" + std::to_string(static_cast<int>(bdb)) + " dB", z, 3.0,
                                    z <= 3.0, r.error));
  }
}

/// Run "numerics", "distributions", "coverage" or "all".
inline ValidationReport validate(std::string_view suite, const ValidateOptions& opt = {}) {
  ValidationReport rep;
  const bool all = suite == "all";
  if (!all && suite != "numerics" && suite != "distributions" && suite != "coverage")
    throw ConfigError("suite", "'" + std::string(suite) + "' is not one of: numerics, distributions, coverage, all");
  if (all || suite == "numerics") run_numerics(rep, opt);
  if (all || suite == "distributions") run_distributions(rep, opt);
  if (all || suite == "coverage") run_coverage(rep, opt);
  return rep;
}

}  // namespace uavcov::cli
