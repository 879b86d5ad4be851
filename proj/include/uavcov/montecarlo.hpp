#pragma once

// Monte Carlo estimation of downlink and cell-free coverage.
//
// Each sample draws a fresh network on a disk of radius guard_radius(), with
// fresh elevation angles, LoS marks and fading. UAVs beyond the disk are
// represented by the exact mean of their aggregate received power (per unit
// gain, 2 pi lambda E[L cos^alpha theta] R^{2-alpha} / (alpha - 2)); only the
// fluctuation of that far field is neglected.
//
// Samples are grouped in fixed blocks, each with its own engine seeded from
// (master_seed, block index), so estimates do not depend on the worker count.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <vector>

#include "uavcov/analytic.hpp"
#include "uavcov/error.hpp"
#include "uavcov/model.hpp"
#include "uavcov/parallel.hpp"
#include "uavcov/random.hpp"

namespace uavcov::mc {

struct FadingDraw {
  double serving_gain = 0.0;             // Gamma(N, 1)
  std::vector<double> interferer_gains;  // Exp(1), aligned with the realization; serving entry unused
};

struct CoverageEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

inline CoverageEstimate bernoulli_estimate(std::uint64_t successes, std::uint64_t n, std::uint64_t seed) {
  const double m = static_cast<double>(successes) / static_cast<double>(n);
  return {m, std::sqrt(m * (1.0 - m) / static_cast<double>(n)), n, seed};
}

struct McOptions {
  std::uint64_t n_samples = 100000;
  std::uint64_t master_seed = 1;
  double guard_tolerance = 0.05;
  unsigned workers = 0;        // 0: hardware concurrency
  bool compensate_tail = true;  // add the mean far-field power beyond the disk
};

inline constexpr std::uint64_t kBlockSize = 1024;

/// E[L cos^alpha(theta)]: mean path gain factor of one UAV at unit projection distance.
inline double mean_path_gain_factor(const NetworkParams& p, const ElevationModel& elev) {
  return analytic::expect_over_elevation(elev, [&](double th) {
    const double rho = los_probability(th, p.c1, p.c2);
    return std::pow(std::cos(th), p.alpha) * (rho + (1.0 - rho) * p.ell);
  });
}

/// Mean of sum_i L_i |U_i|^{-alpha} over UAVs with projection beyond R.
inline double tail_path_gain(const NetworkParams& p, const ElevationModel& elev, double radius) {
  return 2.0 * kPi * p.lambda * mean_path_gain_factor(p, elev) * std::pow(radius, 2.0 - p.alpha) /
         (p.alpha - 2.0);
}

/// Truncation radius R: the mean interference from projections beyond R is at
/// most `tolerance` times the mean interference from projections beyond the
/// nearest-neighbour scale r0 = 1/sqrt(pi lambda), i.e. (R/r0)^{2-alpha} <= tolerance.
/// Never smaller than 10 r0.
inline double guard_radius(const NetworkParams& p, const ElevationModel& elev, double tolerance) {
  (void)elev;  // the ratio of tail integrals does not depend on the marks
  if (!(p.alpha > 2.0)) throw DomainError("guard_radius: interference diverges for alpha <= 2");
  p.validate();
  if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidParameter("guard tolerance must lie in (0, 1)");
  const double r0 = 1.0 / std::sqrt(kPi * p.lambda);
  return std::max(10.0 * r0, r0 * std::pow(tolerance, -1.0 / (p.alpha - 2.0)));
}

/// Index maximizing L_i |U_i|^{-alpha}; ties go to the smallest index.
inline std::size_t associate(const NetworkRealization& net, double alpha, double ell) {
  if (net.uavs.empty()) throw NoUavError();
  std::size_t best = 0;
  double best_strength = -1.0;
  for (std::size_t i = 0; i < net.uavs.size(); ++i) {
    const UavPoint& u = net.uavs[i];
    const double d2 = u.horizontal_distance() * u.horizontal_distance() + u.altitude * u.altitude;
    const double s = u.attenuation(ell) * std::pow(d2, -alpha / 2.0);
    if (s > best_strength) {
      best_strength = s;
      best = i;
    }
  }
  return best;
}

inline FadingDraw draw_fading(std::size_t n_uavs, int n_antennas, random::Engine& rng) {
  FadingDraw f;
  f.serving_gain = random::gamma_int(rng, n_antennas);
  f.interferer_gains.resize(n_uavs);
  for (double& g : f.interferer_gains) g = random::exponential(rng);
  return f;
}

/// SINR of the typical user served by `serving`: P G* L* |U*|^{-alpha} / (I + sigma).
inline double sinr(const NetworkRealization& net, const FadingDraw& fading, std::size_t serving,
                   const NetworkParams& p) {
  if (fading.interferer_gains.size() != net.uavs.size())
    throw ShapeError("fading gains not aligned with the realization");
  if (serving >= net.uavs.size()) throw ShapeError("serving index out of range");
  auto path_gain = [&](const UavPoint& u) {
    const double d2 = u.horizontal_distance() * u.horizontal_distance() + u.altitude * u.altitude;
    return u.attenuation(p.ell) * std::pow(d2, -p.alpha / 2.0);
  };
  double interference = 0.0;
  for (std::size_t i = 0; i < net.uavs.size(); ++i)
    if (i != serving) interference += p.power * fading.interferer_gains[i] * path_gain(net.uavs[i]);
  return p.power * fading.serving_gain * path_gain(net.uavs[serving]) / (interference + p.noise);
}

namespace detail {

// Per-point mark sampler specialised for the constant-angle case.
class MarkSampler {
public:
  MarkSampler(const NetworkParams& p, const ElevationModel& elev) : p_(p), elev_(elev) {
    if (elev.is_constant()) {
      const double c = std::cos(elev.theta_bar());
      inv_cos2_ = 1.0 / (c * c);
      rho_ = los_probability(elev.theta_bar(), p.c1, p.c2);
    }
  }

  // Path gain L |U|^{-alpha} of a UAV whose projection is at squared distance r2.
  double path_gain(random::Engine& rng, double r2) const {
    double inv_cos2 = inv_cos2_;
    double rho = rho_;
    if (!elev_.is_constant()) {
      const double g = sample_elevation_tangent(elev_, rng);
      inv_cos2 = 1.0 + g * g;
      rho = los_probability(std::atan(g), p_.c1, p_.c2);
    }
    const double atten = random::uniform01(rng) < rho ? 1.0 : p_.ell;
    return atten * std::exp(-0.5 * p_.alpha * std::log(r2 * inv_cos2));
  }

private:
  const NetworkParams& p_;
  const ElevationModel& elev_;
  double inv_cos2_ = 1.0;
  double rho_ = 1.0;
};

template <class SampleFn>
CoverageEstimate run_blocks(const McOptions& opt, SampleFn&& sample) {
  if (opt.n_samples < 1) throw InvalidParameter("n_samples must be at least 1");
  const std::uint64_t blocks = (opt.n_samples + kBlockSize - 1) / kBlockSize;
  std::vector<std::uint64_t> successes(blocks, 0);
  parallel_for(blocks, opt.workers, [&](std::size_t b) {
    auto rng = random::make_engine(random::derive_seed(opt.master_seed, b));
    const std::uint64_t begin = b * kBlockSize;
    const std::uint64_t end = std::min(opt.n_samples, begin + kBlockSize);
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; ++i) hits += sample(rng) ? 1 : 0;
    successes[b] = hits;
  });
  std::uint64_t total = 0;
  for (auto s : successes) total += s;
  return bernoulli_estimate(total, opt.n_samples, opt.master_seed);
}

}  // namespace detail

/// Fraction of samples with SINR >= beta.
inline CoverageEstimate estimate_downlink(const NetworkParams& p, const ElevationModel& elev,
                                          const McOptions& opt = {}) {
  p.validate();
  const double radius = guard_radius(p, elev, opt.guard_tolerance);
  const double tail = opt.compensate_tail ? tail_path_gain(p, elev, radius) : 0.0;
  const detail::MarkSampler marks(p, elev);

  return detail::run_blocks(opt, [&](random::Engine& rng) {
    RadialPoissonStream stream(p.lambda, radius);
    double total = 0.0;  // sum of G_i L_i |U_i|^{-alpha}
    double best = -1.0;  // max L_i |U_i|^{-alpha}
    double best_gain = 0.0;
    double r2 = 0.0;
    while (stream.next(rng, r2)) {
      const double s = marks.path_gain(rng, r2);
      const double g = random::exponential(rng);
      total += g * s;
      if (s > best) {
        best = s;
        best_gain = g;
      }
    }
    if (best < 0.0) return false;  // empty disk: no serving UAV
    // The serving link has Gamma(N, 1) gain: its Exp(1) draw plus Gamma(N-1, 1).
    const double serving_gain = best_gain + random::gamma_int(rng, p.n_antennas - 1);
    const double interference = p.power * (total - best_gain * best + tail);
    return p.power * serving_gain * best >= p.beta * (interference + p.noise);
  });
}

/// Fraction of samples with P sum_i G_i L_i |U_i|^{-alpha} / sigma >= beta,
/// every G_i ~ Gamma(N, 1). The running sum only grows, so a sample stops
/// drawing UAVs as soon as the threshold is reached.
inline CoverageEstimate estimate_cellfree(const NetworkParams& p, const ElevationModel& elev,
                                          const McOptions& opt = {}) {
  p.validate();
  if (!(p.noise > 0.0)) throw InvalidParameter("cell-free coverage needs positive noise power");
  const double radius = guard_radius(p, elev, opt.guard_tolerance);
  const double tail = opt.compensate_tail ? p.n_antennas * tail_path_gain(p, elev, radius) : 0.0;
  const double threshold = p.beta * p.noise / p.power;
  const detail::MarkSampler marks(p, elev);

  return detail::run_blocks(opt, [&](random::Engine& rng) {
    RadialPoissonStream stream(p.lambda, radius);
    double sum = tail;
    if (sum >= threshold) return true;
    double r2 = 0.0;
    while (stream.next(rng, r2)) {
      sum += random::gamma_int(rng, p.n_antennas) * marks.path_gain(rng, r2);
      if (sum >= threshold) return true;
    }
    return false;
  });
}

}  // namespace uavcov::mc
