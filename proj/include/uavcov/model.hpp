#pragma once

// Domain types and samplers for the 3D UAV point process: a homogeneous
// planar PPP of projections, each marked with an elevation angle (seen from
// the origin) that fixes the altitude, plus an elevation-dependent LoS mark.
// Angles and projections are drawn independently of each other.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "uavcov/error.hpp"
#include "uavcov/random.hpp"

namespace uavcov {

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }
inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) noexcept { return 10.0 * std::log10(x); }

/// Scalar network constants, all in linear SI-style units (mW, m, rad).
struct NetworkParams {
  double lambda = 1e-7;     // UAV projection density [1/m^2]
  double power = 50.0;      // transmit power P [mW]
  int n_antennas = 4;       // N
  double noise = std::pow(10.0, -92.5 / 10.0);  // sigma_0 [mW]
  double alpha = 2.75;      // path-loss exponent, > 2
  double ell = 0.25;        // NLoS attenuation in [0, 1]
  double beta = 0.1;        // SINR threshold (linear)
  double c1 = 24.5811;      // LoS model steepness
  double c2 = 39.5971;      // LoS model offset

  void validate() const {
    auto require = [](bool ok, const char* msg) {
      if (!ok) throw InvalidParameter(msg);
    };
    require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
    require(power > 0.0 && std::isfinite(power), "power must be positive");
    require(n_antennas >= 1, "n_antennas must be at least 1");
    require(noise >= 0.0 && std::isfinite(noise), "noise must be non-negative");
    require(alpha > 2.0 && std::isfinite(alpha), "alpha must exceed 2 (interference integrals diverge otherwise)");
    require(ell >= 0.0 && ell <= 1.0, "ell must lie in [0, 1]");
    require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
    require(c1 > 0.0 && std::isfinite(c1), "c1 must be positive");
    require(c2 > 0.0 && std::isfinite(c2), "c2 must be positive");
  }

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// Elevation angle distribution. Either a constant angle, or tan(theta)
/// ~ Gamma(shape, rate = shape / tan(theta_bar)) so that E[tan theta] = tan(theta_bar).
class ElevationModel {
public:
  struct Constant {
    double theta_bar;
    friend bool operator==(const Constant&, const Constant&) = default;
  };
  struct GammaTan {
    double shape;
    double theta_bar;
    friend bool operator==(const GammaTan&, const GammaTan&) = default;
  };

  static ElevationModel constant(double theta_bar) {
    if (!(theta_bar >= 0.0 && theta_bar < kPi / 2))
      throw InvalidParameter("constant elevation angle must lie in [0, pi/2)");
    return ElevationModel(Constant{theta_bar});
  }

  static ElevationModel gamma_tan(double shape, double theta_bar) {
    if (!(shape > 0.0 && std::isfinite(shape))) throw InvalidParameter("gamma shape must be positive");
    if (!(theta_bar > 0.0 && theta_bar < kPi / 2))
      throw InvalidParameter("mean elevation angle must lie in (0, pi/2)");
    return ElevationModel(GammaTan{shape, theta_bar});
  }

  bool is_constant() const noexcept { return std::holds_alternative<Constant>(v_); }
  double theta_bar() const noexcept {
    return std::visit([](const auto& m) { return m.theta_bar; }, v_);
  }
  // Gamma shape; only meaningful for GammaTan.
  double shape() const noexcept {
    const auto* g = std::get_if<GammaTan>(&v_);
    return g ? g->shape : INFINITY;
  }
  // Gamma rate of tan(theta); only meaningful for GammaTan.
  double rate() const noexcept { return shape() / std::tan(theta_bar()); }

  const std::variant<Constant, GammaTan>& variant() const noexcept { return v_; }

  std::string describe() const {
    if (is_constant()) return "constant(" + std::to_string(theta_bar()) + " rad)";
    return "gamma_tan(shape=" + std::to_string(shape()) + ", " + std::to_string(theta_bar()) + " rad)";
  }

  friend bool operator==(const ElevationModel&, const ElevationModel&) = default;

private:
  explicit ElevationModel(std::variant<Constant, GammaTan> v) : v_(v) {}
  std::variant<Constant, GammaTan> v_;
};

enum class LinkState { LoS, NLoS };

struct Point2 {
  double x;
  double y;
};

struct UavPoint {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;     // elevation seen from the origin [rad]
  double altitude = 0.0;  // |X| tan(theta)
  LinkState los = LinkState::LoS;

  double horizontal_distance() const noexcept { return std::hypot(x, y); }
  double distance() const noexcept { return std::hypot(horizontal_distance(), altitude); }
  // Link attenuation L in {1, ell}.
  double attenuation(double ell) const noexcept { return los == LinkState::LoS ? 1.0 : ell; }
};

struct NetworkRealization {
  std::vector<UavPoint> uavs;
  double sim_radius = 0.0;
  std::uint64_t seed = 0;
};

/// LoS probability 1 / (1 + c2 exp(-c1 theta)), theta in radians.
inline double los_probability(double theta, double c1, double c2) {
  if (!(theta >= 0.0 && theta <= kPi / 2)) throw DomainError("los_probability: theta outside [0, pi/2]");
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw DomainError("los_probability: c1, c2 must be non-negative");
  return 1.0 / (1.0 + c2 * std::exp(-c1 * theta));
}

/// Squared projection distances of a homogeneous PPP of the given density,
/// produced in increasing order. Gaps in pi*r^2 are i.i.d. Exp(lambda), so the
/// number of points inside the disk is Poisson(lambda pi R^2).
class RadialPoissonStream {
public:
  RadialPoissonStream(double lambda, double radius) : inv_rate_(1.0 / (kPi * lambda)), r2_max_(radius * radius) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidParameter("density must be positive");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidParameter("simulation radius must be positive");
  }

  // Writes the next squared distance and returns true while inside the disk.
  bool next(random::Engine& rng, double& r2) noexcept {
    area_ += random::exponential(rng);
    r2 = area_ * inv_rate_;
    return r2 <= r2_max_;
  }

private:
  double inv_rate_;
  double r2_max_;
  double area_ = 0.0;
};

/// Planar PPP restricted to a disk, sorted by distance from the origin.
inline std::vector<Point2> sample_projections(double lambda, double sim_radius, random::Engine& rng) {
  RadialPoissonStream stream(lambda, sim_radius);
  std::vector<Point2> points;
  double r2 = 0.0;
  while (stream.next(rng, r2)) {
    const double r = std::sqrt(r2);
    const double phi = 2.0 * kPi * random::uniform01(rng);
    points.push_back({r * std::cos(phi), r * std::sin(phi)});
  }
  return points;
}

/// tan(theta) for one draw; theta = atan of the result.
inline double sample_elevation_tangent(const ElevationModel& model, random::Engine& rng) {
  if (model.is_constant()) return std::tan(model.theta_bar());
  return random::gamma_unit(rng, model.shape()) / model.rate();
}

inline double sample_elevation(const ElevationModel& model, random::Engine& rng) {
  if (model.is_constant()) return model.theta_bar();
  return std::atan(sample_elevation_tangent(model, rng));
}

/// One network restricted to the disk of radius sim_radius, reproducible from `seed`.
inline NetworkRealization realize_network(const NetworkParams& params, const ElevationModel& elev,
                                          double sim_radius, std::uint64_t seed) {
  params.validate();
  auto rng = random::make_engine(seed);
  NetworkRealization net;
  net.sim_radius = sim_radius;
  net.seed = seed;
  for (const Point2& p : sample_projections(params.lambda, sim_radius, rng)) {
    UavPoint u;
    u.x = p.x;
    u.y = p.y;
    u.theta = sample_elevation(elev, rng);
    u.altitude = std::hypot(p.x, p.y) * std::tan(u.theta);
    const double rho = los_probability(u.theta, params.c1, params.c2);
    u.los = random::bernoulli(rng, rho) ? LinkState::LoS : LinkState::NLoS;
    net.uavs.push_back(u);
  }
  return net;
}

}  // namespace uavcov
