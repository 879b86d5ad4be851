#include <gtest/gtest.h>

#include <cmath>

#include "uavcov/model.hpp"
#include "uavcov/stats.hpp"

using namespace uavcov;

namespace {
constexpr double kC1 = 24.5811;
constexpr double kC2 = 39.5971;
}  // namespace

TEST(LosProbability, ReferenceValues) {
  EXPECT_NEAR(los_probability(0.0, kC1, kC2), 1.0 / (1.0 + kC2), 1e-15);
  EXPECT_NEAR(los_probability(0.0, kC1, kC2), 0.024632, 5e-7);
  EXPECT_NEAR(los_probability(deg_to_rad(25.0), kC1, kC2), 0.99913, 5e-6);
  EXPECT_EQ(los_probability(0.7, kC1, 0.0), 1.0);
}

TEST(LosProbability, MonotoneInAngle) {
  for (double c1 : {0.5, 5.0, kC1})
    for (double c2 : {0.1, 1.0, kC2}) {
      double prev = 0.0;
      for (double th = 0.0; th <= M_PI / 2; th += 0.01) {
        const double p = los_probability(th, c1, c2);
        EXPECT_GE(p, prev);
        prev = p;
      }
    }
}

TEST(LosProbability, RejectsAnglesOutsideRange) {
  EXPECT_THROW(los_probability(-0.01, kC1, kC2), DomainError);
  EXPECT_THROW(los_probability(M_PI / 2 + 0.01, kC1, kC2), DomainError);
}

TEST(Params, DefaultsMatchReferenceSetup) {
  const NetworkParams p;
  EXPECT_EQ(p.power, 50.0);
  EXPECT_NEAR(linear_to_db(p.noise), -92.5, 1e-12);
  EXPECT_EQ(p.alpha, 2.75);
  EXPECT_EQ(p.ell, 0.25);
  EXPECT_NEAR(linear_to_db(p.beta), -10.0, 1e-12);
  EXPECT_NO_THROW(p.validate());
}

TEST(Params, ValidationRejectsBadValues) {
  auto bad = [](auto mutate) {
    NetworkParams p;
    mutate(p);
    EXPECT_THROW(p.validate(), InvalidParameter);
  };
  bad([](NetworkParams& p) { p.alpha = 2.0; });
  bad([](NetworkParams& p) { p.lambda = 0.0; });
  bad([](NetworkParams& p) { p.ell = 1.5; });
  bad([](NetworkParams& p) { p.n_antennas = 0; });
  bad([](NetworkParams& p) { p.noise = -1.0; });
}

TEST(Elevation, Construction) {
  EXPECT_THROW(ElevationModel::constant(M_PI / 2), InvalidParameter);
  EXPECT_THROW(ElevationModel::gamma_tan(0.0, 0.3), InvalidParameter);
  EXPECT_THROW(ElevationModel::gamma_tan(2.0, 0.0), InvalidParameter);
  const auto g = ElevationModel::gamma_tan(3.0, deg_to_rad(30.0));
  EXPECT_NEAR(g.rate(), 3.0 / std::tan(deg_to_rad(30.0)), 1e-15);
}

TEST(Elevation, ConstantIsExact) {
  auto rng = random::make_engine(1);
  const auto e = ElevationModel::constant(deg_to_rad(25.0));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(sample_elevation(e, rng), 25.0 * M_PI / 180.0);
}

TEST(Elevation, ShapeOneGivesExponentialTangent) {
  auto rng = random::make_engine(2);
  const auto e = ElevationModel::gamma_tan(1.0, deg_to_rad(45.0));
  std::vector<double> t(20000);
  for (auto& x : t) x = std::tan(sample_elevation(e, rng));
  const auto ks = stats::ks_test(t, [](double x) { return x > 0 ? -std::expm1(-x) : 0.0; });
  EXPECT_GT(ks.p_value, 0.01);
}

TEST(Elevation, LargeShapeConcentratesOnMean) {
  auto rng = random::make_engine(3);
  const auto e = ElevationModel::gamma_tan(1e6, deg_to_rad(30.0));
  double s = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) s += sample_elevation(e, rng);
  EXPECT_NEAR(rad_to_deg(s / n), 30.0, 0.1);
}

TEST(Elevation, TangentMeanConverges) {
  auto rng = random::make_engine(4);
  const auto e = ElevationModel::gamma_tan(3.0, deg_to_rad(20.0));
  std::vector<double> t(200000);
  for (auto& x : t) x = sample_elevation_tangent(e, rng);
  const double se = std::sqrt(stats::variance(t) / t.size());
  EXPECT_NEAR(stats::mean(t), std::tan(deg_to_rad(20.0)), 4.0 * se);
  for (double x : t) ASSERT_GE(x, 0.0);
}

TEST(Projections, RejectEmptyDomain) {
  auto rng = random::make_engine(5);
  EXPECT_THROW(sample_projections(1e-7, 0.0, rng), InvalidParameter);
  EXPECT_THROW(sample_projections(0.0, 100.0, rng), InvalidParameter);
}

TEST(Projections, PoissonCounts) {
  auto rng = random::make_engine(6);
  std::vector<double> counts(10000);
  for (auto& c : counts) c = static_cast<double>(sample_projections(1e-7, 1e4, rng).size());
  const double mean = 1e-7 * M_PI * 1e8;  // ~31.42
  EXPECT_NEAR(stats::mean(counts), mean, 4.0 * std::sqrt(mean / counts.size()));
  const double dispersion = stats::variance(counts) / stats::mean(counts);
  EXPECT_GE(dispersion, 0.9);
  EXPECT_LE(dispersion, 1.1);
}

TEST(Projections, UniformOnDiskAndNearestSquaredDistanceIsExponential) {
  auto rng = random::make_engine(7);
  const double lambda = 1e-5, radius = 1000.0;
  std::vector<double> nearest;
  std::vector<double> area_fraction;
  for (int i = 0; i < 10000; ++i) {
    const auto pts = sample_projections(lambda, radius, rng);
    double best = INFINITY;
    for (const auto& p : pts) {
      const double r2 = p.x * p.x + p.y * p.y;
      ASSERT_LE(r2, radius * radius);
      best = std::min(best, r2);
      if (area_fraction.size() < 20000) area_fraction.push_back(r2 / (radius * radius));
    }
    nearest.push_back(best);
  }
  const double rate = M_PI * lambda;
  EXPECT_GT(stats::ks_test(nearest, [&](double y) { return -std::expm1(-rate * y); }).p_value, 0.01);
  EXPECT_GT(stats::ks_test(area_fraction, [](double u) { return std::clamp(u, 0.0, 1.0); }).p_value, 0.01);
}

TEST(Realization, FlatAndDiagonalGeometry) {
  NetworkParams p;
  p.lambda = 1e-5;
  auto flat = realize_network(p, ElevationModel::constant(0.0), 1000.0, 11);
  ASSERT_FALSE(flat.uavs.empty());
  for (const auto& u : flat.uavs) EXPECT_EQ(u.altitude, 0.0);
  auto diag = realize_network(p, ElevationModel::constant(M_PI / 4), 1000.0, 12);
  for (const auto& u : diag.uavs) EXPECT_NEAR(u.altitude, u.horizontal_distance(), 1e-12 * u.horizontal_distance());
}

TEST(Realization, GeometryInvariants) {
  NetworkParams p;
  p.lambda = 1e-5;
  const auto net = realize_network(p, ElevationModel::gamma_tan(2.0, deg_to_rad(35.0)), 2000.0, 13);
  EXPECT_EQ(net.seed, 13u);
  EXPECT_EQ(net.sim_radius, 2000.0);
  for (const auto& u : net.uavs) {
    const double x = u.horizontal_distance();
    EXPECT_LE(x, 2000.0);
    EXPECT_GE(u.theta, 0.0);
    EXPECT_LT(u.theta, M_PI / 2);
    EXPECT_NEAR(u.altitude, x * std::tan(u.theta), 1e-12 * u.altitude + 1e-300);
    EXPECT_NEAR(u.distance() * u.distance(), x * x + u.altitude * u.altitude, 1e-12 * x * x);
    EXPECT_NEAR(u.distance(), x / std::cos(u.theta), 1e-12 * u.distance());
  }
}

TEST(Realization, SeedReproducesExactly) {
  NetworkParams p;
  p.lambda = 1e-6;
  const auto e = ElevationModel::gamma_tan(3.0, 0.4);
  const auto a = realize_network(p, e, 5000.0, 99);
  const auto b = realize_network(p, e, 5000.0, a.seed);
  ASSERT_EQ(a.uavs.size(), b.uavs.size());
  for (std::size_t i = 0; i < a.uavs.size(); ++i) {
    EXPECT_EQ(a.uavs[i].x, b.uavs[i].x);
    EXPECT_EQ(a.uavs[i].theta, b.uavs[i].theta);
    EXPECT_EQ(a.uavs[i].los, b.uavs[i].los);
  }
}

TEST(Realization, LosFractionMatchesProbability) {
  NetworkParams p;
  p.lambda = 1e-5;
  const double theta = deg_to_rad(12.0);  // rho ~ 0.5, a sharper test than 25 deg
  std::size_t los = 0, n = 0;
  for (std::uint64_t s = 0; n < 100000; ++s) {
    for (const auto& u : realize_network(p, ElevationModel::constant(theta), 1000.0, s).uavs) {
      los += u.los == LinkState::LoS;
      ++n;
    }
  }
  const double rho = los_probability(theta, p.c1, p.c2);
  EXPECT_NEAR(static_cast<double>(los) / n, rho, 4.0 * std::sqrt(rho * (1 - rho) / n));

  // Table-I angle: rho(25 deg) ~ 0.99913.
  los = n = 0;
  for (std::uint64_t s = 0; n < 100000; ++s) {
    for (const auto& u : realize_network(p, ElevationModel::constant(deg_to_rad(25.0)), 1000.0, 1000 + s).uavs) {
      los += u.los == LinkState::LoS;
      ++n;
    }
  }
  const double rho25 = los_probability(deg_to_rad(25.0), p.c1, p.c2);
  EXPECT_NEAR(static_cast<double>(los) / n, rho25, 4.0 * std::sqrt(rho25 * (1 - rho25) / n));
}

TEST(Realization, AngleIndependentOfProjection) {
  NetworkParams p;
  p.lambda = 1e-5;
  std::vector<double> th, r;
  for (std::uint64_t s = 0; th.size() < 50000; ++s)
    for (const auto& u : realize_network(p, ElevationModel::gamma_tan(1.5, 0.5), 1000.0, s).uavs) {
      th.push_back(u.theta);
      r.push_back(u.horizontal_distance());
    }
  EXPECT_LT(std::fabs(stats::pearson(th, r)), 3.0 / std::sqrt(static_cast<double>(th.size())));
}
