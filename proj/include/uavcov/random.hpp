#pragma once

// Random variate generation on top of std::mt19937_64.
//
// The standard <random> distributions are implementation-defined, so every
// variate used by the simulator is derived here from raw engine output. This
// keeps a (seed, stream) pair bit-reproducible across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

#include "uavcov/error.hpp"

namespace uavcov::random {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of an independent sub-stream of `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

inline Engine make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Engine(seq);
}

// Uniform on (0, 1]; never returns 0 so log() is always finite.
inline double uniform_pos(Engine& rng) noexcept {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Uniform on [0, 1).
inline double uniform01(Engine& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double exponential(Engine& rng) noexcept { return -std::log(uniform_pos(rng)); }

// Marsaglia polar method; the second variate is discarded so draws stay
// independent of call history.
inline double normal(Engine& rng) noexcept {
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

// Gamma(shape, 1) by Marsaglia & Tsang; shape < 1 uses the U^(1/shape) boost.
inline double gamma_unit(Engine& rng, double shape) {
  if (!(shape > 0.0)) throw InvalidParameter("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = gamma_unit(rng, shape + 1.0);
    return g * std::pow(uniform_pos(rng), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_pos(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Gamma(n, 1) for integer n as a sum of n unit exponentials. Uniforms are
// multiplied in chunks of 16 so the product cannot underflow.
inline double gamma_int(Engine& rng, int n) noexcept {
  double sum = 0.0;
  while (n > 0) {
    double prod = 1.0;
    for (int i = 0; i < 16 && n > 0; ++i, --n) prod *= uniform_pos(rng);
    sum -= std::log(prod);
  }
  return sum;
}

inline bool bernoulli(Engine& rng, double p) noexcept { return uniform01(rng) < p; }

}  // namespace uavcov::random
