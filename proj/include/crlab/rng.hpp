#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <utility>

/// @file rng.hpp
/// Deterministic sampling helpers.  All randomized constructions in the
/// library draw through these fixed mappings over the raw mt19937_64 stream,
/// never through distribution adaptors whose internals vary between standard
/// library implementations — a given seed must reproduce node and sample
/// sets bit-for-bit.

namespace crlab::rng {

/// 53-bit uniform in [0, 1).
[[nodiscard]] inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Explicit Box–Muller pair of independent standard Gaussians.
[[nodiscard]] inline std::pair<double, double> gaussian_pair(
    std::mt19937_64& gen) {
  double u = uniform01(gen);
  while (u <= 0.0) u = uniform01(gen);
  const double v = uniform01(gen);
  const double radius = std::sqrt(-2.0 * std::log(u));
  const double angle = 2.0 * std::numbers::pi * v;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace crlab::rng
