#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "aglerkit/poly2.hpp"

namespace aglerkit {

// Uniform (area measure) point of the disk |w| < radius.
inline Complex sample_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, theta);
}

inline Point2 sample_polydisk(std::mt19937_64& rng, double radius) {
  const Complex z1 = sample_disk(rng, radius);
  const Complex z2 = sample_disk(rng, radius);
  return {z1, z2};
}

}  // namespace aglerkit
