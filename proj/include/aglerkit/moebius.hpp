#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "aglerkit/poly2.hpp"

namespace aglerkit {

/// phi(w) = u (w - a) / (1 - conj(a) w) with |u| = 1 and |a| < 1.
struct MoebiusAutomorphism {
  Complex u{1.0, 0.0};
  Complex a{};

  static MoebiusAutomorphism identity() { return {}; }

  Complex operator()(Complex w) const { return u * (w - a) / (1.0 - std::conj(a) * w); }
  MoebiusAutomorphism inverse() const { return {std::conj(u), -u * a}; }
  bool is_identity(double tol = 1e-9) const { return std::abs(u - 1.0) <= tol && std::abs(a) <= tol; }
};

struct MoebiusFitOptions {
  double tol = 1e-8;         // verification threshold
  int verify_points = 50;
  double radius = 0.9;       // fit and verification nodes stay inside this disk
  std::uint64_t seed = 42;
};

/// Fits a disk automorphism through three nodes of `slice` and accepts it only
/// if it matches the slice at `verify_points` further seeded nodes.
std::optional<MoebiusAutomorphism> fit_moebius(const std::function<Complex(Complex)>& slice,
                                               const MoebiusFitOptions& options = {});

}  // namespace aglerkit
