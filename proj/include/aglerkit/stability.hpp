#pragma once

#include <optional>
#include <string>

#include "aglerkit/poly2.hpp"

namespace aglerkit {

enum class StabilityVerdict { StableOpen, StableClosedStrict, ZeroFound, Inconclusive };

std::string to_string(StabilityVerdict v);
StabilityVerdict stability_verdict_from_string(const std::string& s);

struct StabilityOptions {
  int torus_grid = 512;
  int disk_radial = 64;
  int disk_angular = 64;
  double tol = 1e-9;           // |p| threshold, relative to the largest coefficient
  double root_margin = 1e-6;   // slice roots within this band of |w| = 1 count as boundary zeros
  double disk_inset = 1e-3;    // disk samples stay in |z| <= 1 - disk_inset
};

/// Sampling certificate for "p has no zeros in the open bidisk". The verdict
/// is only as fine as the grids; the report carries them so callers can judge.
struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::Inconclusive;
  std::optional<Point2> witness;
  double min_modulus = 0.0;       // min |p| over the torus x torus grid
  double min_root_modulus = 0.0;  // smallest slice-root modulus seen (inf if no roots)
  int torus_grid = 0;
  int disk_radial = 0;
  int disk_angular = 0;
  double tolerance = 0.0;  // absolute |p| threshold actually used

  bool stable() const noexcept {
    return verdict == StabilityVerdict::StableOpen || verdict == StabilityVerdict::StableClosedStrict;
  }
};

StabilityReport check_stability(const BivariatePolynomial& p, const StabilityOptions& options = {});

}  // namespace aglerkit
