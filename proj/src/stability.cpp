#include "aglerkit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "aglerkit/errors.hpp"
#include "aglerkit/numerics.hpp"
#include "aglerkit/parallel.hpp"

namespace aglerkit {

std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::StableOpen: return "StableOpen";
    case StabilityVerdict::StableClosedStrict: return "StableClosedStrict";
    case StabilityVerdict::ZeroFound: return "ZeroFound";
    case StabilityVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

StabilityVerdict stability_verdict_from_string(const std::string& s) {
  if (s == "StableOpen") return StabilityVerdict::StableOpen;
  if (s == "StableClosedStrict") return StabilityVerdict::StableClosedStrict;
  if (s == "ZeroFound") return StabilityVerdict::ZeroFound;
  if (s == "Inconclusive") return StabilityVerdict::Inconclusive;
  throw InvalidArgument("unknown stability verdict '" + s + "'");
}

namespace {

// Per-slice outcome, reduced sequentially in sample order.
struct SliceResult {
  bool degenerate = false;
  bool boundary_touch = false;
  double min_root = std::numeric_limits<double>::infinity();
  std::optional<Point2> zero;          // confirmed interior zero
  std::optional<Point2> unconfirmed;   // interior root whose |p| stayed above tolerance
};

Point2 make_point(int free_axis, Complex fixed, Complex root) {
  // free_axis == 1: the slice runs over z2 with z1 fixed.
  return free_axis == 1 ? Point2{fixed, root} : Point2{root, fixed};
}

SliceResult scan_slice(const BivariatePolynomial& p, int free_axis, Complex fixed,
                       const StabilityOptions& opt, double abs_tol) {
  SliceResult out;
  const std::vector<Complex> coeffs = p.slice(free_axis, fixed);
  double slice_scale = 0.0;
  for (const auto& c : coeffs) slice_scale = std::max(slice_scale, std::abs(c));
  if (slice_scale <= abs_tol) {
    out.degenerate = true;
    out.zero = make_point(free_axis, fixed, 0.0);
    return out;
  }
  for (const Complex& r : roots_univariate(coeffs)) {
    const double mod = std::abs(r);
    out.min_root = std::min(out.min_root, mod);
    if (mod < 1.0 - opt.root_margin) {
      const Point2 w = make_point(free_axis, fixed, r);
      if (std::abs(p.evaluate(w)) <= abs_tol) {
        if (!out.zero) out.zero = w;
      } else if (!out.unconfirmed) {
        out.unconfirmed = w;
      }
    } else if (mod <= 1.0 + opt.root_margin) {
      out.boundary_touch = true;
    }
  }
  return out;
}

std::vector<Complex> slice_anchors(const StabilityOptions& opt) {
  std::vector<Complex> anchors;
  anchors.reserve(static_cast<std::size_t>(opt.torus_grid + opt.disk_radial * opt.disk_angular));
  for (int k = 0; k < opt.torus_grid; ++k) {
    anchors.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / opt.torus_grid));
  }
  const double outer = 1.0 - opt.disk_inset;
  for (int i = 0; i < opt.disk_radial; ++i) {
    const double r = opt.disk_radial == 1 ? 0.0 : outer * i / (opt.disk_radial - 1);
    const double stagger = (i % 2) * 0.5;
    for (int j = 0; j < opt.disk_angular; ++j) {
      anchors.push_back(std::polar(r, 2.0 * std::numbers::pi * (j + stagger) / opt.disk_angular));
    }
  }
  return anchors;
}

}  // namespace

StabilityReport check_stability(const BivariatePolynomial& p, const StabilityOptions& opt) {
  if (p.is_zero()) throw InvalidArgument("stability check of the zero polynomial");
  if (opt.torus_grid <= 0 || opt.disk_radial <= 0 || opt.disk_angular <= 0 || !(opt.tol > 0.0)) {
    throw InvalidArgument("stability grids and tolerance must be positive");
  }

  StabilityReport report;
  report.torus_grid = opt.torus_grid;
  report.disk_radial = opt.disk_radial;
  report.disk_angular = opt.disk_angular;
  report.tolerance = opt.tol * std::max(1.0, p.max_abs_coeff());

  const std::vector<Complex> anchors = slice_anchors(opt);
  const std::size_t per_pass = anchors.size();
  std::vector<SliceResult> slices(2 * per_pass);
  parallel_for(slices.size(), [&](std::size_t i) {
    const int free_axis = i < per_pass ? 1 : 0;
    slices[i] = scan_slice(p, free_axis, anchors[i % per_pass], opt, report.tolerance);
  });

  // Min modulus over the torus x torus grid, one row per worker.
  std::vector<double> row_min(static_cast<std::size_t>(opt.torus_grid));
  parallel_for(row_min.size(), [&](std::size_t i) {
    const Complex z1 = anchors[i];
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < opt.torus_grid; ++j) {
      best = std::min(best, std::abs(p.evaluate({z1, anchors[static_cast<std::size_t>(j)]})));
    }
    row_min[i] = best;
  });
  report.min_modulus = *std::min_element(row_min.begin(), row_min.end());

  bool boundary_touch = false;
  std::optional<Point2> unconfirmed;
  report.min_root_modulus = std::numeric_limits<double>::infinity();
  for (const SliceResult& s : slices) {
    report.min_root_modulus = std::min(report.min_root_modulus, s.min_root);
    boundary_touch = boundary_touch || s.boundary_touch;
    if (s.zero) {
      report.verdict = StabilityVerdict::ZeroFound;
      report.witness = s.zero;
      return report;
    }
    if (s.unconfirmed && !unconfirmed) unconfirmed = s.unconfirmed;
  }
  if (unconfirmed) {
    report.verdict = StabilityVerdict::Inconclusive;
    report.witness = unconfirmed;
    return report;
  }
  if (!boundary_touch && report.min_modulus > report.tolerance) {
    report.verdict = StabilityVerdict::StableClosedStrict;
  } else {
    report.verdict = StabilityVerdict::StableOpen;
  }
  return report;
}

}  // namespace aglerkit
