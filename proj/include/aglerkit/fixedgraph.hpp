#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aglerkit/analytic.hpp"
#include "aglerkit/moebius.hpp"

namespace aglerkit {

/// F(z, w) with z in D^n and w in D; the underlying map has n+1 variables, w last.
class SchurMap {
 public:
  SchurMap(int n, AnalyticMap map);

  int n() const noexcept { return n_; }
  const AnalyticMap& map() const noexcept { return map_; }

  Complex operator()(std::span<const Complex> z, Complex w) const;
  Complex dw(std::span<const Complex> z, Complex w) const;
  Complex dz(int i, std::span<const Complex> z, Complex w) const;

 private:
  std::vector<Complex> joined(std::span<const Complex> z, Complex w) const;

  int n_;
  AnalyticMap map_;
};

enum class FixedPointClass { Interior, AutomorphismCase };
std::string to_string(FixedPointClass c);

struct FixedPointRecord {
  std::vector<Complex> z;
  Complex w;
  double residual = 0.0;   // |F(z,w) - w|
  Complex w_derivative;    // dF/dw at (z, w)
  FixedPointClass classification = FixedPointClass::Interior;
};

struct NewtonOptions {
  double tol = 1e-12;             // on |F(z,w) - w|
  int max_iter = 50;
  double dedupe = 1e-8;
  double automorphism_tol = 1e-9; // |dF/dw| >= 1 - this counts as the equality case
  double degenerate_tol = 1e-10;  // |dF/dw - 1| below this stalls Newton
};

/// Seeds spread over the disk: the origin plus two rings.
std::vector<Complex> default_seeds();

/// Newton on w -> F(z,w) - w from each seed; converged points are deduplicated
/// and classified. Seeds that fail simply contribute nothing. Throws
/// InconsistencyError if a fixed point has |dF/dw| > 1 + 1e-8, which no Schur map allows.
std::vector<FixedPointRecord> find_fixed_w(const SchurMap& F, std::span<const Complex> z,
                                           std::span<const Complex> seeds, const NewtonOptions& options = {});

/// Disk automorphism phi with F(z, w) = phi(w) for all z, if the slice at z0 is
/// one. A slice that is Moebius at z0 but not elsewhere throws InconsistencyError.
std::optional<MoebiusAutomorphism> detect_w_automorphism(const SchurMap& F, std::span<const Complex> z0,
                                                         double tol = 1e-8, std::uint64_t seed = 42);

/// Per-axis node sets: a sunflower spiral of `per_axis` points in the disk of
/// `radius` about the center coordinate, containing the center and reaching the radius.
std::vector<Complex> sunflower_nodes(int count, double radius, Complex center = {});

/// Tensor grid over D^n. Flat index digits run with axis 0 most significant.
struct GraphGrid {
  int n = 0;
  int per_axis = 0;
  double radius = 0.0;
  std::vector<Complex> center;
  std::vector<std::vector<Complex>> axes;

  static GraphGrid sunflower(int n, int per_axis, double radius, std::vector<Complex> center = {});
  std::size_t size() const;
  std::vector<Complex> node(std::size_t flat) const;
};

struct SliceCheck {
  int axis = 0;
  std::vector<Complex> anchor;   // point the slice passes through (after any perturbation)
  int nodes = 0;
  double min_eigenvalue = 0.0;   // of the slice Pick matrix
  int anchor_perturbations = 0;
  bool derivative_degenerate = false;  // slice derivative stayed below 1e-8 at the anchor
};

struct PathSummary {
  std::vector<int> axis_order;
  std::size_t legs = 0;
  std::size_t steps = 0;
  std::size_t halvings = 0;
};

struct GraphOptions {
  double tol = 1e-9;       // graph residual invariant
  double step = 0.05;      // predictor step length along a coordinate
  int max_halvings = 12;
  int pick_nodes = 8;
  double pick_tol = 1e-8;
  double anchor_offset = 0.01;
  int max_perturbations = 5;
  std::uint64_t seed = 42;
  NewtonOptions newton;
};

struct GraphFunction {
  GraphGrid grid;
  std::vector<Complex> values;       // NaN at nodes continuation could not reach
  std::vector<double> residuals;     // |F(z, f(z)) - f(z)|, infinite where unsolved
  std::vector<Complex> w_derivatives;
  FixedPointRecord seed;
  PathSummary path;
  std::vector<SliceCheck> slices;

  double coverage() const;
  bool complete() const { return coverage() == 1.0; }
  double max_residual() const;
  double min_slice_eigenvalue() const;
  double max_w_derivative() const;
  // Every node solved within tolerance inside the disk, with positive slice Pick matrices.
  bool certified(const GraphOptions& options = {}) const;
};

/// Graph on a small grid centered at the record's z.
GraphFunction local_graph(const SchurMap& F, const FixedPointRecord& record, double radius, int per_axis,
                          const GraphOptions& options = {});

/// Graph on a grid centered at the origin, reached from the local graph's seed
/// one coordinate at a time. Throws DegenerateContinuation if dF/dw reaches 1.
GraphFunction continue_graph(const SchurMap& F, const GraphFunction& local, double target_radius, int per_axis,
                             const GraphOptions& options = {});

/// f(z) at an arbitrary point, continued from the nearest solved grid node.
Complex graph_value(const SchurMap& F, const GraphFunction& graph, std::span<const Complex> z,
                    const GraphOptions& options = {});

enum class GraphCase { Identity, UniqueGraph, NoFixedPoints };
std::string to_string(GraphCase c);

struct UniquenessReport {
  GraphCase kind = GraphCase::NoFixedPoints;
  std::size_t distinct_points = 0;
  std::optional<MoebiusAutomorphism> automorphism;
};

/// Two fixed w over one z are only allowed when F is the identity in w.
UniquenessReport uniqueness_check(const SchurMap& F, const std::vector<FixedPointRecord>& records,
                                  double tol = 1e-8);

}  // namespace aglerkit
