#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aglerkit/analytic.hpp"
#include "aglerkit/fixedgraph.hpp"
#include "aglerkit/moebius.hpp"

namespace aglerkit {

/// Holomorphic self-map rho of D^n given componentwise.
struct RetractMap {
  int n = 0;
  std::vector<AnalyticMap> components;

  RetractMap() = default;
  RetractMap(int n, std::vector<AnalyticMap> components);

  std::vector<Complex> operator()(std::span<const Complex> z) const { return apply(z); }
  std::vector<Complex> apply(std::span<const Complex> z) const;
};

struct IdempotenceReport {
  double max_defect = 0.0;   // max ||rho(rho(z)) - rho(z)||_inf
  double max_modulus = 0.0;  // max |rho_j(z)|
  std::vector<Complex> witness;
  int samples = 0;
  bool passed = false;
};

IdempotenceReport verify_idempotent(const RetractMap& rho, int samples = 500, std::uint64_t seed = 42,
                                    double tol = 1e-9, double radius = 0.95);

enum class ComponentKind { IdentityCoordinate, AutomorphismOfOther, NotAutomorphism, Constant };
std::string to_string(ComponentKind k);

struct ComponentClass {
  ComponentKind kind = ComponentKind::NotAutomorphism;
  int source = -1;            // for AutomorphismOfOther: rho_j = phi(z_source)
  MoebiusAutomorphism phi;
  Complex constant;           // for Constant
};

struct ScanOptions {
  double tol = 1e-8;               // Moebius verification and identity threshold
  double constant_variance = 1e-12;
  int samples = 64;
  double radius = 0.9;
  std::uint64_t seed = 42;
};

/// Classifies every component. Throws InconsistencyError when the automorphism
/// pattern is impossible for a retraction (an automorphic slice in its own
/// variable that is not the identity, or a copy of a coordinate that is not free).
std::vector<ComponentClass> scan_automorphism_components(const RetractMap& rho, const ScanOptions& options = {});

struct ReduceOptions {
  double radius = 0.9;        // radius of the fixed-point graph grid
  int grid = 20;              // nodes per axis, capped so the grid stays near 4096 nodes
  double tol = 1e-9;
  int check_samples = 64;     // idempotence samples for the reduced map
  std::uint64_t seed = 42;
  GraphOptions graph;
};

struct ReductionResult {
  int coordinate = -1;        // index of the component that was solved for
  RetractMap reduced;         // z' -> rho'(z', f(z')) on D^(n-1)
  GraphFunction graph;        // f with rho_j(z', f(z')) = f(z')
  std::function<Complex(std::span<const Complex>)> f;
  IdempotenceReport reduced_check;
};

/// Solves rho_j(z', w) = w for w = f(z') over the other coordinates z'.
ReductionResult reduce_dimension(const RetractMap& rho, int coordinate, const ReduceOptions& options = {});

struct NormalForm {
  struct Duplicate {
    int coord;   // x_coord = phi(x_source)
    int source;
    MoebiusAutomorphism phi;
  };
  struct Graph {
    int coord;
    bool constant = false;
    Complex value;          // the constant, when constant
    GraphFunction samples;  // values of x_coord over a grid in the free coordinates
  };

  int n = 0;
  int k = 0;
  std::vector<int> free;                  // ascending original coordinates
  std::vector<Duplicate> duplicates;
  std::vector<Graph> graphs;
  std::vector<int> permutation;           // position -> original coordinate: free, duplicates, graphs
  std::vector<MoebiusAutomorphism> conjugation;  // per original coordinate
  std::function<std::vector<Complex>(std::span<const Complex>)> embedding;

  // (u, e(u), f(u)) written in the original coordinates.
  std::vector<Complex> embed(std::span<const Complex> u) const { return embedding(u); }
  double max_graph_residual() const;
};

struct NormalFormOptions {
  int idempotence_samples = 500;
  double idempotence_tol = 1e-9;
  ScanOptions scan;
  ReduceOptions reduce;
  int grid = 20;                // per-axis nodes of the final f-grids, capped near 4096 nodes
  double radius = 0.9;
  std::uint64_t seed = 42;
};

/// Throws NotRetractionError if rho fails the idempotence check.
NormalForm normal_form(const RetractMap& rho, const NormalFormOptions& options = {});

/// Psi o rho o Psi^-1 at x, where Psi applies the per-coordinate conjugation
/// and then the permutation.
std::vector<Complex> conjugated_apply(const RetractMap& rho, const NormalForm& form, std::span<const Complex> x);

/// max over samples of ||embed(rho(z)_free) - rho(z)||_inf.
double range_defect(const RetractMap& rho, const NormalForm& form, int samples = 200, std::uint64_t seed = 42,
                    double radius = 0.95);

/// Grid size per axis for a k-dimensional grid: min(requested, floor(4096^(1/k))).
int capped_grid(int requested, int k);

}  // namespace aglerkit
