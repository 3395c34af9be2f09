#pragma once

#include <string>
#include <vector>

#include "aglerkit/numerics.hpp"
#include "aglerkit/poly2.hpp"

namespace aglerkit {

/// Interpolation data lambda_i -> w_i for a Schur function of one variable.
struct PickProblem {
  std::vector<Complex> nodes;
  std::vector<Complex> targets;
  double tol = 1e-9;

  // Throws InvalidArgument on length mismatch, nodes off the open disk,
  // targets off the closed disk, or nodes closer than 1e-10.
  void validate() const;
};

enum class PickVerdict { Solvable, SolvableUnique, NotSolvable };

std::string to_string(PickVerdict v);

/// [(1 - w_i conj w_j) / (1 - lambda_i conj lambda_j)]
HermitianMatrix pick_matrix(const PickProblem& problem);

struct SolvabilityReport {
  PickVerdict verdict = PickVerdict::NotSolvable;
  double min_eigenvalue = 0.0;
};

SolvabilityReport solvability(const PickProblem& problem);
PickVerdict is_solvable(const PickProblem& problem);

/// Result of the Schur recursion
///   f = (w_1 + b_1 f_1) / (1 + conj(w_1) b_1 f_1),  b_1(z) = (z - lambda_1)/(1 - conj(lambda_1) z),
/// terminated by a unimodular constant (unique case) or by 0 (the central choice).
class SchurInterpolant {
 public:
  struct Stage {
    Complex node;
    Complex value;  // |value| < 1
  };

  SchurInterpolant(std::vector<Stage> stages, Complex terminal);

  Complex operator()(Complex z) const { return evaluate(z); }
  Complex evaluate(Complex z) const;

  const std::vector<Stage>& stages() const noexcept { return stages_; }
  Complex terminal() const noexcept { return terminal_; }
  // Rational degree: number of stages, plus nothing for the terminal constant.
  int degree() const noexcept { return static_cast<int>(stages_.size()); }
  bool is_blaschke() const noexcept { return std::abs(std::abs(terminal_) - 1.0) < 1e-12; }

 private:
  std::vector<Stage> stages_;
  Complex terminal_;
};

/// Throws NotSolvableError when the Pick matrix is not PSD within tolerance.
SchurInterpolant solve(const PickProblem& problem);

struct GeometricKernel {
  HermitianMatrix matrix;  // entrywise K1 / (1 - K2)
  double min_eigenvalue = 0.0;
  bool psd = false;
};

/// Closed form of K1 * sum_j K2^j on a common node set. Throws DomainError if a
/// diagonal entry of K2 reaches 1 - 1e-9.
GeometricKernel geometric_kernel(const HermitianMatrix& k1, const HermitianMatrix& k2, double tol = 1e-9);

}  // namespace aglerkit
