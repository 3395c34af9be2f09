#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "aglerkit/poly2.hpp"

namespace aglerkit {

/// Dense complex matrix, row-major. Used for spectral factors and sampled
/// kernel matrices before they are certified Hermitian.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::vector<Complex> column(std::size_t j) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Square Hermitian matrix. Every constructor symmetrizes, so
/// (i,j) == conj(j,i) exactly after construction.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(std::size_t order) : order_(order), data_(order * order) {}
  // Symmetrizes (M + M*)/2.
  explicit HermitianMatrix(const ComplexMatrix& m);
  HermitianMatrix(std::size_t order, std::vector<Complex> row_major);

  static HermitianMatrix identity(std::size_t order);
  static HermitianMatrix diagonal(std::span<const double> values);

  std::size_t order() const noexcept { return order_; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * order_ + j]; }
  // Sets (i,j) and its mirror.
  void set(std::size_t i, std::size_t j, Complex value);

  const std::vector<Complex>& data() const noexcept { return data_; }
  double frobenius_norm() const noexcept;
  double max_hermitian_defect() const noexcept;

  HermitianMatrix operator+(const HermitianMatrix& other) const;
  HermitianMatrix operator-(const HermitianMatrix& other) const;
  HermitianMatrix scaled(double s) const;

 private:
  void symmetrize();

  std::size_t order_ = 0;
  std::vector<Complex> data_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Throws ConvergenceError (with the remaining
/// off-diagonal mass) if the sweep cap is hit.
EigenDecomposition eig_hermitian(const HermitianMatrix& m, int max_sweeps = 100);

double min_eigenvalue(const HermitianMatrix& m);

/// Frobenius-nearest PSD matrix (eigenvalues clipped at zero).
HermitianMatrix project_psd(const HermitianMatrix& m);

inline constexpr double kDefaultRankTol = 1e-9;

/// Columns W (order x rank) with M ~= W W*. Eigenvalues at or below
/// rank_tol * lambda_max are dropped; an eigenvalue below -rank_tol * lambda_max
/// raises NotPsdError.
ComplexMatrix psd_factor(const HermitianMatrix& m, double rank_tol = kDefaultRankTol);

ComplexMatrix multiply_adjoint(const ComplexMatrix& w);  // W W*

/// Roots of c[0] + c[1] w + ... via companion-matrix eigenvalues, then one or
/// two Newton polishing steps. Trailing (high-order) coefficients below
/// trim_tol * max|c| are dropped first. Throws InvalidArgument on the zero
/// polynomial.
std::vector<Complex> roots_univariate(std::span<const Complex> coeffs, double trim_tol = 1e-14);

Complex evaluate_univariate(std::span<const Complex> coeffs, Complex w);

/// Euclidean projection onto {y : E y = d}. Rank-deficient E is handled through
/// the minimum-norm pseudo-inverse; an inconsistent system throws unless
/// least_squares is set, in which case the target is the least-squares set.
class AffineProjector {
 public:
  AffineProjector(Eigen::MatrixXd system, Eigen::VectorXd rhs, bool least_squares = false);

  Eigen::VectorXd project(const Eigen::VectorXd& x) const;
  double max_violation(const Eigen::VectorXd& x) const;  // max |E x - d|
  Eigen::Index rank() const noexcept { return rank_; }
  Eigen::Index dimension() const noexcept { return system_.cols(); }

 private:
  Eigen::MatrixXd system_;
  Eigen::VectorXd rhs_;
  Eigen::MatrixXd pinv_;
  Eigen::Index rank_ = 0;
};

Eigen::VectorXd affine_project(const Eigen::VectorXd& x, const Eigen::MatrixXd& system,
                               const Eigen::VectorXd& rhs, bool least_squares = false);

}  // namespace aglerkit
