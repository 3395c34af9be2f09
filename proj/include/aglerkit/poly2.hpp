#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace aglerkit {

using Complex = std::complex<double>;

struct Point2 {
  Complex z1;
  Complex z2;
};

struct Bidegree {
  int n = 0;  // degree bound in z1
  int m = 0;  // degree bound in z2

  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

/// Dense bivariate polynomial sum_{a<=n, b<=m} c[a][b] z1^a z2^b.
///
/// The bidegree is declared, not inferred: trailing zero rows or columns are
/// kept, because the reflection p -> z1^n z2^m conj(p(1/conj z1, 1/conj z2))
/// depends on (n, m) rather than on the nonzero support.
class BivariatePolynomial {
 public:
  BivariatePolynomial() : BivariatePolynomial(Bidegree{0, 0}) {}
  explicit BivariatePolynomial(Bidegree degree);
  // coeffs[a][b] multiplies z1^a z2^b; every row must have the same length.
  explicit BivariatePolynomial(const std::vector<std::vector<Complex>>& coeffs);

  static BivariatePolynomial constant(Complex c, Bidegree degree = {0, 0});
  static BivariatePolynomial monomial(int a, int b, Complex c = 1.0);

  Bidegree degree() const noexcept { return degree_; }
  int n() const noexcept { return degree_.n; }
  int m() const noexcept { return degree_.m; }

  Complex coeff(int a, int b) const { return coeffs_[index(a, b)]; }
  Complex& coeff(int a, int b) { return coeffs_[index(a, b)]; }
  // Zero outside the declared grid.
  Complex coeff_or_zero(int a, int b) const noexcept;

  const std::vector<Complex>& data() const noexcept { return coeffs_; }

  // Smallest bidegree that still contains every nonzero coefficient.
  Bidegree actual_degree(double zero_tol = 0.0) const noexcept;
  bool is_zero(double zero_tol = 0.0) const noexcept;
  double norm2() const noexcept;
  double max_abs_coeff() const noexcept;

  // Same coefficients on a larger declared grid.
  BivariatePolynomial padded(Bidegree degree) const;

  Complex operator()(const Point2& z) const { return evaluate(z); }
  Complex evaluate(const Point2& z) const;

  // Coefficients of the slice w -> p(z1, w) (axis 0) or w -> p(w, z2) (axis 1),
  // lowest power first.
  std::vector<Complex> slice(int free_axis, Complex fixed) const;

  friend bool operator==(const BivariatePolynomial&, const BivariatePolynomial&) = default;

 private:
  std::size_t index(int a, int b) const;

  Bidegree degree_;
  std::vector<Complex> coeffs_;  // row-major, row = power of z1
};

Complex evaluate(const BivariatePolynomial& p, const Point2& z);

/// z1^n z2^m conj(p(1/conj z1, 1/conj z2)); coefficient (a,b) of the result is
/// conj of coefficient (n-a, m-b) of p. Throws InvalidArgument if p has a
/// nonzero coefficient beyond (n, m).
BivariatePolynomial reflect(const BivariatePolynomial& p, Bidegree degrees);
// Reflection relative to p's own declared bidegree.
BivariatePolynomial reflect(const BivariatePolynomial& p);

BivariatePolynomial add(const BivariatePolynomial& p, const BivariatePolynomial& q);
BivariatePolynomial scale(const BivariatePolynomial& p, Complex s);
BivariatePolynomial multiply(const BivariatePolynomial& p, const BivariatePolynomial& q);
BivariatePolynomial operator+(const BivariatePolynomial& p, const BivariatePolynomial& q);
BivariatePolynomial operator-(const BivariatePolynomial& p, const BivariatePolynomial& q);
BivariatePolynomial operator*(const BivariatePolynomial& p, const BivariatePolynomial& q);
BivariatePolynomial operator*(Complex s, const BivariatePolynomial& p);

// axis 0 differentiates in z1, axis 1 in z2. Declared degree drops by one
// along the axis (but not below zero).
BivariatePolynomial partial_derivative(const BivariatePolynomial& p, int axis);

double max_coeff_distance(const BivariatePolynomial& p, const BivariatePolynomial& q);

}  // namespace aglerkit
