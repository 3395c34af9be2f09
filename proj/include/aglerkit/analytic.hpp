#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "aglerkit/poly2.hpp"

namespace aglerkit {

/// Sparse polynomial in `vars` complex variables.
class MultiPoly {
 public:
  using Exponent = std::vector<int>;

  MultiPoly() = default;
  explicit MultiPoly(int vars);

  static MultiPoly constant(int vars, Complex c);
  static MultiPoly variable(int vars, int index);

  int vars() const noexcept { return vars_; }
  const std::map<Exponent, Complex>& terms() const noexcept { return terms_; }
  // Adds c to the coefficient of the given exponent; zero results are dropped.
  void add_term(const Exponent& e, Complex c);
  Complex coeff(const Exponent& e) const;

  Complex evaluate(std::span<const Complex> x) const;
  MultiPoly derivative(int index) const;
  int degree_in(int index) const;
  bool is_zero() const noexcept { return terms_.empty(); }

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(Complex s) const;

 private:
  int vars_ = 0;
  std::map<Exponent, Complex> terms_;
};

struct RationalFunction {
  MultiPoly numerator;
  MultiPoly denominator;

  RationalFunction() = default;
  RationalFunction(MultiPoly num, MultiPoly den);
  explicit RationalFunction(MultiPoly poly);  // denominator 1

  int vars() const noexcept { return numerator.vars(); }
  Complex evaluate(std::span<const Complex> x) const;
  Complex partial(int index, std::span<const Complex> x) const;  // quotient rule
};

/// Holomorphic function of `dimension` variables: either an explicit rational
/// expression (exact derivatives) or a black-box evaluator (central differences).
class AnalyticMap {
 public:
  using Callable = std::function<Complex(std::span<const Complex>)>;

  static constexpr double kDifferenceStep = 1e-6;

  AnalyticMap() = default;
  static AnalyticMap rational(RationalFunction r);
  static AnalyticMap callable(int dimension, Callable fn);

  int dimension() const noexcept { return dimension_; }
  bool is_rational() const noexcept { return rational_ != nullptr; }
  const RationalFunction& as_rational() const;

  Complex operator()(std::span<const Complex> x) const { return evaluate(x); }
  Complex evaluate(std::span<const Complex> x) const;
  Complex partial(int index, std::span<const Complex> x) const;

 private:
  int dimension_ = 0;
  std::shared_ptr<const RationalFunction> rational_;
  Callable callable_;
};

}  // namespace aglerkit
