#include "aglerkit/poly2.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aglerkit/errors.hpp"

namespace aglerkit {

BivariatePolynomial::BivariatePolynomial(Bidegree degree) : degree_(degree) {
  if (degree.n < 0 || degree.m < 0) {
    throw InvalidArgument("bidegree must be nonnegative");
  }
  coeffs_.assign(static_cast<std::size_t>(degree.n + 1) * static_cast<std::size_t>(degree.m + 1),
                 Complex{});
}

BivariatePolynomial::BivariatePolynomial(const std::vector<std::vector<Complex>>& coeffs) {
  if (coeffs.empty() || coeffs.front().empty()) {
    throw InvalidArgument("coefficient grid must be at least 1x1");
  }
  const std::size_t cols = coeffs.front().size();
  for (const auto& row : coeffs) {
    if (row.size() != cols) throw InvalidArgument("ragged coefficient grid");
  }
  degree_ = {static_cast<int>(coeffs.size()) - 1, static_cast<int>(cols) - 1};
  coeffs_.reserve(coeffs.size() * cols);
  for (const auto& row : coeffs) {
    for (const auto& c : row) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw InvalidArgument("non-finite polynomial coefficient");
      }
      coeffs_.push_back(c);
    }
  }
}

BivariatePolynomial BivariatePolynomial::constant(Complex c, Bidegree degree) {
  BivariatePolynomial p(degree);
  p.coeff(0, 0) = c;
  return p;
}

BivariatePolynomial BivariatePolynomial::monomial(int a, int b, Complex c) {
  BivariatePolynomial p(Bidegree{a, b});
  p.coeff(a, b) = c;
  return p;
}

std::size_t BivariatePolynomial::index(int a, int b) const {
  if (a < 0 || b < 0 || a > degree_.n || b > degree_.m) {
    throw InvalidArgument("coefficient index (" + std::to_string(a) + "," + std::to_string(b) +
                          ") outside declared bidegree");
  }
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(degree_.m + 1) +
         static_cast<std::size_t>(b);
}

Complex BivariatePolynomial::coeff_or_zero(int a, int b) const noexcept {
  if (a < 0 || b < 0 || a > degree_.n || b > degree_.m) return {};
  return coeffs_[static_cast<std::size_t>(a) * static_cast<std::size_t>(degree_.m + 1) +
                 static_cast<std::size_t>(b)];
}

Bidegree BivariatePolynomial::actual_degree(double zero_tol) const noexcept {
  Bidegree d{0, 0};
  for (int a = 0; a <= degree_.n; ++a) {
    for (int b = 0; b <= degree_.m; ++b) {
      if (std::abs(coeff_or_zero(a, b)) > zero_tol) {
        d.n = std::max(d.n, a);
        d.m = std::max(d.m, b);
      }
    }
  }
  return d;
}

bool BivariatePolynomial::is_zero(double zero_tol) const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [zero_tol](const Complex& c) { return std::abs(c) <= zero_tol; });
}

double BivariatePolynomial::norm2() const noexcept {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

double BivariatePolynomial::max_abs_coeff() const noexcept {
  double s = 0.0;
  for (const auto& c : coeffs_) s = std::max(s, std::abs(c));
  return s;
}

BivariatePolynomial BivariatePolynomial::padded(Bidegree degree) const {
  const Bidegree actual = actual_degree();
  if (degree.n < actual.n || degree.m < actual.m) {
    throw InvalidArgument("padding target smaller than actual degree");
  }
  BivariatePolynomial out(degree);
  for (int a = 0; a <= std::min(degree.n, degree_.n); ++a) {
    for (int b = 0; b <= std::min(degree.m, degree_.m); ++b) out.coeff(a, b) = coeff(a, b);
  }
  return out;
}

Complex BivariatePolynomial::evaluate(const Point2& z) const {
  // Horner in z1 over Horner-in-z2 rows.
  Complex acc{};
  for (int a = degree_.n; a >= 0; --a) {
    Complex row{};
    for (int b = degree_.m; b >= 0; --b) row = row * z.z2 + coeff(a, b);
    acc = acc * z.z1 + row;
  }
  return acc;
}

std::vector<Complex> BivariatePolynomial::slice(int free_axis, Complex fixed) const {
  if (free_axis == 1) {
    // w -> p(z1 = fixed, w)
    std::vector<Complex> out(static_cast<std::size_t>(degree_.m + 1));
    for (int b = 0; b <= degree_.m; ++b) {
      Complex acc{};
      for (int a = degree_.n; a >= 0; --a) acc = acc * fixed + coeff(a, b);
      out[static_cast<std::size_t>(b)] = acc;
    }
    return out;
  }
  if (free_axis == 0) {
    std::vector<Complex> out(static_cast<std::size_t>(degree_.n + 1));
    for (int a = 0; a <= degree_.n; ++a) {
      Complex acc{};
      for (int b = degree_.m; b >= 0; --b) acc = acc * fixed + coeff(a, b);
      out[static_cast<std::size_t>(a)] = acc;
    }
    return out;
  }
  throw InvalidArgument("axis must be 0 or 1");
}

Complex evaluate(const BivariatePolynomial& p, const Point2& z) { return p.evaluate(z); }

BivariatePolynomial reflect(const BivariatePolynomial& p, Bidegree degrees) {
  if (degrees.n < 0 || degrees.m < 0) throw InvalidArgument("reflection degrees must be nonnegative");
  const Bidegree actual = p.actual_degree();
  if (degrees.n < actual.n || degrees.m < actual.m) {
    throw InvalidArgument("reflection degrees (" + std::to_string(degrees.n) + "," +
                          std::to_string(degrees.m) + ") below actual degree (" +
                          std::to_string(actual.n) + "," + std::to_string(actual.m) + ")");
  }
  BivariatePolynomial out(degrees);
  for (int a = 0; a <= degrees.n; ++a) {
    for (int b = 0; b <= degrees.m; ++b) {
      out.coeff(a, b) = std::conj(p.coeff_or_zero(degrees.n - a, degrees.m - b));
    }
  }
  return out;
}

BivariatePolynomial reflect(const BivariatePolynomial& p) { return reflect(p, p.degree()); }

BivariatePolynomial add(const BivariatePolynomial& p, const BivariatePolynomial& q) {
  BivariatePolynomial out(Bidegree{std::max(p.n(), q.n()), std::max(p.m(), q.m())});
  for (int a = 0; a <= out.n(); ++a) {
    for (int b = 0; b <= out.m(); ++b) out.coeff(a, b) = p.coeff_or_zero(a, b) + q.coeff_or_zero(a, b);
  }
  return out;
}

BivariatePolynomial scale(const BivariatePolynomial& p, Complex s) {
  BivariatePolynomial out(p.degree());
  for (int a = 0; a <= p.n(); ++a) {
    for (int b = 0; b <= p.m(); ++b) out.coeff(a, b) = s * p.coeff(a, b);
  }
  return out;
}

BivariatePolynomial multiply(const BivariatePolynomial& p, const BivariatePolynomial& q) {
  BivariatePolynomial out(Bidegree{p.n() + q.n(), p.m() + q.m()});
  for (int a = 0; a <= p.n(); ++a) {
    for (int b = 0; b <= p.m(); ++b) {
      const Complex c = p.coeff(a, b);
      if (c == Complex{}) continue;
      for (int c2 = 0; c2 <= q.n(); ++c2) {
        for (int d = 0; d <= q.m(); ++d) out.coeff(a + c2, b + d) += c * q.coeff(c2, d);
      }
    }
  }
  return out;
}

BivariatePolynomial operator+(const BivariatePolynomial& p, const BivariatePolynomial& q) {
  return add(p, q);
}
BivariatePolynomial operator-(const BivariatePolynomial& p, const BivariatePolynomial& q) {
  return add(p, scale(q, -1.0));
}
BivariatePolynomial operator*(const BivariatePolynomial& p, const BivariatePolynomial& q) {
  return multiply(p, q);
}
BivariatePolynomial operator*(Complex s, const BivariatePolynomial& p) { return scale(p, s); }

BivariatePolynomial partial_derivative(const BivariatePolynomial& p, int axis) {
  if (axis != 0 && axis != 1) throw InvalidArgument("axis must be 0 or 1");
  const Bidegree d = axis == 0 ? Bidegree{std::max(p.n() - 1, 0), p.m()}
                               : Bidegree{p.n(), std::max(p.m() - 1, 0)};
  BivariatePolynomial out(d);
  for (int a = 0; a <= p.n(); ++a) {
    for (int b = 0; b <= p.m(); ++b) {
      if (axis == 0 && a > 0) out.coeff(a - 1, b) += static_cast<double>(a) * p.coeff(a, b);
      if (axis == 1 && b > 0) out.coeff(a, b - 1) += static_cast<double>(b) * p.coeff(a, b);
    }
  }
  return out;
}

double max_coeff_distance(const BivariatePolynomial& p, const BivariatePolynomial& q) {
  double worst = 0.0;
  for (int a = 0; a <= std::max(p.n(), q.n()); ++a) {
    for (int b = 0; b <= std::max(p.m(), q.m()); ++b) {
      worst = std::max(worst, std::abs(p.coeff_or_zero(a, b) - q.coeff_or_zero(a, b)));
    }
  }
  return worst;
}

}  // namespace aglerkit
