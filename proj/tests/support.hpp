#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "aglerkit/poly2.hpp"

namespace aglerkit::testing {

using Rows = std::vector<std::vector<Complex>>;

inline BivariatePolynomial poly(const Rows& rows) { return BivariatePolynomial(rows); }

inline BivariatePolynomial classic() { return poly({{2.0, -1.0}, {-1.0, 0.0}}); }

// p = 1 carried at bidegree (1,1), so f = z1 z2.
inline BivariatePolynomial telescoping() { return poly({{1.0, 0.0}, {0.0, 0.0}}); }

struct CorpusEntry {
  std::string name;
  BivariatePolynomial p;
};

// Stable polynomials of bidegree up to (3,3). Products of stable factors stay
// stable, and each factor's zero set avoids the open bidisk by a triangle
// inequality on its coefficients.
inline std::vector<CorpusEntry> stable_corpus() {
  const BivariatePolynomial c = classic();
  return {
      {"2-z1-z2", c},
      {"(2-z1-z2)(4-z1-z2)", c * poly({{4.0, -1.0}, {-1.0, 0.0}})},
      {"3-z1-z2-z1z2", poly({{3.0, -1.0}, {-1.0, -1.0}})},
      {"2+i z1-z1^2 z2/2", poly({{2.0, 0.0}, {Complex(0, 1), 0.0}, {0.0, -0.5}})},
      {"(2-z1-z2)(4-z1z2)(5-z1-z2)",
       c * poly({{4.0, 0.0}, {0.0, -1.0}}) * poly({{5.0, -1.0}, {-1.0, 0.0}})},
  };
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  return {g(rng), g(rng)};
}

inline BivariatePolynomial random_poly(std::mt19937_64& rng, int n, int m) {
  BivariatePolynomial p(Bidegree{n, m});
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= m; ++b) p.coeff(a, b) = random_complex(rng);
  return p;
}

// Central difference along coordinate j of a function on the bidisk.
template <class F>
Complex central_difference(const F& f, const Point2& z, int j, double h = 1e-6) {
  Point2 plus = z, minus = z;
  (j == 0 ? plus.z1 : plus.z2) += h;
  (j == 0 ? minus.z1 : minus.z2) -= h;
  return (f(plus) - f(minus)) / (2.0 * h);
}

}  // namespace aglerkit::testing
