#include <doctest.h>

#include "aglerkit/errors.hpp"
#include "aglerkit/sampling.hpp"
#include "aglerkit/stability.hpp"
#include "support.hpp"

using namespace aglerkit;
using namespace aglerkit::testing;

TEST_CASE("classic polynomial is stable with a boundary zero") {
  const auto r = check_stability(classic());
  CHECK(r.verdict == StabilityVerdict::StableOpen);
  CHECK(r.stable());
  CHECK(r.min_modulus <= 1e-9);
}

TEST_CASE("boundary minimum shrinks as the torus grid refines") {
  // Rotating z2 by a small angle keeps the zero off the sampled grid points.
  const auto p = poly({{2.0, -std::polar(1.0, 0.0123)}, {-1.0, 0.0}});
  StabilityOptions coarse, fine;
  coarse.torus_grid = 32;
  fine.torus_grid = 512;
  CHECK(check_stability(p, fine).min_modulus < check_stability(p, coarse).min_modulus);
}

TEST_CASE("constant polynomial is strictly stable") {
  CHECK(check_stability(BivariatePolynomial::constant(1.0)).verdict == StabilityVerdict::StableClosedStrict);
  CHECK(check_stability(BivariatePolynomial::constant(1.0, {2, 2})).verdict ==
        StabilityVerdict::StableClosedStrict);
}

TEST_CASE("explicit interior zero is found with a witness") {
  const auto r = check_stability(poly({{-0.5}, {1.0}}));
  CHECK(r.verdict == StabilityVerdict::ZeroFound);
  REQUIRE(r.witness.has_value());
  CHECK(std::abs(r.witness->z1 - 0.5) <= 1e-6);
}

TEST_CASE("planted interior zeros are always found") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 20; ++t) {
    auto q = random_poly(rng, 1 + t % 3, 1 + (t / 3) % 3);
    const Point2 z0 = sample_polydisk(rng, 0.97);
    q.coeff(0, 0) -= q(z0);
    const auto r = check_stability(q);
    CHECK(r.verdict == StabilityVerdict::ZeroFound);
    REQUIRE(r.witness.has_value());
    CHECK(std::abs(q(*r.witness)) <= 1e-6 * q.max_abs_coeff());
  }
}

TEST_CASE("products of strictly stable factors are strictly stable") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    // 1 - a z1 - b z2 with |a| + |b| <= 0.9 has no zeros on the closed bidisk.
    auto factor = [&] {
      const double s = 0.9 * u(rng), split = u(rng);
      return poly({{1.0, -std::polar(s * (1 - split), 6.3 * u(rng))}, {-std::polar(s * split, 6.3 * u(rng)), 0.0}});
    };
    const auto p = factor() * factor() * factor();
    CHECK(check_stability(p).verdict == StabilityVerdict::StableClosedStrict);
  }
}

TEST_CASE("verdict strings round-trip and bad input is rejected") {
  for (auto v : {StabilityVerdict::StableOpen, StabilityVerdict::StableClosedStrict, StabilityVerdict::ZeroFound,
                 StabilityVerdict::Inconclusive})
    CHECK(stability_verdict_from_string(to_string(v)) == v);
  CHECK_THROWS_AS(check_stability(BivariatePolynomial(Bidegree{1, 1})), InvalidArgument);
}
