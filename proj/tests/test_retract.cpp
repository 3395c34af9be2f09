#include <doctest.h>

#include "aglerkit/errors.hpp"
#include "aglerkit/retract.hpp"
#include "aglerkit/sampling.hpp"
#include "retract_cases.hpp"
#include "support.hpp"

using namespace aglerkit;
using namespace aglerkit::testing;

namespace {

RetractMap swap_map() { return polynomial_map(2, {mono(2, {0, 1}), mono(2, {1, 0})}); }

std::vector<Complex> random_point(std::mt19937_64& rng, int n, double radius) {
  std::vector<Complex> z;
  for (int i = 0; i < n; ++i) z.push_back(sample_disk(rng, radius));
  return z;
}

}  // namespace

TEST_CASE("idempotence examples") {
  const auto diag = polynomial_map(2, {mono(2, {1, 0}), mono(2, {1, 0})});
  const auto r = verify_idempotent(diag);
  CHECK(r.passed);
  CHECK(r.max_defect == 0.0);
  CHECK(verify_idempotent(polynomial_map(2, {mono(2, {1, 0}), mono(2, {2, 0})})).passed);
  const auto s = verify_idempotent(swap_map());
  CHECK_FALSE(s.passed);
  CHECK(s.max_defect > 0.1);
  CHECK(s.witness.size() == 2);
}

TEST_CASE("component scan examples") {
  const auto a = scan_automorphism_components(polynomial_map(2, {mono(2, {1, 0}), mono(2, {1, 0})}));
  CHECK(a[0].kind == ComponentKind::IdentityCoordinate);
  CHECK(a[1].kind == ComponentKind::AutomorphismOfOther);
  CHECK(a[1].source == 0);
  CHECK(a[1].phi.is_identity(1e-8));

  const auto b = scan_automorphism_components(polynomial_map(2, {mono(2, {0, 1}, -1.0), mono(2, {0, 1})}));
  CHECK(b[1].kind == ComponentKind::IdentityCoordinate);
  CHECK(b[0].kind == ComponentKind::AutomorphismOfOther);
  CHECK(b[0].source == 1);
  CHECK(std::abs(b[0].phi(Complex(0.3, 0.1)) + Complex(0.3, 0.1)) <= 1e-8);

  const auto c = scan_automorphism_components(polynomial_map(2, {mono(2, {1, 0}), mono(2, {2, 0})}));
  CHECK(c[1].kind == ComponentKind::NotAutomorphism);

  const auto d = scan_automorphism_components(polynomial_map(2, {mono(2, {1, 0}), MultiPoly::constant(2, 0.4)}));
  CHECK(d[1].kind == ComponentKind::Constant);
  CHECK(std::abs(d[1].constant - 0.4) <= 1e-12);
}

TEST_CASE("impossible automorphism patterns are inconsistent") {
  // A nontrivial automorphism of its own variable cannot be idempotent.
  CHECK_THROWS_AS(scan_automorphism_components(polynomial_map(2, {mono(2, {1, 0}, -1.0), mono(2, {0, 1})})),
                  InconsistencyError);
  // Copies of a coordinate that is itself not free.
  CHECK_THROWS_AS(scan_automorphism_components(swap_map()), InconsistencyError);
}

TEST_CASE("dimension reduction examples") {
  const auto r = reduce_dimension(polynomial_map(2, {mono(2, {1, 0}), mono(2, {2, 0})}), 1);
  CHECK(r.coordinate == 1);
  CHECK(r.reduced.n == 1);
  CHECK(r.reduced_check.passed);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto z = random_point(rng, 1, 0.85);
    CHECK(std::abs(r.f(z) - z[0] * z[0]) <= 1e-9);
    CHECK(std::abs(r.reduced(z)[0] - z[0]) <= 1e-9);
  }
  const auto r3 = reduce_dimension(polynomial_map(3, {mono(3, {1, 0, 0}), mono(3, {0, 1, 0}), mono(3, {1, 1, 0})}), 2);
  CHECK(r3.reduced.n == 2);
  CHECK(r3.reduced_check.passed);
  for (int i = 0; i < 20; ++i) {
    const auto z = random_point(rng, 2, 0.85);
    CHECK(std::abs(r3.f(z) - z[0] * z[1]) <= 1e-9);
  }
}

TEST_CASE("normal forms of the retract corpus") {
  for (const auto& c : retract_corpus()) {
    CAPTURE(c.name);
    const auto form = normal_form(c.rho);
    CHECK(form.k == c.k);
    CHECK(form.free == c.free);
    REQUIRE(form.duplicates.size() == c.duplicates.size());
    for (std::size_t i = 0; i < c.duplicates.size(); ++i) {
      CHECK(form.duplicates[i].coord == c.duplicates[i].coord);
      CHECK(form.duplicates[i].source == c.duplicates[i].source);
      CHECK(std::abs(form.duplicates[i].phi(0.5) - c.duplicates[i].sign * 0.5) <= 1e-8);
    }
    REQUIRE(form.graphs.size() == c.graph_coords.size());
    for (std::size_t g = 0; g < form.graphs.size(); ++g) {
      const auto& entry = form.graphs[g];
      CHECK(entry.coord == c.graph_coords[g]);
      for (std::size_t i = 0; i < entry.samples.grid.size(); ++i) {
        const auto u = entry.samples.grid.node(i);
        CHECK(std::abs(entry.samples.values[i] - c.graphs(u)[g]) <= 1e-8);
      }
    }
    CHECK(form.max_graph_residual() <= 1e-8);
    CHECK(range_defect(c.rho, form) <= 1e-7);
  }
}

TEST_CASE("conjugated map fixes free coordinates and copies sources") {
  std::mt19937_64 rng(6);
  for (const auto& c : retract_corpus()) {
    CAPTURE(c.name);
    const auto form = normal_form(c.rho);
    for (int s = 0; s < 20; ++s) {
      const auto x = random_point(rng, c.rho.n, 0.8);
      const auto y = conjugated_apply(c.rho, form, x);
      for (int i = 0; i < form.k; ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-9);
      for (std::size_t d = 0; d < form.duplicates.size(); ++d) {
        const auto& dup = form.duplicates[d];
        const auto pos = std::find(form.free.begin(), form.free.end(), dup.source) - form.free.begin();
        CHECK(std::abs(y[static_cast<std::size_t>(form.k) + d] - y[static_cast<std::size_t>(pos)]) <= 1e-9);
      }
    }
  }
}

TEST_CASE("identity in three variables and the diagonal average") {
  const auto id3 = polynomial_map(3, {mono(3, {1, 0, 0}), mono(3, {0, 1, 0}), mono(3, {0, 0, 1})});
  const auto f3 = normal_form(id3);
  CHECK(f3.k == 3);
  CHECK(f3.duplicates.empty());
  CHECK(f3.graphs.empty());

  // ((z1 + z2)/2, (z1 + z2)/2) retracts onto the diagonal; no component is an automorphism.
  MultiPoly avg = mono(2, {1, 0}, 0.5) + mono(2, {0, 1}, 0.5);
  const auto rho = polynomial_map(2, {avg, avg});
  const auto form = normal_form(rho);
  CHECK(form.k == 1);
  REQUIRE(form.duplicates.size() == 1);
  CHECK(form.duplicates[0].phi.is_identity(1e-7));
  CHECK(form.graphs.empty());
  CHECK(range_defect(rho, form) <= 1e-7);
}

TEST_CASE("black-box retraction with a transcendental graph") {
  // (z1, sin(z1)/2) has idempotent structure with a non-rational graph.
  const RetractMap rho(2, {AnalyticMap::callable(2, [](std::span<const Complex> x) { return x[0]; }),
                           AnalyticMap::callable(2, [](std::span<const Complex> x) { return std::sin(x[0]) / 2.0; })});
  const auto form = normal_form(rho);
  CHECK(form.k == 1);
  REQUIRE(form.graphs.size() == 1);
  for (std::size_t i = 0; i < form.graphs[0].samples.grid.size(); ++i) {
    const auto u = form.graphs[0].samples.grid.node(i);
    CHECK(std::abs(form.graphs[0].samples.values[i] - std::sin(u[0]) / 2.0) <= 1e-8);
  }
}

TEST_CASE("reduction preserves idempotence on a three-variable graph") {
  // (z1, z2, z1 (z1 + z2)/2)
  MultiPoly g = mono(3, {2, 0, 0}, 0.5) + mono(3, {1, 1, 0}, 0.5);
  const auto rho = polynomial_map(3, {mono(3, {1, 0, 0}), mono(3, {0, 1, 0}), g});
  REQUIRE(verify_idempotent(rho).passed);
  const auto r = reduce_dimension(rho, 2);
  CHECK(r.reduced_check.passed);
  CHECK(r.reduced_check.max_defect <= 1e-9);
}

TEST_CASE("swap map is rejected") {
  CHECK_THROWS_AS(normal_form(swap_map()), NotRetractionError);
}

TEST_CASE("one-variable rigidity: every retraction of the disk is the identity or a constant") {
  std::mt19937_64 rng(10);
  int accepted = 0, rejected = 0;
  for (int t = 0; t < 40; ++t) {
    // Constants and the identity mixed with rational self-maps that are not idempotent.
    const Complex a = sample_disk(rng, 0.8), u = std::polar(1.0, 0.37 * t);
    MultiPoly num(1), den(1);
    switch (t % 5) {
      case 0: num = MultiPoly::constant(1, a); den = MultiPoly::constant(1, 1.0); break;
      case 1: num = MultiPoly::variable(1, 0); den = MultiPoly::constant(1, 1.0); break;
      case 2:
        num = (MultiPoly::variable(1, 0) - MultiPoly::constant(1, a)) * u;
        den = MultiPoly::constant(1, 1.0) - MultiPoly::variable(1, 0) * std::conj(a);
        break;
      case 3:
        num = MultiPoly::variable(1, 0) * MultiPoly::variable(1, 0) * u;
        den = MultiPoly::constant(1, 1.0);
        break;
      default:
        num = MultiPoly::variable(1, 0) * (0.5 * u) + MultiPoly::constant(1, 0.4 * a);
        den = MultiPoly::constant(1, 1.0);
        break;
    }
    const RetractMap rho(1, {AnalyticMap::rational(RationalFunction(num, den))});
    if (!verify_idempotent(rho).passed) {
      ++rejected;
      continue;
    }
    ++accepted;
    const auto form = normal_form(rho);
    const bool identity = form.k == 1 && form.graphs.empty() && form.duplicates.empty();
    const bool constant = form.k == 0 && form.graphs.size() == 1 && form.graphs[0].constant;
    CHECK((identity || constant));
    // Independent check on the map itself.
    const auto z = random_point(rng, 1, 0.9);
    const Complex v = rho(z)[0];
    CHECK((std::abs(v - z[0]) <= 1e-12 || std::abs(v - rho(random_point(rng, 1, 0.9))[0]) <= 1e-12));
  }
  CHECK(accepted > 0);
  CHECK(rejected > 0);
}

TEST_CASE("grid cap") {
  CHECK(capped_grid(20, 1) == 20);
  CHECK(capped_grid(20, 2) == 20);
  CHECK(capped_grid(20, 3) == 16);
  CHECK(capped_grid(20, 4) == 8);
  CHECK(capped_grid(5, 6) == 4);
}
