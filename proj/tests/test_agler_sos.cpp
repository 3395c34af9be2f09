#include <doctest.h>

#include "aglerkit/agler_sos.hpp"
#include "aglerkit/errors.hpp"
#include "aglerkit/sampling.hpp"
#include "support.hpp"

using namespace aglerkit;
using namespace aglerkit::testing;

namespace {

HermitianMatrix random_gram(std::mt19937_64& rng, std::size_t k) {
  ComplexMatrix w(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) w(i, j) = random_complex(rng);
  return HermitianMatrix(multiply_adjoint(w));
}

// sum_{I,J} G_IJ z^I conj(zeta^J) by direct monomial evaluation.
Complex gram_form(const HermitianMatrix& g, const MonomialBasis& basis, const Point2& z, const Point2& zeta) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const auto [a, b] = basis.monomials[i];
      const auto [c, d] = basis.monomials[j];
      s += g(i, j) * std::pow(z.z1, a) * std::pow(z.z2, b) * std::conj(std::pow(zeta.z1, c) * std::pow(zeta.z2, d));
    }
  return s;
}

std::vector<BivariatePolynomial> hand_a() {
  return {scale(poly({{1.0, -1.0}}), std::sqrt(2.0))};  // sqrt2 (1 - z2), bidegree (0,1)
}
std::vector<BivariatePolynomial> hand_b() {
  return {scale(poly({{1.0}, {-1.0}}), std::sqrt(2.0))};  // sqrt2 (1 - z1), bidegree (1,0)
}

}  // namespace

TEST_CASE("left-hand form examples") {
  const auto t = lhs_form(telescoping());
  CHECK(t.coeff(0, 0, 0, 0) == Complex(1.0));
  CHECK(t.coeff(1, 1, 1, 1) == Complex(-1.0));
  CHECK(t.coeff(1, 0, 1, 0) == Complex(0.0));
  CHECK(std::abs(lhs_form(classic()).evaluate({0.0, 0.0}, {0.0, 0.0}) - 4.0) <= 1e-15);
}

TEST_CASE("left-hand form is Hermitian and matches direct evaluation") {
  std::mt19937_64 rng(17);
  const auto p = random_poly(rng, 2, 2);
  const auto pt = reflect(p);
  const auto form = lhs_form(p);
  CHECK(form.coeffs().max_hermitian_defect() == 0.0);
  for (int i = 0; i < 20; ++i) {
    const auto z = sample_polydisk(rng, 1.0), w = sample_polydisk(rng, 1.0);
    const Complex direct = p(z) * std::conj(p(w)) - pt(z) * std::conj(pt(w));
    CHECK(std::abs(form.evaluate(z, w) - direct) <= 1e-11 * std::max(1.0, std::abs(direct)));
    CHECK(std::abs(form.evaluate(z, w) - std::conj(form.evaluate(w, z))) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("constraint rows for the classic polynomial") {
  const GramConstraints c(classic());
  REQUIRE(c.basis_a().size() == 2);  // {1, z2}
  REQUIRE(c.basis_b().size() == 2);  // {1, z1}
  std::mt19937_64 rng(2);
  const auto ga = random_gram(rng, 2), gb = random_gram(rng, 2);
  const auto rhs = c.apply(ga, gb);
  // 1 (x) 1 coefficient: only the constant entries of both Grams contribute.
  CHECK(std::abs(rhs.coeff(0, 0, 0, 0) - (ga(0, 0) + gb(0, 0))) <= 1e-14);
  CHECK(c.target().coeff(0, 0, 0, 0) == Complex(4.0));
  // z1z2 (x) conj(zeta1 zeta2): reached from z2 in A via -z1 conj(zeta1), and from z1 in B via -z2 conj(zeta2).
  CHECK(std::abs(rhs.coeff(1, 1, 1, 1) + ga(1, 1) + gb(1, 1)) <= 1e-14);
  CHECK(c.target().coeff(1, 1, 1, 1) == Complex(-4.0));
}

TEST_CASE("applied constraints agree with a direct kernel evaluation") {
  std::mt19937_64 rng(23);
  for (auto [n, m] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 3}}) {
    const GramConstraints c(random_poly(rng, n, m));
    const auto ga = random_gram(rng, c.basis_a().size()), gb = random_gram(rng, c.basis_b().size());
    const auto form = c.apply(ga, gb);
    for (int i = 0; i < 10; ++i) {
      const auto z = sample_polydisk(rng, 1.0), w = sample_polydisk(rng, 1.0);
      const Complex direct = (1.0 - z.z1 * std::conj(w.z1)) * gram_form(ga, c.basis_a(), z, w) +
                             (1.0 - z.z2 * std::conj(w.z2)) * gram_form(gb, c.basis_b(), z, w);
      CHECK(std::abs(form.evaluate(z, w) - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));
    }
    // The realified system encodes the same equations.
    const auto x = c.pack(ga, gb);
    const double sys = (c.system() * x - c.rhs()).cwiseAbs().maxCoeff();
    CHECK((sys == 0.0) == (c.max_residual(ga, gb) == 0.0));
    const auto [ua, ub] = c.unpack(x);
    CHECK((ua - ga).frobenius_norm() <= 1e-13 * ga.frobenius_norm());
    CHECK((ub - gb).frobenius_norm() <= 1e-13 * gb.frobenius_norm());
    CHECK(x.norm() == doctest::Approx(std::hypot(ga.frobenius_norm(), gb.frobenius_norm())).epsilon(1e-12));
  }
}

TEST_CASE("telescoping point satisfies the constraints for p = 1") {
  const auto p = telescoping();
  const GramConstraints c(p);
  HermitianMatrix ga(2), gb(2);
  ga.set(0, 0, 1.0);  // A = 1
  gb.set(1, 1, 1.0);  // B = z1
  CHECK(c.max_residual(ga, gb) == 0.0);
}

TEST_CASE("hand-built feasible point for the classic polynomial") {
  const auto cert = certificate_from_factors(classic(), hand_a(), hand_b());
  CHECK(cert.residual <= 1e-15);
  const GramConstraints c(classic());
  CHECK(c.max_residual(cert.g_a, cert.g_b) <= 1e-14);
}

TEST_CASE("solver: classic polynomial") {
  const auto cert = solve_gram(classic());
  CHECK(cert.residual <= 1e-8);
  CHECK(sos_residual(cert.p, cert.a_polys, cert.b_polys) <= 1e-8);
  CHECK(min_eigenvalue(cert.g_a) >= -1e-12);
  CHECK(min_eigenvalue(cert.g_b) >= -1e-12);
  CHECK(cert.p_tilde == reflect(classic()));
}

TEST_CASE("solver: unscaled product at bidegree (2,2)") {
  const auto p = classic() * poly({{4.0, -1.0}, {-1.0, 0.0}});
  const auto cert = solve_gram(p);
  CHECK(cert.residual <= 1e-7);
  CHECK(cert.p.degree() == Bidegree{2, 2});
}

TEST_CASE("solver: p = 1 at bidegree (1,1) lands in the diagonal family") {
  // Feasible pairs are exactly G_A = diag(t, 1-t), G_B = diag(1-t, t) on {1, z2} and {1, z1}.
  const auto cert = solve_gram(telescoping());
  CHECK(cert.residual <= 1e-10);
  const double t = cert.g_a(0, 0).real();
  CHECK(t >= -1e-10);
  CHECK(t <= 1 + 1e-10);
  CHECK(std::abs(cert.g_a(1, 1) - (1.0 - t)) <= 1e-10);
  CHECK(std::abs(cert.g_b(0, 0) - (1.0 - t)) <= 1e-10);
  CHECK(std::abs(cert.g_b(1, 1) - t) <= 1e-10);
  CHECK(std::abs(cert.g_a(0, 1)) <= 1e-10);
  CHECK(std::abs(cert.g_b(0, 1)) <= 1e-10);
}

TEST_CASE("solver: regression corpus") {
  for (const auto& e : stable_corpus()) {
    CAPTURE(e.name);
    const auto cert = solve_gram(e.p);
    CHECK(cert.residual <= 1e-9);
    CHECK(min_eigenvalue(cert.g_a) >= -1e-10 * std::max(1.0, cert.g_a.frobenius_norm()));
    CHECK(min_eigenvalue(cert.g_b) >= -1e-10 * std::max(1.0, cert.g_b.frobenius_norm()));
    CHECK(cert.iterations > 0);
  }
}

TEST_CASE("solver is deterministic per seed") {
  SolveOptions opt;
  opt.seed = 1234;
  const auto p = stable_corpus()[2].p;
  const auto a = solve_gram(p, opt), b = solve_gram(p, opt);
  CHECK(a.g_a.data() == b.g_a.data());
  CHECK(a.g_b.data() == b.g_b.data());
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("Dykstra gap sequence is non-increasing") {
  SolveOptions opt;
  opt.record_trace = true;
  const auto p = stable_corpus()[1].p;
  const auto cert = solve_gram(p, opt);
  const auto& gaps = cert.trace.gaps;
  REQUIRE(gaps.size() > 10);
  for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] <= gaps[k - 1] * (1 + 1e-9) + 1e-14);
}

TEST_CASE("unstable input exhausts the budget with an infeasibility error") {
  SolveOptions opt;
  opt.max_iter = 2000;
  const auto p = poly({{0.0, 0.0}, {0.0, 1.0}});  // z1 z2 vanishes at the origin
  try {
    solve_gram(p, opt);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.best_residual() > 1e-3);
    CHECK(e.iterations() <= opt.max_iter);
  }
}

TEST_CASE("symmetrized vectors: examples and invariants") {
  const auto sv = symmetrize(classic(), hand_a(), hand_b());
  REQUIRE(sv.a.size() == 2);
  // (1/sqrt2)[sqrt2 (1 - z2), reflect] = [1 - z2, z2 - 1].
  CHECK(max_coeff_distance(sv.a[0], poly({{1.0, -1.0}})) <= 1e-15);
  CHECK(max_coeff_distance(sv.a[1], poly({{-1.0, 1.0}})) <= 1e-15);

  const auto cert = solve_gram(stable_corpus()[3].p);
  const auto s = symmetrize(cert);
  CHECK(std::abs(sos_residual(cert.p, s.a, s.b) - sos_residual(cert.p, cert.a_polys, cert.b_polys)) <= 1e-12);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const auto z = sample_polydisk(rng, 1.0);
    double na = 0, nr = 0;
    for (const auto& a : s.a) {
      na += std::norm(a(z));
      nr += std::norm(reflect(a, s.degree_a)(z));
    }
    CHECK(std::abs(na - nr) <= 1e-12 * std::max(1.0, na));
  }
}

TEST_CASE("refactoring reproduces the Gram matrices") {
  const auto cert = solve_gram(stable_corpus()[4].p);
  const auto again = refactor_certificate(cert.p, cert.g_a, cert.g_b, 1e-12);
  const GramConstraints c(cert.p);
  CHECK((gram_of(again.a_polys, c.basis_a()) - cert.g_a).frobenius_norm() <= 1e-9 * cert.g_a.frobenius_norm());
  CHECK((gram_of(again.b_polys, c.basis_b()) - cert.g_b).frobenius_norm() <= 1e-9 * cert.g_b.frobenius_norm());
  CHECK(again.residual <= 1e-9);
}
