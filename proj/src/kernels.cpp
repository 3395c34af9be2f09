#include "aglerkit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "aglerkit/errors.hpp"
#include "aglerkit/sampling.hpp"

namespace aglerkit {

namespace {

constexpr double kPoleGuard = 1e-12;

Complex coordinate(const Point2& z, int j) { return j == 1 ? z.z1 : z.z2; }

void check_index(int j) {
  if (j != 1 && j != 2) throw InvalidArgument("kernel index must be 1 or 2");
}

std::vector<BivariatePolynomial> reflect_all(const std::vector<BivariatePolynomial>& v, Bidegree d) {
  std::vector<BivariatePolynomial> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(reflect(q, d));
  return out;
}

std::vector<BivariatePolynomial> padded_all(const std::vector<BivariatePolynomial>& v, Bidegree d) {
  std::vector<BivariatePolynomial> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(q.padded(d));
  return out;
}

// Keeps the worst value seen for one check together with its witness pair.
struct Worst {
  std::string name;
  double value = -std::numeric_limits<double>::infinity();
  Point2 z{}, zeta{};
  void offer(double v, const Point2& a, const Point2& b) {
    if (v > value) {
      value = v;
      z = a;
      zeta = b;
    }
  }
  Witness witness() const { return {name, z, zeta, value}; }
};

}  // namespace

KernelBundle::KernelBundle(const BivariatePolynomial& p, const std::vector<BivariatePolynomial>& a_polys,
                           const std::vector<BivariatePolynomial>& b_polys, VectorMode mode)
    : p_(p), p_tilde_(reflect(p)), mode_(mode) {
  const Bidegree da{std::max(p.n() - 1, 0), p.m()};
  const Bidegree db{p.n(), std::max(p.m() - 1, 0)};
  if (mode == VectorMode::Symmetrized) {
    const SymmetrizedVectors s = symmetrize(p, a_polys, b_polys);
    a_ = s.a;
    b_ = s.b;
  } else {
    a_ = p.n() == 0 ? std::vector<BivariatePolynomial>{} : padded_all(a_polys, da);
    b_ = p.m() == 0 ? std::vector<BivariatePolynomial>{} : padded_all(b_polys, db);
  }
  a_reflected_ = reflect_all(a_, da);
  b_reflected_ = reflect_all(b_, db);
}

KernelBundle::KernelBundle(const SosCertificate& cert, VectorMode mode)
    : KernelBundle(cert.p, cert.a_polys, cert.b_polys, mode) {}

Complex KernelBundle::p_checked(const Point2& z) const {
  if (!(std::abs(z.z1) < 1.0 && std::abs(z.z2) < 1.0)) {
    throw DomainError("kernel evaluation requires a point of the open bidisk");
  }
  const Complex v = p_.evaluate(z);
  if (std::abs(v) <= kPoleGuard) throw DomainError("p vanishes at the evaluation point");
  return v;
}

const std::vector<BivariatePolynomial>& KernelBundle::vec(int j) const {
  check_index(j);
  return j == 1 ? a_ : b_;
}

const std::vector<BivariatePolynomial>& KernelBundle::reflected(int j) const {
  check_index(j);
  return j == 1 ? a_reflected_ : b_reflected_;
}

Complex KernelBundle::f(const Point2& z) const { return p_tilde_.evaluate(z) / p_checked(z); }

Complex KernelBundle::df(int j, const Point2& z) const {
  check_index(j);
  const Complex pz = p_checked(z);
  const Complex dp = partial_derivative(p_, j - 1).evaluate(z);
  const Complex dpt = partial_derivative(p_tilde_, j - 1).evaluate(z);
  return (pz * dpt - p_tilde_.evaluate(z) * dp) / (pz * pz);
}

Complex KernelBundle::K(int j, const Point2& z, const Point2& zeta) const {
  const auto& v = vec(j);
  const Complex pz = p_checked(z);
  const Complex pw = p_checked(zeta);
  Complex s{};
  for (const auto& q : v) s += q.evaluate(z) * std::conj(q.evaluate(zeta));
  return s / (pz * std::conj(pw));
}

Complex KernelBundle::L(int j, const Point2& z, const Point2& zeta) const {
  const auto& v = vec(j);
  const auto& r = reflected(j);
  const Complex pz = p_checked(z);
  const Complex pw = p_checked(zeta);
  Complex s{};
  for (std::size_t k = 0; k < v.size(); ++k) s += r[k].evaluate(z) * v[k].evaluate(zeta);
  return s / (pz * pw);
}

HermitianMatrix kernel_gram(const KernelBundle& bundle, int j, const std::vector<Point2>& points) {
  const std::size_t n = points.size();
  ComplexMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i; k < n; ++k) {
      g(i, k) = bundle.K(j, points[i], points[k]);
      g(k, i) = std::conj(g(i, k));
    }
  }
  return HermitianMatrix(g);
}

VerificationReport verify_theorem1(const KernelBundle& bundle, const VerifyOptions& options) {
  if (options.samples <= 0) throw InvalidArgument("verification needs a positive sample count");
  if (!(options.radius > 0.0 && options.radius < 1.0)) throw InvalidArgument("sample radius must lie in (0,1)");
  std::mt19937_64 rng(options.seed);
  Worst id1{"identity1"}, id2{"identity2"}, cs{"cauchy_schwarz"}, bound{"diagonal_bound"};
  std::vector<Point2> firsts;
  firsts.reserve(static_cast<std::size_t>(options.samples));

  for (int s = 0; s < options.samples; ++s) {
    const Point2 z = sample_polydisk(rng, options.radius);
    const Point2 w = sample_polydisk(rng, options.radius);
    firsts.push_back(z);
    const Complex fz = bundle.f(z), fw = bundle.f(w);
    Complex rhs1{}, rhs2{};
    for (int j = 1; j <= 2; ++j) {
      const Complex zj = coordinate(z, j), wj = coordinate(w, j);
      const Complex kzw = bundle.K(j, z, w);
      const Complex lzw = bundle.L(j, z, w);
      rhs1 += (1.0 - zj * std::conj(wj)) * kzw;
      rhs2 += (zj - wj) * lzw;
      const double kzz = bundle.K(j, z, z).real();
      const double kww = bundle.K(j, w, w).real();
      cs.offer(std::norm(lzw) - kzz * kww, z, w);
      bound.offer(kzz - 1.0 / (1.0 - std::norm(zj)), z, z);
    }
    id1.offer(std::abs(1.0 - fz * std::conj(fw) - rhs1), z, w);
    id2.offer(std::abs(fz - fw - rhs2), z, w);
  }

  double min_eig = std::numeric_limits<double>::infinity();
  const std::size_t block = static_cast<std::size_t>(std::max(options.block, 1));
  for (std::size_t start = 0; start < firsts.size(); start += block) {
    const std::vector<Point2> pts(firsts.begin() + static_cast<std::ptrdiff_t>(start),
                                  firsts.begin() + static_cast<std::ptrdiff_t>(std::min(start + block, firsts.size())));
    for (int j = 1; j <= 2; ++j) min_eig = std::min(min_eig, min_eigenvalue(kernel_gram(bundle, j, pts)));
  }

  VerificationReport report;
  report.identity1_max = id1.value;
  report.identity2_max = id2.value;
  report.cs_max_violation = std::max(cs.value, 0.0);
  report.psd_min_eig = min_eig;
  report.bound_margin = -bound.value;
  report.witnesses = {id1.witness(), id2.witness(), cs.witness(), bound.witness()};
  report.samples = options.samples;
  report.seed = options.seed;
  report.tolerance = options.tol;
  report.passed = report.identity1_max <= options.tol && report.identity2_max <= options.tol &&
                  report.cs_max_violation <= options.tol && report.psd_min_eig >= -options.tol &&
                  report.bound_margin >= -options.tol;
  return report;
}

BoundsReport check_bounds(const KernelBundle& bundle, const VerifyOptions& options) {
  if (options.samples <= 0) throw InvalidArgument("bound check needs a positive sample count");
  if (!(options.radius > 0.0 && options.radius < 1.0)) throw InvalidArgument("sample radius must lie in (0,1)");
  std::mt19937_64 rng(options.seed);
  Worst diag{"diagonal_bound"}, decomp{"decomposition_bound"}, cs{"kernel_cauchy_schwarz"};
  for (int s = 0; s < options.samples; ++s) {
    const Point2 z = sample_polydisk(rng, options.radius);
    const Point2 w = sample_polydisk(rng, options.radius);
    const double defect = 1.0 - std::norm(bundle.f(z));
    for (int j = 1; j <= 2; ++j) {
      const double weight = 1.0 - std::norm(coordinate(z, j));
      const double kzz = bundle.K(j, z, z).real();
      const double kww = bundle.K(j, w, w).real();
      diag.offer(kzz - 1.0 / weight, z, z);
      decomp.offer(weight * kzz - defect, z, z);
      cs.offer(std::norm(bundle.K(j, z, w)) - kzz * kww, z, w);
    }
  }
  BoundsReport report;
  report.diagonal_margin = options.tol - diag.value;
  report.decomposition_margin = -decomp.value;
  report.cs_max_violation = std::max(cs.value, 0.0);
  report.witnesses = {diag.witness(), decomp.witness(), cs.witness()};
  report.samples = options.samples;
  report.passed = report.diagonal_margin >= 0.0 && report.decomposition_margin >= -options.tol &&
                  report.cs_max_violation <= options.tol;
  return report;
}

SchwarzPickReport schwarz_pick_1d(const std::function<Complex(Complex)>& f, int samples, std::uint64_t seed,
                                  double tol, double radius) {
  if (samples <= 0) throw InvalidArgument("Schwarz-Pick check needs a positive sample count");
  std::mt19937_64 rng(seed);
  SchwarzPickReport report;
  report.samples = samples;
  double quotient = -std::numeric_limits<double>::infinity();
  double kernel = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Complex z = sample_disk(rng, radius);
    const Complex w = sample_disk(rng, radius);
    if (std::abs(z - w) < 1e-8) continue;
    const Complex fz = f(z), fw = f(w);
    const double left = std::norm((fz - fw) / (z - w));
    const double middle = std::norm((1.0 - fz * std::conj(fw)) / (1.0 - z * std::conj(w)));
    const double right = (1.0 - std::norm(fz)) / (1.0 - std::norm(z)) * (1.0 - std::norm(fw)) / (1.0 - std::norm(w));
    quotient = std::max(quotient, left - middle);
    kernel = std::max(kernel, middle - right);
  }
  report.quotient_violation = std::max(quotient, 0.0);
  report.kernel_violation = std::max(kernel, 0.0);
  report.passed = report.quotient_violation <= tol && report.kernel_violation <= tol;
  return report;
}

}  // namespace aglerkit
