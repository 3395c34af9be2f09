#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "aglerkit/agler_sos.hpp"
#include "aglerkit/numerics.hpp"
#include "aglerkit/poly2.hpp"

namespace aglerkit {

/// Which polynomial vectors the kernels are built from. Raw uses the factor
/// lists as they are; Symmetrized pairs each factor with its reflection, which
/// is what makes |A| = |A~| pointwise and the Cauchy-Schwarz bound hold.
enum class VectorMode { Raw, Symmetrized };

/// f = p~/p together with
///   K1(z,w) = <A(z), A(w)> / (p(z) conj p(w)),    L1(z,w) = A~(z) . A(w) / (p(z) p(w))
/// and the same for K2, L2 with B.
class KernelBundle {
 public:
  KernelBundle(const BivariatePolynomial& p, const std::vector<BivariatePolynomial>& a_polys,
               const std::vector<BivariatePolynomial>& b_polys, VectorMode mode = VectorMode::Symmetrized);
  explicit KernelBundle(const SosCertificate& cert, VectorMode mode = VectorMode::Symmetrized);

  const BivariatePolynomial& p() const noexcept { return p_; }
  const BivariatePolynomial& p_tilde() const noexcept { return p_tilde_; }
  VectorMode mode() const noexcept { return mode_; }
  const std::vector<BivariatePolynomial>& vector_a() const noexcept { return a_; }
  const std::vector<BivariatePolynomial>& vector_b() const noexcept { return b_; }

  Complex f(const Point2& z) const;
  // Quotient rule on p~ and p.
  Complex df(int j, const Point2& z) const;
  Complex K(int j, const Point2& z, const Point2& zeta) const;
  Complex L(int j, const Point2& z, const Point2& zeta) const;

 private:
  Complex p_checked(const Point2& z) const;
  const std::vector<BivariatePolynomial>& vec(int j) const;
  const std::vector<BivariatePolynomial>& reflected(int j) const;

  BivariatePolynomial p_;
  BivariatePolynomial p_tilde_;
  VectorMode mode_;
  std::vector<BivariatePolynomial> a_, a_reflected_;
  std::vector<BivariatePolynomial> b_, b_reflected_;
};

/// [K_j(z_i, z_k)]_{i,k}.
HermitianMatrix kernel_gram(const KernelBundle& bundle, int j, const std::vector<Point2>& points);

struct Witness {
  std::string check;
  Point2 z;
  Point2 zeta;
  double value = 0.0;
};

struct VerificationReport {
  double identity1_max = 0.0;     // |1 - f(z)conj f(w) - sum (1 - z_j conj w_j) K_j|
  double identity2_max = 0.0;     // |f(z) - f(w) - sum (z_j - w_j) L_j|
  double cs_max_violation = 0.0;  // max |L_j(z,w)|^2 - K_j(z,z) K_j(w,w), floored at 0
  double psd_min_eig = 0.0;       // over sampled Gram blocks
  double bound_margin = 0.0;      // min 1/(1-|z_j|^2) - K_j(z,z)
  std::vector<Witness> witnesses; // worst pair per check
  int samples = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  int samples = 500;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  double radius = 0.95;
  int block = 10;  // Gram positivity is checked on consecutive blocks of this size
};

VerificationReport verify_theorem1(const KernelBundle& bundle, const VerifyOptions& options = {});

struct BoundsReport {
  double diagonal_margin = 0.0;       // min 1/(1-|z_j|^2) + tol - K_j(z,z)
  double decomposition_margin = 0.0;  // min (1 - |f|^2) - (1-|z_j|^2) K_j(z,z)
  double cs_max_violation = 0.0;      // max |K_j(z,w)|^2 - K_j(z,z) K_j(w,w)
  std::vector<Witness> witnesses;
  int samples = 0;
  bool passed = false;
};

BoundsReport check_bounds(const KernelBundle& bundle, const VerifyOptions& options = {});

struct SchwarzPickReport {
  double quotient_violation = 0.0;  // max |(f(z)-f(w))/(z-w)|^2 - |(1-f(z)conj f(w))/(1-z conj w)|^2
  double kernel_violation = 0.0;    // max middle term minus the product bound
  int samples = 0;
  bool passed = false;
};

SchwarzPickReport schwarz_pick_1d(const std::function<Complex(Complex)>& f, int samples = 500,
                                  std::uint64_t seed = 42, double tol = 1e-9, double radius = 0.95);

}  // namespace aglerkit
