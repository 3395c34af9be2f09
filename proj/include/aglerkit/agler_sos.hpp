#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aglerkit/numerics.hpp"
#include "aglerkit/poly2.hpp"

namespace aglerkit {

/// Monomials z1^a z2^b with a <= max_a, b <= max_b, ordered a-major. The
/// ordering agrees with the flat index a*(m+1)+b of the ambient (n,m) grid, so
/// shifting every monomial by z1 or z2 preserves relative order.
struct MonomialBasis {
  std::vector<std::pair<int, int>> monomials;

  static MonomialBasis box(int max_a, int max_b);
  std::size_t size() const noexcept { return monomials.size(); }
};

/// sum_{I,J} c[I][J] z^{alpha_I} conj(zeta^{alpha_J}) over the full (n,m) box.
class HermitianForm {
 public:
  HermitianForm() = default;
  HermitianForm(Bidegree degree, HermitianMatrix coeffs);

  Bidegree degree() const noexcept { return degree_; }
  const HermitianMatrix& coeffs() const noexcept { return coeffs_; }
  Complex coeff(int a, int b, int c, int d) const;
  Complex evaluate(const Point2& z, const Point2& zeta) const;

 private:
  Bidegree degree_{};
  HermitianMatrix coeffs_;
};

/// p(z) conj(p(zeta)) - p~(z) conj(p~(zeta)) relative to p's declared bidegree.
HermitianForm lhs_form(const BivariatePolynomial& p);

/// Coefficient matching for
///   lhs = (1 - z1 conj(zeta1)) v_A(z)* G_A v_A(zeta) + (1 - z2 conj(zeta2)) v_B(z)* G_B v_B(zeta)
/// with v_A over a <= n-1, b <= m and v_B over a <= n, b <= m-1.
///
/// The realified system acts on x = [vec(G_A), vec(G_B)] where vec(G) lists the
/// diagonal, then sqrt(2) Re and sqrt(2) Im of each strict upper entry, so the
/// Euclidean norm of x is the Frobenius norm of the pair.
class GramConstraints {
 public:
  explicit GramConstraints(const BivariatePolynomial& p);

  Bidegree degree() const noexcept { return degree_; }
  const MonomialBasis& basis_a() const noexcept { return basis_a_; }
  const MonomialBasis& basis_b() const noexcept { return basis_b_; }
  const HermitianForm& target() const noexcept { return target_; }

  // Right-hand side of the identity as a Hermitian form.
  HermitianForm apply(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const;
  // max |apply(G_A, G_B) - target| over all coefficient pairs.
  double max_residual(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const;

  const Eigen::MatrixXd& system() const noexcept { return system_; }
  const Eigen::VectorXd& rhs() const noexcept { return rhs_; }

  Eigen::VectorXd pack(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const;
  std::pair<HermitianMatrix, HermitianMatrix> unpack(const Eigen::VectorXd& x) const;

 private:
  Bidegree degree_;
  MonomialBasis basis_a_;
  MonomialBasis basis_b_;
  HermitianForm target_;
  Eigen::MatrixXd system_;
  Eigen::VectorXd rhs_;
};

GramConstraints build_constraints(const BivariatePolynomial& p);

struct SolveOptions {
  double tol = 1e-9;          // on the scale-free residual
  long max_iter = 200000;     // Dykstra sweeps plus polishing steps
  std::uint64_t seed = 42;
  long dykstra_block = 500;   // Dykstra sweeps between polishing attempts
  int polish_steps = 200;     // Levenberg-Marquardt steps per attempt
  bool record_trace = false;
};

struct SolveTrace {
  std::vector<double> gaps;       // ||x_k - y_k||_F per Dykstra sweep
  std::vector<double> residuals;  // max coefficient residual of the PSD iterate
  std::vector<double> polish_residuals;
};

/// Gram-matrix certificate. residual is the scale-free max coefficient mismatch
/// max|lhs - rhs| / ||p||_2^2 of the identity built from A_polys and B_polys.
struct SosCertificate {
  BivariatePolynomial p;
  BivariatePolynomial p_tilde;
  HermitianMatrix g_a;
  HermitianMatrix g_b;
  std::vector<BivariatePolynomial> a_polys;  // bidegree (n-1, m)
  std::vector<BivariatePolynomial> b_polys;  // bidegree (n, m-1)
  double residual = 0.0;
  long iterations = 0;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  SolveTrace trace;

  std::size_t rank_a() const noexcept { return a_polys.size(); }
  std::size_t rank_b() const noexcept { return b_polys.size(); }
};

/// Dykstra alternating projections between PSD x PSD and the coefficient-matching
/// subspace, with a Levenberg-Marquardt polish on spectral factors G = W W*.
/// Throws InfeasibleError carrying the best residual if max_iter is exhausted.
SosCertificate solve_gram(const BivariatePolynomial& p, const SolveOptions& options = {});

/// Assemble a certificate from explicit factor lists (hand-built or injected).
SosCertificate certificate_from_factors(const BivariatePolynomial& p,
                                        std::vector<BivariatePolynomial> a_polys,
                                        std::vector<BivariatePolynomial> b_polys);

/// Certificate with factors re-derived from its Gram matrices.
SosCertificate refactor_certificate(const BivariatePolynomial& p, const HermitianMatrix& g_a,
                                    const HermitianMatrix& g_b, double rank_tol);

/// Scale-free residual of
///   lhs = (1 - z1 conj zeta1) sum A_j conj A_j + (1 - z2 conj zeta2) sum B_j conj B_j.
double sos_residual(const BivariatePolynomial& p, const std::vector<BivariatePolynomial>& a_polys,
                    const std::vector<BivariatePolynomial>& b_polys);

/// Gram matrix sum_j coeffs(A_j) coeffs(A_j)^* over a basis.
HermitianMatrix gram_of(const std::vector<BivariatePolynomial>& polys, const MonomialBasis& basis);

struct SymmetrizedVectors {
  std::vector<BivariatePolynomial> a;  // (1/sqrt2)[A_1..A_k, A~_1..A~_k]
  std::vector<BivariatePolynomial> b;
  Bidegree degree_a;                   // (n-1, m): reflection degrees for a
  Bidegree degree_b;                   // (n, m-1)
};

SymmetrizedVectors symmetrize(const SosCertificate& cert);
SymmetrizedVectors symmetrize(const BivariatePolynomial& p, const std::vector<BivariatePolynomial>& a_polys,
                              const std::vector<BivariatePolynomial>& b_polys);

}  // namespace aglerkit
