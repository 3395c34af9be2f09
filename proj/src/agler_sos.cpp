#include "aglerkit/agler_sos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "aglerkit/errors.hpp"

namespace aglerkit {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

std::size_t flat_index(Bidegree d, int a, int b) {
  return static_cast<std::size_t>(a) * static_cast<std::size_t>(d.m + 1) + static_cast<std::size_t>(b);
}

// Position of the strict-upper pair (i, j), i < j, in row-major enumeration.
std::size_t pair_index(std::size_t order, std::size_t i, std::size_t j) {
  return i * order - i * (i + 1) / 2 + (j - i - 1);
}

// Hermitian matrix -> real vector whose Euclidean norm is the Frobenius norm.
void realify_into(const HermitianMatrix& g, Eigen::Ref<Eigen::VectorXd> out) {
  const std::size_t k = g.order();
  for (std::size_t i = 0; i < k; ++i) out(static_cast<Eigen::Index>(i)) = g(i, i).real();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto t = static_cast<Eigen::Index>(k + 2 * pair_index(k, i, j));
      out(t) = kSqrt2 * g(i, j).real();
      out(t + 1) = kSqrt2 * g(i, j).imag();
    }
  }
}

HermitianMatrix unrealify(const Eigen::Ref<const Eigen::VectorXd>& in, std::size_t k) {
  HermitianMatrix g(k);
  for (std::size_t i = 0; i < k; ++i) g.set(i, i, in(static_cast<Eigen::Index>(i)));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto t = static_cast<Eigen::Index>(k + 2 * pair_index(k, i, j));
      g.set(i, j, Complex(in(t), in(t + 1)) / kSqrt2);
    }
  }
  return g;
}

Eigen::VectorXd realify(const HermitianMatrix& g) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(g.order() * g.order()));
  realify_into(g, out);
  return out;
}

double max_abs_entry(const HermitianMatrix& g) {
  double worst = 0.0;
  for (const auto& c : g.data()) worst = std::max(worst, std::abs(c));
  return worst;
}

std::vector<Complex> flat_coeffs(const BivariatePolynomial& p) { return p.data(); }

BivariatePolynomial poly_from_column(const ComplexMatrix& w, std::size_t col, const MonomialBasis& basis,
                                     Bidegree degree) {
  BivariatePolynomial out(degree);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [a, b] = basis.monomials[i];
    out.coeff(a, b) = w(i, col);
  }
  return out;
}

std::vector<BivariatePolynomial> polys_from_factor(const ComplexMatrix& w, const MonomialBasis& basis,
                                                   Bidegree degree) {
  std::vector<BivariatePolynomial> out;
  out.reserve(w.cols());
  for (std::size_t c = 0; c < w.cols(); ++c) out.push_back(poly_from_column(w, c, basis, degree));
  return out;
}

Bidegree degree_a_of(Bidegree d) { return {std::max(d.n - 1, 0), d.m}; }
Bidegree degree_b_of(Bidegree d) { return {d.n, std::max(d.m - 1, 0)}; }

}  // namespace

MonomialBasis MonomialBasis::box(int max_a, int max_b) {
  MonomialBasis basis;
  if (max_a < 0 || max_b < 0) return basis;
  for (int a = 0; a <= max_a; ++a) {
    for (int b = 0; b <= max_b; ++b) basis.monomials.emplace_back(a, b);
  }
  return basis;
}

HermitianForm::HermitianForm(Bidegree degree, HermitianMatrix coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
  if (coeffs_.order() != static_cast<std::size_t>((degree.n + 1) * (degree.m + 1))) {
    throw InvalidArgument("Hermitian form order does not match its bidegree");
  }
}

Complex HermitianForm::coeff(int a, int b, int c, int d) const {
  if (a < 0 || b < 0 || c < 0 || d < 0 || a > degree_.n || c > degree_.n || b > degree_.m || d > degree_.m) {
    return {};
  }
  return coeffs_(flat_index(degree_, a, b), flat_index(degree_, c, d));
}

Complex HermitianForm::evaluate(const Point2& z, const Point2& zeta) const {
  const MonomialBasis basis = MonomialBasis::box(degree_.n, degree_.m);
  std::vector<Complex> vz(basis.size()), vzeta(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto [a, b] = basis.monomials[i];
    vz[i] = std::pow(z.z1, a) * std::pow(z.z2, b);
    vzeta[i] = std::pow(zeta.z1, a) * std::pow(zeta.z2, b);
  }
  Complex s{};
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) s += coeffs_(i, j) * vz[i] * std::conj(vzeta[j]);
  }
  return s;
}

HermitianForm lhs_form(const BivariatePolynomial& p) {
  const BivariatePolynomial pt = reflect(p);
  const std::vector<Complex> pc = flat_coeffs(p);
  const std::vector<Complex> tc = flat_coeffs(pt);
  const std::size_t n = pc.size();
  ComplexMatrix f(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) f(i, j) = pc[i] * std::conj(pc[j]) - tc[i] * std::conj(tc[j]);
  }
  return HermitianForm(p.degree(), HermitianMatrix(f));
}

GramConstraints::GramConstraints(const BivariatePolynomial& p)
    : degree_(p.degree()),
      basis_a_(MonomialBasis::box(p.n() - 1, p.m())),
      basis_b_(MonomialBasis::box(p.n(), p.m() - 1)),
      target_(lhs_form(p)) {
  const std::size_t big = static_cast<std::size_t>((degree_.n + 1) * (degree_.m + 1));
  const std::size_t na = basis_a_.size();
  const std::size_t nb = basis_b_.size();
  system_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(big * big),
                                  static_cast<Eigen::Index>(na * na + nb * nb));
  rhs_ = realify(target_.coeffs());
  // Undo the sqrt(2) scaling on rows: equations compare raw coefficients.
  for (Eigen::Index r = static_cast<Eigen::Index>(big); r < rhs_.size(); ++r) rhs_(r) /= kSqrt2;

  auto diag_row = [&](std::size_t i) { return static_cast<Eigen::Index>(i); };
  auto pair_row = [&](std::size_t i, std::size_t j) {
    return static_cast<Eigen::Index>(big + 2 * pair_index(big, i, j));
  };

  auto add_block = [&](const MonomialBasis& basis, std::size_t col0, int shift_a, int shift_b) {
    const std::size_t k = basis.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto [a, b] = basis.monomials[i];
      const std::size_t I = flat_index(degree_, a, b);
      const std::size_t Is = flat_index(degree_, a + shift_a, b + shift_b);
      const auto col = static_cast<Eigen::Index>(col0 + i);
      system_(diag_row(I), col) += 1.0;
      system_(diag_row(Is), col) -= 1.0;
      for (std::size_t j = i + 1; j < k; ++j) {
        const auto [c, d] = basis.monomials[j];
        const std::size_t J = flat_index(degree_, c, d);
        const std::size_t Js = flat_index(degree_, c + shift_a, d + shift_b);
        const auto cre = static_cast<Eigen::Index>(col0 + k + 2 * pair_index(k, i, j));
        const Eigen::Index row = pair_row(I, J);
        const Eigen::Index row_s = pair_row(Is, Js);
        system_(row, cre) += 1.0 / kSqrt2;
        system_(row + 1, cre + 1) += 1.0 / kSqrt2;
        system_(row_s, cre) -= 1.0 / kSqrt2;
        system_(row_s + 1, cre + 1) -= 1.0 / kSqrt2;
      }
    }
  };
  add_block(basis_a_, 0, 1, 0);
  add_block(basis_b_, na * na, 0, 1);
}

HermitianForm GramConstraints::apply(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const {
  if (g_a.order() != basis_a_.size() || g_b.order() != basis_b_.size()) {
    throw InvalidArgument("Gram matrix order does not match the monomial basis");
  }
  const std::size_t big = static_cast<std::size_t>((degree_.n + 1) * (degree_.m + 1));
  ComplexMatrix out(big, big);
  auto accumulate = [&](const HermitianMatrix& g, const MonomialBasis& basis, int sa, int sb) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto [a, b] = basis.monomials[i];
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto [c, d] = basis.monomials[j];
        out(flat_index(degree_, a, b), flat_index(degree_, c, d)) += g(i, j);
        out(flat_index(degree_, a + sa, b + sb), flat_index(degree_, c + sa, d + sb)) -= g(i, j);
      }
    }
  };
  accumulate(g_a, basis_a_, 1, 0);
  accumulate(g_b, basis_b_, 0, 1);
  return HermitianForm(degree_, HermitianMatrix(out));
}

double GramConstraints::max_residual(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const {
  return max_abs_entry(apply(g_a, g_b).coeffs() - target_.coeffs());
}

Eigen::VectorXd GramConstraints::pack(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const {
  const auto la = static_cast<Eigen::Index>(g_a.order() * g_a.order());
  const auto lb = static_cast<Eigen::Index>(g_b.order() * g_b.order());
  Eigen::VectorXd x(la + lb);
  realify_into(g_a, x.head(la));
  realify_into(g_b, x.tail(lb));
  return x;
}

std::pair<HermitianMatrix, HermitianMatrix> GramConstraints::unpack(const Eigen::VectorXd& x) const {
  const std::size_t na = basis_a_.size();
  const std::size_t nb = basis_b_.size();
  const auto la = static_cast<Eigen::Index>(na * na);
  const auto lb = static_cast<Eigen::Index>(nb * nb);
  return {unrealify(x.head(la), na), unrealify(x.segment(la, lb), nb)};
}

GramConstraints build_constraints(const BivariatePolynomial& p) { return GramConstraints(p); }

HermitianMatrix gram_of(const std::vector<BivariatePolynomial>& polys, const MonomialBasis& basis) {
  ComplexMatrix g(basis.size(), basis.size());
  for (const auto& q : polys) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Complex ci = q.coeff_or_zero(basis.monomials[i].first, basis.monomials[i].second);
      if (ci == Complex{}) continue;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        g(i, j) += ci * std::conj(q.coeff_or_zero(basis.monomials[j].first, basis.monomials[j].second));
      }
    }
  }
  return HermitianMatrix(g);
}

namespace {

void check_support(const std::vector<BivariatePolynomial>& polys, int max_a, int max_b, const char* which) {
  for (const auto& q : polys) {
    const Bidegree d = q.actual_degree();
    if (!q.is_zero() && (max_a < 0 || max_b < 0 || d.n > max_a || d.m > max_b)) {
      std::ostringstream msg;
      msg << which << " factor of degree (" << d.n << "," << d.m << ") exceeds (" << max_a << ","
          << max_b << ")";
      throw InvalidArgument(msg.str());
    }
  }
}

}  // namespace

double sos_residual(const BivariatePolynomial& p, const std::vector<BivariatePolynomial>& a_polys,
                    const std::vector<BivariatePolynomial>& b_polys) {
  check_support(a_polys, p.n() - 1, p.m(), "A");
  check_support(b_polys, p.n(), p.m() - 1, "B");
  const GramConstraints constraints(p);
  const double scale = std::max(p.norm2() * p.norm2(), 1e-300);
  return constraints.max_residual(gram_of(a_polys, constraints.basis_a()),
                                  gram_of(b_polys, constraints.basis_b())) /
         scale;
}

SosCertificate certificate_from_factors(const BivariatePolynomial& p, std::vector<BivariatePolynomial> a_polys,
                                        std::vector<BivariatePolynomial> b_polys) {
  const GramConstraints constraints(p);
  SosCertificate cert;
  cert.p = p;
  cert.p_tilde = reflect(p);
  for (auto& q : a_polys) q = q.padded(degree_a_of(p.degree()));
  for (auto& q : b_polys) q = q.padded(degree_b_of(p.degree()));
  cert.residual = sos_residual(p, a_polys, b_polys);
  cert.g_a = gram_of(a_polys, constraints.basis_a());
  cert.g_b = gram_of(b_polys, constraints.basis_b());
  cert.a_polys = std::move(a_polys);
  cert.b_polys = std::move(b_polys);
  return cert;
}

SosCertificate refactor_certificate(const BivariatePolynomial& p, const HermitianMatrix& g_a,
                                    const HermitianMatrix& g_b, double rank_tol) {
  const GramConstraints constraints(p);
  if (g_a.order() != constraints.basis_a().size() || g_b.order() != constraints.basis_b().size()) {
    throw InvalidArgument("Gram matrix order does not match the bidegree of p");
  }
  SosCertificate cert;
  cert.p = p;
  cert.p_tilde = reflect(p);
  cert.g_a = g_a;
  cert.g_b = g_b;
  cert.a_polys = polys_from_factor(psd_factor(g_a, rank_tol), constraints.basis_a(), degree_a_of(p.degree()));
  cert.b_polys = polys_from_factor(psd_factor(g_b, rank_tol), constraints.basis_b(), degree_b_of(p.degree()));
  cert.residual = sos_residual(p, cert.a_polys, cert.b_polys);
  return cert;
}

namespace {

// Levenberg-Marquardt on G_A = W_A W_A*, G_B = W_B W_B*. The unknown vector is
// [Re W_A, Im W_A, Re W_B, Im W_B], each row-major.
class FactorPolisher {
 public:
  explicit FactorPolisher(const GramConstraints& c)
      : c_(c), na_(c.basis_a().size()), nb_(c.basis_b().size()), target_(realify(c.target().coeffs())) {}

  struct Result {
    ComplexMatrix w_a, w_b;
    double residual = 0.0;
    int steps = 0;
  };

  Result run(const HermitianMatrix& g_a, const HermitianMatrix& g_b, double target_residual, int max_steps,
             std::vector<double>* history) const {
    Eigen::VectorXd u = initial(g_a, g_b);
    Eigen::VectorXd r = residual_vector(u);
    double lambda = -1.0;
    Result res;
    if (u.size() == 0) max_steps = 0;
    for (; res.steps < max_steps; ++res.steps) {
      if (max_coefficient_residual(u) <= target_residual) break;
      const Eigen::MatrixXd jac = jacobian(u);
      const bool wide = jac.rows() <= jac.cols();
      const Eigen::MatrixXd normal = wide ? Eigen::MatrixXd(jac * jac.transpose())
                                          : Eigen::MatrixXd(jac.transpose() * jac);
      if (lambda < 0.0) lambda = 1e-3 * std::max(normal.diagonal().maxCoeff(), 1e-12);
      const double rnorm = r.norm();
      bool accepted = false;
      for (int attempt = 0; attempt < 40; ++attempt) {
        Eigen::MatrixXd damped = normal;
        damped.diagonal().array() += lambda;
        Eigen::VectorXd step;
        if (wide) {
          step = -jac.transpose() * damped.ldlt().solve(r);
        } else {
          step = -damped.ldlt().solve(jac.transpose() * r);
        }
        const Eigen::VectorXd trial = u + step;
        const Eigen::VectorXd r_trial = residual_vector(trial);
        if (r_trial.allFinite() && r_trial.norm() < rnorm) {
          u = trial;
          r = r_trial;
          lambda = std::max(lambda / 3.0, 1e-300);
          accepted = true;
          break;
        }
        lambda *= 4.0;
      }
      if (history) history->push_back(max_coefficient_residual(u));
      if (!accepted) break;
    }
    res.w_a = factor(u, 0, na_);
    res.w_b = factor(u, 2 * na_ * na_, nb_);
    res.residual = max_coefficient_residual(u);
    return res;
  }

 private:
  Eigen::VectorXd initial(const HermitianMatrix& g_a, const HermitianMatrix& g_b) const {
    Eigen::VectorXd u(static_cast<Eigen::Index>(2 * (na_ * na_ + nb_ * nb_)));
    double top = 0.0;
    for (const auto* g : {&g_a, &g_b}) {
      if (g->order() > 0) top = std::max(top, eig_hermitian(*g).eigenvalues.back());
    }
    // Lift zero eigenvalues slightly so every column has a live direction.
    const double lift = 1e-8 * std::max(top, 1e-6);
    auto fill = [&](const HermitianMatrix& g, std::size_t offset, std::size_t k) {
      if (k == 0) return;
      const EigenDecomposition e = eig_hermitian(g);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          const Complex w = e.eigenvectors(i, j) * std::sqrt(std::max(e.eigenvalues[j], 0.0) + lift);
          u(static_cast<Eigen::Index>(offset + i * k + j)) = w.real();
          u(static_cast<Eigen::Index>(offset + k * k + i * k + j)) = w.imag();
        }
      }
    };
    fill(g_a, 0, na_);
    fill(g_b, 2 * na_ * na_, nb_);
    return u;
  }

  ComplexMatrix factor(const Eigen::VectorXd& u, std::size_t offset, std::size_t k) const {
    ComplexMatrix w(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        w(i, j) = Complex(u(static_cast<Eigen::Index>(offset + i * k + j)),
                          u(static_cast<Eigen::Index>(offset + k * k + i * k + j)));
      }
    }
    return w;
  }

  HermitianForm form_of(const Eigen::VectorXd& u) const {
    const HermitianMatrix g_a(multiply_adjoint(factor(u, 0, na_)));
    const HermitianMatrix g_b(multiply_adjoint(factor(u, 2 * na_ * na_, nb_)));
    return c_.apply(g_a, g_b);
  }

  Eigen::VectorXd residual_vector(const Eigen::VectorXd& u) const {
    return realify(form_of(u).coeffs()) - target_;
  }

  double max_coefficient_residual(const Eigen::VectorXd& u) const {
    return max_abs_entry(form_of(u).coeffs() - c_.target().coeffs());
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const {
    const std::size_t big = c_.target().coeffs().order();
    Eigen::MatrixXd jac(static_cast<Eigen::Index>(big * big), u.size());
    const HermitianMatrix zero_a(na_), zero_b(nb_);
    auto columns = [&](std::size_t offset, std::size_t k, bool is_a) {
      const ComplexMatrix w = factor(u, offset, k);
      for (std::size_t part = 0; part < 2; ++part) {
        const Complex unit = part == 0 ? Complex(1.0, 0.0) : Complex(0.0, 1.0);
        for (std::size_t row = 0; row < k; ++row) {
          for (std::size_t col = 0; col < k; ++col) {
            // d(W W*) for dW = unit * E_{row,col}: e_row (unit w_col)^* + (unit w_col) e_row^*
            // written with w_col the column of W.
            ComplexMatrix d(k, k);
            for (std::size_t j = 0; j < k; ++j) {
              d(row, j) += unit * std::conj(w(j, col));
              d(j, row) += std::conj(unit) * w(j, col);
            }
            const HermitianMatrix dg(d);
            const HermitianForm df = is_a ? c_.apply(dg, zero_b) : c_.apply(zero_a, dg);
            const auto index = static_cast<Eigen::Index>(offset + part * k * k + row * k + col);
            jac.col(index) = realify(df.coeffs());
          }
        }
      }
    };
    columns(0, na_, true);
    columns(2 * na_ * na_, nb_, false);
    return jac;
  }

  const GramConstraints& c_;
  std::size_t na_;
  std::size_t nb_;
  Eigen::VectorXd target_;
};

HermitianMatrix random_hermitian(std::size_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return HermitianMatrix(m);
}

}  // namespace

SosCertificate solve_gram(const BivariatePolynomial& p, const SolveOptions& options) {
  if (!(options.tol > 0.0) || options.max_iter <= 0) {
    throw InvalidArgument("solver tolerance and iteration cap must be positive");
  }
  const double scale = p.norm2();
  if (scale == 0.0) throw InvalidArgument("cannot decompose the zero polynomial");
  const BivariatePolynomial unit = aglerkit::scale(p, 1.0 / scale);
  const GramConstraints constraints(unit);
  const AffineProjector affine(constraints.system(), constraints.rhs(), true);
  const FactorPolisher polisher(constraints);
  const std::size_t na = constraints.basis_a().size();
  const std::size_t nb = constraints.basis_b().size();

  SosCertificate cert;
  cert.seed = options.seed;
  cert.tolerance = options.tol;

  std::mt19937_64 rng(options.seed);
  const HermitianMatrix start_a = project_psd(random_hermitian(na, rng));
  const HermitianMatrix start_b = project_psd(random_hermitian(nb, rng));

  auto project_cone = [&](const Eigen::VectorXd& v) {
    auto [ga, gb] = constraints.unpack(v);
    return constraints.pack(project_psd(ga), project_psd(gb));
  };

  Eigen::VectorXd x = constraints.pack(start_a, start_b);
  Eigen::VectorXd correction = Eigen::VectorXd::Zero(x.size());
  Eigen::VectorXd y = x;
  long used = 0;
  double best = std::numeric_limits<double>::infinity();
  const double polish_target = std::min(options.tol * 1e-3, 1e-13);

  auto finish = [&](const HermitianMatrix& g_a, const HermitianMatrix& g_b) -> bool {
    // Factor threshold far below tol so truncation cannot dominate the residual.
    const double rank_tol = std::min(kDefaultRankTol, options.tol * 1e-3);
    SosCertificate candidate = refactor_certificate(unit, g_a, g_b, rank_tol);
    best = std::min(best, candidate.residual);
    if (candidate.residual > options.tol) return false;
    cert.p = p;
    cert.p_tilde = reflect(p);
    cert.g_a = candidate.g_a.scaled(scale * scale);
    cert.g_b = candidate.g_b.scaled(scale * scale);
    for (auto& q : candidate.a_polys) cert.a_polys.push_back(aglerkit::scale(q, scale));
    for (auto& q : candidate.b_polys) cert.b_polys.push_back(aglerkit::scale(q, scale));
    cert.residual = sos_residual(p, cert.a_polys, cert.b_polys);
    cert.iterations = used;
    return true;
  };

  while (used < options.max_iter) {
    const long block = std::min(options.dykstra_block, options.max_iter - used);
    for (long k = 0; k < block; ++k) {
      y = project_cone(x + correction);
      correction = x + correction - y;
      x = affine.project(y);
      ++used;
      if (options.record_trace) {
        auto [ga, gb] = constraints.unpack(y);
        cert.trace.gaps.push_back((x - y).norm());
        cert.trace.residuals.push_back(constraints.max_residual(ga, gb));
      }
    }
    auto [ga, gb] = constraints.unpack(y);
    if (constraints.max_residual(ga, gb) <= options.tol * 1e-3 && finish(ga, gb)) return cert;
    if (used >= options.max_iter) break;

    const int steps = static_cast<int>(std::min<long>(options.polish_steps, options.max_iter - used));
    const auto polished = polisher.run(ga, gb, polish_target, steps,
                                       options.record_trace ? &cert.trace.polish_residuals : nullptr);
    used += std::max(polished.steps, 1);
    if (finish(HermitianMatrix(multiply_adjoint(polished.w_a)), HermitianMatrix(multiply_adjoint(polished.w_b)))) {
      return cert;
    }
  }
  std::ostringstream msg;
  msg << "Gram feasibility not reached within " << options.max_iter << " iterations (best residual " << best
      << ", tolerance " << options.tol << ")";
  throw InfeasibleError(msg.str(), best, used);
}

SymmetrizedVectors symmetrize(const BivariatePolynomial& p, const std::vector<BivariatePolynomial>& a_polys,
                              const std::vector<BivariatePolynomial>& b_polys) {
  SymmetrizedVectors out;
  out.degree_a = degree_a_of(p.degree());
  out.degree_b = degree_b_of(p.degree());
  const double half = 1.0 / kSqrt2;
  auto build = [&](const std::vector<BivariatePolynomial>& polys, Bidegree d, bool empty_basis) {
    std::vector<BivariatePolynomial> v;
    if (empty_basis) return v;
    v.reserve(2 * polys.size());
    for (const auto& q : polys) v.push_back(aglerkit::scale(q.padded(d), half));
    for (const auto& q : polys) v.push_back(aglerkit::scale(reflect(q, d), half));
    return v;
  };
  out.a = build(a_polys, out.degree_a, p.n() == 0);
  out.b = build(b_polys, out.degree_b, p.m() == 0);
  return out;
}

SymmetrizedVectors symmetrize(const SosCertificate& cert) {
  return symmetrize(cert.p, cert.a_polys, cert.b_polys);
}

}  // namespace aglerkit
