#include "aglerkit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "aglerkit/errors.hpp"

namespace aglerkit {

std::vector<Complex> ComplexMatrix::column(std::size_t j) const {
  std::vector<Complex> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) : order_(m.rows()), data_(m.rows() * m.rows()) {
  if (m.rows() != m.cols()) throw InvalidArgument("Hermitian matrix must be square");
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j < order_; ++j) data_[i * order_ + j] = m(i, j);
  }
  symmetrize();
}

HermitianMatrix::HermitianMatrix(std::size_t order, std::vector<Complex> row_major)
    : order_(order), data_(std::move(row_major)) {
  if (data_.size() != order * order) throw InvalidArgument("Hermitian matrix data has wrong size");
  symmetrize();
}

HermitianMatrix HermitianMatrix::identity(std::size_t order) {
  HermitianMatrix m(order);
  for (std::size_t i = 0; i < order; ++i) m.data_[i * order + i] = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  HermitianMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m.data_[i * values.size() + i] = values[i];
  return m;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, Complex value) {
  if (i == j) {
    data_[i * order_ + i] = value.real();
    return;
  }
  data_[i * order_ + j] = value;
  data_[j * order_ + i] = std::conj(value);
}

void HermitianMatrix::symmetrize() {
  for (std::size_t i = 0; i < order_; ++i) {
    data_[i * order_ + i] = data_[i * order_ + i].real();
    for (std::size_t j = i + 1; j < order_; ++j) {
      const Complex avg = 0.5 * (data_[i * order_ + j] + std::conj(data_[j * order_ + i]));
      data_[i * order_ + j] = avg;
      data_[j * order_ + i] = std::conj(avg);
    }
  }
}

double HermitianMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& c : data_) s += std::norm(c);
  return std::sqrt(s);
}

double HermitianMatrix::max_hermitian_defect() const noexcept {
  double worst = 0.0;
  for (std::size_t i = 0; i < order_; ++i) {
    for (std::size_t j = 0; j < order_; ++j) {
      worst = std::max(worst, std::abs(data_[i * order_ + j] - std::conj(data_[j * order_ + i])));
    }
  }
  return worst;
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& other) const {
  if (other.order_ != order_) throw InvalidArgument("order mismatch");
  HermitianMatrix out(*this);
  for (std::size_t k = 0; k < data_.size(); ++k) out.data_[k] += other.data_[k];
  return out;
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& other) const {
  return *this + other.scaled(-1.0);
}

HermitianMatrix HermitianMatrix::scaled(double s) const {
  HermitianMatrix out(*this);
  for (auto& c : out.data_) c *= s;
  return out;
}

namespace {

double off_diagonal_norm(const std::vector<Complex>& a, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a[i * n + j]);
  }
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition eig_hermitian(const HermitianMatrix& m, int max_sweeps) {
  const std::size_t n = m.order();
  std::vector<Complex> a = m.data();
  std::vector<Complex> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = std::max(m.frobenius_norm(), 1e-300);
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm(a, n) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = a[p * n + q];
        const double mag = std::abs(g);
        if (mag <= 1e-300 || mag <= 1e-18 * scale) continue;
        // Phase-rotate the pair to a real 2x2 block, then a real Jacobi rotation.
        const Complex phase = g / mag;  // e^{i phi}
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U = [[c, s], [-s conj(phase), c conj(phase)]] acting on coordinates p, q.
        const Complex upp = c;
        const Complex upq = s;
        const Complex uqp = -s * std::conj(phase);
        const Complex uqq = c * std::conj(phase);
        // A <- A U (columns p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a[k * n + p];
          const Complex akq = a[k * n + q];
          a[k * n + p] = akp * upp + akq * uqp;
          a[k * n + q] = akp * upq + akq * uqq;
          const Complex vkp = v[k * n + p];
          const Complex vkq = v[k * n + q];
          v[k * n + p] = vkp * upp + vkq * uqp;
          v[k * n + q] = vkp * upq + vkq * uqq;
        }
        // A <- U* A (rows p, q)
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a[p * n + k];
          const Complex aqk = a[q * n + k];
          a[p * n + k] = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a[q * n + k] = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = a[p * n + p].real();
        a[q * n + q] = a[q * n + q].real();
      }
    }
  }
  const double remaining = off_diagonal_norm(a, n);
  if (remaining > 1e-15 * scale && sweep >= max_sweeps) {
    std::ostringstream msg;
    msg << "Jacobi eigensolver did not converge after " << max_sweeps
        << " sweeps; off-diagonal norm " << remaining << " (matrix norm " << scale << ")";
    throw ConvergenceError(msg.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a[i * n + i].real() < a[j * n + j].real(); });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a[order[k] * n + order[k]].real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v[i * n + order[k]];
  }
  return out;
}

double min_eigenvalue(const HermitianMatrix& m) {
  if (m.order() == 0) return 0.0;
  return eig_hermitian(m).eigenvalues.front();
}

namespace {

HermitianMatrix reassemble(const ComplexMatrix& vecs, const std::vector<double>& values) {
  const std::size_t n = vecs.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = vecs(i, k) * values[k];
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(vecs(j, k));
    }
  }
  return HermitianMatrix(out);
}

}  // namespace

HermitianMatrix project_psd(const HermitianMatrix& m) {
  if (m.order() == 0) return m;
  EigenDecomposition e = eig_hermitian(m);
  if (e.eigenvalues.front() >= 0.0) return m;
  for (auto& l : e.eigenvalues) l = std::max(l, 0.0);
  return reassemble(e.eigenvectors, e.eigenvalues);
}

ComplexMatrix psd_factor(const HermitianMatrix& m, double rank_tol) {
  const std::size_t n = m.order();
  if (n == 0) return ComplexMatrix(0, 0);
  const EigenDecomposition e = eig_hermitian(m);
  const double top = std::max(e.eigenvalues.back(), 0.0);
  const double threshold = rank_tol * top;
  if (e.eigenvalues.front() < -threshold) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite: min eigenvalue " << e.eigenvalues.front()
        << " below -" << threshold;
    throw NotPsdError(msg.str(), e.eigenvalues.front());
  }
  std::vector<std::size_t> kept;
  // Largest first, so the leading column carries the dominant direction.
  for (std::size_t k = n; k-- > 0;) {
    if (e.eigenvalues[k] > threshold && e.eigenvalues[k] > 0.0) kept.push_back(k);
  }
  ComplexMatrix w(n, kept.size());
  for (std::size_t c = 0; c < kept.size(); ++c) {
    const double root = std::sqrt(e.eigenvalues[kept[c]]);
    for (std::size_t i = 0; i < n; ++i) w(i, c) = root * e.eigenvectors(i, kept[c]);
  }
  return w;
}

ComplexMatrix multiply_adjoint(const ComplexMatrix& w) {
  ComplexMatrix out(w.rows(), w.rows());
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.rows(); ++j) {
      Complex s{};
      for (std::size_t k = 0; k < w.cols(); ++k) s += w(i, k) * std::conj(w(j, k));
      out(i, j) = s;
    }
  }
  return out;
}

Complex evaluate_univariate(std::span<const Complex> coeffs, Complex w) {
  Complex acc{};
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * w + coeffs[k];
  return acc;
}

std::vector<Complex> roots_univariate(std::span<const Complex> coeffs, double trim_tol) {
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) throw InvalidArgument("roots of the zero polynomial are undefined");
  std::size_t len = coeffs.size();
  while (len > 0 && std::abs(coeffs[len - 1]) <= trim_tol * scale) --len;
  const std::size_t degree = len - 1;
  if (degree == 0) return {};

  const std::span<const Complex> poly = coeffs.first(len);
  const Complex lead = poly[degree];
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(degree),
                                                      static_cast<Eigen::Index>(degree));
  for (std::size_t i = 1; i < degree; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  }
  for (std::size_t i = 0; i < degree; ++i) {
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(degree - 1)) = -poly[i] / lead;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("companion eigenvalue solve failed");

  std::vector<Complex> derivative(degree);
  for (std::size_t k = 1; k <= degree; ++k) derivative[k - 1] = static_cast<double>(k) * poly[k];

  std::vector<Complex> roots;
  roots.reserve(degree);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    Complex r = solver.eigenvalues()(i);
    for (int step = 0; step < 2; ++step) {
      const Complex value = evaluate_univariate(poly, r);
      const Complex slope = evaluate_univariate(derivative, r);
      if (std::abs(slope) == 0.0) break;
      const Complex candidate = r - value / slope;
      if (std::abs(evaluate_univariate(poly, candidate)) < std::abs(value)) {
        r = candidate;
      } else {
        break;
      }
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](const Complex& x, const Complex& y) {
    return std::abs(x) != std::abs(y) ? std::abs(x) < std::abs(y) : std::arg(x) < std::arg(y);
  });
  return roots;
}

AffineProjector::AffineProjector(Eigen::MatrixXd system, Eigen::VectorXd rhs, bool least_squares)
    : system_(std::move(system)), rhs_(std::move(rhs)) {
  if (system_.rows() != rhs_.size()) throw InvalidArgument("affine system: rhs length mismatch");
  if (system_.rows() == 0 || system_.cols() == 0) {
    pinv_ = Eigen::MatrixXd::Zero(system_.cols(), system_.rows());
    return;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system_.rows(), system_.cols());
  cod.setThreshold(1e-12);
  cod.compute(system_);
  rank_ = cod.rank();
  pinv_ = cod.pseudoInverse();
  if (!least_squares && rhs_.size() > 0) {
    const Eigen::VectorXd particular = pinv_ * rhs_;
    const double mismatch = (system_ * particular - rhs_).cwiseAbs().maxCoeff();
    const double rhs_scale = std::max(1.0, rhs_.cwiseAbs().maxCoeff());
    if (mismatch > 1e-9 * rhs_scale) {
      std::ostringstream msg;
      msg << "affine system is inconsistent (least-squares mismatch " << mismatch << ")";
      throw InvalidArgument(msg.str());
    }
  }
}

Eigen::VectorXd AffineProjector::project(const Eigen::VectorXd& x) const {
  if (x.size() != system_.cols()) throw InvalidArgument("affine projection: dimension mismatch");
  if (system_.rows() == 0 || system_.cols() == 0) return x;
  return x - pinv_ * (system_ * x - rhs_);
}

double AffineProjector::max_violation(const Eigen::VectorXd& x) const {
  if (system_.rows() == 0) return 0.0;
  return (system_ * x - rhs_).cwiseAbs().maxCoeff();
}

Eigen::VectorXd affine_project(const Eigen::VectorXd& x, const Eigen::MatrixXd& system,
                               const Eigen::VectorXd& rhs, bool least_squares) {
  return AffineProjector(system, rhs, least_squares).project(x);
}

}  // namespace aglerkit
