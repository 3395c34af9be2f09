#include "aglerkit/moebius.hpp"

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "aglerkit/sampling.hpp"

namespace aglerkit {

std::optional<MoebiusAutomorphism> fit_moebius(const std::function<Complex(Complex)>& slice,
                                               const MoebiusFitOptions& options) {
  // Three well-separated nodes; y = (alpha w + beta) / (gamma w + 1) is linear in
  // (alpha, beta, gamma) once multiplied out.
  const double r = 0.5 * options.radius;
  const std::array<Complex, 3> nodes{Complex(0.0, 0.0), Complex(r, 0.0), Complex(0.0, r)};
  Eigen::Matrix3cd m;
  Eigen::Vector3cd rhs;
  for (int i = 0; i < 3; ++i) {
    const Complex w = nodes[static_cast<std::size_t>(i)];
    const Complex y = slice(w);
    if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) return std::nullopt;
    m(i, 0) = w;
    m(i, 1) = 1.0;
    m(i, 2) = -w * y;
    rhs(i) = y;
  }
  Eigen::FullPivLU<Eigen::Matrix3cd> lu(m);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::Vector3cd sol = lu.solve(rhs);
  const Complex alpha = sol(0), beta = sol(1), gamma = sol(2);
  if (std::abs(alpha) < 1e-12) return std::nullopt;

  MoebiusAutomorphism phi{alpha, -beta / alpha};
  const double slack = std::sqrt(options.tol);
  if (std::abs(std::abs(phi.u) - 1.0) > slack || !(std::abs(phi.a) < 1.0)) return std::nullopt;
  if (std::abs(gamma + std::conj(phi.a)) > slack) return std::nullopt;
  phi.u /= std::abs(phi.u);

  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.verify_points; ++k) {
    const Complex w = sample_disk(rng, options.radius);
    if (std::abs(phi(w) - slice(w)) > options.tol) return std::nullopt;
  }
  return phi;
}

}  // namespace aglerkit
