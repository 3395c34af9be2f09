#include "aglerkit/pick.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aglerkit/errors.hpp"

namespace aglerkit {

namespace {

// Beyond this the recursion treats a normalized target as unimodular; the
// rounding of earlier stages makes an exact test meaningless.
constexpr double kUnimodularBand = 1e-6;

Complex blaschke_factor(Complex node, Complex z) { return (z - node) / (1.0 - std::conj(node) * z); }

}  // namespace

void PickProblem::validate() const {
  if (nodes.size() != targets.size()) throw InvalidArgument("Pick problem: nodes and targets differ in length");
  if (!(tol > 0.0)) throw InvalidArgument("Pick problem: tolerance must be positive");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(std::abs(nodes[i]) < 1.0)) throw InvalidArgument("Pick problem: node outside the open unit disk");
    if (!(std::abs(targets[i]) <= 1.0 + 1e-12)) throw InvalidArgument("Pick problem: target outside the closed disk");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(nodes[i] - nodes[j]) <= 1e-10) throw InvalidArgument("Pick problem: repeated node");
    }
  }
}

std::string to_string(PickVerdict v) {
  switch (v) {
    case PickVerdict::Solvable: return "Solvable";
    case PickVerdict::SolvableUnique: return "SolvableUnique";
    case PickVerdict::NotSolvable: return "NotSolvable";
  }
  return "NotSolvable";
}

HermitianMatrix pick_matrix(const PickProblem& problem) {
  problem.validate();
  const std::size_t n = problem.nodes.size();
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      m(i, j) = (1.0 - problem.targets[i] * std::conj(problem.targets[j])) /
                (1.0 - problem.nodes[i] * std::conj(problem.nodes[j]));
    }
  }
  return HermitianMatrix(m);
}

SolvabilityReport solvability(const PickProblem& problem) {
  SolvabilityReport report;
  const HermitianMatrix m = pick_matrix(problem);
  report.min_eigenvalue = m.order() == 0 ? 1.0 : min_eigenvalue(m);
  if (report.min_eigenvalue >= problem.tol) {
    report.verdict = PickVerdict::Solvable;
  } else if (std::abs(report.min_eigenvalue) <= problem.tol) {
    report.verdict = PickVerdict::SolvableUnique;
  } else {
    report.verdict = PickVerdict::NotSolvable;
  }
  return report;
}

PickVerdict is_solvable(const PickProblem& problem) { return solvability(problem).verdict; }

SchurInterpolant::SchurInterpolant(std::vector<Stage> stages, Complex terminal)
    : stages_(std::move(stages)), terminal_(terminal) {
  if (std::abs(terminal_) > 1.0 + 1e-12) throw InvalidArgument("Schur interpolant: terminal exceeds 1");
  for (const auto& s : stages_) {
    if (!(std::abs(s.node) < 1.0) || !(std::abs(s.value) < 1.0)) {
      throw InvalidArgument("Schur interpolant: stage parameters must lie in the open disk");
    }
  }
}

Complex SchurInterpolant::evaluate(Complex z) const {
  Complex g = terminal_;
  for (auto it = stages_.rbegin(); it != stages_.rend(); ++it) {
    const Complex bg = blaschke_factor(it->node, z) * g;
    g = (it->value + bg) / (1.0 + std::conj(it->value) * bg);
  }
  return g;
}

SchurInterpolant solve(const PickProblem& problem) {
  const SolvabilityReport report = solvability(problem);
  if (report.verdict == PickVerdict::NotSolvable) {
    std::ostringstream msg;
    msg << "Pick matrix is not positive semidefinite (min eigenvalue " << report.min_eigenvalue << ")";
    throw NotSolvableError(msg.str());
  }
  // In the singular case the interpolant is a Blaschke product whose degree is
  // the numerical rank of the Pick matrix; stop the recursion there.
  std::size_t rank = problem.nodes.size();
  if (report.verdict == PickVerdict::SolvableUnique) {
    const EigenDecomposition e = eig_hermitian(pick_matrix(problem));
    rank = static_cast<std::size_t>(
        std::count_if(e.eigenvalues.begin(), e.eigenvalues.end(), [&](double l) { return l > problem.tol; }));
  }
  std::vector<Complex> nodes = problem.nodes;
  std::vector<Complex> targets = problem.targets;
  std::vector<SchurInterpolant::Stage> stages;
  Complex terminal = 0.0;
  while (!nodes.empty()) {
    const Complex w1 = targets.front();
    const double mod = std::abs(w1);
    if ((stages.size() >= rank && mod > 0.5) || mod >= 1.0 - kUnimodularBand) {
      // Maximum principle: the remaining function is this constant.
      const Complex c = w1 / mod;
      for (const auto& w : targets) {
        if (std::abs(w - c) > std::max(1e3 * kUnimodularBand, problem.tol)) {
          throw NotSolvableError("Schur recursion: unimodular value forces a constant that misses a target");
        }
      }
      terminal = c;
      break;
    }
    const Complex l1 = nodes.front();
    std::vector<Complex> next_nodes, next_targets;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const Complex moved = (targets[i] - w1) / (1.0 - std::conj(w1) * targets[i]);
      next_nodes.push_back(nodes[i]);
      next_targets.push_back(moved / blaschke_factor(l1, nodes[i]));
    }
    stages.push_back({l1, w1});
    nodes = std::move(next_nodes);
    targets = std::move(next_targets);
    if (!targets.empty() && std::abs(targets.front()) > 1.0 + 1e3 * kUnimodularBand) {
      throw NotSolvableError("Schur recursion produced a parameter outside the disk");
    }
  }
  return SchurInterpolant(std::move(stages), terminal);
}

GeometricKernel geometric_kernel(const HermitianMatrix& k1, const HermitianMatrix& k2, double tol) {
  if (k1.order() != k2.order()) throw InvalidArgument("geometric kernel: sample matrices differ in size");
  const std::size_t n = k1.order();
  for (std::size_t i = 0; i < n; ++i) {
    if (k2(i, i).real() >= 1.0 - 1e-9) {
      std::ostringstream msg;
      msg << "geometric kernel: K2 diagonal entry " << i << " equals " << k2(i, i).real() << ", not below 1";
      throw DomainError(msg.str());
    }
  }
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out(i, j) = k1(i, j) / (1.0 - k2(i, j));
  }
  GeometricKernel g;
  g.matrix = HermitianMatrix(out);
  g.min_eigenvalue = n == 0 ? 0.0 : min_eigenvalue(g.matrix);
  g.psd = g.min_eigenvalue >= -tol;
  return g;
}

}  // namespace aglerkit
