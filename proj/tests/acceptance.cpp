// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "aglerkit/fixedgraph.hpp"
#include "aglerkit/io.hpp"
#include "aglerkit/kernels.hpp"
#include "aglerkit/pick.hpp"
#include "aglerkit/retract.hpp"
#include "aglerkit/sampling.hpp"
#include "retract_cases.hpp"
#include "support.hpp"

using namespace aglerkit;
using namespace aglerkit::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Complex inner(const BivariatePolynomial& p, const Point2& z) { return reflect(p)(z) / p(z); }

Complex fd_inner(const BivariatePolynomial& p, const Point2& z, int j) {
  return central_difference([&](const Point2& x) { return inner(p, x); }, z, j, 1e-6);
}

// 1. Classic example end to end.
void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cert = solve_gram(classic());
  VerifyOptions opt;
  opt.samples = 500;
  const auto r = verify_theorem1(KernelBundle(cert), opt);
  const double elapsed = seconds_since(t0);
  o.require(cert.residual <= 1e-8, "certificate residual");
  o.require(r.identity1_max <= 1e-6 && r.identity2_max <= 1e-6, "identity residuals");
  o.require(r.cs_max_violation <= 1e-8, "Cauchy-Schwarz");
  o.require(elapsed < 30.0, "runtime");

  const KernelBundle hand(classic(), {scale(poly({{1.0, -1.0}}), std::sqrt(2.0))},
                          {scale(poly({{1.0}, {-1.0}}), std::sqrt(2.0))});
  const auto h = verify_theorem1(hand, opt);
  const double hand_residual = sos_residual(classic(), {scale(poly({{1.0, -1.0}}), std::sqrt(2.0))},
                                            {scale(poly({{1.0}, {-1.0}}), std::sqrt(2.0))});
  o.require(hand_residual <= 1e-12 && h.identity1_max <= 1e-12 && h.identity2_max <= 1e-12 &&
                h.cs_max_violation <= 1e-12,
            "hand-built oracle");
  o.detail << "residual " << cert.residual << ", identities " << std::max(r.identity1_max, r.identity2_max)
           << ", CS " << r.cs_max_violation << ", " << elapsed << " s; oracle identities "
           << std::max(h.identity1_max, h.identity2_max);
}

// 2. Telescoping oracle for f = z1 z2.
void criterion2(Outcome& o) {
  const KernelBundle tele(telescoping(), {BivariatePolynomial::constant(1.0, {0, 1})},
                          {BivariatePolynomial::monomial(1, 0)}, VectorMode::Raw);
  std::mt19937_64 rng(42);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto z = sample_polydisk(rng, 0.95), w = sample_polydisk(rng, 0.95);
    worst = std::max(worst, std::abs(tele.K(1, z, w) - 1.0));
    worst = std::max(worst, std::abs(tele.K(2, z, w) - z.z1 * std::conj(w.z1)));
  }
  o.require(worst <= 1e-12, "telescoping kernels");
  VerifyOptions opt;
  opt.tol = 1e-10;
  o.require(verify_theorem1(KernelBundle(telescoping(), tele.vector_a(), tele.vector_b()), opt).passed,
            "telescoping verification");

  // The solver may return any member G_A = diag(t, 1-t), G_B = diag(1-t, t) of the
  // feasible family; its raw kernels are K1 = t + (1-t) z2 conj(w2), K2 = (1-t) + t z1 conj(w1).
  const auto cert = solve_gram(telescoping());
  const double t = cert.g_a(0, 0).real();
  const KernelBundle raw(cert, VectorMode::Raw);
  double family = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto z = sample_polydisk(rng, 0.95), w = sample_polydisk(rng, 0.95);
    family = std::max(family, std::abs(raw.K(1, z, w) - (t + (1 - t) * z.z2 * std::conj(w.z2))));
    family = std::max(family, std::abs(raw.K(2, z, w) - ((1 - t) + t * z.z1 * std::conj(w.z1))));
  }
  o.require(cert.residual <= 1e-10 && family <= 1e-10 && t >= -1e-10 && t <= 1 + 1e-10, "solver family member");
  o.require(verify_theorem1(KernelBundle(cert), opt).passed, "solver verification");
  o.detail << "telescoping kernels exact to " << worst << "; solver returned family member t = " << t
           << " (K1 = 1 is the t = 1 member), verified at 1e-10";
}

// 3. Cauchy-Schwarz and gradient diagonal on the corpus.
void criterion3(Outcome& o) {
  double cs = 0.0, grad = 0.0;
  for (const auto& e : stable_corpus()) {
    const auto cert = solve_gram(e.p);
    const KernelBundle b(cert);
    VerifyOptions opt;
    opt.samples = 500;
    cs = std::max(cs, verify_theorem1(b, opt).cs_max_violation);
    std::mt19937_64 rng(42);
    for (int i = 0; i < 500; ++i) {
      const auto z = sample_polydisk(rng, 0.95);
      for (int j = 1; j <= 2; ++j) grad = std::max(grad, std::abs(b.L(j, z, z) - fd_inner(e.p, z, j - 1)));
    }
  }
  o.require(cs <= 1e-8, "Cauchy-Schwarz");
  o.require(grad <= 1e-5, "L_j(z,z) against finite differences");
  o.detail << "max CS violation " << cs << ", max gradient mismatch " << grad << " over 5 certificates";
}

// 4. Diagonal kernel bound.
void criterion4(Outcome& o) {
  double worst = -1e300;
  for (const auto& e : stable_corpus()) {
    const KernelBundle b(solve_gram(e.p));
    std::mt19937_64 rng(7);
    for (int i = 0; i < 1000; ++i) {
      const auto z = sample_polydisk(rng, 0.99);
      worst = std::max(worst, b.K(1, z, z).real() - 1.0 / (1.0 - std::norm(z.z1)));
      worst = std::max(worst, b.K(2, z, z).real() - 1.0 / (1.0 - std::norm(z.z2)));
    }
  }
  o.require(worst <= 1e-9, "bound");
  o.detail << "max K_j(z,z) - 1/(1-|z_j|^2) = " << worst;
}

// 5. Pick module.
void criterion5(Outcome& o) {
  std::mt19937_64 rng(5);
  double min_eig = 1e300, err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int degree = 1 + static_cast<int>(rng() % 3);
    const Complex u = std::polar(1.0, std::uniform_real_distribution<double>(0, 6.283)(rng));
    std::vector<Complex> zeros;
    for (int k = 0; k < degree; ++k) zeros.push_back(sample_disk(rng, 0.9));
    auto b = [&](Complex z) {
      Complex v = u;
      for (Complex a : zeros) v *= (z - a) / (1.0 - std::conj(a) * z);
      return v;
    };
    PickProblem p;
    for (int k = 0; k < 5; ++k) {
      p.nodes.push_back(sample_disk(rng, 0.9));
      p.targets.push_back(b(p.nodes.back()));
    }
    min_eig = std::min(min_eig, min_eigenvalue(pick_matrix(p)));
    const auto f = solve(p);
    for (std::size_t k = 0; k < 5; ++k) err = std::max(err, std::abs(f(p.nodes[k]) - p.targets[k]));
  }
  PickProblem bad;
  bad.nodes = {0.0, 0.5};
  bad.targets = {0.0, 0.9};
  const auto verdict = is_solvable(bad);
  o.require(min_eig >= -1e-10, "Pick positivity");
  o.require(err <= 1e-8, "interpolation");
  o.require(verdict == PickVerdict::NotSolvable, "non-solvable instance");
  o.detail << "min eigenvalue " << min_eig << ", max target error " << err << ", {0,1/2}->{0,0.9} "
           << to_string(verdict);
}

// Random f0 on D^2 with sum |c| <= 0.9, hence sup norm <= 0.9.
MultiPoly random_f0(std::mt19937_64& rng) {
  MultiPoly f(2);
  double total = 0.0;
  std::vector<std::pair<std::vector<int>, Complex>> terms;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b) {
      const Complex c = random_complex(rng);
      terms.push_back({{a, b}, c});
      total += std::abs(c);
    }
  for (auto& [e, c] : terms) f.add_term(e, c * (0.9 / total));
  return f;
}

SchurMap averaged(const MultiPoly& f0) {
  MultiPoly num(3);
  for (const auto& [e, c] : f0.terms()) num.add_term({e[0], e[1], 0}, 0.5 * c);
  num.add_term({0, 0, 1}, 0.5);
  return SchurMap(2, AnalyticMap::rational(RationalFunction(num)));
}

GraphFunction graph_of(const SchurMap& F, std::vector<FixedPointRecord>* seeds = nullptr) {
  const std::vector<Complex> origin{0.0, 0.0};
  const auto records = find_fixed_w(F, origin, default_seeds());
  if (seeds) *seeds = records;
  const auto local = local_graph(F, records.front(), 0.05, 3);
  return continue_graph(F, local, 0.9, 20);
}

// 6. Fixed-point graph oracle family.
void criterion6(Outcome& o) {
  std::mt19937_64 rng(6);
  double err = 0.0, min_eig = 1e300, deriv = 0.0;
  std::size_t nodes = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f0 = random_f0(rng);
    const auto F = averaged(f0);
    std::vector<FixedPointRecord> seeds;
    const auto g = graph_of(F, &seeds);
    for (std::size_t i = 0; i < g.grid.size(); ++i) err = std::max(err, std::abs(g.values[i] - f0.evaluate(g.grid.node(i))));
    nodes = std::max(nodes, g.grid.size());
    min_eig = std::min(min_eig, g.min_slice_eigenvalue());
    deriv = std::max(deriv, g.max_w_derivative());
    for (const auto& r : seeds) deriv = std::max(deriv, std::abs(r.w_derivative));
  }
  o.require(nodes == 400, "20x20 grid");
  o.require(err <= 1e-8, "graph matches f0");
  o.require(min_eig >= -1e-8, "slice Pick positivity");
  o.require(deriv <= 1 + 1e-8, "|dF/dw| <= 1");
  o.detail << "max |f - f0| " << err << " on 400 nodes, min slice eigenvalue " << min_eig << ", max |dF/dw| "
           << deriv;
}

// 7. Retract suite.
void criterion7(Outcome& o) {
  double residual = 0.0, value_err = 0.0;
  for (const auto& c : retract_corpus()) {
    const auto form = normal_form(c.rho);
    bool shape = form.k == c.k && form.free == c.free && form.duplicates.size() == c.duplicates.size() &&
                 form.graphs.size() == c.graph_coords.size();
    for (std::size_t i = 0; shape && i < c.duplicates.size(); ++i) {
      shape = form.duplicates[i].coord == c.duplicates[i].coord && form.duplicates[i].source == c.duplicates[i].source &&
              std::abs(form.duplicates[i].phi(0.5) - c.duplicates[i].sign * 0.5) <= 1e-8;
    }
    for (std::size_t g = 0; shape && g < form.graphs.size(); ++g) {
      shape = form.graphs[g].coord == c.graph_coords[g];
      for (std::size_t i = 0; i < form.graphs[g].samples.grid.size(); ++i) {
        value_err = std::max(value_err, std::abs(form.graphs[g].samples.values[i] -
                                                 c.graphs(form.graphs[g].samples.grid.node(i))[g]));
      }
    }
    o.require(shape, "normal form of " + c.name);
    residual = std::max(residual, form.max_graph_residual());
  }
  o.require(residual <= 1e-8, "f-grid residuals");
  o.require(value_err <= 1e-8, "f-grid values");

  const auto swap = polynomial_map(2, {mono(2, {0, 1}), mono(2, {1, 0})});
  bool rejected = false;
  try {
    normal_form(swap);
  } catch (const NotRetractionError&) {
    rejected = true;
  }
  o.require(rejected, "swap rejection");

  // One-variable rigidity over random rational candidates.
  std::mt19937_64 rng(77);
  int accepted = 0, candidates = 0;
  bool rigid = true;
  for (int t = 0; t < 60; ++t) {
    const Complex a = sample_disk(rng, 0.8), u = std::polar(1.0, 0.61 * t);
    const auto z = MultiPoly::variable(1, 0);
    const auto one = MultiPoly::constant(1, 1.0);
    RationalFunction r;
    switch (t % 4) {
      case 0: r = RationalFunction(MultiPoly::constant(1, a)); break;
      case 1: r = RationalFunction((z - MultiPoly::constant(1, a)) * u, one - z * std::conj(a)); break;
      case 2: r = RationalFunction(z * z * (0.5 * u) + MultiPoly::constant(1, 0.4 * a)); break;
      default: r = RationalFunction(z); break;
    }
    ++candidates;
    const RetractMap rho(1, {AnalyticMap::rational(r)});
    if (!verify_idempotent(rho).passed) continue;
    ++accepted;
    const auto form = normal_form(rho);
    const bool identity = form.k == 1 && form.graphs.empty() && form.duplicates.empty();
    const bool constant = form.k == 0 && form.graphs.size() == 1 && form.graphs[0].constant;
    rigid = rigid && (identity || constant);
  }
  o.require(rigid && accepted > 0, "one-variable rigidity");
  o.detail << "6 corpus maps normalized, max f-grid residual " << residual << ", max value error " << value_err
           << "; swap rejected; " << accepted << "/" << candidates << " one-variable candidates idempotent, all identity or constant";
}

// 8. Determinism across repeated runs and worker counts.
void criterion8(Outcome& o) {
  auto snapshot = [] {
    std::string s = io::dump(io::to_json(solve_gram(stable_corpus()[4].p)));
    s += io::dump(io::to_json(verify_theorem1(KernelBundle(solve_gram(classic())))));
    std::mt19937_64 rng(6);
    s += io::dump(io::to_json(graph_of(averaged(random_f0(rng)))));
    s += io::dump(io::to_json(normal_form(retract_corpus()[4].rho)));
    return s;
  };
  const std::string first = snapshot();
  const std::string second = snapshot();
  const char* saved = std::getenv("AGLERKIT_THREADS");
  const std::string restore = saved ? saved : "";
  setenv("AGLERKIT_THREADS", "1", 1);
  const std::string serial = snapshot();
  if (saved) setenv("AGLERKIT_THREADS", restore.c_str(), 1); else unsetenv("AGLERKIT_THREADS");
  o.require(first == second, "repeat run");
  o.require(first == serial, "single worker run");
  o.detail << first.size() << " bytes of certificates, reports, graphs and normal forms identical across 3 runs";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"classic example end-to-end", criterion1},
      {"telescoping oracle", criterion2},
      {"Cauchy-Schwarz and gradient suite", criterion3},
      {"kernel bound suite", criterion4},
      {"Pick module", criterion5},
      {"fixed-graph oracle family", criterion6},
      {"retract suite", criterion7},
      {"determinism", criterion8},
  };
  int failures = 0, index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s criterion %d (%s): %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
