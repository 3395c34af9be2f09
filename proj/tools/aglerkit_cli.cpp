// Command-line front end. Every command reads one JSON file and writes one
// JSON document (to --output atomically, or to stdout).
//
// Exit status: 0 success, 1 verification failure, 2 unstable / not solvable /
// not idempotent, 3 inconclusive, 64 usage or malformed input, 66 missing input.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "aglerkit/io.hpp"

namespace {

using aglerkit::io::Json;

enum Exit : int {
  kOk = 0,
  kFailed = 1,
  kRejected = 2,
  kInconclusive = 3,
  kUsage = 64,
  kNoInput = 66,
};

struct RunConfig {
  std::string input;
  std::string output;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  int samples = 500;
  long max_iter = 200000;
  int grid = 20;
  double radius = 0.9;
};

void emit(const RunConfig& cfg, const Json& doc) {
  if (cfg.output.empty()) {
    std::cout << aglerkit::io::dump(doc);
  } else {
    aglerkit::io::write_file_atomic(cfg.output, doc);
  }
}

Json tagged(const char* kind) {
  Json j;
  j["format"] = aglerkit::io::kFormat;
  j["kind"] = kind;
  return j;
}

int cmd_stability(const RunConfig& cfg) {
  const auto p = aglerkit::io::polynomial_from_json(aglerkit::io::read_file(cfg.input));
  aglerkit::StabilityOptions opt;
  opt.tol = cfg.tol;
  const auto report = aglerkit::check_stability(p, opt);
  emit(cfg, aglerkit::io::to_json(report));
  switch (report.verdict) {
    case aglerkit::StabilityVerdict::StableOpen:
    case aglerkit::StabilityVerdict::StableClosedStrict: return kOk;
    case aglerkit::StabilityVerdict::ZeroFound: return kRejected;
    case aglerkit::StabilityVerdict::Inconclusive: return kInconclusive;
  }
  return kInconclusive;
}

int cmd_decompose(const RunConfig& cfg) {
  const auto p = aglerkit::io::polynomial_from_json(aglerkit::io::read_file(cfg.input));
  const auto stability = aglerkit::check_stability(p);
  if (!stability.stable()) {
    std::cerr << "decompose: polynomial is not stable (" << aglerkit::to_string(stability.verdict) << ")\n";
    emit(cfg, aglerkit::io::to_json(stability));
    return stability.verdict == aglerkit::StabilityVerdict::ZeroFound ? kRejected : kInconclusive;
  }
  aglerkit::SolveOptions opt;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  opt.max_iter = cfg.max_iter;
  try {
    const auto cert = aglerkit::solve_gram(p, opt);
    std::cerr << "residual " << cert.residual << "\n";
    emit(cfg, aglerkit::io::to_json(cert));
    return cert.residual <= cfg.tol ? kOk : kFailed;
  } catch (const aglerkit::InfeasibleError& e) {
    std::cerr << "decompose: " << e.what() << "\n";
    Json j = tagged("decompose_failure");
    j["message"] = e.what();
    j["best_residual"] = e.best_residual();
    j["iterations"] = e.iterations();
    emit(cfg, j);
    return kFailed;
  }
}

int cmd_verify(const RunConfig& cfg) {
  const auto stored = aglerkit::io::certificate_from_json(aglerkit::io::read_file(cfg.input));
  // The Gram matrices are the certificate; factors are re-derived from them
  // and the stored factor lists must agree.
  const auto cert = aglerkit::refactor_certificate(stored.p, stored.g_a, stored.g_b, 1e-12);
  const aglerkit::GramConstraints constraints(stored.p);
  const double scale = std::max(1.0, std::max(stored.g_a.frobenius_norm(), stored.g_b.frobenius_norm()));
  const double factor_gap =
      std::max((aglerkit::gram_of(stored.a_polys, constraints.basis_a()) - stored.g_a).frobenius_norm(),
               (aglerkit::gram_of(stored.b_polys, constraints.basis_b()) - stored.g_b).frobenius_norm()) /
      scale;

  const aglerkit::KernelBundle bundle(cert);
  aglerkit::VerifyOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol;
  const auto report = aglerkit::verify_theorem1(bundle, opt);
  const auto bounds = aglerkit::check_bounds(bundle, opt);

  Json j = aglerkit::io::to_json(report);
  j["gram_residual"] = cert.residual;
  j["factor_consistency"] = factor_gap;
  j["bounds"] = aglerkit::io::to_json(bounds);
  const bool passed = report.passed && bounds.passed && factor_gap <= 1e-8;
  j["passed"] = passed;
  emit(cfg, j);
  if (!passed) {
    for (const auto& w : report.witnesses) {
      std::cerr << "verify: worst " << w.check << " = " << w.value << "\n";
    }
    if (factor_gap > 1e-8) std::cerr << "verify: stored factors disagree with the Gram matrices (" << factor_gap << ")\n";
  }
  return passed ? kOk : kFailed;
}

int cmd_pick(const RunConfig& cfg) {
  auto problem = aglerkit::io::pick_problem_from_json(aglerkit::io::read_file(cfg.input));
  const auto report = aglerkit::solvability(problem);
  Json j = tagged("pick");
  j["problem"] = aglerkit::io::to_json(problem);
  j["verdict"] = aglerkit::to_string(report.verdict);
  j["min_eigenvalue"] = report.min_eigenvalue;
  if (report.verdict == aglerkit::PickVerdict::NotSolvable) {
    emit(cfg, j);
    return kRejected;
  }
  const auto f = aglerkit::solve(problem);
  double worst = 0.0;
  for (std::size_t i = 0; i < problem.nodes.size(); ++i) {
    worst = std::max(worst, std::abs(f(problem.nodes[i]) - problem.targets[i]));
  }
  j["interpolant"] = aglerkit::io::to_json(f);
  j["max_target_error"] = worst;
  emit(cfg, j);
  return worst <= std::max(problem.tol, 1e-8) ? kOk : kFailed;
}

int cmd_fixedgraph(const RunConfig& cfg) {
  const auto F = aglerkit::io::schur_map_from_json(aglerkit::io::read_file(cfg.input));
  const std::vector<aglerkit::Complex> origin(static_cast<std::size_t>(F.n()), 0.0);
  const auto seeds = aglerkit::default_seeds();
  const auto records = aglerkit::find_fixed_w(F, origin, seeds);
  const auto uniqueness = aglerkit::uniqueness_check(F, records);

  Json j = tagged("fixedgraph");
  Json recs = Json::array();
  for (const auto& r : records) recs.push_back(aglerkit::io::to_json(r));
  j["records"] = recs;
  j["case"] = aglerkit::to_string(uniqueness.kind);
  if (uniqueness.kind != aglerkit::GraphCase::UniqueGraph) {
    emit(cfg, j);
    return uniqueness.kind == aglerkit::GraphCase::Identity ? kOk : kRejected;
  }
  const auto& seed = records.front();
  if (seed.classification != aglerkit::FixedPointClass::Interior) {
    j["message"] = "the fixed point is in the automorphism case; no graph to continue";
    emit(cfg, j);
    return kFailed;
  }
  aglerkit::GraphOptions opt;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;
  const auto local = aglerkit::local_graph(F, seed, 0.05, 3, opt);
  const auto graph = aglerkit::continue_graph(F, local, cfg.radius, cfg.grid, opt);
  const bool ok = graph.certified(opt);
  j["graph"] = aglerkit::io::to_json(graph);
  j["min_slice_eigenvalue"] = graph.min_slice_eigenvalue();
  j["max_w_derivative"] = graph.max_w_derivative();
  j["certified"] = ok;
  emit(cfg, j);
  return ok ? kOk : kFailed;
}

int cmd_retract(const RunConfig& cfg) {
  const auto rho = aglerkit::io::retract_map_from_json(aglerkit::io::read_file(cfg.input));
  const auto check = aglerkit::verify_idempotent(rho, cfg.samples, cfg.seed, cfg.tol);
  Json j = tagged("retract");
  j["idempotence"] = aglerkit::io::to_json(check);
  if (!check.passed) {
    std::cerr << "retract: map is not idempotent (defect " << check.max_defect << ")\n";
    emit(cfg, j);
    return kRejected;
  }
  aglerkit::NormalFormOptions opt;
  opt.idempotence_samples = cfg.samples;
  opt.idempotence_tol = cfg.tol;
  opt.seed = cfg.seed;
  opt.grid = cfg.grid;
  opt.radius = cfg.radius;
  opt.reduce.grid = cfg.grid;
  opt.reduce.radius = cfg.radius;
  const auto form = aglerkit::normal_form(rho, opt);
  const double range = aglerkit::range_defect(rho, form, 200, cfg.seed);
  j["normal_form"] = aglerkit::io::to_json(form);
  j["range_defect"] = range;
  const bool ok = form.max_graph_residual() <= 1e-8 && range <= 1e-7;
  j["passed"] = ok;
  emit(cfg, j);
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aglerkit: certificate and interpolation tools for Schur functions on the polydisk"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, const char* input_help) {
    sub->add_option("input,--input", cfg.input, input_help);
    sub->add_option("--output", cfg.output, "Write the JSON result here instead of stdout");
    sub->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--samples", cfg.samples, "Sample count")->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", cfg.max_iter, "Iteration cap")->check(CLI::PositiveNumber);
    sub->add_option("--grid", cfg.grid, "Grid nodes per axis")->check(CLI::PositiveNumber);
    sub->add_option("--radius", cfg.radius, "Grid radius")->check(CLI::Range(0.0, 0.95));
  };

  std::optional<int (*)(const RunConfig&)> command;
  struct Entry {
    const char* name;
    const char* help;
    const char* input;
    int (*run)(const RunConfig&);
  };
  const Entry entries[] = {
      {"stability", "Check that a polynomial has no zeros in the open bidisk", "Polynomial JSON", cmd_stability},
      {"decompose", "Solve for a Gram-matrix sum-of-squares certificate", "Polynomial JSON", cmd_decompose},
      {"verify", "Re-verify a certificate's kernel identities and bounds", "Certificate JSON", cmd_verify},
      {"pick", "Decide and solve a one-variable Pick problem", "Pick problem JSON", cmd_pick},
      {"fixedgraph", "Extract the fixed-point graph of a Schur map", "Schur map JSON", cmd_fixedgraph},
      {"retract", "Normalize an idempotent self-map of the polydisk", "Retraction JSON", cmd_retract},
  };
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    add_common(sub, e.input);
    sub->callback([&command, run = e.run] { command = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  if (cfg.input.empty()) {
    std::cerr << "an input file is required\n";
    return kUsage;
  }

  try {
    return (*command)(cfg);
  } catch (const aglerkit::io::FileError& e) {
    std::cerr << e.what() << "\n";
    return kNoInput;
  } catch (const aglerkit::io::FormatError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const aglerkit::InvalidArgument& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const aglerkit::NotRetractionError& e) {
    std::cerr << e.what() << "\n";
    return kRejected;
  } catch (const aglerkit::NotSolvableError& e) {
    std::cerr << e.what() << "\n";
    return kRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
