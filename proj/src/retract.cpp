#include "aglerkit/retract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>

#include "aglerkit/errors.hpp"
#include "aglerkit/parallel.hpp"
#include "aglerkit/sampling.hpp"

namespace aglerkit {

namespace {

std::vector<Complex> insert_at(std::span<const Complex> z, int j, Complex value) {
  std::vector<Complex> x(z.begin(), z.end());
  x.insert(x.begin() + j, value);
  return x;
}

std::vector<Complex> remove_at(std::span<const Complex> z, int j) {
  std::vector<Complex> x(z.begin(), z.end());
  x.erase(x.begin() + j);
  return x;
}

std::vector<Complex> sample_point(std::mt19937_64& rng, int n, double radius) {
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (auto& zi : z) zi = sample_disk(rng, radius);
  return z;
}

// Substitutes x_j = c, leaving a polynomial in the remaining variables.
MultiPoly substitute(const MultiPoly& p, int j, Complex c) {
  MultiPoly out(p.vars() - 1);
  for (const auto& [e, coeff] : p.terms()) {
    MultiPoly::Exponent reduced = e;
    const int power = reduced[static_cast<std::size_t>(j)];
    reduced.erase(reduced.begin() + j);
    out.add_term(reduced, coeff * std::pow(c, power));
  }
  return out;
}

// Moves variable j to the end.
MultiPoly move_last(const MultiPoly& p, int j) {
  MultiPoly out(p.vars());
  for (const auto& [e, coeff] : p.terms()) {
    MultiPoly::Exponent moved = e;
    const int power = moved[static_cast<std::size_t>(j)];
    moved.erase(moved.begin() + j);
    moved.push_back(power);
    out.add_term(moved, coeff);
  }
  return out;
}

AnalyticMap restrict_constant(const AnalyticMap& m, int j, Complex c) {
  if (m.is_rational()) {
    const auto& r = m.as_rational();
    return AnalyticMap::rational(RationalFunction(substitute(r.numerator, j, c), substitute(r.denominator, j, c)));
  }
  return AnalyticMap::callable(m.dimension() - 1, [m, j, c](std::span<const Complex> z) {
    const auto x = insert_at(z, j, c);
    return m(x);
  });
}

SchurMap fixed_point_map(const AnalyticMap& component, int j) {
  const int n = component.dimension();
  if (component.is_rational()) {
    const auto& r = component.as_rational();
    return SchurMap(n - 1, AnalyticMap::rational(RationalFunction(move_last(r.numerator, j), move_last(r.denominator, j))));
  }
  return SchurMap(n - 1, AnalyticMap::callable(n, [component, j, n](std::span<const Complex> x) {
                    const auto full = insert_at(x.first(static_cast<std::size_t>(n - 1)), j, x.back());
                    return component(full);
                  }));
}

// f(z') through the fixed-point graph, remembering the most recent query
// because every reduced component asks for the same point in turn.
class GraphEvaluator {
 public:
  GraphEvaluator(SchurMap F, GraphFunction graph, GraphOptions options)
      : F_(std::move(F)), graph_(std::move(graph)), options_(std::move(options)) {}

  Complex operator()(std::span<const Complex> z) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (valid_ && std::equal(z.begin(), z.end(), last_z_.begin(), last_z_.end())) return last_w_;
    }
    const Complex w = graph_value(F_, graph_, z, options_);
    std::lock_guard<std::mutex> lock(mutex_);
    last_z_.assign(z.begin(), z.end());
    last_w_ = w;
    valid_ = true;
    return w;
  }

 private:
  SchurMap F_;
  GraphFunction graph_;
  GraphOptions options_;
  std::mutex mutex_;
  std::vector<Complex> last_z_;
  Complex last_w_;
  bool valid_ = false;
};

struct GraphEntry {
  int coord;
  bool constant;
  Complex value;
};

using Embedding = std::function<std::vector<Complex>(std::span<const Complex>)>;

// Normal form of a retraction in its own coordinate labels.
struct Partial {
  std::vector<int> free;
  std::vector<NormalForm::Duplicate> duplicates;
  std::vector<GraphEntry> graphs;
  Embedding embed;
};

int lift_index(int i, int removed) { return i < removed ? i : i + 1; }

Partial lift(Partial inner, int removed, GraphEntry entry, Embedding embed) {
  Partial out;
  for (int f : inner.free) out.free.push_back(lift_index(f, removed));
  for (auto d : inner.duplicates) {
    d.coord = lift_index(d.coord, removed);
    d.source = lift_index(d.source, removed);
    out.duplicates.push_back(d);
  }
  for (auto g : inner.graphs) {
    g.coord = lift_index(g.coord, removed);
    out.graphs.push_back(g);
  }
  out.graphs.push_back(entry);
  out.embed = std::move(embed);
  return out;
}

Partial normalize(const RetractMap& rho, const NormalFormOptions& opt) {
  const auto classes = scan_automorphism_components(rho, opt.scan);
  const int n = rho.n;

  for (int j = 0; j < n; ++j) {
    if (classes[static_cast<std::size_t>(j)].kind != ComponentKind::Constant) continue;
    const Complex c = classes[static_cast<std::size_t>(j)].constant;
    if (n == 1) {
      Partial p;
      p.graphs.push_back({0, true, c});
      p.embed = [c](std::span<const Complex>) { return std::vector<Complex>{c}; };
      return p;
    }
    std::vector<AnalyticMap> rest;
    for (int i = 0; i < n; ++i) {
      if (i != j) rest.push_back(restrict_constant(rho.components[static_cast<std::size_t>(i)], j, c));
    }
    Partial inner = normalize(RetractMap(n - 1, std::move(rest)), opt);
    Embedding inner_embed = inner.embed;
    return lift(std::move(inner), j, {j, true, c},
                [inner_embed, j, c](std::span<const Complex> u) { return insert_at(inner_embed(u), j, c); });
  }

  const auto target = std::find_if(classes.begin(), classes.end(),
                                   [](const ComponentClass& k) { return k.kind == ComponentKind::NotAutomorphism; });
  if (target == classes.end()) {
    Partial p;
    for (int j = 0; j < n; ++j) {
      const auto& k = classes[static_cast<std::size_t>(j)];
      if (k.kind == ComponentKind::IdentityCoordinate) p.free.push_back(j);
      if (k.kind == ComponentKind::AutomorphismOfOther) p.duplicates.push_back({j, k.source, k.phi});
    }
    const auto free = p.free;
    const auto dups = p.duplicates;
    p.embed = [n, free, dups](std::span<const Complex> u) {
      std::vector<Complex> x(static_cast<std::size_t>(n));
      for (std::size_t t = 0; t < free.size(); ++t) x[static_cast<std::size_t>(free[t])] = u[t];
      for (const auto& d : dups) x[static_cast<std::size_t>(d.coord)] = d.phi(x[static_cast<std::size_t>(d.source)]);
      return x;
    };
    return p;
  }

  const int j = static_cast<int>(target - classes.begin());
  if (n == 1) {
    throw InconsistencyError("a one-variable retraction must be constant or the identity");
  }
  ReductionResult red = reduce_dimension(rho, j, opt.reduce);
  if (!red.graph.certified(opt.reduce.graph)) {
    std::ostringstream msg;
    msg << "fixed-point graph for coordinate " << j + 1 << " is not certified (coverage " << red.graph.coverage()
        << ", max residual " << red.graph.max_residual() << ")";
    throw ConvergenceError(msg.str());
  }
  Partial inner = normalize(red.reduced, opt);
  Embedding inner_embed = inner.embed;
  auto f = red.f;
  return lift(std::move(inner), j, {j, false, {}}, [inner_embed, f, j](std::span<const Complex> u) {
    const auto z = inner_embed(u);
    return insert_at(z, j, f(z));
  });
}

}  // namespace

RetractMap::RetractMap(int n_, std::vector<AnalyticMap> components_) : n(n_), components(std::move(components_)) {
  if (n < 1) throw InvalidArgument("retraction needs at least one coordinate");
  if (static_cast<int>(components.size()) != n) throw InvalidArgument("retraction needs exactly n components");
  for (const auto& c : components) {
    if (c.dimension() != n) throw InvalidArgument("every component must take n arguments");
  }
}

std::vector<Complex> RetractMap::apply(std::span<const Complex> z) const {
  if (static_cast<int>(z.size()) != n) throw InvalidArgument("point has the wrong dimension");
  std::vector<Complex> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c(z));
  return out;
}

std::string to_string(ComponentKind k) {
  switch (k) {
    case ComponentKind::IdentityCoordinate: return "IdentityCoordinate";
    case ComponentKind::AutomorphismOfOther: return "AutomorphismOfOther";
    case ComponentKind::NotAutomorphism: return "NotAutomorphism";
    case ComponentKind::Constant: return "Constant";
  }
  return "NotAutomorphism";
}

IdempotenceReport verify_idempotent(const RetractMap& rho, int samples, std::uint64_t seed, double tol,
                                    double radius) {
  if (samples <= 0) throw InvalidArgument("idempotence check needs a positive sample count");
  std::mt19937_64 rng(seed);
  IdempotenceReport report;
  report.samples = samples;
  bool escaped = false;
  for (int s = 0; s < samples; ++s) {
    const auto z = sample_point(rng, rho.n, radius);
    double defect = std::numeric_limits<double>::infinity();
    try {
      const auto y = rho(z);
      double mod = 0.0;
      for (const auto& v : y) mod = std::max(mod, std::abs(v));
      report.max_modulus = std::max(report.max_modulus, mod);
      if (mod < 1.0) {
        const auto yy = rho(y);
        defect = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) defect = std::max(defect, std::abs(yy[i] - y[i]));
      } else {
        escaped = true;
      }
    } catch (const DomainError&) {
      escaped = true;
    }
    if (!(defect <= report.max_defect)) {
      report.max_defect = defect;
      report.witness = z;
    }
  }
  report.passed = !escaped && report.max_defect <= tol;
  return report;
}

std::vector<ComponentClass> scan_automorphism_components(const RetractMap& rho, const ScanOptions& options) {
  const int n = rho.n;
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<Complex>> points;
  for (int s = 0; s < options.samples; ++s) points.push_back(sample_point(rng, n, options.radius));

  std::vector<ComponentClass> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const AnalyticMap& c = rho.components[static_cast<std::size_t>(j)];
    ComponentClass& cls = out[static_cast<std::size_t>(j)];

    std::vector<Complex> values;
    Complex mean{};
    double identity_gap = 0.0;
    for (const auto& z : points) {
      values.push_back(c(z));
      mean += values.back();
      identity_gap = std::max(identity_gap, std::abs(values.back() - z[static_cast<std::size_t>(j)]));
    }
    mean /= static_cast<double>(values.size());
    double variance = 0.0;
    for (const auto& v : values) variance += std::norm(v - mean);
    variance /= static_cast<double>(values.size());

    if (variance < options.constant_variance) {
      cls.kind = ComponentKind::Constant;
      cls.constant = c(std::vector<Complex>(static_cast<std::size_t>(n), 0.0));
      continue;
    }
    if (identity_gap <= options.tol) {
      cls.kind = ComponentKind::IdentityCoordinate;
      continue;
    }
    for (int i = 0; i < n && cls.kind == ComponentKind::NotAutomorphism; ++i) {
      const std::vector<Complex> base(static_cast<std::size_t>(n), 0.0);
      MoebiusFitOptions fit;
      fit.tol = options.tol;
      fit.seed = options.seed + static_cast<std::uint64_t>(i);
      const auto phi = fit_moebius(
          [&](Complex w) {
            auto x = base;
            x[static_cast<std::size_t>(i)] = w;
            return c(x);
          },
          fit);
      if (!phi) continue;
      // An automorphic slice at one point forces rho_j = phi(z_i) everywhere.
      for (const auto& z : points) {
        if (std::abs(c(z) - (*phi)(z[static_cast<std::size_t>(i)])) > options.tol) {
          std::ostringstream msg;
          msg << "component " << j + 1 << " is an automorphism of z" << i + 1
              << " on one slice but depends on other coordinates; not a retraction";
          throw InconsistencyError(msg.str());
        }
      }
      if (i == j) {
        std::ostringstream msg;
        msg << "component " << j + 1 << " is a non-identity automorphism of its own coordinate; not a retraction";
        throw InconsistencyError(msg.str());
      }
      cls.kind = ComponentKind::AutomorphismOfOther;
      cls.source = i;
      cls.phi = *phi;
    }
  }
  for (int j = 0; j < n; ++j) {
    const auto& cls = out[static_cast<std::size_t>(j)];
    if (cls.kind == ComponentKind::AutomorphismOfOther &&
        out[static_cast<std::size_t>(cls.source)].kind != ComponentKind::IdentityCoordinate) {
      std::ostringstream msg;
      msg << "component " << j + 1 << " copies z" << cls.source + 1 << " but component " << cls.source + 1
          << " is not the identity coordinate; not a retraction";
      throw InconsistencyError(msg.str());
    }
  }
  return out;
}

int capped_grid(int requested, int k) {
  if (k <= 0) return 1;
  int cap = static_cast<int>(std::floor(std::pow(4096.0, 1.0 / k) + 1e-9));
  return std::max(1, std::min(requested, cap));
}

ReductionResult reduce_dimension(const RetractMap& rho, int coordinate, const ReduceOptions& options) {
  const int n = rho.n;
  if (coordinate < 0 || coordinate >= n) throw InvalidArgument("coordinate out of range");
  if (n < 2) throw InvalidArgument("dimension reduction needs at least two coordinates");
  const int j = coordinate;
  const SchurMap F = fixed_point_map(rho.components[static_cast<std::size_t>(j)], j);

  // rho(0) lies on the range, so it is a fixed point of F.
  const auto x0 = rho(std::vector<Complex>(static_cast<std::size_t>(n), 0.0));
  const auto z0 = remove_at(x0, j);
  std::vector<Complex> seeds{x0[static_cast<std::size_t>(j)]};
  for (const auto& s : default_seeds()) seeds.push_back(s);
  const auto records = find_fixed_w(F, z0, seeds, options.graph.newton);
  if (records.empty()) throw ConvergenceError("no fixed point found over rho(0)");
  const auto& seed = records.front();
  if (seed.classification != FixedPointClass::Interior) {
    throw InconsistencyError("the reduction component is an automorphism in its own variable");
  }

  double reach = 0.0;
  for (const auto& z : z0) reach = std::max(reach, std::abs(z));
  const double local_radius = std::min(0.05, 0.5 * (1.0 - reach));
  const GraphFunction local = local_graph(F, seed, local_radius, 3, options.graph);

  ReductionResult out;
  out.coordinate = j;
  out.graph = continue_graph(F, local, options.radius, capped_grid(options.grid, n - 1), options.graph);
  auto evaluator = std::make_shared<GraphEvaluator>(F, out.graph, options.graph);
  out.f = [evaluator](std::span<const Complex> z) { return (*evaluator)(z); };

  std::vector<AnalyticMap> comps;
  for (int i = 0; i < n; ++i) {
    if (i == j) continue;
    const AnalyticMap c = rho.components[static_cast<std::size_t>(i)];
    comps.push_back(AnalyticMap::callable(n - 1, [c, evaluator, j](std::span<const Complex> z) {
      return c(insert_at(z, j, (*evaluator)(z)));
    }));
  }
  out.reduced = RetractMap(n - 1, std::move(comps));
  out.reduced_check = verify_idempotent(out.reduced, options.check_samples, options.seed, options.tol);
  if (!out.reduced_check.passed) {
    std::ostringstream msg;
    msg << "reduced map is not idempotent (defect " << out.reduced_check.max_defect << ")";
    throw InconsistencyError(msg.str());
  }
  return out;
}

double NormalForm::max_graph_residual() const {
  double worst = 0.0;
  for (const auto& g : graphs) worst = std::max(worst, g.samples.max_residual());
  return worst;
}

NormalForm normal_form(const RetractMap& rho, const NormalFormOptions& options) {
  const IdempotenceReport check =
      verify_idempotent(rho, options.idempotence_samples, options.seed, options.idempotence_tol);
  if (!check.passed) {
    std::ostringstream msg;
    msg << "map is not idempotent: max ||rho(rho(z)) - rho(z)|| = " << check.max_defect;
    throw NotRetractionError(msg.str());
  }
  Partial p = normalize(rho, options);

  // A graph coordinate that turns out to copy a free coordinate through an
  // automorphism belongs with the duplicates.
  std::mt19937_64 rng(options.seed + 7);
  const int k = static_cast<int>(p.free.size());
  std::vector<GraphEntry> remaining;
  for (const auto& g : p.graphs) {
    bool moved = false;
    for (int t = 0; t < k && !g.constant && !moved; ++t) {
      MoebiusFitOptions fit;
      fit.tol = options.scan.tol;
      fit.seed = options.seed;
      const auto phi = fit_moebius(
          [&](Complex w) {
            std::vector<Complex> u(static_cast<std::size_t>(k), 0.0);
            u[static_cast<std::size_t>(t)] = w;
            return p.embed(u)[static_cast<std::size_t>(g.coord)];
          },
          fit);
      if (!phi) continue;
      bool everywhere = true;
      for (int s = 0; s < 10 && everywhere; ++s) {
        const auto u = sample_point(rng, k, options.radius);
        everywhere = std::abs(p.embed(u)[static_cast<std::size_t>(g.coord)] - (*phi)(u[static_cast<std::size_t>(t)])) <=
                     options.scan.tol * 10.0;
      }
      if (everywhere) {
        p.duplicates.push_back({g.coord, p.free[static_cast<std::size_t>(t)], *phi});
        moved = true;
      }
    }
    if (!moved) remaining.push_back(g);
  }
  p.graphs = std::move(remaining);

  NormalForm form;
  form.n = rho.n;
  form.k = k;
  form.free = p.free;
  std::sort(form.free.begin(), form.free.end());
  std::sort(p.duplicates.begin(), p.duplicates.end(), [](const auto& a, const auto& b) { return a.coord < b.coord; });
  std::sort(p.graphs.begin(), p.graphs.end(), [](const auto& a, const auto& b) { return a.coord < b.coord; });
  form.duplicates = p.duplicates;
  form.embedding = p.embed;
  form.permutation = form.free;
  for (const auto& d : form.duplicates) form.permutation.push_back(d.coord);
  for (const auto& g : p.graphs) form.permutation.push_back(g.coord);
  form.conjugation.assign(static_cast<std::size_t>(rho.n), MoebiusAutomorphism::identity());
  for (const auto& d : form.duplicates) form.conjugation[static_cast<std::size_t>(d.coord)] = d.phi.inverse();

  // Sample every graph coordinate on one grid over the free coordinates; the
  // residual at a node is how far the reconstructed point is from being fixed by rho.
  const int per_axis = capped_grid(options.grid, k);
  GraphGrid grid = k > 0 ? GraphGrid::sunflower(k, per_axis, options.radius) : GraphGrid{};
  if (k == 0) grid.per_axis = 1;
  const std::size_t nodes = grid.size();
  std::vector<std::vector<Complex>> points(nodes);
  std::vector<double> residuals(nodes);
  parallel_for(nodes, [&](std::size_t i) {
    const auto u = grid.node(i);
    points[i] = form.embed(u);
    const auto image = rho(points[i]);
    double r = 0.0;
    for (std::size_t c = 0; c < image.size(); ++c) r = std::max(r, std::abs(image[c] - points[i][c]));
    residuals[i] = r;
  });
  for (const auto& g : p.graphs) {
    NormalForm::Graph entry;
    entry.coord = g.coord;
    entry.constant = g.constant;
    entry.value = g.value;
    entry.samples.grid = grid;
    entry.samples.residuals = residuals;
    for (std::size_t i = 0; i < nodes; ++i) entry.samples.values.push_back(points[i][static_cast<std::size_t>(g.coord)]);
    form.graphs.push_back(std::move(entry));
  }
  return form;
}

std::vector<Complex> conjugated_apply(const RetractMap& rho, const NormalForm& form, std::span<const Complex> x) {
  if (static_cast<int>(x.size()) != form.n) throw InvalidArgument("point has the wrong dimension");
  // Psi^-1: undo the permutation, then invert each coordinate conjugation.
  std::vector<Complex> z(x.size());
  for (std::size_t pos = 0; pos < x.size(); ++pos) {
    const auto coord = static_cast<std::size_t>(form.permutation[pos]);
    z[coord] = form.conjugation[coord].inverse()(x[pos]);
  }
  const auto y = rho(z);
  std::vector<Complex> out(x.size());
  for (std::size_t pos = 0; pos < x.size(); ++pos) {
    const auto coord = static_cast<std::size_t>(form.permutation[pos]);
    out[pos] = form.conjugation[coord](y[coord]);
  }
  return out;
}

double range_defect(const RetractMap& rho, const NormalForm& form, int samples, std::uint64_t seed, double radius) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto z = sample_point(rng, rho.n, radius);
    const auto x = rho(z);
    std::vector<Complex> u;
    for (int f : form.free) u.push_back(x[static_cast<std::size_t>(f)]);
    const auto back = form.embed(u);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(back[i] - x[i]));
  }
  return worst;
}

}  // namespace aglerkit
