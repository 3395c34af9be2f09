#include "aglerkit/fixedgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "aglerkit/errors.hpp"
#include "aglerkit/parallel.hpp"
#include "aglerkit/pick.hpp"
#include "aglerkit/sampling.hpp"

namespace aglerkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kSliceDerivativeFloor = 1e-8;
constexpr double kDichotomySlack = 1e-8;
constexpr double kBoundaryMargin = 1e-9;

std::string describe(std::span<const Complex> z, Complex w) {
  std::ostringstream s;
  s << "z = (";
  for (std::size_t i = 0; i < z.size(); ++i) s << (i ? ", " : "") << z[i];
  s << "), w = " << w;
  return s.str();
}

struct NewtonResult {
  bool ok = false;
  Complex w;
  double residual = std::numeric_limits<double>::infinity();
};

Complex clamp_to_disk(Complex w) {
  const double r = std::abs(w);
  return r < 1.0 - 1e-9 ? w : w * ((1.0 - 1e-9) / r);
}

// Newton on w -> F(z,w) - w. The step is halved while it would leave the disk.
NewtonResult newton(const SchurMap& F, std::span<const Complex> z, Complex w, const NewtonOptions& opt,
                    bool throw_on_degenerate) {
  NewtonResult res;
  w = clamp_to_disk(w);
  for (int it = 0; it <= opt.max_iter; ++it) {
    const Complex r = F(z, w) - w;
    res.w = w;
    res.residual = std::abs(r);
    if (!std::isfinite(res.residual)) return res;
    if (res.residual <= opt.tol) {
      res.ok = true;
      return res;
    }
    if (it == opt.max_iter) break;
    const Complex d = F.dw(z, w) - 1.0;
    if (std::abs(d) < opt.degenerate_tol) {
      if (throw_on_degenerate) {
        throw DegenerateContinuation("dF/dw equals 1 during continuation at " + describe(z, w));
      }
      return res;
    }
    Complex next = w - r / d;
    for (int h = 0; h < 60 && !(std::abs(next) < 1.0); ++h) next = w + 0.5 * (next - w);
    if (!(std::abs(next) < 1.0)) return res;
    w = next;
  }
  return res;
}

struct LegCounters {
  std::size_t steps = 0;
  std::size_t halvings = 0;
};

class Continuer {
 public:
  Continuer(const SchurMap& F, const GraphOptions& opt) : F_(F), opt_(opt) {}

  Complex slope(std::span<const Complex> z, Complex w, int axis) const {
    const Complex d = 1.0 - F_.dw(z, w);
    if (std::abs(d) < opt_.newton.degenerate_tol) {
      throw DegenerateContinuation("dF/dw equals 1 during continuation at " + describe(z, w));
    }
    return F_.dz(axis, z, w) / d;
  }

  // Moves coordinate `axis` of z to t, carrying the fixed point w along.
  std::optional<Complex> leg(std::vector<Complex>& z, Complex w, int axis, Complex t, LegCounters& c) const {
    const auto a = static_cast<std::size_t>(axis);
    const Complex start = z[a];
    const double length = std::abs(t - start);
    const int steps = std::max(1, static_cast<int>(std::ceil(length / opt_.step)));
    for (int k = 1; k <= steps; ++k) {
      const Complex target = start + (t - start) * (static_cast<double>(k) / steps);
      auto next = substep(z, w, axis, target, 0, c);
      if (!next) return std::nullopt;
      w = *next;
      ++c.steps;
    }
    z[a] = t;
    return w;
  }

 private:
  std::optional<Complex> substep(std::vector<Complex>& z, Complex w, int axis, Complex target, int depth,
                                 LegCounters& c) const {
    const auto a = static_cast<std::size_t>(axis);
    const Complex from = z[a];
    const Complex predicted = w + slope(z, w, axis) * (target - from);
    z[a] = target;
    const NewtonResult r = newton(F_, z, predicted, opt_.newton, true);
    if (r.ok) return r.w;
    z[a] = from;
    if (depth >= opt_.max_halvings) return std::nullopt;
    ++c.halvings;
    const Complex mid = from + 0.5 * (target - from);
    auto half = substep(z, w, axis, mid, depth + 1, c);
    if (!half) return std::nullopt;
    return substep(z, *half, axis, target, depth + 1, c);
  }

  const SchurMap& F_;
  const GraphOptions& opt_;
};

struct FrontPoint {
  std::vector<Complex> z;
  Complex w;
  bool ok = false;
};

double slice_min_eigenvalue(const std::vector<Complex>& nodes, const std::vector<Complex>& values, int max_nodes,
                            int& used) {
  const std::size_t count = nodes.size();
  used = 0;
  if (count == 0) return kNaN;
  const std::size_t m = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(max_nodes, 1)));
  PickProblem problem;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t idx = m == 1 ? 0 : (j * (count - 1) + (m - 1) / 2) / (m - 1);
    problem.nodes.push_back(nodes[idx]);
    problem.targets.push_back(values[idx]);
  }
  used = static_cast<int>(m);
  return min_eigenvalue(pick_matrix(problem));
}

GraphFunction build_graph(const SchurMap& F, const FixedPointRecord& seed, GraphGrid grid,
                          const GraphOptions& opt) {
  const Continuer cont(F, opt);
  const int n = F.n();
  const std::size_t K = static_cast<std::size_t>(grid.per_axis);

  GraphFunction g;
  g.seed = seed;
  std::vector<FrontPoint> front{{seed.z, seed.w, true}};

  for (int axis = 0; axis < n; ++axis) {
    const auto a = static_cast<std::size_t>(axis);
    const auto& axis_nodes = grid.axes[a];
    std::vector<FrontPoint> next(front.size() * K);
    std::vector<SliceCheck> checks(front.size());
    std::vector<LegCounters> counters(front.size());
    parallel_for(front.size(), [&](std::size_t p) {
      const FrontPoint& base = front[p];
      SliceCheck& check = checks[p];
      check.axis = axis;
      if (!base.ok) {
        check.min_eigenvalue = kNaN;
        return;
      }
      std::vector<Complex> anchor = base.z;
      Complex w = base.w;
      // A flat slice at the anchor is nudged off in a seeded direction.
      std::mt19937_64 rng(opt.seed ^ (0x9E3779B97F4A7C15ULL * (a + 1) + p));
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      while (std::abs(cont.slope(anchor, w, axis)) < kSliceDerivativeFloor) {
        if (check.anchor_perturbations >= opt.max_perturbations) {
          check.derivative_degenerate = true;
          break;
        }
        Complex shift = std::polar(opt.anchor_offset, angle(rng));
        if (std::abs(anchor[a] + shift) >= 1.0) shift = -shift;
        std::vector<Complex> moved = anchor;
        auto w_moved = cont.leg(moved, w, axis, anchor[a] + shift, counters[p]);
        if (!w_moved) break;
        anchor = std::move(moved);
        w = *w_moved;
        ++check.anchor_perturbations;
      }
      check.anchor = anchor;
      std::vector<Complex> slice_nodes, slice_values;
      for (std::size_t k = 0; k < K; ++k) {
        std::vector<Complex> z = anchor;
        auto value = cont.leg(z, w, axis, axis_nodes[k], counters[p]);
        FrontPoint& out = next[p * K + k];
        out.z = z;
        if (value) {
          out.w = *value;
          out.ok = true;
          slice_nodes.push_back(axis_nodes[k]);
          slice_values.push_back(*value);
        }
      }
      check.min_eigenvalue = slice_min_eigenvalue(slice_nodes, slice_values, opt.pick_nodes, check.nodes);
    });
    for (std::size_t p = 0; p < front.size(); ++p) {
      g.path.legs += K + static_cast<std::size_t>(checks[p].anchor_perturbations);
      g.path.steps += counters[p].steps;
      g.path.halvings += counters[p].halvings;
      g.slices.push_back(std::move(checks[p]));
    }
    g.path.axis_order.push_back(axis);
    front = std::move(next);
  }

  const std::size_t total = grid.size();
  g.values.assign(total, Complex(kNaN, kNaN));
  g.residuals.assign(total, std::numeric_limits<double>::infinity());
  g.w_derivatives.assign(total, Complex(kNaN, kNaN));
  for (std::size_t i = 0; i < total; ++i) {
    if (!front[i].ok) continue;
    const auto z = grid.node(i);
    g.values[i] = front[i].w;
    g.residuals[i] = std::abs(F(z, front[i].w) - front[i].w);
    g.w_derivatives[i] = F.dw(z, front[i].w);
  }
  g.grid = std::move(grid);
  return g;
}

}  // namespace

SchurMap::SchurMap(int n, AnalyticMap map) : n_(n), map_(std::move(map)) {
  if (n < 1) throw InvalidArgument("Schur map needs at least one z coordinate");
  if (map_.dimension() != n + 1) throw InvalidArgument("Schur map must take n + 1 arguments");
}

std::vector<Complex> SchurMap::joined(std::span<const Complex> z, Complex w) const {
  if (static_cast<int>(z.size()) != n_) throw InvalidArgument("point has the wrong number of z coordinates");
  std::vector<Complex> x(z.begin(), z.end());
  x.push_back(w);
  return x;
}

Complex SchurMap::operator()(std::span<const Complex> z, Complex w) const { return map_(joined(z, w)); }
Complex SchurMap::dw(std::span<const Complex> z, Complex w) const { return map_.partial(n_, joined(z, w)); }
Complex SchurMap::dz(int i, std::span<const Complex> z, Complex w) const {
  if (i < 0 || i >= n_) throw InvalidArgument("z index out of range");
  return map_.partial(i, joined(z, w));
}

std::string to_string(FixedPointClass c) {
  return c == FixedPointClass::Interior ? "Interior" : "AutomorphismCase";
}

std::string to_string(GraphCase c) {
  switch (c) {
    case GraphCase::Identity: return "Identity";
    case GraphCase::UniqueGraph: return "UniqueGraph";
    case GraphCase::NoFixedPoints: return "NoFixedPoints";
  }
  return "NoFixedPoints";
}

std::vector<Complex> default_seeds() {
  std::vector<Complex> seeds{0.0};
  for (int k = 0; k < 6; ++k) seeds.push_back(std::polar(0.5, k * std::numbers::pi / 3.0));
  for (int k = 0; k < 8; ++k) seeds.push_back(std::polar(0.9, (k + 0.5) * std::numbers::pi / 4.0));
  return seeds;
}

std::vector<FixedPointRecord> find_fixed_w(const SchurMap& F, std::span<const Complex> z,
                                           std::span<const Complex> seeds, const NewtonOptions& options) {
  for (const auto& zi : z) {
    if (!(std::abs(zi) < 1.0)) throw InvalidArgument("fixed points are sought over the open polydisk only");
  }
  std::vector<FixedPointRecord> out;
  for (const Complex s : seeds) {
    const NewtonResult r = newton(F, z, s, options, false);
    // Iterates can creep toward a boundary fixed point; those are not in the disk.
    if (!r.ok || !(std::abs(r.w) < 1.0 - kBoundaryMargin)) continue;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const FixedPointRecord& rec) { return std::abs(rec.w - r.w) <= options.dedupe; });
    if (seen) continue;
    FixedPointRecord rec;
    rec.z.assign(z.begin(), z.end());
    rec.w = r.w;
    rec.residual = r.residual;
    rec.w_derivative = F.dw(z, r.w);
    const double mod = std::abs(rec.w_derivative);
    if (mod > 1.0 + kDichotomySlack) {
      throw InconsistencyError("fixed point with |dF/dw| = " + std::to_string(mod) +
                               " > 1; the map is not a Schur function at " + describe(z, r.w));
    }
    rec.classification = mod >= 1.0 - options.automorphism_tol ? FixedPointClass::AutomorphismCase
                                                               : FixedPointClass::Interior;
    out.push_back(std::move(rec));
  }
  return out;
}

std::optional<MoebiusAutomorphism> detect_w_automorphism(const SchurMap& F, std::span<const Complex> z0, double tol,
                                                         std::uint64_t seed) {
  const std::vector<Complex> base(z0.begin(), z0.end());
  MoebiusFitOptions fit;
  fit.tol = tol;
  fit.seed = seed;
  const auto phi = fit_moebius([&](Complex w) { return F(base, w); }, fit);
  if (!phi) return std::nullopt;
  std::mt19937_64 rng(seed + 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<Complex> z(base.size());
    for (auto& zi : z) zi = sample_disk(rng, 0.9);
    for (int j = 0; j < 5; ++j) {
      const Complex w = sample_disk(rng, 0.9);
      if (std::abs(F(z, w) - (*phi)(w)) > tol) {
        throw InconsistencyError("slice is a disk automorphism at one point but not at " + describe(z, w) +
                                 "; the map cannot be a Schur function");
      }
    }
  }
  return phi;
}

std::vector<Complex> sunflower_nodes(int count, double radius, Complex center) {
  if (count < 1) throw InvalidArgument("sunflower grid needs at least one node");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Complex> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double r = count == 1 ? 0.0 : radius * std::sqrt(static_cast<double>(k) / (count - 1));
    nodes.push_back(center + std::polar(r, golden * k));
  }
  return nodes;
}

GraphGrid GraphGrid::sunflower(int n, int per_axis, double radius, std::vector<Complex> center) {
  if (center.empty()) center.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(center.size()) != n) throw InvalidArgument("grid center has the wrong dimension");
  if (!(radius >= 0.0)) throw InvalidArgument("grid radius must be nonnegative");
  for (const auto& c : center) {
    if (!(std::abs(c) + radius < 1.0)) throw InvalidArgument("grid does not fit inside the open polydisk");
  }
  GraphGrid g;
  g.n = n;
  g.per_axis = per_axis;
  g.radius = radius;
  g.center = center;
  for (int i = 0; i < n; ++i) g.axes.push_back(sunflower_nodes(per_axis, radius, center[static_cast<std::size_t>(i)]));
  return g;
}

std::size_t GraphGrid::size() const {
  std::size_t s = 1;
  for (int i = 0; i < n; ++i) s *= static_cast<std::size_t>(per_axis);
  return s;
}

std::vector<Complex> GraphGrid::node(std::size_t flat) const {
  std::vector<Complex> z(static_cast<std::size_t>(n));
  const auto K = static_cast<std::size_t>(per_axis);
  for (int i = n - 1; i >= 0; --i) {
    z[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)][flat % K];
    flat /= K;
  }
  return z;
}

double GraphFunction::coverage() const {
  if (values.empty()) return 0.0;
  const auto solved = std::count_if(residuals.begin(), residuals.end(), [](double r) { return std::isfinite(r); });
  return static_cast<double>(solved) / static_cast<double>(values.size());
}

double GraphFunction::max_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

double GraphFunction::min_slice_eigenvalue() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : slices) {
    if (s.nodes > 0) best = std::min(best, s.min_eigenvalue);
  }
  return best;
}

double GraphFunction::max_w_derivative() const {
  double worst = std::abs(seed.w_derivative);
  for (const auto& d : w_derivatives) {
    if (std::isfinite(d.real())) worst = std::max(worst, std::abs(d));
  }
  return worst;
}

bool GraphFunction::certified(const GraphOptions& options) const {
  if (!complete() || max_residual() > options.tol) return false;
  for (const auto& v : values) {
    if (!(std::abs(v) < 1.0)) return false;
  }
  return min_slice_eigenvalue() >= -options.pick_tol && max_w_derivative() <= 1.0 + kDichotomySlack;
}

GraphFunction local_graph(const SchurMap& F, const FixedPointRecord& record, double radius, int per_axis,
                          const GraphOptions& options) {
  if (record.classification != FixedPointClass::Interior) {
    throw InvalidArgument("a local graph needs an interior fixed point (|dF/dw| < 1)");
  }
  if (static_cast<int>(record.z.size()) != F.n()) throw InvalidArgument("fixed point has the wrong dimension");
  return build_graph(F, record, GraphGrid::sunflower(F.n(), per_axis, radius, record.z), options);
}

GraphFunction continue_graph(const SchurMap& F, const GraphFunction& local, double target_radius, int per_axis,
                             const GraphOptions& options) {
  if (!(target_radius > 0.0 && target_radius <= 0.95)) throw InvalidArgument("target radius must lie in (0, 0.95]");
  if (detect_w_automorphism(F, local.seed.z, options.newton.tol * 1e4, options.seed)) {
    throw InvalidArgument("F is an automorphism in w; its fixed set is not a graph to continue");
  }
  return build_graph(F, local.seed, GraphGrid::sunflower(F.n(), per_axis, target_radius), options);
}

Complex graph_value(const SchurMap& F, const GraphFunction& graph, std::span<const Complex> z,
                    const GraphOptions& options) {
  if (static_cast<int>(z.size()) != F.n()) throw InvalidArgument("point has the wrong dimension");
  std::size_t best = graph.values.size();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < graph.values.size(); ++i) {
    if (!std::isfinite(graph.residuals[i])) continue;
    const auto node = graph.grid.node(i);
    double d = 0.0;
    for (std::size_t k = 0; k < node.size(); ++k) d = std::max(d, std::abs(node[k] - z[k]));
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  if (best == graph.values.size()) throw ConvergenceError("graph has no solved node to continue from");
  const Continuer cont(F, options);
  std::vector<Complex> at = graph.grid.node(best);
  Complex w = graph.values[best];
  LegCounters counters;
  for (int axis = 0; axis < F.n(); ++axis) {
    auto next = cont.leg(at, w, axis, z[static_cast<std::size_t>(axis)], counters);
    if (!next) throw ConvergenceError("continuation to the requested point failed at " + describe(at, w));
    w = *next;
  }
  return w;
}

UniquenessReport uniqueness_check(const SchurMap& F, const std::vector<FixedPointRecord>& records, double tol) {
  UniquenessReport report;
  if (records.empty()) return report;
  std::vector<bool> counted(records.size(), false);
  bool multiple = false;
  const FixedPointRecord* multiple_at = nullptr;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (counted[i]) continue;
    std::vector<Complex> ws{records[i].w};
    counted[i] = true;
    for (std::size_t j = i + 1; j < records.size(); ++j) {
      if (counted[j] || records[j].z.size() != records[i].z.size()) continue;
      bool same_z = true;
      for (std::size_t k = 0; k < records[i].z.size(); ++k) same_z &= std::abs(records[i].z[k] - records[j].z[k]) <= 1e-12;
      if (!same_z) continue;
      counted[j] = true;
      const bool dup = std::any_of(ws.begin(), ws.end(), [&](Complex w) { return std::abs(w - records[j].w) <= tol; });
      if (!dup) ws.push_back(records[j].w);
    }
    report.distinct_points += ws.size();
    if (ws.size() > 1 && !multiple) {
      multiple = true;
      multiple_at = &records[i];
    }
  }
  const FixedPointRecord* probe = multiple_at;
  if (!probe) {
    for (const auto& r : records) {
      if (r.classification == FixedPointClass::AutomorphismCase) {
        probe = &r;
        break;
      }
    }
  }
  if (probe) report.automorphism = detect_w_automorphism(F, probe->z, tol);
  const bool identity = report.automorphism && report.automorphism->is_identity(std::sqrt(tol));
  if (multiple && !identity) {
    throw InconsistencyError("two distinct fixed points over " + describe(multiple_at->z, multiple_at->w) +
                             " although F is not the identity in w");
  }
  report.kind = identity ? GraphCase::Identity : GraphCase::UniqueGraph;
  return report;
}

}  // namespace aglerkit
