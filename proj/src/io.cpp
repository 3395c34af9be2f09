#include "aglerkit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace aglerkit::io {

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double number_from(const Json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!j.is_number()) throw FormatError("expected a number");
  return j.get<double>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <typename F>
auto guarded(const char* what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string(what) + ": " + e.what());
  }
}

Json point_json(std::span<const Complex> z) {
  Json a = Json::array();
  for (const auto& c : z) a.push_back(to_json(c));
  return a;
}

Json polys_json(const std::vector<BivariatePolynomial>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(to_json(p));
  return a;
}

std::vector<BivariatePolynomial> polys_from(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array of polynomials");
  std::vector<BivariatePolynomial> out;
  for (const auto& e : j) out.push_back(polynomial_from_json(e));
  return out;
}

Json witness_json(const std::vector<Witness>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) {
    a.push_back({{"check", w.check},
                 {"z", point_json(std::vector<Complex>{w.z.z1, w.z.z2})},
                 {"zeta", point_json(std::vector<Complex>{w.zeta.z1, w.zeta.z2})},
                 {"value", number(w.value)}});
  }
  return a;
}

Json moebius_json(const MoebiusAutomorphism& m) { return {{"u", to_json(m.u)}, {"a", to_json(m.a)}}; }

}  // namespace

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open input file " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

std::string dump(const Json& document) { return document.dump(2) + "\n"; }

void write_file_atomic(const std::filesystem::path& path, const Json& document) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot write " + tmp.string());
    out << dump(document);
    if (!out) throw FileError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FileError("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

Json to_json(Complex c) { return Json::array({number(c.real()), number(c.imag())}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw FormatError("complex numbers are [re, im] pairs");
  return {number_from(j[0]), number_from(j[1])};
}

Json to_json(const BivariatePolynomial& p) {
  Json rows = Json::array();
  for (int a = 0; a <= p.n(); ++a) {
    Json row = Json::array();
    for (int b = 0; b <= p.m(); ++b) row.push_back(to_json(p.coeff(a, b)));
    rows.push_back(row);
  }
  return {{"bidegree", {p.n(), p.m()}}, {"coeffs", rows}};
}

BivariatePolynomial polynomial_from_json(const Json& j) {
  return guarded("polynomial", [&] {
    const Json& deg = field(j, "bidegree");
    const Json& rows = field(j, "coeffs");
    if (!deg.is_array() || deg.size() != 2) throw FormatError("bidegree must be [n, m]");
    const int n = deg[0].get<int>(), m = deg[1].get<int>();
    if (n < 0 || m < 0) throw FormatError("bidegree entries must be nonnegative");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n + 1)) {
      throw FormatError("coeffs must have n + 1 rows");
    }
    std::vector<std::vector<Complex>> c;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != static_cast<std::size_t>(m + 1)) {
        throw FormatError("each coeffs row must have m + 1 entries");
      }
      std::vector<Complex> r;
      for (const auto& e : row) r.push_back(complex_from_json(e));
      c.push_back(std::move(r));
    }
    return BivariatePolynomial(c);
  });
}

Json to_json(const HermitianMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.order(); ++i) {
    Json row = Json::array();
    for (std::size_t k = 0; k < m.order(); ++k) row.push_back(to_json(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

HermitianMatrix hermitian_from_json(const Json& j) {
  return guarded("matrix", [&] {
    if (!j.is_array()) throw FormatError("matrix must be an array of rows");
    const std::size_t n = j.size();
    std::vector<Complex> data;
    for (const auto& row : j) {
      if (!row.is_array() || row.size() != n) throw FormatError("matrix must be square");
      for (const auto& e : row) data.push_back(complex_from_json(e));
    }
    HermitianMatrix m(n, data);
    return m;
  });
}

Json to_json(const SosCertificate& cert) {
  const SymmetrizedVectors sym = symmetrize(cert);
  Json j;
  j["format"] = kFormat;
  j["kind"] = "certificate";
  j["p"] = to_json(cert.p);
  j["p_tilde"] = to_json(cert.p_tilde);
  j["G_A"] = to_json(cert.g_a);
  j["G_B"] = to_json(cert.g_b);
  j["A_polys"] = polys_json(cert.a_polys);
  j["B_polys"] = polys_json(cert.b_polys);
  j["residual"] = number(cert.residual);
  j["iterations"] = cert.iterations;
  j["seed"] = cert.seed;
  j["tolerance"] = number(cert.tolerance);
  j["symmetrized"] = {{"A", polys_json(sym.a)}, {"B", polys_json(sym.b)}};
  return j;
}

SosCertificate certificate_from_json(const Json& j) {
  return guarded("certificate", [&] {
    SosCertificate cert;
    cert.p = polynomial_from_json(field(j, "p"));
    cert.p_tilde = reflect(cert.p);
    cert.g_a = hermitian_from_json(field(j, "G_A"));
    cert.g_b = hermitian_from_json(field(j, "G_B"));
    cert.a_polys = polys_from(field(j, "A_polys"));
    cert.b_polys = polys_from(field(j, "B_polys"));
    cert.residual = number_from(field(j, "residual"));
    cert.iterations = j.value("iterations", 0L);
    cert.seed = j.value("seed", std::uint64_t{0});
    cert.tolerance = j.contains("tolerance") ? number_from(j.at("tolerance")) : 0.0;
    const GramConstraints c(cert.p);
    if (cert.g_a.order() != c.basis_a().size() || cert.g_b.order() != c.basis_b().size()) {
      throw FormatError("Gram matrix sizes do not match the bidegree of p");
    }
    return cert;
  });
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["format"] = kFormat;
  j["kind"] = "stability";
  j["verdict"] = to_string(r.verdict);
  j["witness"] = r.witness ? point_json(std::vector<Complex>{r.witness->z1, r.witness->z2}) : Json(nullptr);
  j["min_modulus"] = number(r.min_modulus);
  j["min_root_modulus"] = number(r.min_root_modulus);
  j["torus_grid"] = r.torus_grid;
  j["disk_grid"] = {r.disk_radial, r.disk_angular};
  j["tolerance"] = number(r.tolerance);
  return j;
}

Json to_json(const VerificationReport& r) {
  Json j;
  j["format"] = kFormat;
  j["kind"] = "verification";
  j["passed"] = r.passed;
  j["identity1_max"] = number(r.identity1_max);
  j["identity2_max"] = number(r.identity2_max);
  j["cs_max_violation"] = number(r.cs_max_violation);
  j["psd_min_eig"] = number(r.psd_min_eig);
  j["bound_margin"] = number(r.bound_margin);
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["tolerance"] = number(r.tolerance);
  j["witnesses"] = witness_json(r.witnesses);
  return j;
}

Json to_json(const BoundsReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["diagonal_margin"] = number(r.diagonal_margin);
  j["decomposition_margin"] = number(r.decomposition_margin);
  j["cs_max_violation"] = number(r.cs_max_violation);
  j["samples"] = r.samples;
  j["witnesses"] = witness_json(r.witnesses);
  return j;
}

PickProblem pick_problem_from_json(const Json& j) {
  return guarded("pick problem", [&] {
    PickProblem p;
    for (const auto& e : field(j, "nodes")) p.nodes.push_back(complex_from_json(e));
    for (const auto& e : field(j, "targets")) p.targets.push_back(complex_from_json(e));
    if (j.contains("tol")) p.tol = number_from(j.at("tol"));
    p.validate();
    return p;
  });
}

Json to_json(const PickProblem& p) {
  return {{"nodes", point_json(p.nodes)}, {"targets", point_json(p.targets)}, {"tol", number(p.tol)}};
}

Json to_json(const SchurInterpolant& f) {
  Json stages = Json::array();
  for (const auto& s : f.stages()) stages.push_back({{"node", to_json(s.node)}, {"value", to_json(s.value)}});
  return {{"degree", f.degree()}, {"stages", stages}, {"terminal", to_json(f.terminal())}};
}

Json to_json(const MultiPoly& p) {
  Json j = Json::object();
  for (const auto& [e, c] : p.terms()) {
    std::string key;
    for (std::size_t i = 0; i < e.size(); ++i) key += (i ? "," : "") + std::to_string(e[i]);
    j[key] = to_json(c);
  }
  return j;
}

MultiPoly multipoly_from_json(const Json& j, int vars) {
  return guarded("polynomial", [&] {
    if (!j.is_object()) throw FormatError("multivariate polynomial must be an object of exponent keys");
    MultiPoly p(vars);
    for (const auto& [key, value] : j.items()) {
      MultiPoly::Exponent e;
      std::stringstream ss(key);
      std::string part;
      while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        int k = 0;
        try {
          k = std::stoi(part, &used);
        } catch (const std::exception&) {
          throw FormatError("bad exponent key \"" + key + "\"");
        }
        if (used != part.size() || k < 0) throw FormatError("bad exponent key \"" + key + "\"");
        e.push_back(k);
      }
      if (static_cast<int>(e.size()) != vars) {
        throw FormatError("exponent key \"" + key + "\" needs " + std::to_string(vars) + " entries");
      }
      p.add_term(e, complex_from_json(value));
    }
    return p;
  });
}

Json to_json(const RationalFunction& r) {
  return {{"numerator", to_json(r.numerator)}, {"denominator", to_json(r.denominator)}};
}

RationalFunction rational_from_json(const Json& j, int vars) {
  return guarded("rational map", [&] {
    MultiPoly num = multipoly_from_json(field(j, "numerator"), vars);
    MultiPoly den = j.contains("denominator") ? multipoly_from_json(j.at("denominator"), vars)
                                              : MultiPoly::constant(vars, 1.0);
    return RationalFunction(std::move(num), std::move(den));
  });
}

SchurMap schur_map_from_json(const Json& j) {
  return guarded("Schur map", [&] {
    const int n = field(j, "n").get<int>();
    if (n < 1) throw FormatError("Schur map needs n >= 1");
    return SchurMap(n, AnalyticMap::rational(rational_from_json(j, n + 1)));
  });
}

RetractMap retract_map_from_json(const Json& j) {
  return guarded("retraction", [&] {
    const int n = field(j, "n").get<int>();
    if (n < 1) throw FormatError("retraction needs n >= 1");
    const Json& comps = field(j, "components");
    if (!comps.is_array() || comps.size() != static_cast<std::size_t>(n)) {
      throw FormatError("retraction needs exactly n components");
    }
    std::vector<AnalyticMap> maps;
    for (const auto& c : comps) maps.push_back(AnalyticMap::rational(rational_from_json(c, n)));
    return RetractMap(n, std::move(maps));
  });
}

Json to_json(const FixedPointRecord& r) {
  return {{"z", point_json(r.z)},
          {"w", to_json(r.w)},
          {"residual", number(r.residual)},
          {"w_derivative", to_json(r.w_derivative)},
          {"classification", to_string(r.classification)}};
}

Json to_json(const GraphFunction& g) {
  Json axes = Json::array();
  for (const auto& a : g.grid.axes) axes.push_back(point_json(a));
  Json values = Json::array(), residuals = Json::array();
  for (const auto& v : g.values) values.push_back(to_json(v));
  for (double r : g.residuals) residuals.push_back(number(r));
  Json slices = Json::array();
  for (const auto& s : g.slices) {
    slices.push_back({{"axis", s.axis},
                      {"anchor", point_json(s.anchor)},
                      {"nodes", s.nodes},
                      {"min_eigenvalue", number(s.min_eigenvalue)},
                      {"anchor_perturbations", s.anchor_perturbations},
                      {"derivative_degenerate", s.derivative_degenerate}});
  }
  Json j;
  j["grid"] = {{"n", g.grid.n},
               {"per_axis", g.grid.per_axis},
               {"radius", number(g.grid.radius)},
               {"center", point_json(g.grid.center)},
               {"axes", axes},
               {"order", "axis 0 most significant"}};
  j["values"] = values;
  j["residuals"] = residuals;
  j["path"] = {{"seed", to_json(g.seed)},
               {"axis_order", g.path.axis_order},
               {"legs", g.path.legs},
               {"steps", g.path.steps},
               {"halvings", g.path.halvings},
               {"slices", slices}};
  j["coverage"] = number(g.coverage());
  j["max_residual"] = number(g.max_residual());
  return j;
}

Json to_json(const NormalForm& f) {
  Json j;
  j["format"] = kFormat;
  j["kind"] = "normal_form";
  j["n"] = f.n;
  j["k"] = f.k;
  Json free = Json::array();
  for (int c : f.free) free.push_back(c + 1);
  j["free"] = free;
  Json dups = Json::array();
  for (const auto& d : f.duplicates) {
    dups.push_back({{"coord", d.coord + 1}, {"source", d.source + 1}, {"phi", moebius_json(d.phi)}});
  }
  j["e"] = dups;
  Json perm = Json::array();
  for (int c : f.permutation) perm.push_back(c + 1);
  Json moeb = Json::array();
  for (const auto& m : f.conjugation) moeb.push_back(moebius_json(m));
  j["conjugation"] = {{"coordinate_maps", moeb}, {"permutation", perm}};
  Json graphs = Json::array();
  for (const auto& g : f.graphs) {
    Json e = {{"coord", g.coord + 1}, {"constant", g.constant}};
    if (g.constant) e["value"] = to_json(g.value);
    e["grid"] = to_json(g.samples);
    graphs.push_back(e);
  }
  j["f"] = graphs;
  j["max_graph_residual"] = number(f.max_graph_residual());
  return j;
}

Json to_json(const IdempotenceReport& r) {
  return {{"passed", r.passed},
          {"max_defect", number(r.max_defect)},
          {"max_modulus", number(r.max_modulus)},
          {"samples", r.samples},
          {"witness", point_json(r.witness)}};
}

}  // namespace aglerkit::io
