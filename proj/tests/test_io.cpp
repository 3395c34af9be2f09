#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "aglerkit/io.hpp"
#include "support.hpp"

using namespace aglerkit;
using namespace aglerkit::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "aglerkit_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("polynomial round trip") {
  std::mt19937_64 rng(1);
  const auto p = random_poly(rng, 2, 3);
  CHECK(io::polynomial_from_json(io::to_json(p)) == p);
  const auto j = io::Json::parse(R"({"bidegree":[1,1],"coeffs":[[2,-1],[-1,[0,0]]]})");
  CHECK(io::polynomial_from_json(j) == classic());
}

TEST_CASE("certificate round trip keeps Grams and factors exactly") {
  const auto cert = solve_gram(classic());
  const auto back = io::certificate_from_json(io::Json::parse(io::dump(io::to_json(cert))));
  CHECK(back.p == cert.p);
  CHECK(back.g_a.data() == cert.g_a.data());
  CHECK(back.g_b.data() == cert.g_b.data());
  REQUIRE(back.a_polys.size() == cert.a_polys.size());
  for (std::size_t i = 0; i < back.a_polys.size(); ++i) CHECK(back.a_polys[i] == cert.a_polys[i]);
  CHECK(back.residual == cert.residual);
  CHECK(back.seed == cert.seed);
  const auto j = io::to_json(cert);
  CHECK(j.at("format") == io::kFormat);
  CHECK(j.contains("symmetrized"));
}

TEST_CASE("sparse polynomial keys") {
  const auto j = io::Json::parse(R"({"1,0,2": [0, 1], "0,0,0": 0.5})");
  const auto p = io::multipoly_from_json(j, 3);
  CHECK(p.coeff({1, 0, 2}) == Complex(0, 1));
  CHECK(p.coeff({0, 0, 0}) == Complex(0.5));
  CHECK(io::multipoly_from_json(io::to_json(p), 3).terms() == p.terms());
  CHECK_THROWS_AS(io::multipoly_from_json(io::Json::parse(R"({"1,0": 1})"), 3), io::FormatError);
  CHECK_THROWS_AS(io::multipoly_from_json(io::Json::parse(R"({"1,x,0": 1})"), 3), io::FormatError);
}

TEST_CASE("schema violations are format errors") {
  CHECK_THROWS_AS(io::polynomial_from_json(io::Json::parse(R"({"bidegree":[1,1],"coeffs":[[1,2]]})")),
                  io::FormatError);
  CHECK_THROWS_AS(io::polynomial_from_json(io::Json::parse(R"({"coeffs":[[1]]})")), io::FormatError);
  CHECK_THROWS_AS(io::polynomial_from_json(io::Json::parse(R"({"bidegree":[0,0],"coeffs":[["a"]]})")),
                  io::FormatError);
  CHECK_THROWS_AS(io::pick_problem_from_json(io::Json::parse(R"({"nodes":[1.5],"targets":[0]})")),
                  io::FormatError);
  CHECK_THROWS_AS(io::retract_map_from_json(io::Json::parse(R"({"n":2,"components":[{"numerator":{"1,0":1}}]})")),
                  io::FormatError);
}

TEST_CASE("files: missing, malformed and atomic writes") {
  CHECK_THROWS_AS(io::read_file(scratch("does_not_exist.json")), io::FileError);
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{ not json";
  CHECK_THROWS_AS(io::read_file(bad), io::FormatError);

  const auto out = scratch("out.json");
  io::write_file_atomic(out, io::to_json(classic()));
  CHECK(fs::exists(out));
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
  CHECK(io::polynomial_from_json(io::read_file(out)) == classic());
}

TEST_CASE("non-finite numbers serialize as null") {
  StabilityReport r;
  r.min_root_modulus = std::numeric_limits<double>::infinity();
  const auto j = io::to_json(r);
  CHECK(j.at("min_root_modulus").is_null());
}

TEST_CASE("serialization is deterministic") {
  const auto cert = solve_gram(stable_corpus()[2].p);
  CHECK(io::dump(io::to_json(cert)) == io::dump(io::to_json(solve_gram(stable_corpus()[2].p))));
}
