#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "aglerkit/agler_sos.hpp"
#include "aglerkit/analytic.hpp"
#include "aglerkit/errors.hpp"
#include "aglerkit/fixedgraph.hpp"
#include "aglerkit/kernels.hpp"
#include "aglerkit/pick.hpp"
#include "aglerkit/retract.hpp"
#include "aglerkit/stability.hpp"

namespace aglerkit::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormat = "aglerkit/1";

// Input file missing or unreadable.
class FileError : public Error {
 public:
  using Error::Error;
};

// Input parsed but does not match the expected schema.
class FormatError : public Error {
 public:
  using Error::Error;
};

Json read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const Json& document);
std::string dump(const Json& document);

Json to_json(Complex c);
Complex complex_from_json(const Json& j);

Json to_json(const BivariatePolynomial& p);
BivariatePolynomial polynomial_from_json(const Json& j);

Json to_json(const HermitianMatrix& m);
HermitianMatrix hermitian_from_json(const Json& j);

Json to_json(const SosCertificate& cert);
SosCertificate certificate_from_json(const Json& j);

Json to_json(const StabilityReport& r);
Json to_json(const VerificationReport& r);
Json to_json(const BoundsReport& r);

PickProblem pick_problem_from_json(const Json& j);
Json to_json(const PickProblem& p);
Json to_json(const SchurInterpolant& f);

// Sparse multivariate polynomial: {"1,0,2": [re, im], ...}.
Json to_json(const MultiPoly& p);
MultiPoly multipoly_from_json(const Json& j, int vars);

Json to_json(const RationalFunction& r);
RationalFunction rational_from_json(const Json& j, int vars);

// {"n": n, "numerator": ..., "denominator": ...}; the map has n + 1 variables.
SchurMap schur_map_from_json(const Json& j);
// {"n": n, "components": [{"numerator": ..., "denominator": ...}, ...]}
RetractMap retract_map_from_json(const Json& j);

Json to_json(const FixedPointRecord& r);
Json to_json(const GraphFunction& g);
Json to_json(const NormalForm& f);
Json to_json(const IdempotenceReport& r);

}  // namespace aglerkit::io
