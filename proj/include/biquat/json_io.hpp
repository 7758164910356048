#pragma once

#include <string>

#include <json.hpp>

#include "biquat/bundle.hpp"
#include "biquat/expmap.hpp"

namespace biquat {

// Insertion-ordered so emitted documents have a fixed key order.
using Json = nlohmann::ordered_json;

// Complex values are [re, im]. Complex matrices are row-major arrays of
// [re, im] pairs; real matrices are row-major arrays of numbers. Readers
// accept either form and reject nonzero imaginary parts where a real value
// is required.
Json to_json(Complex z);
Json to_json(const CMatX& m);
Json to_json(const Eigen::MatrixXd& m);
Json to_json(const Biquat& q);
Json to_json(const BasisDecomp& d);
Json to_json(const EMField& f);
Json to_json(const ParamPath& p);
Json to_json(const DegeneracyEvent& e);
Json to_json(const TraceResult& t);
Json to_json(const HolonomyResult& h);
Json to_json(const S1Verdict& v);

Json vector_json(const Eigen::VectorXd& v);
Json vector_json(const Eigen::VectorXcd& v);

Complex complex_from_json(const Json& j);
CMatX cmatrix_from_json(const Json& j);
Eigen::MatrixXd rmatrix_from_json(const Json& j);
Biquat biquat_from_json(const Json& j);
EMField field_from_json(const Json& j);
ParamPath path_from_json(const Json& j);
// {"samples": [{"t": .., "matrix": ..}, ..], "scalars": "real"|"complex"}
MatrixField explicit_field_from_json(const Json& j);

// Documents produced by the CLI wrap values under a key ("biquat",
// "matrix", "field", "path"); this returns j[key] when present, else j.
const Json& unwrap(const Json& j, const char* key);

// Parses inline JSON text, "-" for standard input, or a file path.
Json load_json(const std::string& source);

// Deterministic serialization: fixed key order, shortest round-trip doubles.
std::string dump(const Json& j);

}  // namespace biquat
