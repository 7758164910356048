#include "biquat/json_io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace biquat {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, std::string(what) + " is not finite");
  return v;
}

// Rows of a matrix document; accepts a flat list for 1 x n only via the caller.
const Json& rows_of(const Json& j) {
  if (!j.is_array() || j.empty()) bad("matrix must be a non-empty array of rows");
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != j.front().size() || row.empty()) {
      bad("matrix rows must be arrays of equal length");
    }
  }
  return j;
}

Json points_json(const std::vector<ParamPoint>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(p);
  return out;
}

Json permutation_json(const std::vector<int>& p) { return Json(p); }

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const CMatX& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Json vector_json(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(to_json(v(k)));
  return out;
}

Json to_json(const Biquat& q) {
  Json out;
  out["a0"] = to_json(q.a0());
  out["A"] = vector_json(Eigen::VectorXcd(q.vec()));
  out["chirality"] = to_string(q.chirality());
  return out;
}

Json to_json(const BasisDecomp& d) {
  Json basis = Json::array();
  Json coeffs = Json::array();
  for (std::size_t k = 0; k < kBasisSize; ++k) {
    basis.push_back(std::string(kBasisLabels[k]));
    coeffs.push_back(to_json(d.coeffs[k]));
  }
  Json out;
  out["basis"] = std::move(basis);
  out["coeffs"] = std::move(coeffs);
  return out;
}

Json to_json(const EMField& f) {
  Json out;
  out["E"] = vector_json(Eigen::VectorXd(f.E));
  out["B"] = vector_json(Eigen::VectorXd(f.B));
  return out;
}

Json to_json(const ParamPath& p) {
  Json out;
  out["points"] = points_json(p.points);
  out["closed"] = p.closed;
  return out;
}

Json to_json(const DegeneracyEvent& e) {
  Json out;
  out["location"] = e.location;
  out["bracket"] = Json::array({e.bracket_lo, e.bracket_hi});
  out["sample_index"] = e.sample_index;
  out["branches"] = e.branches;
  out["eigenvalue"] = to_json(e.eigenvalue);
  out["eigenspace_dim"] = e.eigenspace_dim;
  return out;
}

Json to_json(const S1Verdict& v) {
  Json out;
  out["obstructed"] = v.obstructed;
  out["cluster_permutation"] = permutation_json(v.cluster_permutation);
  out["label_permutation"] = permutation_json(v.label_permutation);
  return out;
}

Json to_json(const TraceResult& t) {
  Json points = Json::array();
  Json branches = Json::array();
  for (const auto& s : t.samples) {
    points.push_back(s.point);
    Json values = Json::array();
    for (const auto& z : s.values) values.push_back(to_json(z));
    branches.push_back(std::move(values));
  }
  Json events = Json::array();
  for (const auto& e : t.degeneracies) events.push_back(to_json(e));
  Json out;
  out["closed"] = t.closed;
  out["points"] = std::move(points);
  out["branches"] = std::move(branches);
  out["monodromy"] = permutation_json(t.monodromy);
  out["base_clusters"] = t.base_clusters;
  out["cluster_monodromy"] = permutation_json(t.cluster_monodromy);
  out["degeneracies"] = std::move(events);
  out["refinement_count"] = t.refinement_count;
  out["degeneracy_tol"] = t.degeneracy_tol;
  return out;
}

Json to_json(const HolonomyResult& h) {
  Json out;
  out["sign"] = h.sign();
  out["value"] = to_json(h.value);
  out["phase"] = std::arg(h.value);
  out["real"] = h.real;
  out["branch"] = h.branch;
  out["samples_used"] = h.samples_used;
  return out;
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {number(j, "complex value"), 0.0};
  if (!j.is_array() || j.size() != 2) bad("complex value must be [re, im] or a number");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

CMatX cmatrix_from_json(const Json& j) {
  const Json& rows = rows_of(unwrap(j, "matrix"));
  CMatX m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(rows[r][c]);
    }
  }
  return m;
}

Eigen::MatrixXd rmatrix_from_json(const Json& j) {
  const CMatX m = cmatrix_from_json(j);
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) bad("matrix must be real");
  return m.real();
}

Biquat biquat_from_json(const Json& j) {
  const Json& q = unwrap(j, "biquat");
  if (!q.is_object() || !q.contains("A")) bad("biquaternion must be an object with \"A\"");
  const Json& a = q["A"];
  if (!a.is_array() || a.size() != 3) bad("\"A\" must have three entries");
  CVec3 vec;
  for (int k = 0; k < 3; ++k) vec(k) = complex_from_json(a[static_cast<std::size_t>(k)]);
  const Complex a0 = q.contains("a0") ? complex_from_json(q["a0"]) : Complex(0.0);
  Chirality c = Chirality::S;
  if (q.contains("chirality")) {
    const std::string name = q["chirality"].is_string() ? q["chirality"].get<std::string>() : "";
    if (name == "SBar") {
      c = Chirality::SBar;
    } else if (name != "S") {
      bad("chirality must be \"S\" or \"SBar\"");
    }
  }
  return {a0, vec, c};
}

EMField field_from_json(const Json& j) {
  const Json& f = unwrap(j, "field");
  if (!f.is_object() || !f.contains("E") || !f.contains("B")) bad("field must be {\"E\": .., \"B\": ..}");
  EMField out;
  for (int k = 0; k < 3; ++k) {
    if (!f["E"].is_array() || f["E"].size() != 3 || !f["B"].is_array() || f["B"].size() != 3) {
      bad("E and B must be 3-vectors");
    }
    out.E(k) = number(f["E"][static_cast<std::size_t>(k)], "E component");
    out.B(k) = number(f["B"][static_cast<std::size_t>(k)], "B component");
  }
  return out;
}

ParamPath path_from_json(const Json& j) {
  const Json& p = unwrap(j, "path");
  if (!p.is_object() || !p.contains("points") || !p["points"].is_array()) {
    bad("path must be {\"points\": [..], \"closed\": bool}");
  }
  ParamPath out;
  for (const auto& pt : p["points"]) {
    if (!pt.is_array()) bad("path points must be arrays");
    ParamPoint q;
    for (const auto& c : pt) q.push_back(number(c, "path coordinate"));
    out.points.push_back(std::move(q));
  }
  if (p.contains("closed")) {
    if (!p["closed"].is_boolean()) bad("\"closed\" must be a boolean");
    out.closed = p["closed"].get<bool>();
  }
  out.validate();
  return out;
}

MatrixField explicit_field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("samples") || !j["samples"].is_array()) {
    bad("explicit field must be {\"samples\": [{\"t\": .., \"matrix\": ..}, ..]}");
  }
  std::vector<FieldSample> samples;
  for (const auto& s : j["samples"]) {
    if (!s.is_object() || !s.contains("t") || !s.contains("matrix")) bad("each sample needs \"t\" and \"matrix\"");
    samples.push_back({number(s["t"], "sample t"), cmatrix_from_json(s["matrix"])});
  }
  ScalarField scalars = ScalarField::Complex;
  if (j.contains("scalars")) {
    const std::string name = j["scalars"].is_string() ? j["scalars"].get<std::string>() : "";
    if (name == "real") {
      scalars = ScalarField::Real;
    } else if (name != "complex") {
      bad("\"scalars\" must be \"real\" or \"complex\"");
    }
  }
  if (scalars == ScalarField::Real) {
    for (const auto& s : samples) {
      if (s.matrix.imag().cwiseAbs().maxCoeff() > 0.0) bad("real field has complex entries");
    }
  }
  return MatrixField::explicit_samples(std::move(samples), scalars);
}

const Json& unwrap(const Json& j, const char* key) {
  if (j.is_object() && j.contains(key)) return j[key];
  return j;
}

Json load_json(const std::string& source) {
  std::string text;
  const auto first = source.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (source[first] == '{' || source[first] == '[')) {
    text = source;
  } else if (source == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(source);
    if (!in) bad("cannot read '" + source + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(); }

}  // namespace biquat
