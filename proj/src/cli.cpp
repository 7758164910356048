#include "biquat/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <future>
#include <map>

#include <CLI11.hpp>

#include "biquat/json_io.hpp"

namespace biquat {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidInput, what); }

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    double v = 0.0;
    const auto* begin = item.data();
    const auto* end = item.data() + item.size();
    while (begin != end && *begin == ' ') ++begin;
    if (begin != end && *begin == '+') ++begin;
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) bad(std::string(what) + ": cannot parse '" + item + "'");
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, std::string(what) + " is not finite");
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.size() != expected) {
    bad(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

Vec3 parse_vec3(const std::string& text, const char* what) {
  const auto v = parse_list(text, 3, what);
  return {v[0], v[1], v[2]};
}

Vec4 parse_vec4(const std::string& text, const char* what) {
  const auto v = parse_list(text, 4, what);
  return {v[0], v[1], v[2], v[3]};
}

Complex parse_complex(const std::string& text, const char* what) {
  if (text.find(',') == std::string::npos) return {parse_list(text, 1, what)[0], 0.0};
  const auto v = parse_list(text, 2, what);
  return {v[0], v[1]};
}

// Echo of the resolved option set: given values, else defaults.
Json options_json(const CLI::App* app) {
  Json out = Json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string& name = opt->get_lnames().front();
    if (opt->get_expected_min() == 0) {
      out[name] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() > 1 || results.size() > 1) {
        out[name] = results;
      } else {
        out[name] = results.front();
      }
    } else if (!opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    } else {
      out[name] = nullptr;
    }
  }
  return out;
}

struct FieldArgs {
  std::string E;
  std::string B;
  std::string json;

  void add(CLI::App* app) {
    app->add_option("--E", E, "electric field, comma-separated");
    app->add_option("--B", B, "magnetic field, comma-separated");
    app->add_option("--field", json, "EM field JSON {\"E\":..,\"B\":..}");
  }

  EMField resolve() const {
    if (!json.empty()) {
      if (!E.empty() || !B.empty()) bad("give either --field or --E/--B");
      return field_from_json(load_json(json));
    }
    if (E.empty() && B.empty()) bad("an electromagnetic field is required (--E/--B or --field)");
    EMField f;
    if (!E.empty()) f.E = parse_vec3(E, "--E");
    if (!B.empty()) f.B = parse_vec3(B, "--B");
    return f;
  }
};

struct TrackArgs {
  std::string field;
  double slope = 1.0;
  std::string field_json;
  std::vector<std::string> paths;
  int samples = 256;
  int max_depth = 20;
  double trigger_ratio = 3.0;
  double tol = 0.0;
  double jump = 0.5;

  void add(CLI::App* app, bool many) {
    app->add_option("--field", field, "built-in field name (see `examples`)");
    app->add_option("--slope", slope, "slope of f in example2")->capture_default_str();
    app->add_option("--field-json", field_json, "explicit-samples field JSON");
    auto* p = app->add_option("--path,--loop", paths, "built-in path name or path JSON");
    if (!many) p->expected(1);
    app->add_option("--samples", samples, "samples for built-in paths")->capture_default_str();
    app->add_option("--max-depth", max_depth, "maximum refinement depth")->capture_default_str();
    app->add_option("--trigger-ratio", trigger_ratio, "gap / movement refinement trigger")
        ->capture_default_str();
    app->add_option("--tol", tol, "degeneracy tolerance (0: automatic)")->capture_default_str();
    app->add_option("--jump", jump, "eigenspace jump that starts a degeneracy search")
        ->capture_default_str();
  }

  TrackOptions options() const {
    TrackOptions o;
    o.max_depth = max_depth;
    o.trigger_ratio = trigger_ratio;
    if (tol > 0.0) o.degeneracy_tol = tol;
    if (tol < 0.0) bad("--tol must be >= 0");
    o.eigenspace_jump = jump;
    return o;
  }

  static bool is_builtin(const std::string& name) {
    const auto names = builtin_path_names();
    return std::find(names.begin(), names.end(), name) != names.end();
  }

  ParamPath path(const std::string& source) const {
    if (is_builtin(source)) return builtin_path(source, samples);
    return path_from_json(load_json(source));
  }

  MatrixField resolve_field() const {
    if (!field_json.empty()) {
      if (!field.empty()) bad("give either --field or --field-json");
      return explicit_field_from_json(load_json(field_json));
    }
    std::string name = field;
    if (name.empty()) {
      if (paths.empty() || !is_builtin(paths.front())) bad("--field is required");
      name = builtin_path_field(paths.front());
    }
    if (name == "example2") return MatrixField::example2(slope);
    return MatrixField::builtin(name);
  }
};

LineSection named_section(const std::string& name) {
  // Both read A = E + iB from the first column of aI + F.
  auto vec_part = [](const CMatX& m) {
    if (m.rows() != 4) bad("sections need a 4 x 4 biquaternion field");
    return CVec3(m(1, 0), m(2, 0), m(3, 0));
  };
  if (name == "eb") {
    return [vec_part](const ParamPoint&, const CMatX& m) {
      const CVec3 a = vec_part(m);
      CVecX v(4);
      v << 0.0, a(0), a(1), a(2);
      return v;
    };
  }
  if (name == "poynting") {
    return [vec_part](const ParamPoint&, const CMatX& m) {
      const CVec3 a = vec_part(m);
      const Vec3 e = a.real();
      const Vec3 b = a.imag();
      const Vec3 s = e.cross(b);
      CVecX v(4);
      v << e.squaredNorm(), s(0), s(1), s(2);
      return v;
    };
  }
  bad("unknown section '" + name + "' (expected eb or poynting)");
}

Json examples_json() {
  struct Entry {
    const char* name;
    const char* formula;
  };
  const Entry entries[] = {
      {"example1", "(1 t; 0 1)"},
      {"example2", "(1 f(t); f(-t) 1), f(t) = slope * max(t, 0)"},
      {"example3", "(u v; v w)"},
      {"example4", "F in S with A = (p0 + i p1, p2 + i p3, p4 + i p5)"},
      {"example5", "A0 I + F with A0 = p0 + i p1, A = (p2 + i p3, ..)"},
  };
  Json fields = Json::array();
  for (const auto& e : entries) {
    const MatrixField f = MatrixField::builtin(e.name);
    Json j;
    j["name"] = e.name;
    j["formula"] = e.formula;
    j["dim"] = f.dim();
    j["param_dim"] = f.param_dim();
    j["scalars"] = f.scalars() == ScalarField::Real ? "real" : "complex";
    fields.push_back(std::move(j));
  }
  Json paths = Json::array();
  for (const auto& name : builtin_path_names()) {
    const ParamPath p = builtin_path(name, 4);
    Json j;
    j["name"] = name;
    j["field"] = builtin_path_field(name);
    j["closed"] = p.closed;
    paths.push_back(std::move(j));
  }
  Json out;
  out["fields"] = std::move(fields);
  out["paths"] = std::move(paths);
  return out;
}

void merge(Json& doc, const Json& result) {
  for (auto it = result.begin(); it != result.end(); ++it) doc[it.key()] = it.value();
}

int fail(std::ostream& err, const std::string& code, const std::string& detail, int status) {
  Json e;
  e["error"] = code;
  e["detail"] = detail;
  err << dump(e) << "\n";
  return status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Biquaternion Lorentz calculus and eigenbundle analysis"};
  app.name("biquat");
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string output;
  std::map<std::string, std::function<Json()>> handlers;

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--output,-o", output, "write the JSON document here instead of stdout");
    return s;
  };

  // decompose
  std::string input;
  {
    auto* s = sub("decompose", "coefficients of a 4x4 complex matrix in the 16-element basis");
    s->add_option("--input,--matrix", input, "matrix JSON or biquaternion JSON")->required();
    handlers["decompose"] = [&] {
      const Json j = load_json(input);
      const CMat4 m = j.is_object() && !j.contains("matrix") ? rep_matrix(biquat_from_json(j))
                                                             : CMat4(cmatrix_from_json(j));
      if (m.rows() != 4 || m.cols() != 4) bad("matrix must be 4 x 4");
      const BasisDecomp d = decompose(m);
      Json r = to_json(d);
      r["residual"] = (d.recompose() - m).norm();
      return r;
    };
  }

  // mul
  std::string left;
  std::string right;
  {
    auto* s = sub("mul", "product of two biquaternions of one chirality");
    s->add_option("--left", left, "biquaternion JSON")->required();
    s->add_option("--right", right, "biquaternion JSON")->required();
    handlers["mul"] = [&] {
      const Biquat p = biquat_mul(biquat_from_json(load_json(left)), biquat_from_json(load_json(right)));
      Json r;
      r["biquat"] = to_json(p);
      r["matrix"] = to_json(CMatX(rep_matrix(p)));
      return r;
    };
  }

  // exp
  bool zero = false;
  std::string biquat_src;
  std::string matrix_src;
  FieldArgs exp_field;
  {
    auto* s = sub("exp", "exponential of a pure biquaternion or of F in so(3,1)");
    s->add_flag("--zero", zero, "exponential of the zero field");
    s->add_option("--biquat", biquat_src, "pure biquaternion JSON (exp in S)");
    s->add_option("--matrix", matrix_src, "real Minkowski-skew 4x4 matrix JSON");
    exp_field.add(s);
    handlers["exp"] = [&] {
      const int sources = int(zero) + int(!biquat_src.empty()) + int(!matrix_src.empty()) +
                          int(!exp_field.E.empty() || !exp_field.B.empty() || !exp_field.json.empty());
      if (sources != 1) bad("give exactly one of --zero, --biquat, --matrix, --E/--B/--field");
      Json r;
      if (!biquat_src.empty()) {
        const Biquat e = exp_S(biquat_from_json(load_json(biquat_src)));
        r["biquat"] = to_json(e);
        r["matrix"] = to_json(CMatX(rep_matrix(e)));
        return r;
      }
      RMat4 F = RMat4::Zero();
      if (!matrix_src.empty()) {
        const Eigen::MatrixXd m = rmatrix_from_json(load_json(matrix_src));
        if (m.rows() != 4 || m.cols() != 4) bad("matrix must be 4 x 4");
        F = m;
      } else if (!zero) {
        F = field_matrices(exp_field.resolve()).F;
      }
      r["matrix"] = to_json(Eigen::MatrixXd(exp_so31(F)));
      return r;
    };
  }

  // log
  std::string log_matrix;
  std::string log_biquat;
  {
    auto* s = sub("log", "logarithm of a proper Lorentz matrix or a biquaternion Lorentz element");
    s->add_option("--matrix,--input", log_matrix, "real 4x4 Lorentz matrix JSON");
    s->add_option("--biquat", log_biquat, "biquaternion JSON with a0^2 - A.A = 1");
    handlers["log"] = [&] {
      if (log_matrix.empty() == log_biquat.empty()) bad("give exactly one of --matrix, --biquat");
      Json r;
      if (!log_biquat.empty()) {
        r["biquat"] = to_json(log_biquat_lorentz(biquat_from_json(load_json(log_biquat))));
        return r;
      }
      const Eigen::MatrixXd m = rmatrix_from_json(load_json(log_matrix));
      if (m.rows() != 4 || m.cols() != 4) bad("matrix must be 4 x 4");
      const RMat4 F = log_so31(m);
      r["field"] = to_json(field_from_matrix(F));
      r["matrix"] = to_json(Eigen::MatrixXd(F));
      return r;
    };
  }

  // modsq
  std::string modsq_src;
  {
    auto* s = sub("modsq", "m(q) = conj(q) q");
    s->add_option("--biquat,--input", modsq_src, "biquaternion JSON in I+S")->required();
    handlers["modsq"] = [&] {
      const RMat4 m = modulus_squared(biquat_from_json(load_json(modsq_src)));
      Json r;
      r["matrix"] = to_json(Eigen::MatrixXd(m));
      r["lorentz_class"] = to_string(is_proper_lorentz(m, 1e-9));
      return r;
    };
  }

  // lift
  std::string lift_src;
  {
    auto* s = sub("lift", "biquaternion Lorentz element l with m(l) = L");
    s->add_option("--matrix,--input", lift_src, "real 4x4 proper Lorentz matrix JSON")->required();
    handlers["lift"] = [&] {
      const Eigen::MatrixXd m = rmatrix_from_json(load_json(lift_src));
      if (m.rows() != 4 || m.cols() != 4) bad("matrix must be 4 x 4");
      const Biquat l = lift_lorentz(m);
      Json r;
      r["biquat"] = to_json(l);
      r["matrix"] = to_json(CMatX(rep_matrix(l)));
      return r;
    };
  }

  // eig
  FieldArgs eig_field;
  {
    auto* s = sub("eig", "eigenvalues of F, F*, T_F and cF");
    eig_field.add(s);
    handlers["eig"] = [&] {
      const EigenData d = eigenvalues_em(eig_field.resolve());
      Json r;
      r["lambda_T"] = d.lambda_T;
      r["lambda_F"] = d.lambda_F;
      r["lambda_Fstar"] = d.lambda_Fstar;
      r["lambda_cF"] = to_json(d.lambda_cF);
      return r;
    };
  }

  // eigvec
  FieldArgs vec_field;
  std::string vec_u;
  std::string vec_biquat;
  std::string vec_lambda;
  {
    auto* s = sub("eigvec", "joint eigenvector of an EM field, or an eigenspace basis of aI + F");
    vec_field.add(s);
    s->add_option("--u", vec_u, "observer 4-velocity t,x,y,z")->default_str("1,0,0,0");
    s->add_option("--biquat", vec_biquat, "biquaternion JSON");
    s->add_option("--lambda", vec_lambda, "eigenvalue re[,im] for --biquat");
    handlers["eigvec"] = [&] {
      Json r;
      if (!vec_biquat.empty()) {
        if (vec_lambda.empty()) bad("--biquat needs --lambda");
        const EigenspaceBasis b =
            eigenspace_basis(biquat_from_json(load_json(vec_biquat)), parse_complex(vec_lambda, "--lambda"));
        r["first"] = vector_json(Eigen::VectorXcd(b.first));
        r["second"] = vector_json(Eigen::VectorXcd(b.second));
        r["degenerate_scalar"] = b.degenerate_scalar;
        return r;
      }
      const EMField f = vec_field.resolve();
      const Vec4 u = parse_vec4(vec_u.empty() ? "1,0,0,0" : vec_u, "--u");
      const JointEigenvector p = principal_eigenvector(f, u);
      const JointEigenvector n = negative_eigenvector(f, u);
      const EigenData d = eigenvalues_em(f);
      r["s"] = vector_json(Eigen::VectorXd(p.s));
      r["negative"] = vector_json(Eigen::VectorXd(n.s));
      r["degenerate"] = p.degenerate;
      r["lambda_T"] = d.lambda_T;
      r["lambda_F"] = d.lambda_F;
      r["lambda_Fstar"] = d.lambda_Fstar;
      return r;
    };
  }

  // classify
  std::string cls_src;
  {
    auto* s = sub("classify", "eigenspace structure of aI + F");
    s->add_option("--biquat,--input", cls_src, "biquaternion JSON")->required();
    handlers["classify"] = [&] {
      const Biquat q = biquat_from_json(load_json(cls_src));
      const SpectralCase c = classify(q);
      Json r;
      r["case"] = to_string(c);
      Json values = Json::array();
      if (c == SpectralCase::TwoEigenvaluesGeneric) {
        const Complex root = std::sqrt(q.vec_square());
        values.push_back(to_json(q.a0() + root));
        values.push_back(to_json(q.a0() - root));
      } else {
        values.push_back(to_json(q.a0()));
      }
      r["eigenvalues"] = std::move(values);
      return r;
    };
  }

  // track
  TrackArgs track_args;
  bool parallel = false;
  {
    auto* s = sub("track", "follow eigenvalue branches along paths");
    track_args.add(s, true);
    s->add_flag("--parallel", parallel, "track several paths concurrently");
    handlers["track"] = [&] {
      if (track_args.paths.empty()) bad("--path is required");
      const MatrixField field = track_args.resolve_field();
      const TrackOptions opts = track_args.options();
      std::vector<ParamPath> paths;
      for (const auto& p : track_args.paths) paths.push_back(track_args.path(p));
      auto one = [&](const ParamPath& path) {
        const TraceResult t = track_eigenvalues(field, path, opts);
        Json j = to_json(t);
        if (t.closed) j["s1"] = to_json(s1_report(t));
        return j;
      };
      std::vector<Json> results(paths.size());
      if (parallel && paths.size() > 1) {
        std::vector<std::future<Json>> jobs;
        for (const auto& p : paths) jobs.push_back(std::async(std::launch::async, one, std::cref(p)));
        for (std::size_t k = 0; k < jobs.size(); ++k) results[k] = jobs[k].get();
      } else {
        for (std::size_t k = 0; k < paths.size(); ++k) results[k] = one(paths[k]);
      }
      if (results.size() == 1) return results.front();
      Json r;
      r["traces"] = results;
      return r;
    };
  }

  // degeneracies
  TrackArgs deg_args;
  {
    auto* s = sub("degeneracies", "eigenvalue collisions with enlarged eigenspaces along a path");
    deg_args.add(s, false);
    handlers["degeneracies"] = [&] {
      if (deg_args.paths.empty()) bad("--path is required");
      const MatrixField field = deg_args.resolve_field();
      const TraceResult t = track_eigenvalues(field, deg_args.path(deg_args.paths.front()), deg_args.options());
      Json events = Json::array();
      for (const auto& e : t.degeneracies) events.push_back(to_json(e));
      Json r;
      r["degeneracies"] = std::move(events);
      r["degeneracy_tol"] = t.degeneracy_tol;
      r["refinement_count"] = t.refinement_count;
      return r;
    };
  }

  // holonomy
  TrackArgs hol_args;
  int branch = 0;
  std::string section;
  {
    auto* s = sub("holonomy", "closure overlap of a transported eigenvector around a loop");
    hol_args.add(s, false);
    s->add_option("--branch", branch, "branch label")->capture_default_str();
    s->add_option("--section", section, "use a named eigenvector field (eb, poynting) instead of a branch");
    handlers["holonomy"] = [&] {
      if (hol_args.paths.empty()) bad("--loop is required");
      const MatrixField field = hol_args.resolve_field();
      const ParamPath loop = hol_args.path(hol_args.paths.front());
      const HolonomyResult h = section.empty()
                                   ? line_holonomy(field, loop, branch, hol_args.options())
                                   : line_holonomy_section(field, loop, named_section(section),
                                                           hol_args.options());
      return to_json(h);
    };
  }

  // doppler
  FieldArgs dop_field;
  std::string dop_u;
  std::string dop_w;
  {
    auto* s = sub("doppler", "principal-eigenvector factor between two observers");
    dop_field.add(s);
    s->add_option("--u", dop_u, "observer 4-velocity t,x,y,z")->default_str("1,0,0,0");
    s->add_option("--w", dop_w, "relative velocity in u's rest frame")->required();
    handlers["doppler"] = [&] {
      Json r;
      r["factor"] = doppler_factor(dop_field.resolve(), parse_vec4(dop_u.empty() ? "1,0,0,0" : dop_u, "--u"),
                                   parse_vec3(dop_w, "--w"));
      return r;
    };
  }

  // spin-prob
  std::string sp_u;
  std::string sp_v;
  std::string sp_w;
  {
    auto* s = sub("spin-prob", "spin transition probability between unit directions");
    s->add_option("--u", sp_u, "observer 4-velocity t,x,y,z")->default_str("1,0,0,0");
    s->add_option("--v", sp_v, "unit spin direction")->required();
    s->add_option("--w", sp_w, "unit measurement direction")->required();
    handlers["spin-prob"] = [&] {
      Json r;
      r["probability"] = spin_probability(parse_vec4(sp_u.empty() ? "1,0,0,0" : sp_u, "--u"),
                                          parse_vec3(sp_v, "--v"), parse_vec3(sp_w, "--w"));
      return r;
    };
  }

  // beta-dist
  std::string bd_u;
  std::string bd_v;
  std::string bd_b;
  {
    auto* s = sub("beta-dist", "beta decay angular distribution");
    s->add_option("--u", bd_u, "observer 4-velocity t,x,y,z")->default_str("1,0,0,0");
    s->add_option("--v", bd_v, "electron velocity in u's rest frame")->required();
    s->add_option("--bdir", bd_b, "unit magnetic field direction")->required();
    handlers["beta-dist"] = [&] {
      Json r;
      r["value"] = beta_decay_distribution(parse_vec4(bd_u.empty() ? "1,0,0,0" : bd_u, "--u"),
                                           parse_vec3(bd_v, "--v"), parse_vec3(bd_b, "--bdir"));
      return r;
    };
  }

  // examples
  {
    sub("examples", "list built-in fields and paths");
    handlers["examples"] = [] { return examples_json(); };
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    return fail(err, "UsageError", e.what(), 2);
  }

  const CLI::App* chosen = app.get_subcommands().front();
  try {
    Json doc;
    doc["command"] = chosen->get_name();
    doc["options"] = options_json(chosen);
    merge(doc, handlers.at(chosen->get_name())());
    const std::string text = dump(doc) + "\n";
    if (output.empty()) {
      out << text;
    } else {
      std::ofstream file(output);
      if (!file) bad("cannot write '" + output + "'");
      file << text;
    }
    return 0;
  } catch (const Error& e) {
    const int status = e.code() == ErrorCode::LiftFailed ? 1 : 2;
    return fail(err, to_string(e.code()), e.detail(), status);
  } catch (const nlohmann::json::exception& e) {
    return fail(err, to_string(ErrorCode::InvalidInput), e.what(), 2);
  } catch (const std::exception& e) {
    return fail(err, "Internal", e.what(), 1);
  }
}

}  // namespace biquat
