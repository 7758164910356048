#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "biquat/bundle.hpp"
#include "biquat/cli.hpp"
#include "biquat/expmap.hpp"
#include "biquat/modsq.hpp"
#include "biquat/spectral.hpp"

namespace py = pybind11;
using namespace biquat;

namespace {

EMField make_field(const Vec3& e, const Vec3& b) { return {e, b}; }

}  // namespace

PYBIND11_MODULE(_biquat, m) {
  m.doc() = "Biquaternion representation of the Lorentz group and electromagnetic fields";

  static py::exception<Error> error_type(m, "BiquatError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      // Instances carry the machine-readable code next to the message.
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("code") = to_string(e.code());
      instance.attr("detail") = e.detail();
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  py::enum_<Chirality>(m, "Chirality").value("S", Chirality::S).value("SBar", Chirality::SBar);

  py::class_<Biquat>(m, "Biquat")
      .def(py::init<Complex, const CVec3&, Chirality>(), py::arg("a0"), py::arg("A"),
           py::arg("chirality") = Chirality::S)
      .def_static("identity", &Biquat::identity, py::arg("chirality") = Chirality::S)
      .def_property_readonly("a0", &Biquat::a0)
      .def_property_readonly("A", &Biquat::vec)
      .def_property_readonly("chirality", &Biquat::chirality)
      .def("vec_square", &Biquat::vec_square)
      .def("quat_norm", &Biquat::quat_norm)
      .def("matrix", [](const Biquat& q) { return rep_matrix(q); })
      .def("__mul__", &biquat_mul)
      .def("__neg__", &Biquat::operator-)
      .def("__repr__", [](const Biquat& q) {
        std::ostringstream s;
        s << "Biquat(a0=" << q.a0() << ", A=(" << q.vec()(0) << ", " << q.vec()(1) << ", " << q.vec()(2)
          << "), " << to_string(q.chirality()) << ")";
        return s.str();
      });

  m.def("rep_matrix", &rep_matrix);
  m.def("from_matrix", &from_matrix, py::arg("m"), py::arg("chirality") = Chirality::S);
  m.def("conjugate", &conjugate);
  m.def("mul", &biquat_mul);
  m.def("basis_labels", [] { return std::vector<std::string>(kBasisLabels.begin(), kBasisLabels.end()); });
  m.def("basis", [] {
    const auto& b = basis_16();
    return std::vector<CMat4>(b.begin(), b.end());
  });
  m.def("decompose", [](const CMat4& mat) {
    const auto coeffs = decompose(mat).coeffs;
    return std::vector<Complex>(coeffs.begin(), coeffs.end());
  });
  m.def("s_inner", &s_inner);

  m.def("sinhc", &sinhc);
  m.def("exp_S", &exp_S);
  m.def("exp_so31", &exp_so31);
  m.def("log_biquat_lorentz", &log_biquat_lorentz);
  m.def("log_so31", &log_so31);

  m.def("modulus_squared", &modulus_squared);
  m.def("lift", &lift_lorentz);
  m.def("is_proper_lorentz", [](const RMat4& L, double tol) { return std::string(to_string(is_proper_lorentz(L, tol))); },
        py::arg("L"), py::arg("tol") = 1e-9);

  m.def("field_matrices", [](const Vec3& e, const Vec3& b) {
    const FieldMatrices f = field_matrices(make_field(e, b));
    return py::dict(py::arg("F") = f.F, py::arg("Fstar") = f.Fstar, py::arg("cF") = f.cF, py::arg("cbarF") = f.cbarF);
  });
  m.def("energy_momentum", [](const Vec3& e, const Vec3& b) { return energy_momentum(make_field(e, b)); });
  m.def("eigenvalues_em", [](const Vec3& e, const Vec3& b) {
    const EigenData d = eigenvalues_em(make_field(e, b));
    return py::dict(py::arg("lambda_T") = d.lambda_T, py::arg("lambda_F") = d.lambda_F,
                    py::arg("lambda_Fstar") = d.lambda_Fstar, py::arg("lambda_cF") = d.lambda_cF);
  });
  m.def(
      "principal_eigenvector",
      [](const Vec3& e, const Vec3& b, const Vec4& u) { return principal_eigenvector(make_field(e, b), u).s; },
      py::arg("E"), py::arg("B"), py::arg("u") = default_observer());
  m.def(
      "negative_eigenvector",
      [](const Vec3& e, const Vec3& b, const Vec4& u) { return negative_eigenvector(make_field(e, b), u).s; },
      py::arg("E"), py::arg("B"), py::arg("u") = default_observer());
  m.def("classify", [](const Biquat& q) { return std::string(to_string(classify(q))); });
  m.def("doppler_factor",
        [](const Vec3& e, const Vec3& b, const Vec3& w, const Vec4& u) { return doppler_factor(make_field(e, b), u, w); },
        py::arg("E"), py::arg("B"), py::arg("w"), py::arg("u") = default_observer());
  m.def("spin_probability", &spin_probability, py::arg("u"), py::arg("v"), py::arg("w"));
  m.def("beta_decay_distribution", &beta_decay_distribution, py::arg("u"), py::arg("v"), py::arg("bdir"));

  m.def("builtin_path_names", &builtin_path_names);
  m.def("eigenvalues_on_path", [](const std::string& field, const std::string& path, int samples) {
    const TraceResult t = track_eigenvalues(MatrixField::builtin(field), builtin_path(path, samples));
    std::vector<std::vector<Complex>> values;
    for (const auto& s : t.samples) values.push_back(s.values);
    return py::dict(py::arg("values") = values, py::arg("monodromy") = t.monodromy,
                    py::arg("cluster_monodromy") = t.cluster_monodromy,
                    py::arg("obstructed") = s1_report(t).obstructed,
                    py::arg("degeneracies") = t.degeneracies.size());
  }, py::arg("field"), py::arg("path"), py::arg("samples") = 256);
  m.def("holonomy", [](const std::string& field, const std::string& loop, int branch, int samples) {
    const HolonomyResult h = line_holonomy(MatrixField::builtin(field), builtin_path(loop, samples), branch);
    return h.value;
  }, py::arg("field"), py::arg("loop"), py::arg("branch") = 0, py::arg("samples") = 256);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_cli(args, out, err);
    return py::make_tuple(status, out.str(), err.str());
  });
}
