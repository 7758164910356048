#include "biquat/mink.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/LU>

namespace biquat {

const RMat4& minkowski_metric() {
  static const RMat4 eta = Vec4(-1.0, 1.0, 1.0, 1.0).asDiagonal();
  return eta;
}

Vec4 default_observer() { return {1.0, 0.0, 0.0, 0.0}; }

Complex minkowski_inner(const CVec4& a, const CVec4& b) {
  return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

double minkowski_inner(const Vec4& a, const Vec4& b) {
  return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

namespace {

RMat4 skew_from(const Vec3& time_part, const Vec3& cross_part) {
  RMat4 m = RMat4::Zero();
  m.block<1, 3>(0, 1) = time_part.transpose();
  m.block<3, 1>(1, 0) = time_part;
  m.block<3, 3>(1, 1) = right_cross_matrix(cross_part.cast<Complex>()).real();
  return m;
}

}  // namespace

FieldMatrices field_matrices(const EMField& f) {
  FieldMatrices out;
  out.F = skew_from(f.E, f.B);
  out.Fstar = skew_from(-f.B, f.E);
  out.cF = out.F.cast<Complex>() - kI * out.Fstar.cast<Complex>();
  out.cbarF = out.F.cast<Complex>() + kI * out.Fstar.cast<Complex>();
  return out;
}

EMField field_from_matrix(const RMat4& F) {
  EMField f;
  f.E = 0.5 * (F.block<1, 3>(0, 1).transpose() + F.block<3, 1>(1, 0));
  // Spatial block of v -> v x B is [[0, B3, -B2], [-B3, 0, B1], [B2, -B1, 0]].
  f.B(0) = 0.5 * (F(2, 3) - F(3, 2));
  f.B(1) = 0.5 * (F(3, 1) - F(1, 3));
  f.B(2) = 0.5 * (F(1, 2) - F(2, 1));
  return f;
}

double skew_residual(const RMat4& F) {
  const RMat4& eta = minkowski_metric();
  return (F.transpose() + eta * F * eta).norm();
}

const char* to_string(LorentzClass c) {
  switch (c) {
    case LorentzClass::ProperOrthochronous: return "ProperOrthochronous";
    case LorentzClass::OtherComponent: return "OtherComponent";
    case LorentzClass::NotLorentz: return "NotLorentz";
  }
  return "unknown";
}

LorentzClass is_proper_lorentz(const RMat4& L, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
  if (!L.allFinite()) return LorentzClass::NotLorentz;
  const RMat4& eta = minkowski_metric();
  if ((L.transpose() * eta * L - eta).norm() > tol) return LorentzClass::NotLorentz;
  if (L.determinant() > 0.0 && L(0, 0) >= 1.0 - tol) return LorentzClass::ProperOrthochronous;
  return LorentzClass::OtherComponent;
}

void require_observer(const Vec4& u) {
  const double n = minkowski_inner(u, u);
  if (!u.allFinite() || std::abs(n + 1.0) > kObserverTol) {
    std::ostringstream os;
    os << "<u,u> = " << n << ", expected -1";
    throw Error(ErrorCode::NotAnObserver, os.str());
  }
}

RMat4 observer_frame(const Vec4& u) {
  require_observer(u);
  const double gamma = u(0);
  const Vec3 p = u.tail<3>();  // gamma * beta
  RMat4 m = RMat4::Identity();
  m(0, 0) = gamma;
  m.block<1, 3>(0, 1) = p.transpose();
  m.block<3, 1>(1, 0) = p;
  // I + (gamma - 1) bhat bhat^T = I + p p^T / (gamma + 1)
  m.block<3, 3>(1, 1) += p * p.transpose() / (gamma + 1.0);
  return m;
}

Vec4 rest_frame_vector(const Vec4& u, const Vec3& w) {
  Vec4 local(0.0, w(0), w(1), w(2));
  if (u.tail<3>().isZero(0.0) && u(0) == 1.0) return local;
  return observer_frame(u) * local;
}

Vec4 boost_observer(const Vec4& u, const Vec4& w) {
  require_observer(u);
  if (std::abs(minkowski_inner(u, w)) > kObserverTol * std::max(1.0, w.norm())) {
    throw Error(ErrorCode::InvalidInput, "velocity 4-vector must be orthogonal to u");
  }
  const double w2 = minkowski_inner(w, w);
  if (!(w2 < 1.0)) {
    std::ostringstream os;
    os << "|w|^2 = " << w2 << " is not below 1";
    throw Error(ErrorCode::SpeedNotSubluminal, os.str());
  }
  return (u + w) / std::sqrt(1.0 - w2);
}

Vec4 boost_observer(const Vec4& u, const Vec3& w) {
  require_observer(u);
  if (!(w.squaredNorm() < 1.0)) {
    throw Error(ErrorCode::SpeedNotSubluminal, "speed must be below 1");
  }
  return boost_observer(u, rest_frame_vector(u, w));
}

}  // namespace biquat
