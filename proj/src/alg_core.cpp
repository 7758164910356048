#include "biquat/alg_core.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/LU>

namespace biquat {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ChiralityMismatch: return "ChiralityMismatch";
    case ErrorCode::NotInRepresentation: return "NotInRepresentation";
    case ErrorCode::NotAnObserver: return "NotAnObserver";
    case ErrorCode::SpeedNotSubluminal: return "SpeedNotSubluminal";
    case ErrorCode::NotUnitSpatial: return "NotUnitSpatial";
    case ErrorCode::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::NotBiquatLorentz: return "NotBiquatLorentz";
    case ErrorCode::NotExponentialInS: return "NotExponentialInS";
    case ErrorCode::NotProperLorentz: return "NotProperLorentz";
    case ErrorCode::LiftFailed: return "LiftFailed";
    case ErrorCode::NotNullquat: return "NotNullquat";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::RefinementExhausted: return "RefinementExhausted";
    case ErrorCode::BranchDegenerate: return "BranchDegenerate";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

const char* to_string(Chirality c) { return c == Chirality::S ? "S" : "SBar"; }

Chirality opposite(Chirality c) {
  return c == Chirality::S ? Chirality::SBar : Chirality::S;
}

Biquat::Biquat(Complex a0, const CVec3& vec, Chirality chirality)
    : a0_(a0), vec_(vec), chirality_(chirality) {
  if (!is_finite(a0) || !vec.allFinite()) {
    throw Error(ErrorCode::NonFinite, "biquaternion coordinates must be finite");
  }
}

Biquat Biquat::identity(Chirality chirality) {
  return {1.0, CVec3::Zero(), chirality};
}

Biquat Biquat::pure(const CVec3& vec, Chirality chirality) {
  return {0.0, vec, chirality};
}

bool Biquat::is_pure(double tol) const {
  return std::abs(a0_) <= tol * std::max(1.0, vec_.norm());
}

Eigen::Matrix3cd right_cross_matrix(const CVec3& c) {
  Eigen::Matrix3cd m;
  m << 0.0, c(2), -c(1),
      -c(2), 0.0, c(0),
      c(1), -c(0), 0.0;
  return m;
}

CMat4 rep_matrix(const Biquat& q) {
  const Complex sign = q.chirality() == Chirality::S ? -kI : kI;
  CMat4 m = CMat4::Zero();
  m.block<1, 3>(0, 1) = q.vec().transpose();
  m.block<3, 1>(1, 0) = q.vec();
  m.block<3, 3>(1, 1) = right_cross_matrix(sign * q.vec());
  m.diagonal().array() += q.a0();
  return m;
}

Biquat conjugate(const Biquat& q) {
  return {std::conj(q.a0()), q.vec().conjugate(), opposite(q.chirality())};
}

Biquat transposed(const Biquat& q) {
  return {q.a0(), q.vec(), opposite(q.chirality())};
}

namespace {

std::array<CMat4, kBasisSize> make_basis() {
  const CMat4 x = rep_matrix(Biquat::pure(CVec3(1, 0, 0)));
  const CMat4 y = rep_matrix(Biquat::pure(CVec3(0, 1, 0)));
  const CMat4 z = rep_matrix(Biquat::pure(CVec3(0, 0, 1)));
  const CMat4 X = x.conjugate();
  const CMat4 Y = y.conjugate();
  const CMat4 Z = z.conjugate();
  return {x, X, y, Y, z, Z, x * Y, y * X, y * Z, z * Y, z * X, x * Z,
          x * X, y * Y, z * Z, CMat4::Identity()};
}

// Columns are the basis matrices flattened column-major (MATLAB's M(:)).
const Eigen::PartialPivLU<Eigen::Matrix<Complex, 16, 16>>& basis_solver() {
  static const auto solver = [] {
    Eigen::Matrix<Complex, 16, 16> total;
    const auto& basis = basis_16();
    for (std::size_t k = 0; k < kBasisSize; ++k) {
      total.col(static_cast<Eigen::Index>(k)) =
          Eigen::Map<const Eigen::Matrix<Complex, 16, 1>>(basis[k].data());
    }
    return Eigen::PartialPivLU<Eigen::Matrix<Complex, 16, 16>>(total);
  }();
  return solver;
}

}  // namespace

const std::array<CMat4, kBasisSize>& basis_16() {
  static const std::array<CMat4, kBasisSize> basis = make_basis();
  return basis;
}

Complex BasisDecomp::coeff(std::string_view label) const {
  const auto it = std::find(kBasisLabels.begin(), kBasisLabels.end(), label);
  if (it == kBasisLabels.end()) {
    throw Error(ErrorCode::InvalidInput, "unknown basis label " + std::string(label));
  }
  return coeffs[static_cast<std::size_t>(it - kBasisLabels.begin())];
}

CMat4 BasisDecomp::recompose() const {
  CMat4 m = CMat4::Zero();
  const auto& basis = basis_16();
  for (std::size_t k = 0; k < kBasisSize; ++k) m += coeffs[k] * basis[k];
  return m;
}

BasisDecomp decompose(const CMat4& m) {
  const Eigen::Matrix<Complex, 16, 1> rhs =
      Eigen::Map<const Eigen::Matrix<Complex, 16, 1>>(m.data());
  const Eigen::Matrix<Complex, 16, 1> sol = basis_solver().solve(rhs);
  BasisDecomp out;
  for (std::size_t k = 0; k < kBasisSize; ++k) out.coeffs[k] = sol(static_cast<Eigen::Index>(k));
  return out;
}

Complex s_inner(const CMat4& f, const CMat4& g) {
  return (f * g + g * f).trace() / 8.0;
}

Biquat biquat_mul(const Biquat& p, const Biquat& q) {
  if (p.chirality() != q.chirality()) {
    throw Error(ErrorCode::ChiralityMismatch,
                "product of S and SBar elements leaves I+S; use matrix arithmetic");
  }
  // FG = (A.B) I + 1/2 [F,G] and 1/2 [F,G] is the pure element with vector
  // +-i A x B (sign by chirality).
  const Complex sign = p.chirality() == Chirality::S ? kI : -kI;
  const CVec3& a = p.vec();
  const CVec3& b = q.vec();
  const Complex scalar = p.a0() * q.a0() + dot_bilinear(a, b);
  const CVec3 vec = q.a0() * a + p.a0() * b + sign * cross_bilinear(a, b);
  return {scalar, vec, p.chirality()};
}

Biquat from_matrix(const CMat4& m, Chirality chirality) {
  if (!m.allFinite()) throw Error(ErrorCode::NonFinite, "matrix has non-finite entries");
  const Biquat q(m(0, 0), m.block<3, 1>(1, 0), chirality);
  const double residual = (rep_matrix(q) - m).norm();
  if (residual > 1e-10 * m.norm()) {
    std::ostringstream os;
    os << "matrix is not in I+" << to_string(chirality) << " (residual " << residual << ")";
    throw Error(ErrorCode::NotInRepresentation, os.str());
  }
  return q;
}

}  // namespace biquat
