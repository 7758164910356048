#include "biquat/modsq.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

namespace biquat {

CMat4 modulus_squared_complex(const Biquat& q) {
  if (q.chirality() != Chirality::S) {
    throw Error(ErrorCode::ChiralityMismatch, "modulus squared is defined on I+S");
  }
  const CMat4 m = rep_matrix(q);
  return m.conjugate() * m;
}

RMat4 modulus_squared(const Biquat& q) { return modulus_squared_complex(q).real(); }

RMat4 energy_momentum(const EMField& f) {
  const FieldMatrices fm = field_matrices(f);
  return 0.5 * (fm.cbarF * fm.cF).real();
}

namespace {

// Index pairs (i, j) of the basis products x_i X_j among kBasisLabels.
struct ProductSlot {
  int basis_index;
  int i;
  int j;
};

constexpr ProductSlot kProductSlots[] = {
    {12, 0, 0}, {13, 1, 1}, {14, 2, 2},  // xX yY zZ
    {6, 0, 1},  {7, 1, 0},               // xY yX
    {8, 1, 2},  {9, 2, 1},               // yZ zY
    {10, 2, 0}, {11, 0, 2},              // zX xZ
};

}  // namespace

Biquat lift_lorentz(const RMat4& L) {
  const double scale = std::max(1.0, L.norm());
  if (is_proper_lorentz(L, 1e-9 * scale * scale) != LorentzClass::ProperOrthochronous) {
    throw Error(ErrorCode::NotProperLorentz, "matrix is not a proper orthochronous Lorentz transformation");
  }
  // m(aI + A.x) = |a|^2 I + conj(a) A_i x_i + a conj(A_i) X_i + A_i conj(A_j) x_i X_j,
  // so the coefficients assemble the rank-one Hermitian matrix v v^H with
  // v = (a, A1, A2, A3).
  const BasisDecomp d = decompose(L.cast<Complex>());
  Eigen::Matrix4cd outer;
  outer(0, 0) = d.coeffs[15];
  for (int i = 0; i < 3; ++i) {
    outer(i + 1, 0) = d.coeffs[static_cast<std::size_t>(2 * i)];      // x, y, z
    outer(0, i + 1) = d.coeffs[static_cast<std::size_t>(2 * i + 1)];  // X, Y, Z
  }
  for (const auto& slot : kProductSlots) {
    outer(slot.i + 1, slot.j + 1) = d.coeffs[static_cast<std::size_t>(slot.basis_index)];
  }

  Eigen::Index pivot = 0;
  outer.diagonal().real().maxCoeff(&pivot);
  const double pivot_norm = std::sqrt(std::max(outer(pivot, pivot).real(), 0.0));
  if (!(pivot_norm > 0.0)) throw Error(ErrorCode::LiftFailed, "vanishing modulus");
  const CVec4 v = outer.col(pivot) / pivot_norm;

  Biquat lifted(v(0), v.tail<3>());
  const Complex norm = lifted.quat_norm();
  if (std::abs(norm) < 1e-12) throw Error(ErrorCode::LiftFailed, "lift has zero quaternion norm");
  lifted = lifted.scaled(1.0 / std::sqrt(norm));
  const Complex a = lifted.a0();
  const double tie = 1e-14 * std::max(1.0, std::abs(a));
  if (a.real() < -tie || (std::abs(a.real()) <= tie && a.imag() < 0.0)) lifted = -lifted;

  const double residual = (modulus_squared(lifted) - L).norm();
  if (!(residual <= 1e-9 * scale)) {
    std::ostringstream os;
    os << "m(lift) differs from L by " << residual;
    throw Error(ErrorCode::LiftFailed, os.str());
  }
  return lifted;
}

int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol) {
  const Eigen::VectorXd sv = m.jacobiSvd().singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

NullquatImage nullquat_image(const Biquat& q) {
  const Complex a = q.a0();
  const double scale = std::norm(a) + q.vec().squaredNorm();
  if (std::abs(a * a - q.vec_square()) > 1e-10 * std::max(1.0, scale)) {
    throw Error(ErrorCode::NotNullquat, "(aI + F)(aI - F) is not zero");
  }
  NullquatImage out;
  out.image = modulus_squared(q);
  if (scale == 0.0) {
    out.degenerate = true;
    out.direction = Vec4::Zero();
    return out;
  }
  const Eigen::JacobiSVD<Eigen::Matrix4d> svd(out.image, Eigen::ComputeFullU);
  out.rank = numerical_rank(out.image.cast<Complex>());
  Vec4 dir = svd.matrixU().col(0);
  if (std::abs(dir(0)) > 0.0) dir /= dir(0);
  out.direction = dir;
  return out;
}

}  // namespace biquat
