#pragma once

#include <array>
#include <string_view>

#include "biquat/core.hpp"

namespace biquat {

// Which of the two commuting copies of the pure biquaternions a matrix lives
// in. S carries the cross-product block v -> v x (-iA), SBar v -> v x (+iA).
enum class Chirality { S, SBar };

const char* to_string(Chirality c);
Chirality opposite(Chirality c);

// aI + F, stored by its canonical coordinates (a0, A) rather than the matrix.
class Biquat {
 public:
  Biquat() = default;
  Biquat(Complex a0, const CVec3& vec, Chirality chirality = Chirality::S);

  static Biquat identity(Chirality chirality = Chirality::S);
  static Biquat pure(const CVec3& vec, Chirality chirality = Chirality::S);

  const Complex& a0() const { return a0_; }
  const CVec3& vec() const { return vec_; }
  Chirality chirality() const { return chirality_; }

  // A.A with the complex-bilinear dot; the square of the eigenvalues of F.
  Complex vec_square() const { return dot_bilinear(vec_, vec_); }
  // a0^2 - A.A; equals 1 on the biquaternion Lorentz group.
  Complex quat_norm() const { return a0_ * a0_ - vec_square(); }
  bool is_pure(double tol = 0.0) const;

  Biquat operator-() const { return {-a0_, -vec_, chirality_}; }
  Biquat scaled(Complex s) const { return {s * a0_, s * vec_, chirality_}; }

 private:
  Complex a0_{0.0, 0.0};
  CVec3 vec_ = CVec3::Zero();
  Chirality chirality_ = Chirality::S;
};

// The matrix v -> v x c acting on column 3-vectors.
Eigen::Matrix3cd right_cross_matrix(const CVec3& c);

CMat4 rep_matrix(const Biquat& q);

// Entrywise complex conjugate of q's matrix, as a biquaternion of the other
// chirality with conjugated coordinates.
Biquat conjugate(const Biquat& q);

// Transposition maps S to SBar preserving coordinates.
Biquat transposed(const Biquat& q);

inline constexpr std::size_t kBasisSize = 16;

// Column order of the coefficient vector produced by decompose().
inline constexpr std::array<std::string_view, kBasisSize> kBasisLabels = {
    "x", "X", "y", "Y", "z", "Z", "xY", "yX",
    "yZ", "zY", "zX", "xZ", "xX", "yY", "zZ", "I"};

// The sixteen Hermitian involutions spanning M4(C), in kBasisLabels order.
const std::array<CMat4, kBasisSize>& basis_16();

struct BasisDecomp {
  std::array<Complex, kBasisSize> coeffs{};

  Complex coeff(std::string_view label) const;
  CMat4 recompose() const;
};

BasisDecomp decompose(const CMat4& m);

// <F,G> = 1/8 tr(FG + GF); equals A.B for F, G in the same chirality.
Complex s_inner(const CMat4& f, const CMat4& g);

// Closed-form product inside I+S (or I+SBar). Throws ChiralityMismatch when
// the factors live in different copies.
Biquat biquat_mul(const Biquat& p, const Biquat& q);

// Inverse of rep_matrix. Reads a0 from entry (0,0) and A from the first
// column, then checks the residual against 1e-10 * ||M||.
Biquat from_matrix(const CMat4& m, Chirality chirality);

}  // namespace biquat
