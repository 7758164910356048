#pragma once

#include "biquat/alg_core.hpp"

namespace biquat {

// Observers must satisfy |<u,u> + 1| <= this.
inline constexpr double kObserverTol = 1e-9;

// eta = diag(-1, 1, 1, 1); index 0 is time.
const RMat4& minkowski_metric();

Vec4 default_observer();

// Complex-bilinear form of signature (-,+,+,+).
Complex minkowski_inner(const CVec4& a, const CVec4& b);
double minkowski_inner(const Vec4& a, const Vec4& b);

struct EMField {
  Vec3 E = Vec3::Zero();
  Vec3 B = Vec3::Zero();

  // A = E + iB, the vector part of cF.
  CVec3 complex_vector() const { return E.cast<Complex>() + kI * B.cast<Complex>(); }
  bool is_zero() const { return E.isZero(0.0) && B.isZero(0.0); }
};

struct FieldMatrices {
  RMat4 F;       // (0 E^T; E  v -> v x B)
  RMat4 Fstar;   // (0 -B^T; -B  v -> v x E)
  CMat4 cF;      // F - i F*
  CMat4 cbarF;   // F + i F*
};

FieldMatrices field_matrices(const EMField& f);

// Reads (E, B) back from a Minkowski-skew real matrix.
EMField field_from_matrix(const RMat4& F);

// ||F^T + eta F eta||, zero for elements of so(3,1).
double skew_residual(const RMat4& F);

enum class LorentzClass { ProperOrthochronous, OtherComponent, NotLorentz };

const char* to_string(LorentzClass c);

LorentzClass is_proper_lorentz(const RMat4& L, double tol);

// Throws NotAnObserver unless <u,u> = -1 within kObserverTol.
void require_observer(const Vec4& u);

// The pure boost taking (1,0,0,0) to the observer u.
RMat4 observer_frame(const Vec4& u);

// Embeds a 3-vector given in u's rest-frame coordinates as a 4-vector
// orthogonal to u. For the default observer this is (0, w).
Vec4 rest_frame_vector(const Vec4& u, const Vec3& w);

// u' = (u + w) / sqrt(1 - w^2) with w orthogonal to u.
Vec4 boost_observer(const Vec4& u, const Vec4& w);
Vec4 boost_observer(const Vec4& u, const Vec3& w);

}  // namespace biquat
