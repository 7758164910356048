#include "biquat/expmap.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "biquat/modsq.hpp"

namespace biquat {

Complex sinhc(Complex z) {
  if (std::abs(z) < 1e-3) {
    const Complex z2 = z * z;
    return 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  }
  return std::sinh(z) / z;
}

namespace {

// A square root of A.A. Near-null vectors whose A.A is rounding noise are
// snapped to lambda = 0 so null elements exponentiate to exactly I + F.
Complex pure_eigenvalue(const CVec3& vec) {
  const Complex sq = dot_bilinear(vec, vec);
  if (std::abs(sq) <= 8.0 * std::numeric_limits<double>::epsilon() * vec.squaredNorm()) {
    return 0.0;
  }
  return std::sqrt(sq);
}

}  // namespace

Biquat exp_S(const Biquat& q) {
  if (!q.is_pure(1e-14)) {
    std::ostringstream os;
    os << "scalar part " << q.a0() << " is not zero";
    throw Error(ErrorCode::NotPure, os.str());
  }
  const Complex lambda = pure_eigenvalue(q.vec());
  return {std::cosh(lambda), sinhc(lambda) * q.vec(), q.chirality()};
}

RMat4 exp_so31(const RMat4& F) {
  if (!F.allFinite() || skew_residual(F) > 1e-10 * std::max(1.0, F.norm())) {
    throw Error(ErrorCode::NotSkew, "F^T != -eta F eta");
  }
  const EMField f = field_from_matrix(F);
  const CMat4 half = rep_matrix(exp_S(Biquat::pure(0.5 * f.complex_vector())));
  // e^{cbarF/2} is the entrywise conjugate of e^{cF/2}.
  return (half * half.conjugate()).real();
}

Biquat log_biquat_lorentz(const Biquat& l) {
  const Complex a = l.a0();
  const CVec3& h = l.vec();
  const double scale = std::max(1.0, std::norm(a) + h.squaredNorm());
  if (std::abs(l.quat_norm() - 1.0) > 1e-9 * scale) {
    throw Error(ErrorCode::NotBiquatLorentz, "a^2 - A.A differs from 1");
  }
  // cosh(lambda) = a  <=>  e^lambda = a + sqrt(a^2 - 1), principal branches.
  const Complex lambda = std::log(a + std::sqrt(a * a - 1.0));
  const Complex sc = sinhc(lambda);
  if (std::abs(sc) <= 1e-9) {
    // lambda = n pi i with n odd, so a = -1 and H is null.
    if (h.norm() <= 1e-12 * std::sqrt(scale)) {
      // -I = exp of any element with eigenvalue pi i.
      return Biquat::pure(CVec3(kI * std::numbers::pi, 0.0, 0.0), l.chirality());
    }
    throw Error(ErrorCode::NotExponentialInS, "-I + N with N null is not an exponential");
  }
  const Biquat d = Biquat::pure(h / sc, l.chirality());
  const Biquat back = exp_S(d);
  const double residual = std::abs(back.a0() - a) + (back.vec() - h).norm();
  if (!(residual <= 1e-9 * std::sqrt(scale))) {
    std::ostringstream os;
    os << "logarithm is ill-conditioned near -I + N (round-trip residual " << residual << ")";
    throw Error(ErrorCode::NotExponentialInS, os.str());
  }
  return d;
}

RMat4 log_so31(const RMat4& L) {
  const Biquat lifted = lift_lorentz(L);
  Biquat d;
  try {
    d = log_biquat_lorentz(lifted);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotExponentialInS) throw;
    // m(-l) = m(l) and -(-I + cN) = e^{-cN}.
    d = log_biquat_lorentz(-lifted);
  }
  // m(e^{cD}) = e^{cD} e^{cbarD} = e^{cD + cbarD}, whose exponent is the real
  // field with E + iB = 2 A_D.
  EMField f;
  f.E = 2.0 * d.vec().real();
  f.B = 2.0 * d.vec().imag();
  return field_matrices(f).F;
}

}  // namespace biquat
