#pragma once

#include "biquat/mink.hpp"

namespace biquat {

// sinh(z)/z with the removable singularity filled in (value 1 at z = 0).
Complex sinhc(Complex z);

// e^F = cosh(lambda) I + sinh(lambda)/lambda F for pure F with
// lambda^2 = A.A. Throws NotPure when the scalar part is nonzero.
Biquat exp_S(const Biquat& q);

// e^F = e^{cF/2} e^{cbarF/2} for F in so(3,1). Throws NotSkew.
RMat4 exp_so31(const RMat4& F);

// D in S with exp_S(D) = l, for l = aI + H on the biquaternion Lorentz group.
// Throws NotBiquatLorentz, or NotExponentialInS for -I + N with N null.
Biquat log_biquat_lorentz(const Biquat& l);

// A real Minkowski-skew F with exp_so31(F) = L. Throws NotProperLorentz.
RMat4 log_so31(const RMat4& L);

}  // namespace biquat
