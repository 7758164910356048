#pragma once

#include "biquat/mink.hpp"

namespace biquat {

// m(q) = conj(q) q for q in I+S. The result is real because S and SBar
// commute; the imaginary residue is discarded.
RMat4 modulus_squared(const Biquat& q);

// Same product, keeping the imaginary residue for diagnostics.
CMat4 modulus_squared_complex(const Biquat& q);

// T_F = 1/2 conj(cF) cF.
RMat4 energy_momentum(const EMField& f);

// A biquaternion Lorentz element l with m(l) = L. The S^1 fiber is fixed by
// requiring a0^2 - A.A = 1, and the remaining sign by Re(a0) >= 0.
Biquat lift_lorentz(const RMat4& L);

struct NullquatImage {
  RMat4 image;       // m(q)
  int rank = 0;      // numerical rank, 1 for nonzero nullquats
  Vec4 direction;    // real null vector spanning the image, time part +1
  bool degenerate = false;  // q == 0
};

NullquatImage nullquat_image(const Biquat& q);

// Singular values at or below 1e-9 * sigma_max count as zero.
int numerical_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-9);

}  // namespace biquat
