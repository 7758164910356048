#pragma once

#include "biquat/modsq.hpp"

namespace biquat {

// Closed-form eigenvalues of F in so(3,1), of its dual F*, of T_F and of cF.
struct EigenData {
  double lambda_T = 0.0;
  double lambda_F = 0.0;      // branch with lambda_F >= 0
  double lambda_Fstar = 0.0;  // paired so that s below is a joint eigenvector
  Complex lambda_cF{0.0, 0.0};  // lambda_F - i lambda_Fstar, squares to A.A
};

EigenData eigenvalues_em(const EMField& f);

// E, B and the Poynting vector as seen by the observer u, all as 4-vectors
// orthogonal to u. For u = (1,0,0,0) they are (0, E), (0, B), (0, E x B).
struct ObservedField {
  Vec4 E;
  Vec4 B;
  Vec4 poynting;
  double energy = 0.0;  // (E^2 + B^2) / 2
};

ObservedField observe(const EMField& f, const Vec4& u);

struct JointEigenvector {
  Vec4 s = Vec4::Zero();
  bool degenerate = false;  // F = 0: every vector is an eigenvector, s = 0
};

// s = 2((lambda_T + (E^2+B^2)/2) u + E x B + lambda_F E - lambda_F* B).
JointEigenvector principal_eigenvector(const EMField& f, const Vec4& u);
// Same with the signs of lambda_F and lambda_F* flipped.
JointEigenvector negative_eigenvector(const EMField& f, const Vec4& u);

enum class SpectralCase { TwoEigenvaluesGeneric, NullDegenerate, ScalarOnly };

const char* to_string(SpectralCase c);

// Keyed on A.A, which controls the eigenspace structure of aI + F.
SpectralCase classify(const Biquat& q);

struct EigenspaceBasis {
  CVec4 first;
  CVec4 second;
  // A = 0: the eigenspace is all of C^4 and the pair is the first two
  // canonical vectors, which are not distinguished by anything.
  bool degenerate_scalar = false;
};

// Two independent columns of (lambda - a0) I + F, spanning the eigenspace
// of rep_matrix(q) for the eigenvalue lambda.
EigenspaceBasis eigenspace_basis(const Biquat& q, Complex lambda);

// -1/2 <u + v, u + w> = sin^2(theta / 2) for unit spatial v, w.
double spin_probability(const Vec4& u, const Vec3& v, const Vec3& w);

// -<sqrt(1 - v^2) u', u + Bhat> with u' the electron's 4-velocity.
double beta_decay_distribution(const Vec4& u, const Vec3& v, const Vec3& bdir);

}  // namespace biquat
