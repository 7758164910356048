#include "biquat/spectral.hpp"

#include <cmath>

#include <Eigen/QR>

namespace biquat {

EigenData eigenvalues_em(const EMField& f) {
  const double half_diff = 0.5 * (f.E.squaredNorm() - f.B.squaredNorm());
  const double eb = f.E.dot(f.B);
  EigenData d;
  d.lambda_T = std::hypot(half_diff, eb);
  // lambda_F * lambda_F* = |E.B|; take the larger radicand directly and
  // recover the other from the product to avoid cancellation.
  double lf = 0.0;
  double lfs = 0.0;
  if (half_diff >= 0.0) {
    lf = std::sqrt(std::max(d.lambda_T + half_diff, 0.0));
    lfs = lf > 0.0 ? std::abs(eb) / lf : 0.0;
  } else {
    lfs = std::sqrt(std::max(d.lambda_T - half_diff, 0.0));
    lf = lfs > 0.0 ? std::abs(eb) / lfs : 0.0;
  }
  // Pairing lambda_F lambda_F* = -E.B makes s a joint eigenvector of F and F*
  // and gives lambda_cF^2 = A.A.
  d.lambda_F = lf;
  d.lambda_Fstar = eb > 0.0 ? -lfs : lfs;
  d.lambda_cF = Complex(d.lambda_F, 0.0 - d.lambda_Fstar);
  return d;
}

ObservedField observe(const EMField& f, const Vec4& u) {
  require_observer(u);
  const FieldMatrices fm = field_matrices(f);
  const RMat4 T = energy_momentum(f);
  ObservedField o;
  o.E = fm.F * u;
  o.B = -fm.Fstar * u;
  const Vec4 tu = T * u;
  o.energy = -minkowski_inner(u, tu);
  o.poynting = tu - o.energy * u;
  return o;
}

namespace {

JointEigenvector eigenvector_with_signs(const EMField& f, const Vec4& u, double sign) {
  require_observer(u);
  JointEigenvector out;
  if (f.is_zero()) {
    out.degenerate = true;
    return out;
  }
  const EigenData d = eigenvalues_em(f);
  const ObservedField o = observe(f, u);
  out.s = 2.0 * ((d.lambda_T + o.energy) * u + o.poynting +
                 sign * d.lambda_F * o.E - sign * d.lambda_Fstar * o.B);
  return out;
}

}  // namespace

JointEigenvector principal_eigenvector(const EMField& f, const Vec4& u) {
  return eigenvector_with_signs(f, u, 1.0);
}

JointEigenvector negative_eigenvector(const EMField& f, const Vec4& u) {
  return eigenvector_with_signs(f, u, -1.0);
}

const char* to_string(SpectralCase c) {
  switch (c) {
    case SpectralCase::TwoEigenvaluesGeneric: return "TwoEigenvaluesGeneric";
    case SpectralCase::NullDegenerate: return "NullDegenerate";
    case SpectralCase::ScalarOnly: return "ScalarOnly";
  }
  return "unknown";
}

namespace {

constexpr double kScalarTol = 1e-14;
constexpr double kNullTol = 1e-10;

bool vector_part_vanishes(const Biquat& q) {
  return q.vec().norm() <= kScalarTol * std::max(1.0, std::abs(q.a0()));
}

}  // namespace

SpectralCase classify(const Biquat& q) {
  if (vector_part_vanishes(q)) return SpectralCase::ScalarOnly;
  if (std::abs(q.vec_square()) <= kNullTol * q.vec().squaredNorm()) {
    return SpectralCase::NullDegenerate;
  }
  return SpectralCase::TwoEigenvaluesGeneric;
}

EigenspaceBasis eigenspace_basis(const Biquat& q, Complex lambda) {
  const Complex shift = lambda - q.a0();
  const double tol = 1e-9 * std::max(1.0, std::abs(q.a0()) + q.vec().norm());
  EigenspaceBasis out;
  if (vector_part_vanishes(q)) {
    if (std::abs(shift) > tol) throw Error(ErrorCode::NotAnEigenvalue, "lambda differs from a0");
    out.first = CVec4::Unit(0);
    out.second = CVec4::Unit(1);
    out.degenerate_scalar = true;
    return out;
  }
  Complex root = classify(q) == SpectralCase::NullDegenerate ? Complex(0.0) : std::sqrt(q.vec_square());
  if (std::abs(shift - root) > std::abs(shift + root)) root = -root;
  if (std::abs(shift - root) > tol) {
    throw Error(ErrorCode::NotAnEigenvalue, "lambda is not a0 +- sqrt(A.A)");
  }
  // F (mu I + F) = mu (mu I + F) when mu^2 = A.A, so the columns of
  // mu I + F are eigenvectors; it has rank two.
  const CMat4 image = root * CMat4::Identity() + rep_matrix(Biquat::pure(q.vec(), q.chirality()));
  const Eigen::ColPivHouseholderQR<CMat4> qr(image);
  const auto& perm = qr.colsPermutation().indices();
  out.first = image.col(perm(0)).normalized();
  out.second = image.col(perm(1)).normalized();
  return out;
}

namespace {

void require_unit(const Vec3& v, const char* name) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw Error(ErrorCode::NotUnitSpatial, std::string(name) + " must be a unit vector");
  }
}

}  // namespace

double spin_probability(const Vec4& u, const Vec3& v, const Vec3& w) {
  require_observer(u);
  require_unit(v, "v");
  require_unit(w, "w");
  const Vec4 a = u + rest_frame_vector(u, v);
  const Vec4 b = u + rest_frame_vector(u, w);
  return -0.5 * minkowski_inner(a, b);
}

double beta_decay_distribution(const Vec4& u, const Vec3& v, const Vec3& bdir) {
  require_observer(u);
  require_unit(bdir, "B direction");
  const Vec4 electron = boost_observer(u, v);
  const double contraction = std::sqrt(1.0 - v.squaredNorm());
  const Vec4 scaled = contraction * electron;
  return -minkowski_inner(scaled, Vec4(u + rest_frame_vector(u, bdir)));
}

}  // namespace biquat
