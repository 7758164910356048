#include <doctest.h>

#include <numbers>

#include "biquat/spectral.hpp"
#include "oracles.hpp"

using namespace biquat;

namespace {

// s = Phi u with Phi = (l I + cF)(conj(l) I + cbarF), built from the
// entrywise matrices.
Vec4 phi_oracle(const EMField& f, const Vec4& u, Complex lambda_cf) {
  const CVec3 a = f.complex_vector();
  const CMat4 cf = oracle::dense_rep(0.0, a(0), a(1), a(2), -1.0);
  const CMat4 phi = (lambda_cf * CMat4::Identity() + cf) *
                    (std::conj(lambda_cf) * CMat4::Identity() + cf.conjugate());
  return (phi * u.cast<Complex>()).real();
}

EMField random_field(oracle::Rng& rng) {
  switch (rng.integer(0, 3)) {
    case 0: {  // null: |E| = |B|, E.B = 0
      const Vec3 e = rng.vec3();
      Vec3 b = rng.vec3();
      b = (b - b.dot(e) / e.squaredNorm() * e).normalized() * e.norm();
      return {e, b};
    }
    case 1: return {rng.vec3(), Vec3::Zero()};
    default: return {rng.vec3(), rng.vec3()};
  }
}

}  // namespace

TEST_CASE("eigenvalues of a pure electric field") {
  const EigenData d = eigenvalues_em({Vec3(1, 0, 0), Vec3::Zero()});
  CHECK(d.lambda_T == 0.5);
  CHECK(d.lambda_F == 1.0);
  CHECK(d.lambda_Fstar == 0.0);
}

TEST_CASE("closed-form eigenvalues square correctly") {
  oracle::Rng rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const EMField f = random_field(rng);
    const EigenData d = eigenvalues_em(f);
    const double scale = std::max(1.0, f.E.squaredNorm() + f.B.squaredNorm());
    CHECK(d.lambda_F >= 0.0);
    CHECK(std::abs(d.lambda_F * d.lambda_F - d.lambda_Fstar * d.lambda_Fstar -
                   (f.E.squaredNorm() - f.B.squaredNorm())) <= 1e-12 * scale);
    CHECK(std::abs(d.lambda_F * d.lambda_Fstar + f.E.dot(f.B)) <= 1e-12 * scale);
    CHECK(std::abs(d.lambda_cF * d.lambda_cF - dot_bilinear(f.complex_vector(), f.complex_vector())) <=
          1e-12 * scale);
    CHECK(std::abs(2.0 * d.lambda_T - (d.lambda_F * d.lambda_F + d.lambda_Fstar * d.lambda_Fstar)) <=
          1e-12 * scale);
  }
}

TEST_CASE("joint eigenvector for arbitrary observers") {
  oracle::Rng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const EMField f = random_field(rng);
    const Vec4 u = trial % 2 ? oracle::random_observer(rng) : default_observer();
    const EigenData d = eigenvalues_em(f);
    const FieldMatrices m = field_matrices(f);
    for (double sign : {1.0, -1.0}) {
      const Vec4 s = (sign > 0 ? principal_eigenvector(f, u) : negative_eigenvector(f, u)).s;
      const double scale = s.norm();
      CHECK(scale > 0.0);
      CHECK((m.F * s - sign * d.lambda_F * s).norm() <= 1e-9 * scale * std::max(1.0, d.lambda_F));
      CHECK((m.Fstar * s - sign * d.lambda_Fstar * s).norm() <= 1e-9 * scale * std::max(1.0, d.lambda_F));
      CHECK((energy_momentum(f) * s - d.lambda_T * s).norm() <= 1e-9 * scale * std::max(1.0, d.lambda_T));
      const Complex l = sign > 0 ? d.lambda_cF : -d.lambda_cF;
      CHECK((s - phi_oracle(f, u, l)).norm() <= 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("observed field for the rest observer is (0,E), (0,B), (0,E x B)") {
  const EMField f{Vec3(1, 2, 3), Vec3(-1, 0.5, 2)};
  const ObservedField o = observe(f, default_observer());
  CHECK((o.E - Vec4(0, 1, 2, 3)).norm() <= 1e-15);
  CHECK((o.B - Vec4(0, -1, 0.5, 2)).norm() <= 1e-15);
  const Vec3 s = f.E.cross(f.B);
  CHECK((o.poynting - Vec4(0, s(0), s(1), s(2))).norm() <= 1e-14);
  CHECK(o.energy == doctest::Approx(0.5 * (14.0 + 5.25)));
}

TEST_CASE("zero field has no distinguished eigenvector") {
  CHECK(principal_eigenvector(EMField{}, default_observer()).degenerate);
}

TEST_CASE("classification keyed on A.A") {
  CHECK(classify(Biquat(2.0, CVec3::Zero())) == SpectralCase::ScalarOnly);
  CHECK(classify(Biquat(0.0, CVec3(1.0, kI, 0.0))) == SpectralCase::NullDegenerate);
  CHECK(classify(Biquat(0.0, CVec3(1.0, 0.0, 0.0))) == SpectralCase::TwoEigenvaluesGeneric);
  CHECK(std::string(to_string(SpectralCase::NullDegenerate)) == "NullDegenerate");
}

TEST_CASE("eigenspace bases span two-dimensional eigenspaces") {
  oracle::Rng rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    CVec3 a = rng.cvec3();
    if (trial % 4 == 0) a = CVec3(1.0, kI, 0.0) * rng.complex_normal();  // null
    const Biquat q(rng.complex_normal(), a);
    const CMat4 m = rep_matrix(q);
    const Complex root = classify(q) == SpectralCase::NullDegenerate ? Complex(0.0) : std::sqrt(q.vec_square());
    for (Complex lambda : {q.a0() + root, q.a0() - root}) {
      const EigenspaceBasis b = eigenspace_basis(q, lambda);
      CHECK((m * b.first - lambda * b.first).norm() <= 1e-10 * std::max(1.0, m.norm()));
      CHECK((m * b.second - lambda * b.second).norm() <= 1e-10 * std::max(1.0, m.norm()));
      Eigen::Matrix<Complex, 4, 2> pair;
      pair << b.first, b.second;
      CHECK(numerical_rank(pair) == 2);
    }
  }
  try {
    eigenspace_basis(Biquat(0.0, CVec3(1.0, 0.0, 0.0)), 0.5);
    FAIL("accepted a non-eigenvalue");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAnEigenvalue);
  }
  CHECK(eigenspace_basis(Biquat(3.0, CVec3::Zero()), 3.0).degenerate_scalar);
}

TEST_CASE("spin probability is sin^2 of half the angle") {
  for (int k = 0; k <= 64; ++k) {
    const double theta = std::numbers::pi * k / 64.0;
    const double p = spin_probability(default_observer(), Vec3(0, 0, 1), Vec3(std::sin(theta), 0, std::cos(theta)));
    CHECK(std::abs(p - std::pow(std::sin(theta / 2.0), 2)) <= 1e-12);
  }
  try {
    spin_probability(default_observer(), Vec3(0, 0, 2), Vec3(0, 0, 1));
    FAIL("accepted a non-unit direction");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotUnitSpatial);
  }
}

TEST_CASE("beta decay distribution is 1 - v cos(theta)") {
  for (double v : {0.0, 0.3, 0.9}) {
    for (int k = 0; k <= 32; ++k) {
      const double theta = std::numbers::pi * k / 32.0;
      const double value =
          beta_decay_distribution(default_observer(), Vec3(v * std::sin(theta), 0, v * std::cos(theta)), Vec3(0, 0, 1));
      CHECK(std::abs(value - (1.0 - v * std::cos(theta))) <= 1e-12);
    }
  }
}

TEST_CASE("null fields give a null eigenvector") {
  const JointEigenvector v = principal_eigenvector({Vec3(1, 0, 0), Vec3(0, 1, 0)}, default_observer());
  CHECK((v.s - Vec4(2, 0, 0, 2)).norm() <= 1e-15);
  oracle::Rng rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec3 e = rng.vec3();
    const Vec3 b = e.cross(rng.unit3()).normalized() * e.norm();
    const EMField f{e, b};
    const Vec4 u = oracle::random_observer(rng);
    const Vec4 s = principal_eigenvector(f, u).s;
    CHECK(std::abs(s.dot(oracle::eta() * s)) <= 1e-10 * s.squaredNorm());
  }
  // Exactly null fields: both signs collapse to the single null direction.
  // (Rounded null fields sit sqrt(eps) off the cone in lambda_F.)
  const std::pair<Vec3, Vec3> exact[] = {{Vec3(3, 4, 0), Vec3(0, 0, 5)},
                                         {Vec3(1, 2, 2), Vec3(2, 1, -2)},
                                         {Vec3(0, -2, 0), Vec3(2, 0, 0)}};
  for (const auto& [e, b] : exact) {
    for (int k = 0; k < 20; ++k) {
      const Vec4 u = oracle::random_observer(rng);
      const Vec4 s = principal_eigenvector({e, b}, u).s;
      CHECK((negative_eigenvector({e, b}, u).s - s).norm() <= 1e-12 * s.norm());
    }
  }
}

TEST_CASE("spin probability is symmetric and rotation invariant") {
  oracle::Rng rng(45);
  for (int trial = 0; trial < 300; ++trial) {
    const Vec3 v = rng.unit3();
    const Vec3 w = rng.unit3();
    const Eigen::Matrix3d r = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(), rng.normal())
                                  .normalized()
                                  .toRotationMatrix();
    const double p = spin_probability(default_observer(), v, w);
    CHECK(std::abs(p - spin_probability(default_observer(), w, v)) <= 1e-12);
    CHECK(std::abs(p - spin_probability(default_observer(), r * v, r * w)) <= 1e-12);
  }
}
