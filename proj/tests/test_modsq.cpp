#include <doctest.h>

#include "biquat/expmap.hpp"
#include "biquat/modsq.hpp"
#include "oracles.hpp"

using namespace biquat;

namespace {

Biquat random_lorentz_biquat(oracle::Rng& rng) {
  return exp_S(Biquat::pure(rng.cvec3(0.7)));
}

}  // namespace

TEST_CASE("modulus squared is multiplicative and real") {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const Biquat p(rng.complex_normal(), rng.cvec3());
    const Biquat q(rng.complex_normal(), rng.cvec3());
    const RMat4 lhs = modulus_squared(biquat_mul(p, q));
    const RMat4 rhs = modulus_squared(p) * modulus_squared(q);
    CHECK((lhs - rhs).norm() <= 1e-11 * std::max(1.0, rhs.norm()));
    const CMat4 full = modulus_squared_complex(p);
    CHECK(full.imag().norm() <= 1e-13 * std::max(1.0, full.norm()));
  }
}

TEST_CASE("the circle fiber does not change the image") {
  oracle::Rng rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const Biquat q(rng.complex_normal(), rng.cvec3());
    const Complex alpha = std::polar(1.0, rng.uniform(-3.2, 3.2));
    const RMat4 m = modulus_squared(q);
    CHECK((modulus_squared(q.scaled(alpha)) - m).norm() <= 1e-12 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("modulus squared of the biquaternion Lorentz group is proper Lorentz") {
  oracle::Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const Biquat l = random_lorentz_biquat(rng);
    CHECK(std::abs(l.quat_norm() - 1.0) <= 1e-12 * std::max(1.0, std::norm(l.a0())));
    const RMat4 L = modulus_squared(l);
    CHECK(is_proper_lorentz(L, 1e-9 * L.squaredNorm()) == LorentzClass::ProperOrthochronous);
  }
}

TEST_CASE("modulus squared requires chirality S") {
  try {
    modulus_squared(Biquat(1.0, CVec3::Zero(), Chirality::SBar));
    FAIL("accepted SBar");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ChiralityMismatch);
  }
}

TEST_CASE("energy-momentum tensor: energy density and Poynting vector") {
  oracle::Rng rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const EMField f{rng.vec3(), rng.vec3()};
    const RMat4 T = energy_momentum(f);
    const Vec4 te0 = T.col(0);
    const double energy = 0.5 * (f.E.squaredNorm() + f.B.squaredNorm());
    CHECK(std::abs(te0(0) - energy) <= 1e-13 * std::max(1.0, energy));
    CHECK((te0.tail<3>() - f.E.cross(f.B)).norm() <= 1e-13 * std::max(1.0, energy));
    // Spatial block is the Maxwell stress E_i E_j + B_i B_j - energy delta_ij,
    // so that the mixed tensor is traceless.
    const Eigen::Matrix3d stress =
        f.E * f.E.transpose() + f.B * f.B.transpose() - energy * Eigen::Matrix3d::Identity();
    CHECK(std::abs(T.trace()) <= 1e-12 * std::max(1.0, energy));
    CHECK((T.block<3, 3>(1, 1) - stress).norm() <= 1e-12 * std::max(1.0, energy));
  }
}

TEST_CASE("lift recovers a preimage with unit quaternion norm") {
  oracle::Rng rng(35);
  for (int trial = 0; trial < 300; ++trial) {
    const RMat4 L = modulus_squared(random_lorentz_biquat(rng));
    const Biquat l = lift_lorentz(L);
    CHECK((modulus_squared(l) - L).norm() <= 1e-9 * std::max(1.0, L.norm()));
    CHECK(std::abs(l.quat_norm() - 1.0) <= 1e-10);
    CHECK(l.a0().real() >= 0.0);
  }
  CHECK((lift_lorentz(RMat4::Identity()).a0() - 1.0) == Complex(0.0));
}

TEST_CASE("lift rejects matrices outside the proper Lorentz group") {
  for (const RMat4& bad : {RMat4(Vec4(1, -1, 1, 1).asDiagonal()), RMat4(2.0 * RMat4::Identity())}) {
    try {
      lift_lorentz(bad);
      FAIL("lifted a non-proper matrix");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotProperLorentz);
    }
  }
}

TEST_CASE("nullquat images are rank one along a null direction") {
  oracle::Rng rng(36);
  for (int trial = 0; trial < 50; ++trial) {
    // a^2 = A.A: pick A, then a = sqrt(A.A).
    const CVec3 a = rng.cvec3();
    const Biquat q(std::sqrt(dot_bilinear(a, a)), a);
    const NullquatImage img = nullquat_image(q);
    CHECK(img.rank == 1);
    CHECK_FALSE(img.degenerate);
    CHECK(img.direction(0) == doctest::Approx(1.0));
    CHECK(std::abs(minkowski_inner(img.direction, img.direction)) <= 1e-9);
  }
  CHECK(nullquat_image(Biquat(0.0, CVec3::Zero())).degenerate);
  try {
    nullquat_image(Biquat::identity());
    FAIL("identity accepted as a nullquat");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotNullquat);
  }
}

TEST_CASE("numerical rank") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  CHECK(numerical_rank(m) == 0);
  m(0, 0) = 1.0;
  m(1, 1) = 1e-12;
  CHECK(numerical_rank(m) == 1);
  m(1, 1) = 1e-3;
  CHECK(numerical_rank(m) == 2);
}
