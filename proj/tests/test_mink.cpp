#include <doctest.h>

#include "biquat/mink.hpp"
#include "oracles.hpp"

using namespace biquat;

TEST_CASE("field matrices match their entrywise forms") {
  oracle::Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    EMField f{rng.vec3(), rng.vec3()};
    const FieldMatrices m = field_matrices(f);
    CHECK((m.F - oracle::field_matrix(f.E, f.B)).norm() == 0.0);
    CHECK((m.Fstar - oracle::field_matrix(-f.B, f.E)).norm() == 0.0);
    const CVec3 a = f.complex_vector();
    CHECK((m.cF - oracle::dense_rep(0.0, a(0), a(1), a(2), -1.0)).norm() <= 1e-15 * a.norm());
    CHECK((m.cbarF - m.cF.conjugate()).norm() == 0.0);
    CHECK((m.cF - (m.F.cast<Complex>() - kI * m.Fstar.cast<Complex>())).norm() <= 1e-15 * a.norm());
  }
}

TEST_CASE("the dual of the dual is minus the field") {
  const EMField f{Vec3(1.0, -2.0, 0.5), Vec3(0.3, 0.0, 4.0)};
  const EMField dual{-f.B, f.E};
  CHECK((field_matrices(dual).Fstar + field_matrices(f).F).norm() == 0.0);
}

TEST_CASE("field matrices are Minkowski-skew and read back") {
  oracle::Rng rng(22);
  for (int trial = 0; trial < 50; ++trial) {
    EMField f{rng.vec3(), rng.vec3()};
    const RMat4 F = field_matrices(f).F;
    CHECK(skew_residual(F) == 0.0);
    const EMField back = field_from_matrix(F);
    CHECK((back.E - f.E).norm() == 0.0);
    CHECK((back.B - f.B).norm() == 0.0);
  }
  CHECK(skew_residual(RMat4::Identity()) > 1.0);
}

TEST_CASE("Lorentz classification") {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const RMat4 L = oracle::expm(Eigen::MatrixXd(oracle::field_matrix(rng.vec3(), rng.vec3())));
    CHECK(is_proper_lorentz(L, 1e-9 * L.squaredNorm()) == LorentzClass::ProperOrthochronous);
  }
  CHECK(is_proper_lorentz(Vec4(1, -1, 1, 1).asDiagonal(), 1e-12) == LorentzClass::OtherComponent);
  CHECK(is_proper_lorentz(Vec4(-1, 1, 1, 1).asDiagonal(), 1e-12) == LorentzClass::OtherComponent);
  CHECK(is_proper_lorentz(2.0 * RMat4::Identity(), 1e-12) == LorentzClass::NotLorentz);
  CHECK(std::string(to_string(LorentzClass::ProperOrthochronous)) == "ProperOrthochronous");
}

TEST_CASE("observers and rest frames") {
  oracle::Rng rng(24);
  CHECK(default_observer() == Vec4(1, 0, 0, 0));
  CHECK(rest_frame_vector(default_observer(), Vec3(0.1, 0.2, 0.3)) == Vec4(0, 0.1, 0.2, 0.3));
  for (int trial = 0; trial < 100; ++trial) {
    const Vec4 u = oracle::random_observer(rng);
    const RMat4 frame = observer_frame(u);
    CHECK((frame.col(0) - u).norm() <= 1e-14 * u.norm());
    CHECK(is_proper_lorentz(frame, 1e-9 * frame.squaredNorm()) == LorentzClass::ProperOrthochronous);
    const Vec3 w = rng.ball(0.95);
    const Vec4 wv = rest_frame_vector(u, w);
    CHECK(std::abs(minkowski_inner(u, wv)) <= 1e-13 * u.squaredNorm());
    CHECK(std::abs(minkowski_inner(wv, wv) - w.squaredNorm()) <= 1e-12 * u.squaredNorm());
    const Vec4 moved = boost_observer(u, w);
    CHECK(std::abs(minkowski_inner(moved, moved) + 1.0) <= 1e-11 * moved.squaredNorm());
  }
}

TEST_CASE("observer and speed validation") {
  try {
    require_observer(Vec4(1, 1, 0, 0));
    FAIL("accepted a null vector as observer");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAnObserver);
  }
  try {
    boost_observer(default_observer(), Vec3(1.0, 0.0, 0.0));
    FAIL("accepted the speed of light");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SpeedNotSubluminal);
  }
}

TEST_CASE("complex Minkowski form is bilinear") {
  const CVec4 a(kI, 1.0, 0.0, 0.0);
  CHECK(minkowski_inner(a, a) == Complex(2.0));
}
