#include <doctest.h>

#include "biquat/alg_core.hpp"
#include "oracles.hpp"

using namespace biquat;

namespace {

const CMat4& basis(std::string_view label) {
  for (std::size_t k = 0; k < kBasisSize; ++k) {
    if (kBasisLabels[k] == label) return basis_16()[k];
  }
  throw std::out_of_range("no such basis label");
}

Biquat random_biquat(oracle::Rng& rng, Chirality c = Chirality::S) {
  return {rng.complex_normal(), rng.cvec3(), c};
}

}  // namespace

TEST_CASE("basis matrices are Hermitian involutions, traceless except I") {
  for (std::size_t k = 0; k < kBasisSize; ++k) {
    const CMat4& m = basis_16()[k];
    CAPTURE(kBasisLabels[k]);
    CHECK(m * m == CMat4::Identity());
    CHECK(m.adjoint() == m);
    if (kBasisLabels[k] == "I") {
      CHECK(m == CMat4::Identity());
    } else {
      CHECK(m.trace() == Complex(0.0));
    }
  }
}

TEST_CASE("xy = iz and xy = -yx hold exactly") {
  const CMat4& x = basis("x");
  const CMat4& y = basis("y");
  const CMat4& z = basis("z");
  CHECK(x * y == kI * z);
  CHECK(x * y == -(y * x));
}

TEST_CASE("the sixteen basis matrices are linearly independent") {
  Eigen::Matrix<Complex, 16, 16> cols;
  for (std::size_t k = 0; k < kBasisSize; ++k) {
    cols.col(static_cast<Eigen::Index>(k)) = Eigen::Map<const Eigen::Matrix<Complex, 16, 1>>(basis_16()[k].data());
  }
  CHECK(cols.fullPivLu().rank() == 16);
}

TEST_CASE("rep_matrix matches the entrywise display for both chiralities") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Biquat q = random_biquat(rng);
    const CVec3& a = q.vec();
    CHECK((rep_matrix(q) - oracle::dense_rep(q.a0(), a(0), a(1), a(2), -1.0)).norm() == 0.0);
    const Biquat qb(q.a0(), a, Chirality::SBar);
    CHECK((rep_matrix(qb) - oracle::dense_rep(q.a0(), a(0), a(1), a(2), +1.0)).norm() == 0.0);
  }
}

TEST_CASE("the unit vector (1,0,0) in S is the basis matrix x") {
  CHECK(rep_matrix(Biquat::pure(CVec3(1.0, 0.0, 0.0))) == basis("x"));
  const BasisDecomp d = decompose(basis("x"));
  for (std::size_t k = 0; k < kBasisSize; ++k) {
    CHECK(std::abs(d.coeffs[k] - (kBasisLabels[k] == "x" ? 1.0 : 0.0)) <= 1e-15);
  }
}

TEST_CASE("decompose and recompose are inverse") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    CMat4 m;
    for (int i = 0; i < 16; ++i) m.data()[i] = rng.complex_normal();
    const BasisDecomp d = decompose(m);
    CHECK((d.recompose() - m).norm() <= 1e-12 * m.norm());
    CHECK(d.coeff("I") == d.coeffs[15]);
  }
  CHECK_THROWS_AS(decompose(CMat4::Zero()).coeff("w"), Error);
}

TEST_CASE("S and SBar commute; anticommutator within S is 2 (A.B) I") {
  oracle::Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const CVec3 a = rng.cvec3();
    const CVec3 b = rng.cvec3();
    const CMat4 f = oracle::dense_rep(0.0, a(0), a(1), a(2), -1.0);
    const CMat4 g = oracle::dense_rep(0.0, b(0), b(1), b(2), -1.0);
    const CMat4 gbar = oracle::dense_rep(0.0, b(0), b(1), b(2), +1.0);
    const double scale = a.norm() * b.norm();
    CHECK((f * gbar - gbar * f).norm() <= 1e-13 * scale);
    const CMat4 anti = f * g + g * f;
    CHECK((anti - 2.0 * dot_bilinear(a, b) * CMat4::Identity()).norm() <= 1e-12 * scale);
    CHECK(std::abs(s_inner(f, g) - dot_bilinear(a, b)) <= 1e-13 * scale);
  }
}

TEST_CASE("closed-form product agrees with the matrix product") {
  oracle::Rng rng(14);
  for (Chirality c : {Chirality::S, Chirality::SBar}) {
    for (int trial = 0; trial < 200; ++trial) {
      const Biquat p = random_biquat(rng, c);
      const Biquat q = random_biquat(rng, c);
      const Biquat pq = biquat_mul(p, q);
      CHECK(pq.chirality() == c);
      const CMat4 dense = rep_matrix(p) * rep_matrix(q);
      CHECK((rep_matrix(pq) - dense).norm() <= 1e-12 * std::max(1.0, dense.norm()));
    }
  }
  CHECK_THROWS_AS(biquat_mul(Biquat::identity(Chirality::S), Biquat::identity(Chirality::SBar)), Error);
  try {
    biquat_mul(Biquat::identity(Chirality::S), Biquat::identity(Chirality::SBar));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ChiralityMismatch);
  }
}

TEST_CASE("conjugation and transposition swap chirality") {
  oracle::Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const Biquat q = random_biquat(rng);
    CHECK(conjugate(q).chirality() == Chirality::SBar);
    CHECK((rep_matrix(conjugate(q)) - rep_matrix(q).conjugate()).norm() <= 1e-15);
    CHECK((rep_matrix(transposed(q)) - rep_matrix(q).transpose()).norm() <= 1e-15);
  }
  CHECK(opposite(Chirality::S) == Chirality::SBar);
}

TEST_CASE("from_matrix inverts rep_matrix and rejects foreign matrices") {
  oracle::Rng rng(16);
  const Biquat q = random_biquat(rng);
  const Biquat back = from_matrix(rep_matrix(q), Chirality::S);
  CHECK(std::abs(back.a0() - q.a0()) <= 1e-15);
  CHECK((back.vec() - q.vec()).norm() <= 1e-15);
  CMat4 m;
  for (int i = 0; i < 16; ++i) m.data()[i] = rng.complex_normal();
  try {
    from_matrix(m, Chirality::S);
    FAIL("accepted a matrix outside I+S");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotInRepresentation);
  }
  // An SBar matrix is not in I+S.
  CHECK_THROWS_AS(from_matrix(rep_matrix(Biquat(0.0, q.vec(), Chirality::SBar)), Chirality::S), Error);
}

TEST_CASE("non-finite coordinates are rejected") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    Biquat(Complex(nan, 0.0), CVec3::Zero());
    FAIL("accepted NaN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
  }
}

TEST_CASE("quaternion norm and purity") {
  const Biquat q(2.0, CVec3(1.0, 1.0, 0.0));
  CHECK(q.vec_square() == Complex(2.0));
  CHECK(q.quat_norm() == Complex(2.0));
  CHECK_FALSE(q.is_pure());
  CHECK(Biquat::pure(CVec3(1.0, 0.0, 0.0)).is_pure());
  CHECK(rep_matrix(Biquat::identity()) == CMat4::Identity());
}
