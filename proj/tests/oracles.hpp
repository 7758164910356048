#pragma once

// Reference implementations that share no code with the library. They are
// slow and simple on purpose.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

inline constexpr cd I{0.0, 1.0};

// The 4x4 matrix a0 I + F written out entry by entry; sign = -1 for S
// (cross block carries -i), +1 for SBar.
inline Eigen::Matrix4cd dense_rep(cd a0, cd a1, cd a2, cd a3, double sign = -1.0) {
  const cd s = sign * I;
  Eigen::Matrix4cd m;
  m << a0, a1, a2, a3,
       a1, a0, s * a3, -s * a2,
       a2, -s * a3, a0, s * a1,
       a3, s * a2, -s * a1, a0;
  return m;
}

// Scaling and squaring with a long Taylor series.
inline CMat expm(const CMat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const CMat x = a / std::ldexp(1.0, squarings);
  CMat term = CMat::Identity(a.rows(), a.cols());
  CMat sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

inline RMat expm(const RMat& a) { return expm(CMat(a.cast<cd>())).real(); }

// Faddeev-LeVerrier: coefficients c[0..n] of det(lambda I - M), c[n] = 1.
inline std::vector<cd> char_poly(const CMat& m) {
  const auto n = m.rows();
  std::vector<cd> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0;
  CMat mk = CMat::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + c[static_cast<std::size_t>(n - k + 1)] * CMat::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

// Roots of a monic polynomial through its companion matrix.
inline std::vector<cd> companion_roots(const std::vector<cd>& c) {
  const auto n = static_cast<Eigen::Index>(c.size()) - 1;
  CMat comp = CMat::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) comp(k, n - 1) = -c[static_cast<std::size_t>(k)];
  Eigen::ComplexEigenSolver<CMat> solver(comp, false);
  return {solver.eigenvalues().data(), solver.eigenvalues().data() + n};
}

// Smallest max-distance matching between two small multisets.
inline double multiset_distance(const std::vector<cd>& a, std::vector<cd> b) {
  std::vector<int> p(b.size());
  std::iota(p.begin(), p.end(), 0);
  double best = INFINITY;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[static_cast<std::size_t>(p[i])]));
    best = std::min(best, worst);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

inline Eigen::Matrix4d eta() { return Eigen::Vector4d(-1, 1, 1, 1).asDiagonal(); }

// F = (0 E^T; E  v -> v x B) built entry by entry.
inline Eigen::Matrix4d field_matrix(const Eigen::Vector3d& e, const Eigen::Vector3d& b) {
  Eigen::Matrix4d f;
  f << 0, e(0), e(1), e(2),
       e(0), 0, b(2), -b(1),
       e(1), -b(2), 0, b(0),
       e(2), b(1), -b(0), 0;
  return f;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(gen); }
  cd complex_normal() { return {normal(), normal()}; }
  Eigen::Vector3d vec3(double scale = 1.0) { return scale * Eigen::Vector3d(normal(), normal(), normal()); }
  Eigen::Vector3cd cvec3(double scale = 1.0) {
    return scale * Eigen::Vector3cd(complex_normal(), complex_normal(), complex_normal());
  }
  Eigen::Vector3d unit3() { return vec3().normalized(); }
  // Uniform in the ball of the given radius.
  Eigen::Vector3d ball(double radius) { return radius * std::cbrt(uniform(0.0, 1.0)) * unit3(); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

// A random observer: boost of (1,0,0,0) by a velocity of speed < 0.9.
inline Eigen::Vector4d random_observer(Rng& rng) {
  const Eigen::Vector3d v = rng.ball(0.9);
  const double g = 1.0 / std::sqrt(1.0 - v.squaredNorm());
  return {g, g * v(0), g * v(1), g * v(2)};
}

}  // namespace oracle
