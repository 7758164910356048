#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace biquat {

using Complex = std::complex<double>;
using CMat4 = Eigen::Matrix4cd;
using RMat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Vec4 = Eigen::Vector4d;
using CVec4 = Eigen::Vector4cd;

inline constexpr Complex kI{0.0, 1.0};

enum class ErrorCode {
  NonFinite,
  ChiralityMismatch,
  NotInRepresentation,
  NotAnObserver,
  SpeedNotSubluminal,
  NotUnitSpatial,
  NotAnEigenvalue,
  NotPure,
  NotSkew,
  NotBiquatLorentz,
  NotExponentialInS,
  NotProperLorentz,
  LiftFailed,
  NotNullquat,
  OutOfDomain,
  InvalidPath,
  RefinementExhausted,
  BranchDegenerate,
  ZeroField,
  InvalidInput,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Complex-bilinear dot product (no conjugation).
inline Complex dot_bilinear(const CVec3& a, const CVec3& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

// Complex-bilinear cross product. Eigen's cross() conjugates complex results.
inline CVec3 cross_bilinear(const CVec3& a, const CVec3& b) {
  return {a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0)};
}

}  // namespace biquat
