#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biquat/spectral.hpp"

namespace biquat {

using ParamPoint = std::vector<double>;
using CMatX = Eigen::MatrixXcd;
using CVecX = Eigen::VectorXcd;

enum class FieldKind { Example1, Example2, Example3, Example4, Example5, ExplicitSamples };
enum class ScalarField { Real, Complex };

const char* to_string(FieldKind k);

struct FieldSample {
  double t = 0.0;
  CMatX matrix;
};

// A map from a parameter space B to n x n matrices.
//
// Built-in kinds and their parameter coordinates:
//   Example1  t                 (1 t; 0 1)
//   Example2  t                 (1 f(t); f(-t) 1), f(t) = slope * max(t, 0)
//   Example3  (u, v, w)         (u v; v w)
//   Example4  (Re A1, Im A1, ..., Im A3)          F in S
//   Example5  (Re A0, Im A0, Re A1, ..., Im A3)   A0 I + F
// ExplicitSamples is parameterized by a scalar t and interpolates entrywise
// linearly between bracketing samples; a single sample is a constant field.
class MatrixField {
 public:
  static MatrixField example1();
  static MatrixField example2(double slope = 1.0);
  static MatrixField example3();
  static MatrixField example4();
  static MatrixField example5();
  static MatrixField explicit_samples(std::vector<FieldSample> samples, ScalarField scalars);

  // "example1" .. "example5".
  static MatrixField builtin(const std::string& name);

  FieldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int param_dim() const { return param_dim_; }
  ScalarField scalars() const { return scalars_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<FieldSample>& samples() const { return samples_; }
  std::string name() const;

  CMatX eval(const ParamPoint& p) const;

 private:
  FieldKind kind_ = FieldKind::Example1;
  int dim_ = 2;
  int param_dim_ = 1;
  ScalarField scalars_ = ScalarField::Real;
  std::vector<double> params_;
  std::vector<FieldSample> samples_;
};

// Parameter points of a polyline in B; closed paths repeat the first point
// at the end. Refinement subdivides segments linearly.
struct ParamPath {
  std::vector<ParamPoint> points;
  bool closed = false;

  void validate() const;
};

// Named paths used by the acceptance suite and the CLI.
//   builtin-linking   Example3 circle (cos t, sin t, -cos t) linking the line (u,0,u)
//   builtin-winding   Example4 A(t) = (1, i(1 - e^{it}/2), 0); A.A winds once around 0
//   builtin-null      Example4 A(t) = (cos t - i sin t, sin t + i cos t, 0), A.A = 0
//   builtin-b2        Example5 A0 = 1 + e^{it}/2, A = (A0, 0, 0): <A,A> = 0
//   builtin-crossing  Example3 segment (1, s, 1), s in [-1, 1], through the line
//   builtin-line      Example1/2 segment t in [-1, 1]
ParamPath builtin_path(const std::string& name, int samples);
std::vector<std::string> builtin_path_names();
// The field a named path is meant for ("example3" for builtin-linking, ...).
std::string builtin_path_field(const std::string& name);

struct TrackOptions {
  int max_depth = 20;
  double trigger_ratio = 3.0;
  // Eigenvalues closer than this are one cluster. Defaults to
  // 1e-8 * max(1, max |eigenvalue| on the path).
  std::optional<double> degeneracy_tol;
  // Principal-angle jump that triggers a degeneracy search between samples.
  double eigenspace_jump = 0.5;
};

struct DegeneracyEvent {
  ParamPoint location;
  ParamPoint bracket_lo;
  ParamPoint bracket_hi;
  std::size_t sample_index = 0;  // index of bracket_lo in the trace
  std::vector<int> branches;     // labels meeting at the event
  Complex eigenvalue{0.0, 0.0};
  int eigenspace_dim = 0;
};

struct TraceSample {
  ParamPoint point;
  std::vector<Complex> values;  // indexed by branch label
};

struct TraceResult {
  std::vector<TraceSample> samples;
  bool closed = false;
  // Label i ends on the base value of label monodromy[i]. Identity for open paths.
  std::vector<int> monodromy;
  // Eigenvalue clusters at the base point (label sets) and the permutation
  // the loop induces on them.
  std::vector<std::vector<int>> base_clusters;
  std::vector<int> cluster_monodromy;
  std::vector<DegeneracyEvent> degeneracies;
  int refinement_count = 0;
  double degeneracy_tol = 0.0;
};

// Eigenvalues of an n x n matrix: real Schur for real fields, complex Schur
// otherwise. Values within 10 sqrt(eps) max(1, ||M||) of each other are
// replaced by their mean, which resolves defective eigenvalues to rounding.
std::vector<Complex> eigenvalues_of(const CMatX& m, ScalarField scalars);

TraceResult track_eigenvalues(const MatrixField& field, const ParamPath& path,
                              const TrackOptions& opts = {});

std::vector<DegeneracyEvent> detect_degeneracies(const MatrixField& field, const ParamPath& path,
                                                 const TrackOptions& opts = {});

struct HolonomyResult {
  int branch = -1;        // -1 when a section was supplied instead of a branch
  Complex value{1.0, 0.0};
  int samples_used = 0;
  bool real = false;      // sign holonomy of a real line bundle
  int sign() const { return value.real() < 0.0 ? -1 : 1; }
};

// Transports a unit eigenvector of a simple branch around a closed loop with
// the gauge maximizing Re<v_prev, v>; returns the normalized closure overlap.
HolonomyResult line_holonomy(const MatrixField& field, const ParamPath& loop, int branch,
                             const TrackOptions& opts = {});

// Picks an eigenvector at a parameter point; the result spans the line.
using LineSection = std::function<CVecX(const ParamPoint&, const CMatX&)>;

// As line_holonomy, for a line field supplied by the caller. Each sampled
// vector must be an eigenvector of the field to 1e-9.
HolonomyResult line_holonomy_section(const MatrixField& field, const ParamPath& loop,
                                     const LineSection& section, const TrackOptions& opts = {});

struct S1Verdict {
  bool obstructed = false;
  std::vector<int> cluster_permutation;
  std::vector<int> label_permutation;
};

// A loop-level necessary condition: no continuous eigenvalue selection
// exists along a loop whose closure permutes the eigenvalue clusters.
S1Verdict s1_report(const TraceResult& trace);

// The factor relating the principal eigenvector seen by u and by the boosted
// observer u' = (u + w) / sqrt(1 - w^2).
double doppler_factor(const EMField& f, const Vec4& u, const Vec3& w);

}  // namespace biquat
