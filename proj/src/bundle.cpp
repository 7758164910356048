#include "biquat/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace biquat {

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Example1: return "example1";
    case FieldKind::Example2: return "example2";
    case FieldKind::Example3: return "example3";
    case FieldKind::Example4: return "example4";
    case FieldKind::Example5: return "example5";
    case FieldKind::ExplicitSamples: return "explicit";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Fields

MatrixField MatrixField::example1() {
  MatrixField f;
  f.kind_ = FieldKind::Example1;
  return f;
}

MatrixField MatrixField::example2(double slope) {
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw Error(ErrorCode::InvalidInput, "example2 slope must be positive");
  }
  MatrixField f;
  f.kind_ = FieldKind::Example2;
  f.params_ = {slope};
  return f;
}

MatrixField MatrixField::example3() {
  MatrixField f;
  f.kind_ = FieldKind::Example3;
  f.param_dim_ = 3;
  return f;
}

MatrixField MatrixField::example4() {
  MatrixField f;
  f.kind_ = FieldKind::Example4;
  f.dim_ = 4;
  f.param_dim_ = 6;
  f.scalars_ = ScalarField::Complex;
  return f;
}

MatrixField MatrixField::example5() {
  MatrixField f;
  f.kind_ = FieldKind::Example5;
  f.dim_ = 4;
  f.param_dim_ = 8;
  f.scalars_ = ScalarField::Complex;
  return f;
}

MatrixField MatrixField::explicit_samples(std::vector<FieldSample> samples, ScalarField scalars) {
  if (samples.empty()) throw Error(ErrorCode::InvalidInput, "explicit field needs samples");
  const auto n = samples.front().matrix.rows();
  for (const auto& s : samples) {
    if (s.matrix.rows() != n || s.matrix.cols() != n || n == 0) {
      throw Error(ErrorCode::InvalidInput, "explicit samples must be square and of one size");
    }
    if (!s.matrix.allFinite() || !std::isfinite(s.t)) {
      throw Error(ErrorCode::NonFinite, "explicit sample is not finite");
    }
  }
  std::sort(samples.begin(), samples.end(),
            [](const FieldSample& a, const FieldSample& b) { return a.t < b.t; });
  MatrixField f;
  f.kind_ = FieldKind::ExplicitSamples;
  f.dim_ = static_cast<int>(n);
  f.scalars_ = scalars;
  f.samples_ = std::move(samples);
  return f;
}

MatrixField MatrixField::builtin(const std::string& name) {
  if (name == "example1") return example1();
  if (name == "example2") return example2();
  if (name == "example3") return example3();
  if (name == "example4") return example4();
  if (name == "example5") return example5();
  throw Error(ErrorCode::InvalidInput, "unknown built-in field '" + name + "'");
}

std::string MatrixField::name() const { return to_string(kind_); }

namespace {

CVec3 complex_triple(const ParamPoint& p, std::size_t offset) {
  return {Complex(p[offset], p[offset + 1]), Complex(p[offset + 2], p[offset + 3]),
          Complex(p[offset + 4], p[offset + 5])};
}

}  // namespace

CMatX MatrixField::eval(const ParamPoint& p) const {
  if (static_cast<int>(p.size()) != param_dim_) {
    std::ostringstream os;
    os << name() << " takes " << param_dim_ << " parameter coordinates, got " << p.size();
    throw Error(ErrorCode::OutOfDomain, os.str());
  }
  for (double c : p) {
    if (!std::isfinite(c)) throw Error(ErrorCode::OutOfDomain, "parameter point is not finite");
  }
  CMatX m(dim_, dim_);
  switch (kind_) {
    case FieldKind::Example1:
      m << 1.0, p[0], 0.0, 1.0;
      return m;
    case FieldKind::Example2: {
      const double up = params_[0] * std::max(p[0], 0.0);
      const double down = params_[0] * std::max(-p[0], 0.0);
      m << 1.0, up, down, 1.0;
      return m;
    }
    case FieldKind::Example3:
      m << p[0], p[1], p[1], p[2];
      return m;
    case FieldKind::Example4:
      return rep_matrix(Biquat::pure(complex_triple(p, 0)));
    case FieldKind::Example5:
      return rep_matrix(Biquat(Complex(p[0], p[1]), complex_triple(p, 2)));
    case FieldKind::ExplicitSamples: {
      if (samples_.size() == 1) return samples_.front().matrix;
      const double t = p[0];
      const double lo = samples_.front().t;
      const double hi = samples_.back().t;
      const double slack = 1e-12 * std::max(1.0, hi - lo);
      if (t < lo - slack || t > hi + slack) {
        std::ostringstream os;
        os << "t = " << t << " outside [" << lo << ", " << hi << "]";
        throw Error(ErrorCode::OutOfDomain, os.str());
      }
      auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                 [](double v, const FieldSample& s) { return v < s.t; });
      if (it == samples_.begin()) return samples_.front().matrix;
      if (it == samples_.end()) return samples_.back().matrix;
      const FieldSample& b = *it;
      const FieldSample& a = *(it - 1);
      const double s = (t - a.t) / (b.t - a.t);
      return (1.0 - s) * a.matrix + s * b.matrix;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Paths

void ParamPath::validate() const {
  if (points.size() < 2) throw Error(ErrorCode::InvalidPath, "a path needs at least 2 points");
  const auto d = points.front().size();
  for (const auto& p : points) {
    if (p.size() != d) throw Error(ErrorCode::InvalidPath, "path points differ in dimension");
    for (double c : p) {
      if (!std::isfinite(c)) throw Error(ErrorCode::InvalidPath, "path point is not finite");
    }
  }
  if (closed) {
    double gap = 0.0;
    for (std::size_t k = 0; k < d; ++k) gap = std::max(gap, std::abs(points.front()[k] - points.back()[k]));
    if (gap > 1e-12) throw Error(ErrorCode::InvalidPath, "closed path must end at its first point");
  }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ParamPath loop_from(int samples, const std::function<ParamPoint(double)>& at) {
  if (samples < 3) throw Error(ErrorCode::InvalidPath, "a loop needs at least 3 samples");
  ParamPath path;
  path.closed = true;
  for (int k = 0; k < samples; ++k) path.points.push_back(at(kTwoPi * k / samples));
  path.points.push_back(path.points.front());
  return path;
}

ParamPath segment_from(int samples, const std::function<ParamPoint(double)>& at) {
  if (samples < 2) throw Error(ErrorCode::InvalidPath, "a path needs at least 2 samples");
  ParamPath path;
  for (int k = 0; k < samples; ++k) path.points.push_back(at(-1.0 + 2.0 * k / (samples - 1)));
  return path;
}

}  // namespace

std::vector<std::string> builtin_path_names() {
  return {"builtin-linking", "builtin-winding", "builtin-null",
          "builtin-b2",      "builtin-crossing", "builtin-line"};
}

std::string builtin_path_field(const std::string& name) {
  if (name == "builtin-linking" || name == "builtin-crossing") return "example3";
  if (name == "builtin-winding" || name == "builtin-null") return "example4";
  if (name == "builtin-b2") return "example5";
  if (name == "builtin-line") return "example2";
  throw Error(ErrorCode::InvalidInput, "unknown built-in path '" + name + "'");
}

ParamPath builtin_path(const std::string& name, int samples) {
  if (name == "builtin-linking") {
    return loop_from(samples, [](double t) { return ParamPoint{std::cos(t), std::sin(t), -std::cos(t)}; });
  }
  if (name == "builtin-winding") {
    return loop_from(samples, [](double t) {
      // A2 = i (1 - e^{it}/2) = sin(t)/2 + i (1 - cos(t)/2)
      return ParamPoint{1.0, 0.0, 0.5 * std::sin(t), 1.0 - 0.5 * std::cos(t), 0.0, 0.0};
    });
  }
  if (name == "builtin-null") {
    return loop_from(samples, [](double t) {
      return ParamPoint{std::cos(t), -std::sin(t), std::sin(t), std::cos(t), 0.0, 0.0};
    });
  }
  if (name == "builtin-b2") {
    return loop_from(samples, [](double t) {
      const double re = 1.0 + 0.5 * std::cos(t);
      const double im = 0.5 * std::sin(t);
      return ParamPoint{re, im, re, im, 0.0, 0.0, 0.0, 0.0};
    });
  }
  if (name == "builtin-crossing") {
    return segment_from(samples, [](double s) { return ParamPoint{1.0, s, 1.0}; });
  }
  if (name == "builtin-line") {
    return segment_from(samples, [](double t) { return ParamPoint{t}; });
  }
  throw Error(ErrorCode::InvalidInput, "unknown built-in path '" + name + "'");
}

// ---------------------------------------------------------------------------
// Spectral helpers

namespace {

std::vector<int> cluster_ids(const std::vector<Complex>& values, double tol);

// A k-fold defective eigenvalue comes back from a backward-stable solver as a
// ring of radius ~ eps^(1/k); the ring's mean is accurate to rounding. Values
// closer than the double-root resolution are therefore replaced by their mean.
void merge_unresolved(std::vector<Complex>& values, const CMatX& m) {
  const double radius =
      10.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, m.norm());
  const auto ids = cluster_ids(values, radius);
  std::map<int, std::pair<Complex, int>> sums;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto& [sum, count] = sums[ids[i]];
    sum += values[i];
    ++count;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& [sum, count] = sums[ids[i]];
    if (count > 1) values[i] = sum / static_cast<double>(count);
  }
}

}  // namespace

std::vector<Complex> eigenvalues_of(const CMatX& m, ScalarField scalars) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m.rows()));
  if (scalars == ScalarField::Real) {
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(m.real(), false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidInput, "eigensolver failed");
    for (Eigen::Index k = 0; k < m.rows(); ++k) out.push_back(solver.eigenvalues()(k));
  } else {
    const Eigen::ComplexEigenSolver<CMatX> solver(m, false);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::InvalidInput, "eigensolver failed");
    for (Eigen::Index k = 0; k < m.rows(); ++k) out.push_back(solver.eigenvalues()(k));
  }
  merge_unresolved(out, m);
  return out;
}

namespace {

ParamPoint lerp(const ParamPoint& a, const ParamPoint& b, double s) {
  ParamPoint out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + s * (b[k] - a[k]);
  return out;
}

double distance(const ParamPoint& a, const ParamPoint& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

std::string describe(const ParamPoint& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < p.size(); ++k) os << (k ? ", " : "") << p[k];
  os << ")";
  return os.str();
}

// assign[i] = index into `to` for entry i of `from`, minimizing sum |delta|.
// Exhaustive for n <= 8; ties keep the first permutation in lexicographic
// order.
std::vector<int> best_assignment(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  const int n = static_cast<int>(from.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  auto cost = [&](const std::vector<int>& p) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) c += std::abs(from[static_cast<std::size_t>(i)] - to[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])]);
    return c;
  };
  if (n > 8) {
    // Greedy nearest matching beyond the exhaustive range.
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int i = 0; i < n; ++i) {
      int best = -1;
      for (int j = 0; j < n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        if (best < 0 || std::abs(from[static_cast<std::size_t>(i)] - to[static_cast<std::size_t>(j)]) <
                            std::abs(from[static_cast<std::size_t>(i)] - to[static_cast<std::size_t>(best)])) {
          best = j;
        }
      }
      perm[static_cast<std::size_t>(i)] = best;
      used[static_cast<std::size_t>(best)] = true;
    }
    return perm;
  }
  double scale = 1.0;
  for (const auto& z : from) scale = std::max(scale, std::abs(z));
  const double tie = 1e-12 * scale;
  std::vector<int> best = perm;
  double best_cost = cost(perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = cost(perm);
    if (c < best_cost - tie) {
      best_cost = c;
      best = perm;
    }
  }
  return best;
}

std::vector<Complex> apply_assignment(const std::vector<Complex>& raw, const std::vector<int>& assign) {
  std::vector<Complex> out(assign.size());
  for (std::size_t i = 0; i < assign.size(); ++i) out[i] = raw[static_cast<std::size_t>(assign[i])];
  return out;
}

// Single-linkage clusters; ids are numbered by first occurrence.
std::vector<int> cluster_ids(const std::vector<Complex>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<int> id(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (id[i] >= 0) continue;
    id[i] = next;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < n; ++b) {
        if (id[b] < 0 && std::abs(values[a] - values[b]) <= tol) {
          id[b] = next;
          stack.push_back(b);
        }
      }
    }
    ++next;
  }
  return id;
}

std::vector<std::vector<int>> group_clusters(const std::vector<int>& ids) {
  const int count = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < ids.size(); ++i) groups[static_cast<std::size_t>(ids[i])].push_back(static_cast<int>(i));
  return groups;
}

Complex cluster_mean(const std::vector<Complex>& values, const std::vector<int>& members) {
  Complex s = 0.0;
  for (int m : members) s += values[static_cast<std::size_t>(m)];
  return s / static_cast<double>(members.size());
}

double max_abs(const std::vector<Complex>& values) {
  double m = 0.0;
  for (const auto& z : values) m = std::max(m, std::abs(z));
  return m;
}

// Orthonormal basis of ker(M - lambda I), singular values <= rank_tol count as zero.
CMatX eigenspace(const CMatX& m, Complex lambda, double rank_tol) {
  const CMatX shifted = m - lambda * CMatX::Identity(m.rows(), m.cols());
  const Eigen::JacobiSVD<CMatX> svd(shifted, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > rank_tol) ++rank;
  }
  return svd.matrixV().rightCols(m.cols() - rank);
}

double rank_tolerance(const CMatX& m, double cluster_tol) {
  return std::max(cluster_tol, 1e-9 * std::max(1.0, m.norm()));
}

// Largest principal-angle sine between the smaller subspace and the larger.
double subspace_jump(const CMatX& a, const CMatX& b) {
  if (a.cols() == 0 || b.cols() == 0) return 1.0;
  const CMatX& small = a.cols() <= b.cols() ? a : b;
  const CMatX& big = a.cols() <= b.cols() ? b : a;
  const CMatX residual = small - big * (big.adjoint() * small);
  return residual.jacobiSvd().singularValues()(0);
}

std::string describe_interval(const ParamPoint& a, const ParamPoint& b) {
  return "[" + describe(a) + ", " + describe(b) + "]";
}

class Tracker {
 public:
  Tracker(const MatrixField& field, const TrackOptions& opts, double tol)
      : field_(field), opts_(opts), tol_(tol) {}

  void start(const ParamPoint& p) {
    samples_.push_back({p, eigenvalues_of(field_.eval(p), field_.scalars())});
  }

  void advance(const ParamPoint& target, int depth) {
    const TraceSample prev = samples_.back();
    const auto raw = eigenvalues_of(field_.eval(target), field_.scalars());
    auto next = apply_assignment(raw, best_assignment(prev.values, raw));
    if (ambiguous(prev.values, next)) {
      if (depth >= opts_.max_depth) {
        throw Error(ErrorCode::RefinementExhausted,
                    "branch matching stays ambiguous on " + describe_interval(prev.point, target));
      }
      ++refinements_;
      advance(lerp(prev.point, target, 0.5), depth + 1);
      advance(target, depth + 1);
      return;
    }
    samples_.push_back({target, std::move(next)});
  }

  std::vector<TraceSample>& samples() { return samples_; }
  int refinements() const { return refinements_; }

 private:
  // Ambiguous when the smallest gap between eigenvalues of different clusters
  // is below trigger_ratio times the largest movement.
  bool ambiguous(const std::vector<Complex>& a, const std::vector<Complex>& b) const {
    const auto ca = cluster_ids(a, tol_);
    const auto cb = cluster_ids(b, tol_);
    double move = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) move = std::max(move, std::abs(a[i] - b[i]));
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = i + 1; j < a.size(); ++j) {
        if (ca[i] == ca[j] || cb[i] == cb[j]) continue;
        gap = std::min({gap, std::abs(a[i] - a[j]), std::abs(b[i] - b[j])});
      }
    }
    return gap < opts_.trigger_ratio * move;
  }

  const MatrixField& field_;
  TrackOptions opts_;
  double tol_;
  int refinements_ = 0;
  std::vector<TraceSample> samples_;
};

double path_tolerance(const MatrixField& field, const ParamPath& path, const TrackOptions& opts) {
  if (opts.degeneracy_tol) {
    if (!(*opts.degeneracy_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "degeneracy tolerance must be positive");
    return *opts.degeneracy_tol;
  }
  double scale = 1.0;
  for (const auto& p : path.points) scale = std::max(scale, max_abs(eigenvalues_of(field.eval(p), field.scalars())));
  return 1e-8 * scale;
}

// Per-sample cluster structure used by degeneracy detection.
struct SampleSpectrum {
  std::vector<int> ids;
  std::vector<std::vector<int>> clusters;
  std::vector<CMatX> spaces;  // per cluster
};

SampleSpectrum analyze(const CMatX& m, const std::vector<Complex>& values, double tol) {
  SampleSpectrum s;
  s.ids = cluster_ids(values, tol);
  s.clusters = group_clusters(s.ids);
  const double rank_tol = rank_tolerance(m, tol);
  for (const auto& c : s.clusters) s.spaces.push_back(eigenspace(m, cluster_mean(values, c), rank_tol));
  return s;
}

class DegeneracyFinder {
 public:
  DegeneracyFinder(const MatrixField& field, const std::vector<TraceSample>& samples, bool closed,
                   double tol, const TrackOptions& opts)
      : field_(field), samples_(samples), closed_(closed), tol_(tol), opts_(opts) {}

  std::vector<DegeneracyEvent> run() {
    const std::size_t count = samples_.size();
    const std::size_t n = samples_.front().values.size();
    spectra_.reserve(count);
    for (const auto& s : samples_) spectra_.push_back(analyze(field_.eval(s.point), s.values, tol_));

    // Generic eigenspace dimension per label: the most frequent one.
    generic_.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::map<Eigen::Index, int> votes;
      for (const auto& sp : spectra_) ++votes[sp.spaces[static_cast<std::size_t>(sp.ids[i])].cols()];
      generic_[i] = static_cast<int>(std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
                                        return a.second < b.second;
                                      })->first);
    }

    const std::size_t last = closed_ ? count - 1 : count;
    for (std::size_t k = 0; k < last; ++k) {
      const auto& sp = spectra_[k];
      for (std::size_t c = 0; c < sp.clusters.size(); ++c) {
        const auto dim = static_cast<int>(sp.spaces[c].cols());
        if (exceeds_generic(sp.clusters[c], dim)) {
          add_event(k, samples_[k].point, sp.clusters[c], cluster_mean(samples_[k].values, sp.clusters[c]), dim);
        }
      }
    }

    for (std::size_t k = 0; k + 1 < count; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& a = spectra_[k];
        const auto& b = spectra_[k + 1];
        const CMatX& ua = a.spaces[static_cast<std::size_t>(a.ids[i])];
        const CMatX& ub = b.spaces[static_cast<std::size_t>(b.ids[i])];
        if (subspace_jump(ua, ub) > opts_.eigenspace_jump) search_jump(k, i);
      }
    }

    search_gap_minima();
    return events_;
  }

 private:
  bool exceeds_generic(const std::vector<int>& members, int dim) const {
    if (members.size() < 2) return false;
    int generic = 0;
    for (int m : members) generic = std::max(generic, generic_[static_cast<std::size_t>(m)]);
    return dim > generic;
  }

  void add_event(std::size_t k, const ParamPoint& location, const std::vector<int>& members,
                 Complex value, int dim) {
    for (const auto& e : events_) {
      const bool near = e.sample_index + 1 >= k && k + 1 >= e.sample_index;
      if (near && e.branches == members) return;
    }
    DegeneracyEvent e;
    e.location = location;
    e.sample_index = k;
    e.bracket_lo = samples_[k > 0 && location == samples_[k].point ? k - 1 : k].point;
    e.bracket_hi = samples_[std::min(k + 1, samples_.size() - 1)].point;
    e.branches = members;
    e.eigenvalue = value;
    e.eigenspace_dim = dim;
    events_.push_back(std::move(e));
  }

  struct Probe {
    std::vector<Complex> values;  // label order
    SampleSpectrum spectrum;
  };

  Probe probe(const ParamPoint& p, const std::vector<Complex>& reference) const {
    const CMatX m = field_.eval(p);
    const auto raw = eigenvalues_of(m, field_.scalars());
    Probe out;
    out.values = apply_assignment(raw, best_assignment(reference, raw));
    out.spectrum = analyze(m, out.values, tol_);
    return out;
  }

  // Bisects toward an eigenspace discontinuity of label i between samples
  // k and k+1 and reports it if the eigenspace there is too large.
  void search_jump(std::size_t k, std::size_t i) {
    ParamPoint lo = samples_[k].point;
    ParamPoint hi = samples_[k + 1].point;
    CMatX space_lo = spectra_[k].spaces[static_cast<std::size_t>(spectra_[k].ids[i])];
    CMatX space_hi = spectra_[k + 1].spaces[static_cast<std::size_t>(spectra_[k + 1].ids[i])];
    std::vector<Complex> ref = samples_[k].values;
    for (int iter = 0; iter < 64; ++iter) {
      const ParamPoint mid = lerp(lo, hi, 0.5);
      const Probe pr = probe(mid, ref);
      const auto cid = static_cast<std::size_t>(pr.spectrum.ids[i]);
      const auto& members = pr.spectrum.clusters[cid];
      const auto dim = static_cast<int>(pr.spectrum.spaces[cid].cols());
      if (exceeds_generic(members, dim)) {
        add_event(k, mid, members, cluster_mean(pr.values, members), dim);
        return;
      }
      const CMatX& space_mid = pr.spectrum.spaces[cid];
      const double jump_lo = subspace_jump(space_lo, space_mid);
      const double jump_hi = subspace_jump(space_mid, space_hi);
      if (std::max(jump_lo, jump_hi) < 0.5 * opts_.eigenspace_jump) return;
      if (jump_lo >= jump_hi) {
        hi = mid;
        space_hi = space_mid;
      } else {
        lo = mid;
        space_lo = space_mid;
        ref = pr.values;
      }
      if (distance(lo, hi) <= 1e-15 * (1.0 + distance(lo, ParamPoint(lo.size(), 0.0)))) return;
    }
  }

  // Smallest distance between eigenvalues of different clusters.
  static double cluster_gap(const std::vector<Complex>& v, const std::vector<int>& ids, int* pi, int* pj) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        if (ids[i] == ids[j]) continue;
        const double d = std::abs(v[i] - v[j]);
        if (d < gap) {
          gap = d;
          *pi = static_cast<int>(i);
          *pj = static_cast<int>(j);
        }
      }
    }
    return gap;
  }

  // Eigenvalues that approach each other and separate again between samples
  // without swapping eigenvectors: golden-section search on the local gap.
  void search_gap_minima() {
    const std::size_t count = samples_.size();
    std::vector<double> gaps(count);
    std::vector<std::pair<int, int>> pairs(count, {-1, -1});
    for (std::size_t k = 0; k < count; ++k) {
      gaps[k] = cluster_gap(samples_[k].values, spectra_[k].ids, &pairs[k].first, &pairs[k].second);
    }
    for (std::size_t k = 1; k + 1 < count; ++k) {
      if (!std::isfinite(gaps[k]) || !(gaps[k] <= gaps[k - 1]) || !(gaps[k] <= gaps[k + 1])) continue;
      if (!(gaps[k] < gaps[k - 1] || gaps[k] < gaps[k + 1])) continue;
      const auto [i, j] = pairs[k];
      const std::vector<Complex>& ref = samples_[k].values;
      const ParamPoint& a = samples_[k - 1].point;
      const ParamPoint& b = samples_[k].point;
      const ParamPoint& c = samples_[k + 1].point;
      auto at = [&](double tau) { return tau <= 1.0 ? lerp(a, b, tau) : lerp(b, c, tau - 1.0); };
      auto gap_at = [&](double tau) {
        const auto raw = eigenvalues_of(field_.eval(at(tau)), field_.scalars());
        const auto v = apply_assignment(raw, best_assignment(ref, raw));
        return std::abs(v[static_cast<std::size_t>(i)] - v[static_cast<std::size_t>(j)]);
      };
      const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
      double lo = 0.0;
      double hi = 2.0;
      double x1 = hi - phi * (hi - lo);
      double x2 = lo + phi * (hi - lo);
      double f1 = gap_at(x1);
      double f2 = gap_at(x2);
      for (int iter = 0; iter < 80 && std::min(f1, f2) > tol_; ++iter) {
        if (f1 <= f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - phi * (hi - lo);
          f1 = gap_at(x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + phi * (hi - lo);
          f2 = gap_at(x2);
        }
      }
      if (std::min(f1, f2) > tol_) continue;
      const double tau = f1 <= f2 ? x1 : x2;
      const Probe pr = probe(at(tau), ref);
      const auto cid = static_cast<std::size_t>(pr.spectrum.ids[static_cast<std::size_t>(i)]);
      const auto& members = pr.spectrum.clusters[cid];
      const auto dim = static_cast<int>(pr.spectrum.spaces[cid].cols());
      if (exceeds_generic(members, dim)) {
        add_event(tau <= 1.0 ? k - 1 : k, at(tau), members, cluster_mean(pr.values, members), dim);
      }
    }
  }

  const MatrixField& field_;
  const std::vector<TraceSample>& samples_;
  bool closed_;
  double tol_;
  TrackOptions opts_;
  std::vector<SampleSpectrum> spectra_;
  std::vector<int> generic_;
  std::vector<DegeneracyEvent> events_;
};

TraceResult trace_path(const MatrixField& field, const ParamPath& path, const TrackOptions& opts) {
  path.validate();
  if (opts.max_depth < 0 || !(opts.trigger_ratio > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "max_depth must be >= 0 and trigger_ratio > 0");
  }
  TraceResult result;
  result.closed = path.closed;
  result.degeneracy_tol = path_tolerance(field, path, opts);
  Tracker tracker(field, opts, result.degeneracy_tol);
  tracker.start(path.points.front());
  for (std::size_t k = 1; k < path.points.size(); ++k) tracker.advance(path.points[k], 0);
  result.samples = std::move(tracker.samples());
  result.refinement_count = tracker.refinements();

  const auto& base = result.samples.front().values;
  const std::size_t n = base.size();
  const auto ids = cluster_ids(base, result.degeneracy_tol);
  result.base_clusters = group_clusters(ids);
  result.monodromy.resize(n);
  std::iota(result.monodromy.begin(), result.monodromy.end(), 0);
  result.cluster_monodromy.resize(result.base_clusters.size());
  std::iota(result.cluster_monodromy.begin(), result.cluster_monodromy.end(), 0);
  if (path.closed) {
    result.monodromy = best_assignment(result.samples.back().values, base);
    for (std::size_t c = 0; c < result.base_clusters.size(); ++c) {
      const int rep = result.base_clusters[c].front();
      result.cluster_monodromy[c] = ids[static_cast<std::size_t>(result.monodromy[static_cast<std::size_t>(rep)])];
    }
  }
  return result;
}

}  // namespace

TraceResult track_eigenvalues(const MatrixField& field, const ParamPath& path, const TrackOptions& opts) {
  TraceResult result = trace_path(field, path, opts);
  result.degeneracies =
      DegeneracyFinder(field, result.samples, result.closed, result.degeneracy_tol, opts).run();
  return result;
}

std::vector<DegeneracyEvent> detect_degeneracies(const MatrixField& field, const ParamPath& path,
                                                 const TrackOptions& opts) {
  return track_eigenvalues(field, path, opts).degeneracies;
}

// ---------------------------------------------------------------------------
// Holonomy

namespace {

// Transports unit vectors along a loop, refining segments whose consecutive
// overlap is too small to fix the gauge.
class Transporter {
 public:
  using VectorAt = std::function<CVecX(const ParamPoint&, const CVecX* previous)>;

  Transporter(VectorAt vector_at, int max_depth, bool real)
      : vector_at_(std::move(vector_at)), max_depth_(max_depth), real_(real) {}

  HolonomyResult run(const ParamPath& loop) {
    const CVecX first = vector_at_(loop.points.front(), nullptr).normalized();
    current_ = first;
    point_ = loop.points.front();
    used_ = 1;
    for (std::size_t k = 1; k < loop.points.size(); ++k) step(loop.points[k], 0);
    HolonomyResult out;
    out.samples_used = used_;
    out.real = real_;
    const Complex overlap = first.dot(current_);
    if (real_) {
      out.value = overlap.real() < 0.0 ? -1.0 : 1.0;
    } else {
      out.value = overlap / std::abs(overlap);
    }
    return out;
  }

 private:
  void step(const ParamPoint& target, int depth) {
    CVecX v = vector_at_(target, &current_).normalized();
    const Complex overlap = current_.dot(v);  // <current, v>
    if (std::abs(overlap) < 0.5) {
      if (depth >= max_depth_) {
        throw Error(ErrorCode::RefinementExhausted,
                    "eigenvector transport loses overlap on " + describe_interval(point_, target));
      }
      step(lerp(point_, target, 0.5), depth + 1);
      step(target, depth + 1);
      return;
    }
    if (real_) {
      if (overlap.real() < 0.0) v = -v;
    } else {
      v *= std::conj(overlap) / std::abs(overlap);
    }
    current_ = v;
    point_ = target;
    ++used_;
  }

  VectorAt vector_at_;
  int max_depth_;
  bool real_;
  CVecX current_;
  ParamPoint point_;
  int used_ = 0;
};

CVecX null_vector(const CMatX& m, Complex lambda, bool real) {
  if (real) {
    const Eigen::MatrixXd shifted =
        m.real() - lambda.real() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
    return svd.matrixV().col(m.cols() - 1).cast<Complex>();
  }
  const CMatX shifted = m - lambda * CMatX::Identity(m.rows(), m.cols());
  const Eigen::JacobiSVD<CMatX> svd(shifted, Eigen::ComputeFullV);
  return svd.matrixV().col(m.cols() - 1);
}

}  // namespace

HolonomyResult line_holonomy(const MatrixField& field, const ParamPath& loop, int branch,
                             const TrackOptions& opts) {
  loop.validate();
  if (!loop.closed) throw Error(ErrorCode::InvalidPath, "holonomy needs a closed loop");
  const TraceResult trace = track_eigenvalues(field, loop, opts);
  const auto n = static_cast<int>(trace.samples.front().values.size());
  if (branch < 0 || branch >= n) throw Error(ErrorCode::InvalidInput, "branch label out of range");
  const double tol = trace.degeneracy_tol;

  bool real = field.scalars() == ScalarField::Real;
  for (const auto& s : trace.samples) {
    const auto ids = cluster_ids(s.values, tol);
    if (std::count(ids.begin(), ids.end(), ids[static_cast<std::size_t>(branch)]) > 1) {
      throw Error(ErrorCode::BranchDegenerate, "branch meets another eigenvalue at " + describe(s.point));
    }
    if (std::abs(s.values[static_cast<std::size_t>(branch)].imag()) > tol) real = false;
  }
  for (const auto& e : trace.degeneracies) {
    if (std::find(e.branches.begin(), e.branches.end(), branch) != e.branches.end()) {
      throw Error(ErrorCode::BranchDegenerate, "branch touches a degeneracy at " + describe(e.location));
    }
  }

  // The branch value at intermediate points is the eigenvalue nearest to the
  // value at the closest tracked sample.
  auto branch_value = [&](const ParamPoint& p, const std::vector<Complex>& raw) {
    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
      const double d = distance(p, trace.samples[k].point);
      if (d < best) {
        best = d;
        nearest = k;
      }
    }
    const Complex target = trace.samples[nearest].values[static_cast<std::size_t>(branch)];
    return *std::min_element(raw.begin(), raw.end(), [&](const Complex& a, const Complex& b) {
      return std::abs(a - target) < std::abs(b - target);
    });
  };

  Transporter transporter(
      [&](const ParamPoint& p, const CVecX*) {
        const CMatX m = field.eval(p);
        const Complex value = branch_value(p, eigenvalues_of(m, field.scalars()));
        return null_vector(m, value, real);
      },
      opts.max_depth, real);
  ParamPath refined;
  refined.closed = true;
  for (const auto& s : trace.samples) refined.points.push_back(s.point);
  HolonomyResult out = transporter.run(refined);
  out.branch = branch;
  return out;
}

HolonomyResult line_holonomy_section(const MatrixField& field, const ParamPath& loop,
                                     const LineSection& section, const TrackOptions& opts) {
  loop.validate();
  if (!loop.closed) throw Error(ErrorCode::InvalidPath, "holonomy needs a closed loop");
  Transporter transporter(
      [&](const ParamPoint& p, const CVecX*) {
        const CMatX m = field.eval(p);
        const CVecX v = section(p, m);
        if (v.size() != m.rows() || !(v.norm() > 0.0)) {
          throw Error(ErrorCode::InvalidInput, "section returned an unusable vector at " + describe(p));
        }
        const CVecX u = v.normalized();
        const Complex rayleigh = u.dot(m * u);
        if ((m * u - rayleigh * u).norm() > 1e-9 * std::max(1.0, m.norm())) {
          throw Error(ErrorCode::InvalidInput, "section is not an eigenvector at " + describe(p));
        }
        return u;
      },
      opts.max_depth, false);
  return transporter.run(loop);
}

S1Verdict s1_report(const TraceResult& trace) {
  S1Verdict v;
  v.cluster_permutation = trace.cluster_monodromy;
  v.label_permutation = trace.monodromy;
  for (std::size_t c = 0; c < trace.cluster_monodromy.size(); ++c) {
    if (trace.cluster_monodromy[c] != static_cast<int>(c)) v.obstructed = true;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Doppler factor

double doppler_factor(const EMField& f, const Vec4& u, const Vec3& w) {
  require_observer(u);
  if (!(w.squaredNorm() < 1.0)) throw Error(ErrorCode::SpeedNotSubluminal, "speed must be below 1");
  if (f.is_zero()) throw Error(ErrorCode::ZeroField, "the Doppler factor needs a nonzero field");
  const EigenData d = eigenvalues_em(f);
  const ObservedField o = observe(f, u);
  const double denom = d.lambda_T + o.energy;
  if (!(denom > 0.0)) throw Error(ErrorCode::ZeroField, "lambda_T + (E^2+B^2)/2 vanishes");
  const Vec4 wv = rest_frame_vector(u, w);
  const double num = -minkowski_inner(o.poynting, wv) + d.lambda_F * minkowski_inner(o.E, wv) -
                     d.lambda_Fstar * minkowski_inner(o.B, wv);
  return (1.0 + num / denom) / std::sqrt(1.0 - w.squaredNorm());
}

}  // namespace biquat
