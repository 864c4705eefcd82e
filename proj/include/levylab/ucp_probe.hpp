#pragma once

// Numerical probes for unique continuation: least-squares density of
// shifted Levy densities on shells, and nullspaces of the window-constrained
// lattice generator.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"
#include "levylab/levy_measure.hpp"
#include "levylab/operators.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

enum class Verdict {
  ViolationFound,
  TruncationArtifact,
  NoViolationAtResolution,
  DensityTrendPositive,
  DensityObstruction
};

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ViolationFound: return "ViolationFound";
    case Verdict::TruncationArtifact: return "TruncationArtifact";
    case Verdict::NoViolationAtResolution: return "NoViolationAtResolution";
    case Verdict::DensityTrendPositive: return "DensityTrendPositive";
    case Verdict::DensityObstruction: return "DensityObstruction";
  }
  return "?";
}

/// Shift points x_1..x_K with |x_j| < epsilon.
struct ShiftSet {
  double epsilon = 0.0;
  int dim = 1;
  std::vector<Point> points;

  /// Halton points of B_epsilon(0) (cube points outside the ball rejected);
  /// the first K points of the sequence do not depend on the total count,
  /// so sets of increasing size are nested.
  static ShiftSet halton(int dim, double epsilon, int count) {
    check_dim(dim);
    if (!(epsilon > 0.0)) throw PreconditionError("shift radius epsilon must be positive");
    if (count < 1) throw PreconditionError("shift set needs at least one point");
    static constexpr int bases[kMaxDim] = {2, 3, 5};
    ShiftSet s{epsilon, dim, {}};
    for (long index = 1; static_cast<int>(s.points.size()) < count; ++index) {
      Point x(dim);
      for (int a = 0; a < dim; ++a) {
        double f = 1.0;
        double r = 0.0;
        for (long i = index; i > 0; i /= bases[a]) {
          f /= bases[a];
          r += f * static_cast<double>(i % bases[a]);
        }
        x(a) = (2.0 * r - 1.0) * epsilon;
      }
      if (x.norm() < epsilon) s.points.push_back(x);
    }
    return s;
  }

  ShiftSet prefix(int k) const {
    if (k < 1 || k > static_cast<int>(points.size())) throw PreconditionError("invalid shift prefix");
    return {epsilon, dim, {points.begin(), points.begin() + k}};
  }

  void validate() const {
    if (!(epsilon > 0.0)) throw PreconditionError("shift radius epsilon must be positive");
    for (const auto& x : points) {
      if (x.size() != dim) throw ShapeError("shift point has the wrong dimension");
      if (!(x.norm() < epsilon)) throw PreconditionError("shift points must satisfy |x_j| < epsilon");
    }
  }
};

struct UcpProbeReport {
  std::vector<int> levels;             // shift count or truncation reach per trace entry
  std::vector<double> residual_trace;  // one residual per level
  Verdict verdict = Verdict::NoViolationAtResolution;
  std::optional<LatticeField> witness;
  std::vector<double> coefficients;  // density probe: coefficients at the last level
  double target_norm = 0.0;
  std::vector<double> condition_numbers;
  double dropped_mass = 0.0;
  std::vector<std::string> warnings;
};

/// Axis-aligned box [lo, hi] on which the target lives.
struct ProbeRegion {
  Point lo;
  Point hi;
};

struct ProbeQuadrature {
  int panels = 32;  // per axis
  int nodes = 8;    // Gauss-Legendre nodes per panel
};

namespace detail {

struct WeightedPoints {
  std::vector<Point> y;
  std::vector<double> w;
};

inline WeightedPoints box_rule(const ProbeRegion& r, const ProbeQuadrature& q) {
  const auto n = static_cast<int>(r.lo.size());
  std::vector<quad::Rule> axes;
  for (int a = 0; a < n; ++a) axes.push_back(quad::composite_gauss_legendre(r.lo(a), r.hi(a), q.panels, q.nodes));
  WeightedPoints out;
  const std::size_t m = axes[0].nodes.size();
  std::size_t total = 1;
  for (int a = 0; a < n; ++a) total *= m;
  for (std::size_t i = 0; i < total; ++i) {
    Point y(n);
    double w = 1.0;
    std::size_t rest = i;
    for (int a = n - 1; a >= 0; --a) {
      const std::size_t j = rest % m;
      rest /= m;
      y(a) = axes[static_cast<std::size_t>(a)].nodes[j];
      w *= axes[static_cast<std::size_t>(a)].weights[j];
    }
    out.y.push_back(y);
    out.w.push_back(w);
  }
  return out;
}

/// Distance from the origin to the box.
inline double box_distance(const ProbeRegion& r) {
  double s = 0.0;
  for (int a = 0; a < r.lo.size(); ++a) {
    const double d = r.lo(a) > 0.0 ? r.lo(a) : (r.hi(a) < 0.0 ? -r.hi(a) : 0.0);
    s += d * d;
  }
  return std::sqrt(s);
}

struct LsqResult {
  Eigen::VectorXd c;
  double residual = 0.0;
  double gram_condition = 0.0;
  bool regularized = false;
};

/// min_c |sqrt(w)(f - Phi c)|_2; ridge 1e-12 trace(G) when cond(G) > 1e12.
inline LsqResult weighted_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  LsqResult out;
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  const double smin = s.size() ? s(s.size() - 1) : 0.0;
  out.gram_condition = smin > 0.0 ? (smax / smin) * (smax / smin) : INFINITY;
  if (smax == 0.0) {
    out.c = Eigen::VectorXd::Zero(A.cols());
  } else if (out.gram_condition > 1e12) {
    out.regularized = true;
    const double mu = 1e-12 * A.squaredNorm();  // trace of the Gram matrix
    Eigen::MatrixXd aug(A.rows() + A.cols(), A.cols());
    aug << A, std::sqrt(mu) * Eigen::MatrixXd::Identity(A.cols(), A.cols());
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(A.rows() + A.cols());
    rhs.head(A.rows()) = b;
    out.c = aug.colPivHouseholderQr().solve(rhs);
  } else {
    out.c = A.colPivHouseholderQr().solve(b);
  }
  out.residual = (b - A * out.c).norm();
  return out;
}

}  // namespace detail

/// Least-squares distance from `target` to span{nu(. + x_j)} on the region,
/// for nested prefixes of the shift set.
inline UcpProbeReport density_probe(const LevyMeasure& m, const ShiftSet& shifts,
                                    const std::function<double(const Point&)>& target,
                                    const ProbeRegion& region, const std::vector<int>& levels,
                                    const ProbeQuadrature& quadrature = {}) {
  if (m.is_lattice()) throw PreconditionError("density probes need a measure with a density");
  shifts.validate();
  const int n = m.dim();
  if (shifts.dim != n || region.lo.size() != n || region.hi.size() != n)
    throw ShapeError("probe dimensions do not match the measure");
  for (int a = 0; a < n; ++a)
    if (!(region.hi(a) > region.lo(a))) throw PreconditionError("probe region must have positive extent");
  if (!(detail::box_distance(region) > shifts.epsilon))
    throw PreconditionError("probe region must lie outside the closed epsilon-ball");
  if (levels.empty()) throw PreconditionError("density probe needs at least one shift level");
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] < 1 || levels[i] > static_cast<int>(shifts.points.size()) ||
        (i > 0 && levels[i] <= levels[i - 1]))
      throw PreconditionError("shift levels must increase within the shift set");

  const detail::WeightedPoints qp = detail::box_rule(region, quadrature);
  const auto q = static_cast<Eigen::Index>(qp.y.size());
  Eigen::VectorXd b(q);
  for (Eigen::Index i = 0; i < q; ++i) b(i) = std::sqrt(qp.w[static_cast<std::size_t>(i)]) * target(qp.y[static_cast<std::size_t>(i)]);
  const int kmax = levels.back();
  Eigen::MatrixXd A(q, kmax);
  for (int j = 0; j < kmax; ++j)
    for (Eigen::Index i = 0; i < q; ++i)
      A(i, j) = std::sqrt(qp.w[static_cast<std::size_t>(i)]) *
                m.density(qp.y[static_cast<std::size_t>(i)] + shifts.points[static_cast<std::size_t>(j)]);

  UcpProbeReport rep;
  rep.target_norm = b.norm();
  for (int k : levels) {
    const detail::LsqResult r = detail::weighted_least_squares(A.leftCols(k), b);
    rep.levels.push_back(k);
    rep.residual_trace.push_back(r.residual);
    rep.condition_numbers.push_back(r.gram_condition);
    if (r.regularized)
      rep.warnings.push_back("K=" + std::to_string(k) +
                             ": ill-conditioned Gram matrix, ridge 1e-12*trace applied");
    if (k == kmax) rep.coefficients.assign(r.c.data(), r.c.data() + r.c.size());
  }
  const double first = rep.residual_trace.front();
  const double last = rep.residual_trace.back();
  if (last < 0.1 * first)
    rep.verdict = Verdict::DensityTrendPositive;
  else if (last >= 0.5 * rep.target_norm)
    rep.verdict = Verdict::DensityObstruction;
  else
    rep.verdict = Verdict::NoViolationAtResolution;
  return rep;
}

/// Rows: (Au)_k = 0 for k in B_h(0); columns: u_j for j in [-N, N]^n \ B_h(0).
struct ConstraintSystem {
  Eigen::MatrixXd matrix;
  std::vector<LatticePoint> rows;
  std::vector<LatticePoint> cols;
  int dim = 1;
  int truncation = 0;
  double dropped_mass = 0.0;  // largest atom mass per row landing outside the box, plus the tail
};

inline ConstraintSystem build_constraint_matrix(const LatticeAtoms& atoms, double h, int N) {
  if (!(h > 0.0)) throw PreconditionError("window radius h must be positive");
  if (N < 0) throw PreconditionError("truncation N must be nonnegative");
  ConstraintSystem sys;
  sys.dim = atoms.dim();
  sys.truncation = N;
  sys.rows = lattice_ball(sys.dim, h);
  for (const LatticePoint& j : lattice_box(sys.dim, N))
    if (!in_lattice_ball(j, h)) sys.cols.push_back(j);
  if (sys.cols.empty()) throw ConfigError("constraint system has no unknowns (N too small for h)");
  if (sys.rows.empty()) throw ConfigError("window B_h(0) contains no lattice points");
  std::map<LatticePoint, Eigen::Index> col_index;
  for (std::size_t j = 0; j < sys.cols.size(); ++j) col_index[sys.cols[j]] = static_cast<Eigen::Index>(j);
  sys.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sys.rows.size()),
                                     static_cast<Eigen::Index>(sys.cols.size()));
  double worst = 0.0;
  for (std::size_t r = 0; r < sys.rows.size(); ++r) {
    const LatticePoint& k = sys.rows[r];
    double outside = 0.0;
    for (const auto& [l, p] : atoms.masses()) {
      const LatticePoint j = k + l;
      if (j.max_norm() > N) {
        outside += p;
        continue;
      }
      auto it = col_index.find(j);
      if (it != col_index.end()) sys.matrix(static_cast<Eigen::Index>(r), it->second) = p;
    }
    worst = std::max(worst, outside);
  }
  sys.dropped_mass = worst + atoms.tail_mass();
  return sys;
}

struct Witness {
  Eigen::VectorXd vector;  // unit norm, indexed like ConstraintSystem::cols
  double singular_value = 0.0;
  double sigma_max = 0.0;
  double residual = 0.0;  // |M w|_2
};

/// Right-singular vector with singular value <= tol * sigma_max, if any.
inline std::optional<Witness> find_violation(const Eigen::MatrixXd& M, double tol = 1e-10) {
  if (!(tol > 0.0)) throw PreconditionError("tolerance must be positive");
  if (M.cols() == 0) throw PreconditionError("matrix has no columns");
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const Eigen::VectorXd& s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (!std::isfinite(s(i))) throw NumericalError("singular value decomposition failed");
  const double smax = s.size() ? s(0) : 0.0;
  const Eigen::Index last = M.cols() - 1;
  // Columns of V beyond the number of rows span part of the kernel.
  const double sigma = last < s.size() ? s(last) : 0.0;
  if (smax > 0.0 && sigma > tol * smax) return std::nullopt;
  Witness w;
  w.vector = svd.matrixV().col(last);
  w.vector /= w.vector.norm();
  w.singular_value = sigma;
  w.sigma_max = smax;
  w.residual = (M * w.vector).norm();
  return w;
}

inline LatticeField field_from_vector(const ConstraintSystem& sys, const Eigen::VectorXd& v) {
  if (v.size() != static_cast<Eigen::Index>(sys.cols.size()))
    throw ShapeError("vector length does not match the unknowns");
  LatticeField u(sys.dim, sys.truncation);
  for (std::size_t j = 0; j < sys.cols.size(); ++j) u.at(sys.cols[j]) = v(static_cast<Eigen::Index>(j));
  return u;
}

/// max_{k in B_h} |(A w)_k| under a (larger) materialized operator.
inline double refine_and_score(const LatticeField& witness, const LatticeAtoms& atoms_refined, double h) {
  if (std::abs(witness.l2_norm() - 1.0) > 1e-10)
    throw PreconditionError("refine_and_score needs a unit-norm witness");
  const GeneratorResult r =
      apply_generator_lattice(atoms_refined, witness, static_cast<int>(std::ceil(h)));
  double worst = 0.0;
  for (const LatticePoint& k : lattice_ball(witness.dim(), h)) worst = std::max(worst, std::abs(r.field(k)));
  return worst;
}

/// Witness search at one truncation plus rescoring under refined atoms.
/// The trace holds the residual under `atoms` and under each refinement.
inline UcpProbeReport nullspace_probe(const LatticeAtoms& atoms, double h, int N,
                                      const std::vector<LatticeAtoms>& refinements, double tol = 1e-10) {
  UcpProbeReport rep;
  const ConstraintSystem sys = build_constraint_matrix(atoms, h, N);
  rep.dropped_mass = sys.dropped_mass;
  const std::optional<Witness> w = find_violation(sys.matrix, tol);
  if (!w) {
    rep.verdict = Verdict::NoViolationAtResolution;
    return rep;
  }
  const LatticeField field = field_from_vector(sys, w->vector);
  rep.witness = field;
  rep.condition_numbers.push_back(w->singular_value > 0.0 ? w->sigma_max / w->singular_value : INFINITY);
  rep.levels.push_back(atoms.reach());
  rep.residual_trace.push_back(refine_and_score(field, atoms, h));
  for (const auto& a : refinements) {
    rep.levels.push_back(a.reach());
    rep.residual_trace.push_back(refine_and_score(field, a, h));
  }
  const double bound = tol * std::max(w->sigma_max, 1.0);
  rep.verdict = Verdict::ViolationFound;
  for (double r : rep.residual_trace)
    if (r > bound) rep.verdict = Verdict::TruncationArtifact;
  return rep;
}

}  // namespace levylab
