#pragma once

// Levy measures: radial and asymmetric stable kernels, lattice atoms, and
// measures modified on balls away from the origin ("surgery").

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

using Point = Eigen::VectorXd;

inline double stable_constant(double s, int n) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("stable index s must lie in (0,1)");
  if (n < 1) throw DomainError("dimension must be >= 1");
  using boost::math::tgamma;
  return s * std::pow(4.0, s) * std::pow(std::numbers::pi, -0.5 * n) * tgamma(s + 0.5 * n) /
         tgamma(1.0 - s);
}

/// c |y|^{-n-2s}.
struct RadialStable {
  double s = 0.5;
  int n = 1;
  double c = 0.0;  // normalizing constant; stable_constant(s, n) when built via make()

  static RadialStable make(double s, int n) { return {s, n, stable_constant(s, n)}; }
};

/// c_r |y|^{-1-2r} on y < 0, c_s |y|^{-1-2s} on y > 0.
struct AsymmetricStable1D {
  double r = 0.5;
  double s = 0.5;
  double c_r = 0.0;
  double c_s = 0.0;
};

enum class PatchKind { Hole, Lebesgue, Exponential, Polynomial };

inline std::string to_string(PatchKind k) {
  switch (k) {
    case PatchKind::Hole: return "hole";
    case PatchKind::Lebesgue: return "lebesgue";
    case PatchKind::Exponential: return "exponential";
    case PatchKind::Polynomial: return "polynomial";
  }
  return "?";
}

struct Monomial {
  std::array<int, kMaxDim> exponent{};
  double coeff = 0.0;
  int degree() const { return exponent[0] + exponent[1] + exponent[2]; }
};

/// Replaces the density on the open ball B_radius(center).
struct Patch {
  Point center;
  double radius = 0.0;
  PatchKind kind = PatchKind::Hole;
  Point beta;                       // Exponential: e^{beta . y}
  std::vector<Monomial> monomials;  // Polynomial: sum c_a y^a

  static Patch hole(Point c, double r) { return {std::move(c), r, PatchKind::Hole, {}, {}}; }
  static Patch lebesgue(Point c, double r) { return {std::move(c), r, PatchKind::Lebesgue, {}, {}}; }
  static Patch exponential(Point c, double r, Point b) {
    return {std::move(c), r, PatchKind::Exponential, std::move(b), {}};
  }
  static Patch polynomial(Point c, double r, std::vector<Monomial> m) {
    return {std::move(c), r, PatchKind::Polynomial, {}, std::move(m)};
  }

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const Point& y) const { return (y - center).norm() < radius; }

  int degree() const {
    int d = 0;
    for (const auto& m : monomials) d = std::max(d, m.degree());
    return d;
  }

  double value(const Point& y) const {
    switch (kind) {
      case PatchKind::Hole: return 0.0;
      case PatchKind::Lebesgue: return 1.0;
      case PatchKind::Exponential: return std::exp(beta.dot(y));
      case PatchKind::Polynomial: {
        double s = 0.0;
        for (const auto& m : monomials) {
          double t = m.coeff;
          for (int i = 0; i < dim(); ++i) t *= std::pow(y(i), m.exponent[static_cast<std::size_t>(i)]);
          s += t;
        }
        return s;
      }
    }
    return 0.0;
  }
};

using MeasureBase = std::variant<RadialStable, AsymmetricStable1D, LatticeAtoms>;

/// A base measure with patches applied in order; on overlaps the patch
/// applied last wins.
class LevyMeasure {
 public:
  LevyMeasure(RadialStable m) : LevyMeasure(MeasureBase(m)) {}          // NOLINT(implicit)
  LevyMeasure(AsymmetricStable1D m) : LevyMeasure(MeasureBase(m)) {}    // NOLINT(implicit)
  LevyMeasure(LatticeAtoms m) : LevyMeasure(MeasureBase(std::move(m))) {}  // NOLINT(implicit)
  LevyMeasure(MeasureBase base) : base_(std::move(base)) {  // NOLINT(implicit)
    struct V {
      void operator()(const RadialStable& m) const {
        if (!(m.s > 0.0 && m.s < 1.0)) throw DomainError("stable index s must lie in (0,1)");
        check_dim(m.n);
        if (!(m.c >= 0.0)) throw PreconditionError("stable constant must be nonnegative");
      }
      void operator()(const AsymmetricStable1D& m) const {
        if (!(m.r > 0.0 && m.r < 1.0 && m.s > 0.0 && m.s < 1.0))
          throw DomainError("stable indices r, s must lie in (0,1)");
        if (!(m.c_r >= 0.0 && m.c_s >= 0.0))
          throw PreconditionError("stable constants must be nonnegative");
      }
      void operator()(const LatticeAtoms&) const {}
    };
    std::visit(V{}, base_);
  }

  const MeasureBase& base() const { return base_; }
  const std::vector<Patch>& patches() const { return patches_; }

  int dim() const {
    struct V {
      int operator()(const RadialStable& m) const { return m.n; }
      int operator()(const AsymmetricStable1D&) const { return 1; }
      int operator()(const LatticeAtoms& a) const { return a.dim(); }
    };
    return std::visit(V{}, base_);
  }

  bool is_lattice() const { return std::holds_alternative<LatticeAtoms>(base_); }
  const LatticeAtoms& lattice() const {
    if (!is_lattice()) throw PreconditionError("measure is not a lattice measure");
    return std::get<LatticeAtoms>(base_);
  }

  std::string kind() const {
    struct V {
      std::string operator()(const RadialStable&) const { return "radial_stable"; }
      std::string operator()(const AsymmetricStable1D&) const { return "asymmetric_stable_1d"; }
      std::string operator()(const LatticeAtoms&) const { return "lattice_atoms"; }
    };
    return std::visit(V{}, base_) + (patches_.empty() ? "" : "+patches");
  }

  /// Density of the base measure, ignoring patches.
  double base_density(const Point& y) const {
    struct V {
      const Point& y;
      double operator()(const RadialStable& m) const {
        return m.c * std::pow(y.norm(), -m.n - 2.0 * m.s);
      }
      double operator()(const AsymmetricStable1D& m) const {
        const double a = std::abs(y(0));
        return y(0) < 0.0 ? m.c_r * std::pow(a, -1.0 - 2.0 * m.r) : m.c_s * std::pow(a, -1.0 - 2.0 * m.s);
      }
      double operator()(const LatticeAtoms&) const {
        throw PreconditionError("lattice measures have atoms, not a density");
      }
    };
    return std::visit(V{y}, base_);
  }

  double density(const Point& y) const {
    if (y.size() != dim()) throw ShapeError("point dimension does not match the measure");
    if (y.norm() == 0.0) throw DomainError("Levy densities are evaluated away from the origin");
    for (auto it = patches_.rbegin(); it != patches_.rend(); ++it)
      if (it->contains(y)) return it->value(y);
    return base_density(y);
  }

  double atom(const LatticePoint& l) const {
    if (l.is_zero()) throw DomainError("Levy measures carry no atom at the origin");
    return lattice().atom(l);
  }

  /// 1D patch edges, where the density may jump.
  std::vector<double> breakpoints_1d() const {
    std::vector<double> b;
    for (const auto& p : patches_) {
      b.push_back(p.center(0) - p.radius);
      b.push_back(p.center(0) + p.radius);
    }
    std::sort(b.begin(), b.end());
    return b;
  }

  bool is_symmetric() const {
    struct V {
      bool operator()(const RadialStable&) const { return true; }
      bool operator()(const AsymmetricStable1D& m) const { return m.r == m.s && m.c_r == m.c_s; }
      bool operator()(const LatticeAtoms& a) const { return a.is_symmetric(); }
    };
    if (!std::visit(V{}, base_)) return false;
    if (patches_.empty() || is_lattice()) return true;
    // Sampled check of y -> -y on the patch balls (closed under mirroring).
    const int n = dim();
    for (const auto& p : patches_) {
      for (int sgn : {1, -1}) {
        const Point c = sgn * p.center;
        const int m = n == 1 ? 401 : 9;
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < (n >= 2 ? m : 1); ++j)
            for (int k = 0; k < (n >= 3 ? m : 1); ++k) {
              Point y = c;
              const std::array<int, 3> idx{i, j, k};
              for (int a = 0; a < n; ++a)
                y(a) += p.radius * (2.0 * (idx[static_cast<std::size_t>(a)] + 0.5) / m - 1.0);
              if (y.norm() == 0.0) continue;
              const double d1 = density(y);
              const double d2 = density(-y);
              if (std::abs(d1 - d2) > 1e-12 * std::max(1.0, std::abs(d1))) return false;
            }
      }
    }
    return true;
  }

 private:
  friend LevyMeasure apply_surgery(const LevyMeasure& base, const Patch& patch);

  MeasureBase base_;
  std::vector<Patch> patches_;
};

inline LevyMeasure apply_surgery(const LevyMeasure& base, const Patch& patch) {
  if (patch.dim() != base.dim()) throw ShapeError("patch dimension does not match the measure");
  if (!(patch.radius > 0.0)) throw PreconditionError("patch radius must be positive");
  if (!(patch.center.norm() > patch.radius))
    throw PreconditionError("patch ball must exclude the origin (|x0| > delta)");
  if (patch.kind == PatchKind::Exponential && patch.beta.size() != patch.dim())
    throw ShapeError("exponential patch needs beta in R^n");
  LevyMeasure out = base;
  if (out.is_lattice()) {
    // Atoms inside the ball take the patch value at the lattice point.
    const LatticeAtoms& a = out.lattice();
    std::map<LatticePoint, double> m = a.masses();
    const int n = a.dim();
    const int r = static_cast<int>(std::ceil(patch.center.cwiseAbs().maxCoeff() + patch.radius));
    for (const LatticePoint& l : lattice_box(n, r)) {
      Point y(n);
      for (int i = 0; i < n; ++i) y(i) = l[i];
      if (l.is_zero() || !patch.contains(y)) continue;
      const double v = patch.value(y);
      if (v < 0.0) throw PreconditionError("patch assigns a negative atom mass");
      m[l] = v;
    }
    out.base_ = LatticeAtoms(n, std::move(m), a.tail_mass(), a.tail_radius());
  }
  out.patches_.push_back(patch);
  return out;
}

namespace detail {

/// Angular product rule on S^{n-1} (n = 2, 3); points and weights.
struct SphereRule {
  std::vector<Point> dirs;
  std::vector<double> w;
};

inline SphereRule sphere_rule(int n, int order) {
  SphereRule r;
  if (n == 2) {
    const quad::Rule g = quad::composite_gauss_legendre(0.0, 2.0 * std::numbers::pi, 2 * order, 8);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      Point d(2);
      d << std::cos(g.nodes[i]), std::sin(g.nodes[i]);
      r.dirs.push_back(d);
      r.w.push_back(g.weights[i]);
    }
  } else if (n == 3) {
    const quad::Rule gz = quad::composite_gauss_legendre(-1.0, 1.0, std::max(1, order / 2), 8);
    const quad::Rule gp = quad::composite_gauss_legendre(0.0, 2.0 * std::numbers::pi, order, 8);
    for (std::size_t i = 0; i < gz.nodes.size(); ++i) {
      const double z = gz.nodes[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (std::size_t j = 0; j < gp.nodes.size(); ++j) {
        Point d(3);
        d << rho * std::cos(gp.nodes[j]), rho * std::sin(gp.nodes[j]), z;
        r.dirs.push_back(d);
        r.w.push_back(gz.weights[i] * gp.weights[j]);
      }
    }
  } else {
    throw PreconditionError("sphere rule needs n = 2 or 3");
  }
  return r;
}

/// int_{a < |y| < b} g(y) nu(dy) for a continuous measure in 1D with the
/// density's jump points as breakpoints. `b` may be +infinity; a may be 0.
template <class G>
quad::Result integrate_1d(const LevyMeasure& m, G&& g, double a, double b, double rel_tol = 1e-12) {
  quad::Result total;
  const std::vector<double> bp = m.breakpoints_1d();
  for (int sgn : {1, -1}) {
    auto h = [&](double r) {
      Point y(1);
      y(0) = sgn * r;
      return g(y) * m.density(y);
    };
    std::vector<double> cuts{a};
    for (double x : bp) {
      const double r = sgn * x;
      if (r > a && r < b) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    if (std::isfinite(b)) cuts.push_back(b);
    else if (cuts.back() == 0.0) cuts.push_back(1.0);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const quad::Result piece = cuts[i] == 0.0 ? quad::integrate_to_zero(h, cuts[i + 1], rel_tol)
                                                : quad::adaptive(h, cuts[i], cuts[i + 1], rel_tol);
      total.value += piece.value;
      total.error += piece.error;
    }
    if (!std::isfinite(b)) {
      const quad::Result tail = quad::integrate_to_infinity(h, cuts.back(), rel_tol);
      total.value += tail.value;
      total.error += tail.error;
    }
  }
  return total;
}

/// Same in n = 2, 3 with a radial x angular product rule.
template <class G>
quad::Result integrate_nd(const LevyMeasure& m, G&& g, double a, double b, int angular_order = 8,
                          double rel_tol = 1e-10) {
  const int n = m.dim();
  const SphereRule sr = sphere_rule(n, angular_order);
  auto radial = [&](double r) {
    double s = 0.0;
    for (std::size_t i = 0; i < sr.dirs.size(); ++i) {
      const Point y = r * sr.dirs[i];
      s += sr.w[i] * g(y) * m.density(y);
    }
    return s * std::pow(r, n - 1);
  };
  quad::Result total;
  // Patch shells as radial breakpoints.
  std::vector<double> cuts{a};
  for (const auto& p : m.patches()) {
    const double lo = p.center.norm() - p.radius;
    const double hi = p.center.norm() + p.radius;
    for (double c : {lo, hi})
      if (c > a && c < b) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  if (std::isfinite(b)) cuts.push_back(b);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const quad::Result piece = cuts[i] == 0.0 ? quad::integrate_to_zero(radial, cuts[i + 1], rel_tol)
                                              : quad::adaptive(radial, cuts[i], cuts[i + 1], rel_tol);
    total.value += piece.value;
    total.error += piece.error;
  }
  if (!std::isfinite(b)) {
    const double from = std::max(cuts.back(), 1e-3);
    if (cuts.back() == 0.0) {
      const quad::Result inner = quad::integrate_to_zero(radial, from, rel_tol);
      total.value += inner.value;
      total.error += inner.error;
    }
    const quad::Result tail = quad::integrate_to_infinity(radial, from, rel_tol);
    total.value += tail.value;
    total.error += tail.error;
  }
  return total;
}

template <class G>
quad::Result integrate_continuous(const LevyMeasure& m, G&& g, double a, double b) {
  if (m.dim() == 1) return integrate_1d(m, std::forward<G>(g), a, b);
  return integrate_nd(m, std::forward<G>(g), a, b);
}

}  // namespace detail

/// int_{0 < |y| < eps} |y|^2 nu(dy) with an error estimate.
inline quad::Result small_ball_integral(const LevyMeasure& m, double eps) {
  if (!(eps > 0.0)) throw DomainError("small-ball radius must be positive");
  if (m.is_lattice()) {
    double s = 0.0;
    for (const auto& [l, p] : m.lattice().masses())
      if (static_cast<double>(l.norm2()) < eps * eps) s += static_cast<double>(l.norm2()) * p;
    return {s, 0.0};
  }
  return detail::integrate_continuous(m, [](const Point& y) { return y.squaredNorm(); }, 0.0, eps);
}

/// nu({|y| >= a}) for continuous measures.
inline quad::Result tail_mass(const LevyMeasure& m, double a) {
  if (!(a > 0.0)) throw DomainError("tail radius must be positive");
  if (m.is_lattice()) {
    double s = m.lattice().tail_mass();
    for (const auto& [l, p] : m.lattice().masses())
      if (static_cast<double>(l.norm2()) >= a * a) s += p;
    return {s, 0.0};
  }
  return detail::integrate_continuous(m, [](const Point&) { return 1.0; }, a, INFINITY);
}

}  // namespace levylab
