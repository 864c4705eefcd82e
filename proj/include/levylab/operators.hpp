#pragma once

// Symbols and generators of Levy operators: lattice sums, principal-value
// quadrature, and Fourier multipliers on periodic grids.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>

#include "levylab/bernstein.hpp"
#include "levylab/errors.hpp"
#include "levylab/grid.hpp"
#include "levylab/lattice.hpp"
#include "levylab/levy_measure.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

/// (drift l, diffusion Q, Levy measure nu).
struct CharacteristicTriplet {
  Point drift;
  Eigen::MatrixXd Q;
  LevyMeasure measure;

  CharacteristicTriplet(Point l, Eigen::MatrixXd q, LevyMeasure m)
      : drift(std::move(l)), Q(std::move(q)), measure(std::move(m)) {
    const auto n = measure.dim();
    if (drift.size() != n || Q.rows() != n || Q.cols() != n)
      throw ShapeError("triplet components have inconsistent dimensions");
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 0.0)
      throw PreconditionError("diffusion matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw PreconditionError("diffusion matrix must be positive semidefinite");
  }

  static CharacteristicTriplet pure_jump(LevyMeasure m) {
    const int n = m.dim();
    return {Point::Zero(n), Eigen::MatrixXd::Zero(n, n), std::move(m)};
  }
  static CharacteristicTriplet gaussian(Eigen::MatrixXd q) {
    const auto n = static_cast<int>(q.rows());
    return {Point::Zero(n), std::move(q), LevyMeasure(LatticeAtoms(n, {}))};
  }

  int dim() const { return measure.dim(); }
};

/// psi_R(xi) = sum_l p_l (1 - e^{i l.xi}) over the materialized atoms.
inline std::complex<double> symbol_lattice(const LatticeAtoms& walk, const std::vector<double>& xi) {
  if (static_cast<int>(xi.size()) != walk.dim()) throw ShapeError("frequency dimension mismatch");
  double re = 0.0;
  double im = 0.0;
  for (const auto& [l, p] : walk.masses()) {
    double phase = 0.0;
    for (int i = 0; i < walk.dim(); ++i) phase += l[i] * xi[static_cast<std::size_t>(i)];
    // 1 - cos(phase) = 2 sin^2(phase / 2) keeps small phases accurate.
    const double sh = std::sin(0.5 * phase);
    re += p * 2.0 * sh * sh;
    im -= p * std::sin(phase);
  }
  return {re, im};
}

/// f(psi_R(xi)) for a walk with real symbol.
inline double subordinated_symbol(const BernsteinFunction& f, const LatticeAtoms& walk,
                                  const std::vector<double>& xi) {
  const std::complex<double> psi = symbol_lattice(walk, xi);
  if (std::abs(psi.imag()) > 1e-12 * std::max(1.0, std::abs(psi.real())))
    throw PreconditionError("walk symbol is not real at this frequency");
  if (psi.real() < -1e-12) throw NumericalError("walk symbol is negative beyond rounding", -psi.real());
  if (psi.real() <= 0.0) return 0.0;
  return eval(f, psi.real());
}

namespace detail {

/// omega_n - int_{S^{n-1}} cos(rho theta_1) dtheta, accurate for small rho.
inline double angular_defect(int n, double rho) {
  const double r2 = rho * rho;
  switch (n) {
    case 1: {
      const double sh = std::sin(0.5 * rho);
      return 4.0 * sh * sh;
    }
    case 2:
      if (rho < 1e-2) return 2.0 * std::numbers::pi * (r2 / 4.0 - r2 * r2 / 64.0 + r2 * r2 * r2 / 2304.0);
      return 2.0 * std::numbers::pi * (1.0 - boost::math::cyl_bessel_j(0, rho));
    case 3:
      if (rho < 1e-2) return 4.0 * std::numbers::pi * (r2 / 6.0 - r2 * r2 / 120.0 + r2 * r2 * r2 / 5040.0);
      return 4.0 * std::numbers::pi * (1.0 - std::sin(rho) / rho);
  }
  throw PreconditionError("dimension must be 1..3");
}

/// int_{S^{n-1}} cos(rho theta_1) dtheta.
inline double angular_cos(int n, double rho) {
  switch (n) {
    case 1: return 2.0 * std::cos(rho);
    case 2: return 2.0 * std::numbers::pi * boost::math::cyl_bessel_j(0, rho);
    case 3: return rho == 0.0 ? 4.0 * std::numbers::pi : 4.0 * std::numbers::pi * std::sin(rho) / rho;
  }
  throw PreconditionError("dimension must be 1..3");
}

inline double sphere_area(int n) {
  return n == 1 ? 2.0 : n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

/// int (1 - cos(xi.y)) c|y|^{-n-2s} dy by the radial formula.
inline quad::Result radial_stable_symbol(const RadialStable& m, double k) {
  if (k == 0.0) return {};
  const int n = m.n;
  const double a = -1.0 - 2.0 * m.s;
  const quad::Result inner = quad::integrate_to_zero(
      [&](double r) { return m.c * std::pow(r, a) * angular_defect(n, k * r); }, 1.0, 1e-14);
  const quad::Result osc = quad::oscillatory_tail(
      [&](double r) { return m.c * std::pow(r, a) * angular_cos(n, k * r); }, 1.0,
      std::numbers::pi / k, 1e-13);
  const double mass = m.c * sphere_area(n) / (2.0 * m.s);
  return {inner.value + mass - osc.value, inner.error + osc.error};
}

/// 1D symmetric measure with patches: 2 int_0^inf (1 - cos(xi y)) nu(dy).
inline quad::Result patched_symbol_1d(const LevyMeasure& m, double xi) {
  if (xi == 0.0) return {};
  const double k = std::abs(xi);
  auto dens = [&](double y) {
    Point p(1);
    p(0) = y;
    return m.density(p);
  };
  std::vector<double> cuts{0.0, 1.0};
  for (double b : m.breakpoints_1d())
    if (b > 0.0) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  quad::Result total;
  auto g = [&](double y) {
    const double sh = std::sin(0.5 * k * y);
    return 2.0 * sh * sh * dens(y);
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const quad::Result piece = cuts[i] == 0.0 ? quad::integrate_to_zero(g, cuts[i + 1], 1e-14)
                                              : quad::adaptive(g, cuts[i], cuts[i + 1], 1e-13);
    total.value += piece.value;
    total.error += piece.error;
  }
  // Beyond the last patch edge only the base density remains.
  const double B = cuts.back();
  double c = 0.0;
  double s = 0.0;
  if (const auto* r = std::get_if<RadialStable>(&m.base())) {
    c = r->c;
    s = r->s;
  } else if (const auto* a = std::get_if<AsymmetricStable1D>(&m.base())) {
    c = a->c_s;
    s = a->s;
  }
  const double mass = c * std::pow(B, -2.0 * s) / (2.0 * s);
  const quad::Result osc = quad::oscillatory_tail(
      [&](double y) { return c * std::pow(y, -1.0 - 2.0 * s) * std::cos(k * y); }, B,
      std::numbers::pi / k, 1e-13);
  total.value += mass - osc.value;
  total.error += osc.error;
  total.value *= 2.0;
  total.error *= 2.0;
  return total;
}

}  // namespace detail

/// psi(xi) = 1/2 xi^T Q xi + int (1 - cos(xi.y)) nu(dy) for symmetric triplets.
inline quad::Result symbol_continuous(const CharacteristicTriplet& t, const std::vector<double>& xi) {
  const int n = t.dim();
  if (static_cast<int>(xi.size()) != n) throw ShapeError("frequency dimension mismatch");
  if (t.drift.norm() != 0.0)
    throw PreconditionError("real symbols need zero drift; drifted triplets have complex symbols");
  Point x(n);
  for (int i = 0; i < n; ++i) x(i) = xi[static_cast<std::size_t>(i)];
  quad::Result out{0.5 * x.dot(t.Q * x), 0.0};
  const LevyMeasure& m = t.measure;
  if (m.is_lattice()) {
    const LatticeAtoms& a = m.lattice();
    if (!a.is_symmetric()) throw PreconditionError("asymmetric lattice measure has a complex symbol");
    out.value += symbol_lattice(a, xi).real();
    out.error += 2.0 * a.tail_mass();
    return out;
  }
  if (!m.is_symmetric())
    throw PreconditionError("symbol_continuous supports symmetric measures only (no sector data)");
  quad::Result j;
  if (m.patches().empty()) {
    RadialStable r;
    if (const auto* rs = std::get_if<RadialStable>(&m.base()))
      r = *rs;
    else {
      const auto& as = std::get<AsymmetricStable1D>(m.base());
      r = RadialStable{as.s, 1, as.c_s};
    }
    j = detail::radial_stable_symbol(r, x.norm());
  } else {
    if (n != 1) throw PreconditionError("symbols of patched measures are supported in 1D only");
    j = detail::patched_symbol_1d(m, x(0));
  }
  out.value += j.value;
  out.error += j.error;
  return out;
}

/// Closed-form |xi|^{2s}.
inline std::function<double(const std::vector<double>&)> fractional_symbol(double s) {
  return [s](const std::vector<double>& xi) {
    double r2 = 0.0;
    for (double v : xi) r2 += v * v;
    return std::pow(r2, s);
  };
}

inline SymbolGrid lattice_symbol_grid(const LatticeAtoms& walk, int points) {
  if (!walk.is_symmetric()) throw PreconditionError("spectral grids need a symmetric walk (real symbol)");
  return SymbolGrid::lattice(
      walk.dim(), points, [&](const std::vector<double>& xi) { return symbol_lattice(walk, xi).real(); },
      walk.is_symmetric());
}

inline SymbolGrid subordinated_symbol_grid(const BernsteinFunction& f, const LatticeAtoms& walk,
                                           int points) {
  return SymbolGrid::lattice(
      walk.dim(), points, [&](const std::vector<double>& xi) { return subordinated_symbol(f, walk, xi); },
      walk.is_symmetric());
}

struct GeneratorResult {
  LatticeField field;
  /// Tail mass whose contribution is not resolved at some output site (0 when
  /// the output is exact).
  double dropped_mass = 0.0;
};

/// (Au)_k = sum_l p_l (u_{k+l} - u_k) on [-R, R]^n, R = output_radius.
/// Tail atoms enter through their mass in the diagonal term; their
/// off-diagonal contribution vanishes when k + l leaves the support of u.
inline GeneratorResult apply_generator_lattice(const LatticeAtoms& atoms, const LatticeField& u,
                                               int output_radius) {
  if (atoms.dim() != u.dim()) throw ShapeError("atoms and field have different dimensions");
  if (output_radius < 0) throw PreconditionError("output radius must be nonnegative");
  GeneratorResult out{LatticeField(u.dim(), output_radius), 0.0};
  const double total = atoms.total_mass();
  const std::vector<std::pair<LatticePoint, double>> steps(atoms.masses().begin(), atoms.masses().end());
  for (std::size_t i = 0; i < out.field.size(); ++i) {
    const LatticePoint k = out.field.site(i);
    double s = -total * u(k);
    for (const auto& [l, p] : steps) s += p * u(k + l);
    out.field.values()[i] = s;
  }
  if (atoms.tail_mass() > 0.0 && static_cast<long long>(output_radius) + u.radius() > atoms.tail_radius())
    out.dropped_mass = atoms.tail_mass();
  return out;
}

/// Full support of Au: the input window widened by the atom reach.
inline LatticeField apply_generator_lattice(const LatticeAtoms& atoms, const LatticeField& u) {
  return apply_generator_lattice(atoms, u, u.radius() + atoms.reach()).field;
}

/// F^{-1}(-psi F u); the discarded imaginary residue is reported.
inline MultiplierResult apply_generator_spectral(const SymbolGrid& sym, const PeriodicGridField& u) {
  if (!sym.conforms(u)) throw ShapeError("symbol grid and field do not conform");
  std::vector<double> m(sym.values());
  for (double& v : m) v = -v;
  MultiplierResult r = apply_multiplier(u, m);
  if (r.imag_residue > 1e-10 * std::max(u.sup_norm(), 1e-300) && r.imag_residue > 1e-300)
    throw NumericalError("spectral application left an imaginary residue", r.imag_residue);
  return r;
}

/// R_lambda u = F^{-1}((lambda + psi)^{-1} F u).
inline MultiplierResult resolvent_apply(const SymbolGrid& sym, double lambda, const PeriodicGridField& u) {
  if (!(lambda > 0.0)) throw DomainError("resolvent parameter lambda must be positive");
  if (!sym.conforms(u)) throw ShapeError("symbol grid and field do not conform");
  std::vector<double> m(sym.values());
  for (double& v : m) v = 1.0 / (lambda + v);
  MultiplierResult r = apply_multiplier(u, m);
  if (r.imag_residue > 1e-10 * std::max(u.sup_norm(), 1e-300) && r.imag_residue > 1e-300)
    throw NumericalError("resolvent application left an imaginary residue", r.imag_residue);
  return r;
}

/// u with analytic gradient and Hessian.
struct SmoothFunction {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  std::function<Eigen::MatrixXd(const Point&)> hessian;
};

/// Gaussian bump exp(-|x - c|^2 / (2 w^2)).
inline SmoothFunction gaussian_bump(Point c, double w) {
  SmoothFunction u;
  u.value = [c, w](const Point& x) { return std::exp(-(x - c).squaredNorm() / (2.0 * w * w)); };
  u.gradient = [c, w](const Point& x) -> Point {
    const double g = std::exp(-(x - c).squaredNorm() / (2.0 * w * w));
    return -g * (x - c) / (w * w);
  };
  u.hessian = [c, w](const Point& x) -> Eigen::MatrixXd {
    const double g = std::exp(-(x - c).squaredNorm() / (2.0 * w * w));
    const Point d = (x - c) / (w * w);
    const auto n = x.size();
    return g * (d * d.transpose() - Eigen::MatrixXd::Identity(n, n) / (w * w));
  };
  return u;
}

struct PvOptions {
  double spacing = 0.01;  // split radius delta = min(1, 10 spacing)
};

/// (Au)(x) = l.grad u + 1/2 div(Q grad u)
///           + int (u(x+y) - u(x) - y.grad u(x) 1_{|y|<1}) nu(dy),
/// with the integral over |y| < delta replaced by its second-order Taylor
/// term. The result at delta/2 is returned; the error estimate includes the
/// change from delta.
inline quad::Result apply_generator_pv(const CharacteristicTriplet& t, const SmoothFunction& u,
                                       const Point& x, const PvOptions& opt = {}) {
  const int n = t.dim();
  if (x.size() != n) throw ShapeError("evaluation point dimension mismatch");
  if (!u.value || !u.gradient || !u.hessian)
    throw PreconditionError("PV generator needs u, grad u and the Hessian");
  const double ux = u.value(x);
  const Point gx = u.gradient(x);
  const Eigen::MatrixXd hx = u.hessian(x);
  double local = t.drift.dot(gx) + 0.5 * (t.Q.cwiseProduct(hx)).sum();
  const LevyMeasure& m = t.measure;
  if (m.is_lattice()) {
    double s = 0.0;
    for (const auto& [l, p] : m.lattice().masses()) {
      Point y(n);
      for (int i = 0; i < n; ++i) y(i) = l[i];
      s += p * (u.value(x + y) - ux - (y.norm() < 1.0 ? y.dot(gx) : 0.0));
    }
    s -= m.lattice().tail_mass() * ux;
    return {local + s, 0.0};
  }

  auto jump = [&](double delta) -> quad::Result {
    const quad::Result taylor = detail::integrate_continuous(
        m, [&](const Point& y) { return 0.5 * y.dot(hx * y); }, 0.0, delta);
    const quad::Result near = detail::integrate_continuous(
        m, [&](const Point& y) { return u.value(x + y) - ux - y.dot(gx); }, delta, 1.0);
    const quad::Result far = detail::integrate_continuous(
        m, [&](const Point& y) { return u.value(x + y) - ux; }, 1.0, INFINITY);
    return {taylor.value + near.value + far.value, taylor.error + near.error + far.error};
  };
  const double delta = std::min(1.0, 10.0 * opt.spacing);
  const quad::Result a = jump(delta);
  const quad::Result b = jump(0.5 * delta);
  if (!std::isfinite(b.value)) throw NumericalError("PV quadrature produced a non-finite value");
  return {local + b.value, std::abs(a.value - b.value) + b.error};
}

}  // namespace levylab
