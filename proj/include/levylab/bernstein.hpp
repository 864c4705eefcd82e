#pragma once

// Bernstein functions f(lambda) = beta*lambda + int (1 - e^{-lambda t}) rho(dt)
// and their left extensions.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levylab/errors.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

/// rho(dt) = s / Gamma(1-s) t^{-1-s} dt, f(lambda) = lambda^s.
struct StableFamily {
  double s = 0.5;
};

/// rho(dt) = t^{-1} e^{-t} dt, f(lambda) = log(1 + lambda).
struct LogFamily {};

/// rho = sum_i w_i delta_{t_i}.
struct AtomFamily {
  std::vector<std::pair<double, double>> atoms;  // (t_i, w_i)
};

/// rho(dt) = density(t) dt, integrated numerically on [t_min, t_max].
/// `tail_bound(T)` bounds rho((T, infinity)); `alpha_max` is the supremum of
/// alpha with int_{(1,inf)} e^{alpha t} rho(dt) < infinity. Either may be absent.
struct DensityFamily {
  std::function<double(double)> density;
  double t_min = 1e-8;
  double t_max = 50.0;
  std::function<double(double)> tail_bound;
  std::optional<double> alpha_max;
  std::string label = "density";
};

using BernsteinRepresentation = std::variant<StableFamily, LogFamily, AtomFamily, DensityFamily>;

class BernsteinFunction {
 public:
  BernsteinFunction(double beta, BernsteinRepresentation rho) : beta_(beta), rho_(std::move(rho)) {
    if (!(beta_ >= 0.0) || !std::isfinite(beta_))
      throw PreconditionError("Bernstein drift beta must be finite and nonnegative");
    std::visit([](const auto& r) { validate(r); }, rho_);
  }

  static BernsteinFunction stable(double s, double beta = 0.0) {
    return {beta, StableFamily{s}};
  }
  static BernsteinFunction log(double beta = 0.0) { return {beta, LogFamily{}}; }
  static BernsteinFunction atoms(std::vector<std::pair<double, double>> a, double beta = 0.0) {
    return {beta, AtomFamily{std::move(a)}};
  }
  /// f(lambda) = beta * lambda.
  static BernsteinFunction drift(double beta) { return {beta, AtomFamily{}}; }

  double beta() const { return beta_; }
  const BernsteinRepresentation& rho() const { return rho_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&rho_);
  }

  std::string kind() const {
    struct V {
      std::string operator()(const StableFamily&) const { return "stable"; }
      std::string operator()(const LogFamily&) const { return "log"; }
      std::string operator()(const AtomFamily&) const { return "atoms"; }
      std::string operator()(const DensityFamily& d) const { return d.label; }
    };
    return std::visit(V{}, rho_);
  }

 private:
  static void validate(const StableFamily& r) {
    if (!(r.s > 0.0 && r.s < 1.0)) throw DomainError("stable index s must lie in (0,1)");
  }
  static void validate(const LogFamily&) {}
  static void validate(const AtomFamily& r) {
    for (const auto& [t, w] : r.atoms)
      if (!(t > 0.0) || !(w > 0.0) || !std::isfinite(t) || !std::isfinite(w))
        throw PreconditionError("Bernstein atoms need t_i > 0 and w_i > 0");
  }
  static void validate(const DensityFamily& r) {
    if (!r.density) throw PreconditionError("density family needs a density evaluator");
    if (!(r.t_min > 0.0 && r.t_max > r.t_min))
      throw PreconditionError("density family needs 0 < t_min < t_max");
  }

  double beta_ = 0.0;
  BernsteinRepresentation rho_;
};

namespace detail {

/// Log-spaced composite Gauss-Legendre nodes on [t_min, t_max] with weights
/// already multiplied by the density (and the Jacobian of t = e^u).
struct WeightedNodes {
  std::vector<double> t;
  std::vector<double> w;
};

inline WeightedNodes density_nodes(const DensityFamily& d) {
  const double u0 = std::log(d.t_min);
  const double u1 = std::log(d.t_max);
  const int panels = std::max(4, static_cast<int>(std::ceil((u1 - u0) / 0.5)));
  const quad::Rule r = quad::composite_gauss_legendre(u0, u1, panels, 16);
  WeightedNodes out;
  out.t.reserve(r.nodes.size());
  out.w.reserve(r.nodes.size());
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    const double t = std::exp(r.nodes[i]);
    out.t.push_back(t);
    out.w.push_back(r.weights[i] * t * d.density(t));
  }
  return out;
}

/// int (1 - e^{-x t}) rho(dt) for the jump part (no drift); x may be negative
/// where the integral converges.
inline double jump_part(const BernsteinRepresentation& rho, double x) {
  struct V {
    double x;
    double operator()(const StableFamily& r) const { return std::pow(x, r.s); }
    double operator()(const LogFamily&) const { return std::log1p(x); }
    double operator()(const AtomFamily& r) const {
      double s = 0.0;
      for (const auto& [t, w] : r.atoms) s += -w * std::expm1(-x * t);
      return s;
    }
    double operator()(const DensityFamily& d) const {
      const WeightedNodes nodes = density_nodes(d);
      double s = 0.0;
      for (std::size_t i = 0; i < nodes.t.size(); ++i) s += -nodes.w[i] * std::expm1(-x * nodes.t[i]);
      return s;
    }
  };
  return std::visit(V{x}, rho);
}

}  // namespace detail

/// f(lambda) for lambda > 0.
inline double eval(const BernsteinFunction& f, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("Bernstein functions are evaluated at lambda > 0");
  return f.beta() * lambda + detail::jump_part(f.rho(), lambda);
}

/// Supremum alpha of finite exponential moments int_{(1,inf)} e^{alpha t} rho(dt).
struct ExtensionDomain {
  double alpha_max = 0.0;  // may be +infinity
  /// Open interval (-alpha_max, infinity) on which the extension is defined.
  bool contains(double x) const { return x > -alpha_max; }
};

inline ExtensionDomain extension_domain(const BernsteinFunction& f) {
  struct V {
    ExtensionDomain operator()(const StableFamily&) const { return {0.0}; }
    ExtensionDomain operator()(const LogFamily&) const { return {1.0}; }
    ExtensionDomain operator()(const AtomFamily&) const {
      return {std::numeric_limits<double>::infinity()};
    }
    ExtensionDomain operator()(const DensityFamily& d) const {
      if (!d.alpha_max)
        throw UndecidableError("exponential moments of '" + d.label +
                               "' are undecidable without tail metadata");
      return {*d.alpha_max};
    }
  };
  return std::visit(V{}, f.rho());
}

/// Whether int_{(1,inf)} e^{alpha s} rho(ds) is finite. Decided analytically;
/// opaque density families without metadata raise UndecidableError.
inline bool exp_moment_finite(const BernsteinFunction& f, double alpha) {
  if (!(alpha > 0.0)) throw DomainError("exponential moment order alpha must be positive");
  // The log family has e^{(alpha-1)t}/t on (1,inf): finite iff alpha < 1, and
  // all implemented families share the open-interval convention.
  return alpha < extension_domain(f).alpha_max;
}

/// Left extension x -> beta x + int (1 - e^{-x t}) rho(dt) on (-alpha_max, inf).
inline double eval_extension(const BernsteinFunction& f, double x) {
  const ExtensionDomain dom = extension_domain(f);
  if (!dom.contains(x))
    throw DomainError("x = " + std::to_string(x) + " outside the extension domain (-" +
                      std::to_string(dom.alpha_max) + ", inf)");
  return f.beta() * x + detail::jump_part(f.rho(), x);
}

/// k-th forward difference of the extension with step h starting at x.
inline double forward_difference(const BernsteinFunction& f, double x, double h, int k) {
  double s = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
    s += sign * boost::math::binomial_coefficient<double>(static_cast<unsigned>(k),
                                                          static_cast<unsigned>(j)) *
         eval_extension(f, x + j * h);
  }
  return s;
}

/// Checks (-1)^{k+1} Delta_h^k f >= -tol for k = 1..max_order on a grid of
/// points in [a, b]. Returns the worst signed violation (<= 0 means none).
inline double alternating_sign_violation(const BernsteinFunction& f, double a, double b, int points,
                                         int max_order, double h, double tol) {
  double worst = -INFINITY;
  for (int i = 0; i < points; ++i) {
    const double x = a + (b - a) * i / std::max(1, points - 1);
    for (int k = 1; k <= max_order; ++k) {
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      const double v = sign * forward_difference(f, x, h, k);
      worst = std::max(worst, -v - tol);
    }
  }
  return worst;
}

/// rho((T, infinity)), or a bound thereof.
inline double rho_tail(const BernsteinFunction& f, double T) {
  struct V {
    double T;
    double operator()(const StableFamily& r) const {
      return std::pow(T, -r.s) / boost::math::tgamma(1.0 - r.s);
    }
    double operator()(const LogFamily&) const { return boost::math::expint(1, T); }
    double operator()(const AtomFamily& r) const {
      double s = 0.0;
      for (const auto& [t, w] : r.atoms)
        if (t > T) s += w;
      return s;
    }
    double operator()(const DensityFamily& d) const {
      if (T >= d.t_max) {
        if (!d.tail_bound) return std::numeric_limits<double>::infinity();
        return d.tail_bound(T);
      }
      double s = d.tail_bound ? d.tail_bound(d.t_max) : 0.0;
      const detail::WeightedNodes nodes = detail::density_nodes(d);
      for (std::size_t i = 0; i < nodes.t.size(); ++i)
        if (nodes.t[i] > T) s += nodes.w[i];
      return s;
    }
  };
  return std::visit(V{T}, f.rho());
}

}  // namespace levylab
