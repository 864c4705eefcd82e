#pragma once

// JSON specs for Bernstein functions, walks, measures, fields and targets.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "levylab/bernstein.hpp"
#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"
#include "levylab/levy_measure.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/random.hpp"
#include "levylab/subordination.hpp"

namespace levylab::config {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing required field '" + key + "'");
  return j.at(key);
}

template <class T>
T get(const json& j, const std::string& key) {
  const json& v = require(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("field '" + key + "' has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return get<T>(j, key);
}

inline Point point(const json& j, const std::string& key) {
  const auto v = get<std::vector<double>>(j, key);
  if (v.empty() || v.size() > static_cast<std::size_t>(kMaxDim))
    throw ConfigError("field '" + key + "' must have 1.." + std::to_string(kMaxDim) + " coordinates");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline LatticePoint lattice_point(const json& j, const std::string& key, int dim) {
  const auto v = get<std::vector<int>>(j, key);
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError("field '" + key + "' must have " + std::to_string(dim) + " coordinates");
  return LatticePoint::from(v);
}

/// {kind: stable, s} | {kind: log} | {kind: atoms, atoms: [[t, w], ...]} |
/// {kind: drift}; optional beta.
inline BernsteinFunction bernstein(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  const double beta = get_or<double>(j, "beta", kind == "drift" ? 1.0 : 0.0);
  if (kind == "stable") return BernsteinFunction::stable(get<double>(j, "s"), beta);
  if (kind == "log") return BernsteinFunction::log(beta);
  if (kind == "drift") return BernsteinFunction::drift(beta);
  if (kind == "atoms") {
    std::vector<std::pair<double, double>> a;
    for (const auto& row : require(j, "atoms")) {
      if (!row.is_array() || row.size() != 2) throw ConfigError("Bernstein atoms are [t, w] pairs");
      a.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
    return BernsteinFunction::atoms(std::move(a), beta);
  }
  throw ConfigError("unknown Bernstein kind '" + kind + "'");
}

inline SubordinationOptions subordination_options(const json& j) {
  SubordinationOptions o;
  o.reach = get_or<int>(j, "reach", o.reach);
  o.tolerance = get_or<double>(j, "tolerance", o.tolerance);
  o.series_truncation = get_or<std::size_t>(j, "series_truncation", o.series_truncation);
  o.large_time = get_or<double>(j, "large_time", o.large_time);
  return o;
}

struct WalkSpec {
  LatticeAtoms atoms;
  std::optional<SubordinationResult> subordination;  // set for subordinated walks
};

/// {kind: nearest_neighbour, dim} | {kind: atoms, dim, atoms: [[[l...], p], ...]} |
/// {kind: subordinated, bernstein, walk, reach?, tolerance?, ...}.
inline WalkSpec walk(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "nearest_neighbour") {
    const int dim = get_or<int>(j, "dim", 1);
    check_dim(dim);
    return {nearest_neighbour_walk(dim), std::nullopt};
  }
  if (kind == "atoms") {
    const int dim = get_or<int>(j, "dim", 1);
    check_dim(dim);
    std::map<LatticePoint, double> m;
    for (const auto& row : require(j, "atoms")) {
      if (!row.is_array() || row.size() != 2) throw ConfigError("walk atoms are [[l...], p] pairs");
      const auto l = row[0].get<std::vector<int>>();
      if (static_cast<int>(l.size()) != dim) throw ConfigError("walk atom has the wrong dimension");
      m[LatticePoint::from(l)] += row[1].get<double>();
    }
    return {LatticeAtoms(dim, std::move(m)), std::nullopt};
  }
  if (kind == "subordinated") {
    const BernsteinFunction f = bernstein(require(j, "bernstein"));
    const WalkSpec base = walk(require(j, "walk"));
    SubordinationResult r = subordinated_levy_atoms(f, base.atoms, subordination_options(j));
    LatticeAtoms a = r.atoms;
    return {std::move(a), std::move(r)};
  }
  throw ConfigError("unknown walk kind '" + kind + "'");
}

inline Patch patch(const json& j, int dim) {
  const auto kind = get<std::string>(j, "kind");
  Point c = point(j, "center");
  if (c.size() != dim) throw ConfigError("patch center has the wrong dimension");
  const double r = get<double>(j, "radius");
  if (kind == "hole") return Patch::hole(c, r);
  if (kind == "lebesgue") return Patch::lebesgue(c, r);
  if (kind == "exponential") {
    Point b = point(j, "beta");
    if (b.size() != dim) throw ConfigError("patch beta has the wrong dimension");
    return Patch::exponential(c, r, b);
  }
  if (kind == "polynomial") {
    std::vector<Monomial> mono;
    for (const auto& row : require(j, "monomials")) {
      if (!row.is_array() || row.size() != 2) throw ConfigError("monomials are [[a...], c] pairs");
      const auto e = row[0].get<std::vector<int>>();
      if (static_cast<int>(e.size()) != dim) throw ConfigError("monomial exponent has the wrong dimension");
      Monomial m;
      for (int i = 0; i < dim; ++i) {
        if (e[static_cast<std::size_t>(i)] < 0) throw ConfigError("monomial exponents must be nonnegative");
        m.exponent[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)];
      }
      m.coeff = row[1].get<double>();
      mono.push_back(m);
    }
    return Patch::polynomial(c, r, std::move(mono));
  }
  throw ConfigError("unknown patch kind '" + kind + "'");
}

/// {kind: radial_stable, s, dim, c?} | {kind: asymmetric_stable, r, s, c_r, c_s} |
/// {kind: lattice, walk}; optional patches in application order.
inline LevyMeasure measure(const json& j) {
  const auto kind = get<std::string>(j, "kind");
  std::optional<LevyMeasure> m;
  if (kind == "radial_stable") {
    const double s = get<double>(j, "s");
    const int n = get_or<int>(j, "dim", 1);
    check_dim(n);
    RadialStable r = RadialStable::make(s, n);
    r.c = get_or<double>(j, "c", r.c);
    m.emplace(r);
  } else if (kind == "asymmetric_stable") {
    AsymmetricStable1D a{get<double>(j, "r"), get<double>(j, "s"), 0.0, 0.0};
    a.c_r = get_or<double>(j, "c_r", stable_constant(a.r, 1));
    a.c_s = get_or<double>(j, "c_s", stable_constant(a.s, 1));
    m.emplace(a);
  } else if (kind == "lattice") {
    m.emplace(walk(require(j, "walk")).atoms);
  } else {
    throw ConfigError("unknown measure kind '" + kind + "'");
  }
  if (j.contains("patches"))
    for (const auto& p : j.at("patches")) m = apply_surgery(*m, patch(p, m->dim()));
  return *m;
}

/// Lattice fields: {kind: delta, at, radius} | {kind: constant, value, radius}
/// | {kind: values, radius, values: [...]} (lexicographic order) |
/// {kind: random, radius, stream?} (uniform on [-1, 1] from the run seed).
inline LatticeField lattice_field(const json& j, int dim, std::uint64_t seed = 0) {
  const auto kind = get<std::string>(j, "kind");
  const int radius = get<int>(j, "radius");
  if (radius < 0) throw ConfigError("field radius must be nonnegative");
  LatticeField u(dim, radius);
  if (kind == "delta") {
    u.at(lattice_point(j, "at", dim)) = get_or<double>(j, "value", 1.0);
  } else if (kind == "constant") {
    const double c = get<double>(j, "value");
    for (double& v : u.values()) v = c;
  } else if (kind == "random") {
    const RngSpec rng{seed, get_or<std::uint32_t>(j, "stream", 1000)};
    for (std::size_t i = 0; i < u.size(); ++i) {
      PhiloxEngine eng(rng, i);
      u.values()[i] = std::uniform_real_distribution<double>(-1.0, 1.0)(eng);
    }
  } else if (kind == "values") {
    const auto v = get<std::vector<double>>(j, "values");
    if (v.size() != u.size()) throw ConfigError("field values do not match the window size");
    u.values() = v;
  } else {
    throw ConfigError("unknown field kind '" + kind + "'");
  }
  return u;
}

/// 1D: y^d minus its weighted least-squares projection onto polynomials of
/// degree < d on [lo, hi] under the probe quadrature.
inline std::function<double(const Point&)> monomial_residual(int d, double lo, double hi, int panels, int nodes) {
  const quad::Rule r = quad::composite_gauss_legendre(lo, hi, panels, nodes);
  const auto q = static_cast<Eigen::Index>(r.nodes.size());
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Eigen::MatrixXd A(q, d);
  Eigen::VectorXd b(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const double t = (r.nodes[static_cast<std::size_t>(i)] - mid) / half;
    const double sw = std::sqrt(r.weights[static_cast<std::size_t>(i)]);
    for (int k = 0; k < d; ++k) A(i, k) = sw * std::pow(t, k);
    b(i) = sw * std::pow(r.nodes[static_cast<std::size_t>(i)], d);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return [=](const Point& y) {
    const double t = (y(0) - mid) / half;
    double p = 0.0;
    for (int k = d - 1; k >= 0; --k) p = p * t + c(k);
    return std::pow(y(0), d) - p;
  };
}

/// Probe targets on R^n: {kind: cos2_bump, center, width} |
/// {kind: sin2, lo, hi} (1D) | {kind: monomial_residual, degree} (1D, uses
/// the probe region and quadrature).
inline std::function<double(const Point&)> target(const json& j, const Point& region_lo, const Point& region_hi,
                                                  int panels, int nodes) {
  const auto kind = get<std::string>(j, "kind");
  if (kind == "cos2_bump") {
    const Point c = point(j, "center");
    const double w = get<double>(j, "width");
    if (!(w > 0.0)) throw ConfigError("bump width must be positive");
    return [c, w](const Point& y) {
      const double r = (y - c).norm();
      if (r >= w) return 0.0;
      const double v = std::cos(0.5 * std::numbers::pi * r / w);
      return v * v;
    };
  }
  if (kind == "sin2") {
    const double lo = get<double>(j, "lo");
    const double hi = get<double>(j, "hi");
    if (!(hi > lo)) throw ConfigError("sin2 target needs lo < hi");
    return [lo, hi](const Point& y) {
      if (y(0) <= lo || y(0) >= hi) return 0.0;
      const double v = std::sin(std::numbers::pi * (y(0) - lo) / (hi - lo));
      return v * v;
    };
  }
  if (kind == "monomial_residual") {
    if (region_lo.size() != 1) throw ConfigError("monomial_residual targets are 1D");
    const int d = get<int>(j, "degree");
    if (d < 1) throw ConfigError("monomial degree must be >= 1");
    return monomial_residual(d, region_lo(0), region_hi(0), panels, nodes);
  }
  throw ConfigError("unknown target kind '" + kind + "'");
}

}  // namespace levylab::config
