#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "levylab/errors.hpp"

namespace levylab {

inline constexpr int kMaxDim = 3;

/// Point of Z^n, n <= kMaxDim. Coordinates beyond the dimension stay zero.
struct LatticePoint {
  std::array<int, kMaxDim> c{};

  LatticePoint() = default;
  explicit LatticePoint(int x) : c{x, 0, 0} {}
  LatticePoint(int x, int y) : c{x, y, 0} {}
  LatticePoint(int x, int y, int z) : c{x, y, z} {}

  static LatticePoint from(const std::vector<int>& v) {
    if (v.empty() || v.size() > static_cast<std::size_t>(kMaxDim))
      throw PreconditionError("lattice point must have 1.." + std::to_string(kMaxDim) +
                              " coordinates");
    LatticePoint p;
    std::copy(v.begin(), v.end(), p.c.begin());
    return p;
  }

  int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

  friend LatticePoint operator+(LatticePoint a, const LatticePoint& b) {
    for (int i = 0; i < kMaxDim; ++i) a.c[i] += b.c[i];
    return a;
  }
  friend LatticePoint operator-(LatticePoint a, const LatticePoint& b) {
    for (int i = 0; i < kMaxDim; ++i) a.c[i] -= b.c[i];
    return a;
  }
  LatticePoint operator-() const { return LatticePoint{} - *this; }

  bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }
  long long norm2() const {
    long long s = 0;
    for (int v : c) s += static_cast<long long>(v) * v;
    return s;
  }
  int max_norm() const {
    int m = 0;
    for (int v : c) m = std::max(m, std::abs(v));
    return m;
  }

  std::vector<int> coords(int dim) const { return {c.begin(), c.begin() + dim}; }

  std::string str(int dim) const {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << c[i];
    os << ')';
    return os.str();
  }
};

/// Euclidean open ball B_h(0) on Z^n: all k with |k| < h.
inline std::vector<LatticePoint> lattice_ball(int dim, double h) {
  std::vector<LatticePoint> pts;
  const int r = static_cast<int>(std::ceil(h));
  const int ry = dim >= 2 ? r : 0;
  const int rz = dim >= 3 ? r : 0;
  for (int x = -r; x <= r; ++x)
    for (int y = -ry; y <= ry; ++y)
      for (int z = -rz; z <= rz; ++z) {
        LatticePoint p(x, y, z);
        if (static_cast<double>(p.norm2()) < h * h) pts.push_back(p);
      }
  return pts;
}

inline bool in_lattice_ball(const LatticePoint& p, double h) {
  return static_cast<double>(p.norm2()) < h * h;
}

/// Box [-N, N]^n in lexicographic order.
inline std::vector<LatticePoint> lattice_box(int dim, int radius) {
  std::vector<LatticePoint> pts;
  const int ry = dim >= 2 ? radius : 0;
  const int rz = dim >= 3 ? radius : 0;
  for (int x = -radius; x <= radius; ++x)
    for (int y = -ry; y <= ry; ++y)
      for (int z = -rz; z <= rz; ++z) pts.emplace_back(x, y, z);
  return pts;
}

inline void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw PreconditionError("lattice dimension must be in 1.." + std::to_string(kMaxDim));
}

/// Finitely many atoms p_l >= 0 on Z^n \ {0}, plus an optional
/// non-materialized remainder: `tail_mass` is the total mass of further atoms
/// that all lie strictly outside the box [-tail_radius, tail_radius]^n.
class LatticeAtoms {
 public:
  LatticeAtoms() = default;

  LatticeAtoms(int dim, std::map<LatticePoint, double> masses, double tail_mass = 0.0,
               int tail_radius = std::numeric_limits<int>::max())
      : dim_(dim), masses_(std::move(masses)), tail_mass_(tail_mass), tail_radius_(tail_radius) {
    check_dim(dim_);
    if (!(tail_mass_ >= 0.0) || !std::isfinite(tail_mass_))
      throw PreconditionError("tail mass must be finite and nonnegative");
    for (auto it = masses_.begin(); it != masses_.end();) {
      const auto& [site, p] = *it;
      if (site.is_zero()) throw PreconditionError("lattice atoms must avoid the origin");
      for (int i = dim_; i < kMaxDim; ++i)
        if (site[i] != 0) throw PreconditionError("atom coordinate exceeds lattice dimension");
      if (!(p >= 0.0) || !std::isfinite(p))
        throw PreconditionError("atom masses must be finite and nonnegative");
      if (p == 0.0)
        it = masses_.erase(it);
      else
        ++it;
    }
    if (tail_mass_ > 0.0 && reach() > tail_radius_)
      throw PreconditionError("materialized atoms must lie inside the tail radius");
  }

  int dim() const { return dim_; }
  const std::map<LatticePoint, double>& masses() const { return masses_; }
  std::size_t size() const { return masses_.size(); }

  double atom(const LatticePoint& l) const {
    auto it = masses_.find(l);
    return it == masses_.end() ? 0.0 : it->second;
  }

  double materialized_mass() const {
    double s = 0.0;
    for (const auto& [site, p] : masses_) s += p;
    return s;
  }
  double tail_mass() const { return tail_mass_; }
  int tail_radius() const { return tail_radius_; }
  double total_mass() const { return materialized_mass() + tail_mass_; }

  /// Largest sup-norm of a materialized atom.
  int reach() const {
    int r = 0;
    for (const auto& [site, p] : masses_) r = std::max(r, site.max_norm());
    return r;
  }

  bool is_symmetric(double tol = 1e-14) const {
    if (tail_mass_ > 0.0 && tail_radius_ == std::numeric_limits<int>::max()) return false;
    for (const auto& [site, p] : masses_)
      if (std::abs(atom(-site) - p) > tol * std::max(1.0, p)) return false;
    return true;
  }

  bool is_probability(double tol = 1e-12) const {
    return tail_mass_ == 0.0 && std::abs(materialized_mass() - 1.0) <= tol;
  }

  /// Keep atoms with |l|_inf <= radius, moving the rest into the tail.
  LatticeAtoms truncated(int radius) const {
    std::map<LatticePoint, double> kept;
    double dropped = tail_mass_;
    for (const auto& [site, p] : masses_) {
      if (site.max_norm() <= radius)
        kept.emplace(site, p);
      else
        dropped += p;
    }
    return LatticeAtoms(dim_, std::move(kept), dropped,
                        dropped > 0.0 ? std::min(radius, tail_radius_) : tail_radius_);
  }

  /// Second moment matrix sum_l p_l l l^T (row-major n x n).
  std::vector<double> second_moment() const {
    std::vector<double> c(static_cast<std::size_t>(dim_ * dim_), 0.0);
    for (const auto& [site, p] : masses_)
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          c[static_cast<std::size_t>(i * dim_ + j)] += p * site[i] * site[j];
    return c;
  }

 private:
  int dim_ = 1;
  std::map<LatticePoint, double> masses_;
  double tail_mass_ = 0.0;
  int tail_radius_ = std::numeric_limits<int>::max();
};

/// Nearest-neighbour walk on Z^n: P(step = +-e_j) = 1/(2n).
inline LatticeAtoms nearest_neighbour_walk(int dim) {
  check_dim(dim);
  std::map<LatticePoint, double> m;
  for (int j = 0; j < dim; ++j) {
    LatticePoint e;
    e.c[static_cast<std::size_t>(j)] = 1;
    m[e] = 0.5 / dim;
    m[-e] = 0.5 / dim;
  }
  return LatticeAtoms(dim, std::move(m));
}

/// Index of the sublattice generated by the atom support in Z^n
/// (0 if the support does not span R^n). Gcd of maximal minors.
inline long long generated_lattice_index(const LatticeAtoms& atoms) {
  std::vector<LatticePoint> v;
  for (const auto& [site, p] : atoms.masses()) v.push_back(site);
  long long g = 0;
  const int n = atoms.dim();
  const std::size_t k = v.size();
  if (n == 1) {
    for (const auto& a : v) g = std::gcd(g, static_cast<long long>(std::abs(a[0])));
  } else if (n == 2) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        g = std::gcd(g, std::llabs(static_cast<long long>(v[i][0]) * v[j][1] -
                                   static_cast<long long>(v[i][1]) * v[j][0]));
  } else {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (std::size_t l = j + 1; l < k; ++l) {
          const auto& a = v[i];
          const auto& b = v[j];
          const auto& c = v[l];
          long long det = static_cast<long long>(a[0]) * (static_cast<long long>(b[1]) * c[2] -
                                                           static_cast<long long>(b[2]) * c[1]) -
                          static_cast<long long>(a[1]) * (static_cast<long long>(b[0]) * c[2] -
                                                           static_cast<long long>(b[2]) * c[0]) +
                          static_cast<long long>(a[2]) * (static_cast<long long>(b[0]) * c[1] -
                                                           static_cast<long long>(b[1]) * c[0]);
          g = std::gcd(g, std::llabs(det));
        }
  }
  return g;
}

/// Values u_k on the window [-N, N]^n, implicitly zero outside.
class LatticeField {
 public:
  LatticeField() = default;
  LatticeField(int dim, int radius) : dim_(dim), radius_(radius) {
    check_dim(dim);
    if (radius < 0) throw PreconditionError("window radius must be nonnegative");
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(side());
    values_.assign(n, 0.0);
  }

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  int side() const { return 2 * radius_ + 1; }
  std::size_t size() const { return values_.size(); }

  bool contains(const LatticePoint& k) const {
    for (int i = 0; i < dim_; ++i)
      if (std::abs(k[i]) > radius_) return false;
    for (int i = dim_; i < kMaxDim; ++i)
      if (k[i] != 0) return false;
    return true;
  }

  double operator()(const LatticePoint& k) const {
    return contains(k) ? values_[offset(k)] : 0.0;
  }

  double& at(const LatticePoint& k) {
    if (!contains(k)) throw ShapeError("lattice site " + k.str(dim_) + " outside the window");
    return values_[offset(k)];
  }

  /// Site of the i-th stored value (lexicographic order, first axis slowest).
  LatticePoint site(std::size_t i) const {
    LatticePoint p;
    for (int ax = dim_ - 1; ax >= 0; --ax) {
      p.c[static_cast<std::size_t>(ax)] =
          static_cast<int>(i % static_cast<std::size_t>(side())) - radius_;
      i /= static_cast<std::size_t>(side());
    }
    return p;
  }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }
  double l2_norm() const {
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(s);
  }

  /// Same field on a larger (or smaller) window.
  LatticeField resized(int radius) const {
    LatticeField out(dim_, radius);
    for (std::size_t i = 0; i < out.size(); ++i) out.values_[i] = (*this)(out.site(i));
    return out;
  }

 private:
  std::size_t offset(const LatticePoint& k) const {
    std::size_t o = 0;
    for (int i = 0; i < dim_; ++i)
      o = o * static_cast<std::size_t>(side()) + static_cast<std::size_t>(k[i] + radius_);
    return o;
  }

  int dim_ = 1;
  int radius_ = 0;
  std::vector<double> values_;
};

inline LatticeField unit_delta(int dim, int radius, const LatticePoint& at) {
  LatticeField u(dim, radius);
  u.at(at) = 1.0;
  return u;
}

}  // namespace levylab
