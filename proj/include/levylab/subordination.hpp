#pragma once

// Bochner subordination of lattice walks: the Levy measure of R_{N_{T_t}},
//
//   nu_f({l}) = beta p_l + int mu_t({l}) rho(dt),
//   mu_t({l}) = sum_m e^{-t} t^m / m! P(R_m = l).
//
// On (0, T] the t-integral is folded into Poisson-mixing coefficients
// c_m(T) = int_0^T e^{-t} t^m / m! rho(dt) and the series in m is summed with
// exact walk convolutions. Beyond T the heat kernel mu_t is replaced by its
// local Edgeworth expansion (Gaussian + fourth-cumulant correction), which is
// accurate to O(t^{-2}) relative.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "levylab/bernstein.hpp"
#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"
#include "levylab/quadrature.hpp"

namespace levylab {

struct SubordinationOptions {
  /// Maximum number of Poisson-mixing terms m = 1..series_truncation.
  std::size_t series_truncation = 4096;
  /// Switch time T between the exact series and the large-time expansion.
  double large_time = 2048.0;
  /// Materialize atoms with |l|_inf <= reach.
  int reach = 64;
  /// Required accuracy per atom (absolute).
  double tolerance = 1e-10;
};

struct SubordinationResult {
  LatticeAtoms atoms;
  double series_deficit = 0.0;     // mixing mass of the dropped Poisson terms
  double expansion_error = 0.0;    // estimate for the large-time expansion
  double discarded_rho_mass = 0.0;  // rho mass neither summed nor expanded
  double achieved_tolerance = 0.0;
  std::size_t terms_used = 0;
  double switch_time = 0.0;
};

/// Local Edgeworth expansion of P(X_t = x) for a symmetric compound Poisson
/// walk generating Z^n.
class HeatKernelExpansion {
 public:
  explicit HeatKernelExpansion(const LatticeAtoms& walk) : dim_(walk.dim()) {
    if (!walk.is_symmetric(1e-13))
      throw PreconditionError("large-time heat-kernel expansion requires a symmetric walk");
    if (generated_lattice_index(walk) != 1)
      throw PreconditionError("large-time heat-kernel expansion requires a walk generating Z^n");
    const std::vector<double> c = walk.second_moment();
    Eigen::MatrixXd cov(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) cov(i, j) = c[static_cast<std::size_t>(i * dim_ + j)];
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw PreconditionError("walk covariance is degenerate");
    inv_ = llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
    det_ = cov.determinant();
    for (const auto& [site, p] : walk.masses()) {
      Eigen::VectorXd l(dim_);
      for (int i = 0; i < dim_; ++i) l(i) = site[i];
      steps_.push_back(l);
      probs_.push_back(p);
      self_.push_back(l.dot(inv_ * l));
    }
  }

  struct Value {
    double value;
    double error;
  };

  Value operator()(const LatticePoint& x, double t) const {
    Eigen::VectorXd xv(dim_);
    for (int i = 0; i < dim_; ++i) xv(i) = x[i];
    const Eigen::VectorXd y = inv_ * xv;
    const double q = xv.dot(y);
    const double g = std::pow(2.0 * std::numbers::pi * t, -0.5 * dim_) / std::sqrt(det_) *
                     std::exp(-0.5 * q / t);
    double corr = 0.0;
    double next = 0.0;
    for (std::size_t j = 0; j < steps_.size(); ++j) {
      const double a = steps_[j].dot(y);
      const double b = self_[j];
      const double a2 = a * a;
      corr += probs_[j] * (a2 * a2 / (t * t * t) - 6.0 * a2 * b / (t * t) + 3.0 * b * b / t);
      next += probs_[j] * b * b * b;
    }
    corr /= 24.0;
    // Size of the omitted O(t^-2) terms: squared fourth-cumulant correction
    // and the sixth-cumulant term at the origin scale.
    const double err = g * (0.5 * corr * corr + 15.0 * next / (720.0 * t * t));
    return {g * (1.0 + corr), err};
  }

 private:
  int dim_;
  Eigen::MatrixXd inv_;
  double det_ = 1.0;
  std::vector<Eigen::VectorXd> steps_;
  std::vector<double> probs_;
  std::vector<double> self_;
};

namespace detail {

/// Dense array on [-W, W]^n.
struct DenseBox {
  int dim = 1;
  int W = 0;
  std::vector<double> v;

  DenseBox(int d, int w) : dim(d), W(w) {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(2 * w + 1);
    v.assign(n, 0.0);
  }
  int side() const { return 2 * W + 1; }
  bool contains(const LatticePoint& p) const {
    for (int i = 0; i < dim; ++i)
      if (std::abs(p[i]) > W) return false;
    return true;
  }
  std::size_t offset(const LatticePoint& p) const {
    std::size_t o = 0;
    for (int i = 0; i < dim; ++i)
      o = o * static_cast<std::size_t>(side()) + static_cast<std::size_t>(p[i] + W);
    return o;
  }
  LatticePoint site(std::size_t i) const {
    LatticePoint p;
    for (int ax = dim - 1; ax >= 0; --ax) {
      p.c[static_cast<std::size_t>(ax)] = static_cast<int>(i % static_cast<std::size_t>(side())) - W;
      i /= static_cast<std::size_t>(side());
    }
    return p;
  }
  double get(const LatticePoint& p) const { return contains(p) ? v[offset(p)] : 0.0; }
};

/// One convolution step q -> q * p, truncated to [-W', W']^n.
inline DenseBox convolve_step(const DenseBox& q, const std::vector<std::pair<LatticePoint, double>>& steps,
                              int new_w) {
  DenseBox out(q.dim, new_w);
  for (std::size_t i = 0; i < q.v.size(); ++i) {
    const double val = q.v[i];
    if (val == 0.0) continue;
    const LatticePoint x = q.site(i);
    for (const auto& [l, p] : steps) {
      const LatticePoint y = x + l;
      if (out.contains(y)) out.v[out.offset(y)] += p * val;
    }
  }
  return out;
}

/// c_m(T) = int_0^T e^{-t} t^m / m! rho(dt), m >= 1 (jump part only).
inline double mixing_coefficient(const BernsteinRepresentation& rho, std::size_t m_, double T) {
  const double m = static_cast<double>(m_);
  struct V {
    double m, T;
    double operator()(const StableFamily& r) const {
      const double pre = r.s / boost::math::tgamma(1.0 - r.s);
      return pre * boost::math::tgamma_ratio(m - r.s, m + 1.0) * boost::math::gamma_p(m - r.s, T);
    }
    double operator()(const LogFamily&) const {
      return std::ldexp(boost::math::gamma_p(m, 2.0 * T) / m, -static_cast<int>(m));
    }
    double operator()(const AtomFamily& r) const {
      double s = 0.0;
      for (const auto& [t, w] : r.atoms)
        if (t <= T) s += w * std::exp(m * std::log(t) - t - std::lgamma(m + 1.0));
      return s;
    }
    double operator()(const DensityFamily& d) const {
      const WeightedNodes nodes = density_nodes(d);
      double s = 0.0;
      for (std::size_t i = 0; i < nodes.t.size(); ++i)
        if (nodes.t[i] <= T)
          s += nodes.w[i] * std::exp(m * std::log(nodes.t[i]) - nodes.t[i] - std::lgamma(m + 1.0));
      return s;
    }
  };
  return std::visit(V{m, T}, rho);
}

/// int_0^T (1 - e^{-t}) rho(dt) = sum_{m>=1} c_m(T).
inline double mixing_total(const BernsteinRepresentation& rho, double T) {
  struct V {
    double T;
    double operator()(const StableFamily& r) const {
      return 1.0 - std::pow(T, -r.s) * (-std::expm1(-T)) / boost::math::tgamma(1.0 - r.s) -
             boost::math::gamma_q(1.0 - r.s, T);
    }
    double operator()(const LogFamily&) const {
      return std::log(2.0) - boost::math::expint(1, T) + boost::math::expint(1, 2.0 * T);
    }
    double operator()(const AtomFamily& r) const {
      double s = 0.0;
      for (const auto& [t, w] : r.atoms)
        if (t <= T) s += -w * std::expm1(-t);
      return s;
    }
    double operator()(const DensityFamily& d) const {
      const WeightedNodes nodes = density_nodes(d);
      double s = 0.0;
      for (std::size_t i = 0; i < nodes.t.size(); ++i)
        if (nodes.t[i] <= T) s += -nodes.w[i] * std::expm1(-nodes.t[i]);
      return s;
    }
  };
  return std::visit(V{T}, rho);
}

/// int_{(T, inf)} g(t) rho(dt) for bounded g; `exact` is false when only a
/// bound on rho((T, inf)) is known beyond the representable range.
template <class G>
quad::Result integrate_rho_beyond(const BernsteinRepresentation& rho, double T, G&& g) {
  struct V {
    double T;
    G& g;
    quad::Result operator()(const StableFamily& r) const {
      const double pre = r.s / boost::math::tgamma(1.0 - r.s);
      return quad::integrate_to_infinity(
          [&](double t) { return g(t) * pre * std::pow(t, -1.0 - r.s); }, T, 1e-12);
    }
    quad::Result operator()(const LogFamily&) const {
      return quad::integrate_to_infinity([&](double t) { return g(t) * std::exp(-t) / t; }, T,
                                         1e-12);
    }
    quad::Result operator()(const AtomFamily& r) const {
      quad::Result s;
      for (const auto& [t, w] : r.atoms)
        if (t > T) s.value += w * g(t);
      return s;
    }
    quad::Result operator()(const DensityFamily& d) const {
      const WeightedNodes nodes = density_nodes(d);
      quad::Result s;
      for (std::size_t i = 0; i < nodes.t.size(); ++i)
        if (nodes.t[i] > T) s.value += nodes.w[i] * g(nodes.t[i]);
      return s;
    }
  };
  return std::visit(V{T, g}, rho);
}

inline double choose_switch_time(const BernsteinFunction& f, double large_time) {
  struct V {
    double L;
    double operator()(const StableFamily&) const { return L; }
    double operator()(const LogFamily&) const { return std::min(L, 40.0); }
    double operator()(const AtomFamily& r) const {
      double tmax = 0.0;
      for (const auto& [t, w] : r.atoms)
        if (t <= L) tmax = std::max(tmax, t);
      return tmax;
    }
    double operator()(const DensityFamily& d) const { return std::min(L, d.t_max); }
  };
  return std::visit(V{large_time}, f.rho());
}

}  // namespace detail

/// Materializes the Levy measure of the walk subordinated by f on the box
/// |l|_inf <= options.reach; the remaining mass goes into the tail.
inline SubordinationResult subordinated_levy_atoms(const BernsteinFunction& f, const LatticeAtoms& walk,
                                                   const SubordinationOptions& options = {}) {
  if (!walk.is_probability())
    throw PreconditionError("subordination needs a probability walk (atoms summing to 1)");
  if (options.series_truncation < 1) throw PreconditionError("series truncation must be >= 1");
  if (options.reach < 1) throw PreconditionError("reach must be >= 1");
  if (!(options.tolerance > 0.0)) throw PreconditionError("tolerance must be positive");

  const int n = walk.dim();
  const int R = options.reach;
  const double T = detail::choose_switch_time(f, options.large_time);

  std::vector<std::pair<LatticePoint, double>> steps(walk.masses().begin(), walk.masses().end());
  const int r = walk.reach();

  SubordinationResult out;
  out.switch_time = T;

  detail::DenseBox acc(n, R);
  double q0_mixed = 0.0;
  double mixed = 0.0;

  const double total_mixing = T > 0.0 ? detail::mixing_total(f.rho(), T) : 0.0;
  const double target_deficit = std::min(1e-13, 1e-3 * options.tolerance);

  if (total_mixing > 0.0) {
    detail::DenseBox q(n, 0);
    q.v[0] = 1.0;
    std::size_t m = 0;
    double deficit = total_mixing;
    while (m < options.series_truncation) {
      ++m;
      const int cap = std::min(static_cast<int>(m) * r,
                               static_cast<int>(std::ceil(12.0 * r * std::sqrt(double(m)))) + r);
      q = detail::convolve_step(q, steps, cap);
      const double cm = detail::mixing_coefficient(f.rho(), m, T);
      mixed += cm;
      for (std::size_t i = 0; i < q.v.size(); ++i) {
        if (q.v[i] == 0.0) continue;
        const LatticePoint x = q.site(i);
        if (acc.contains(x)) acc.v[acc.offset(x)] += cm * q.v[i];
      }
      q0_mixed += cm * q.get(LatticePoint{});
      deficit = std::max(0.0, total_mixing - mixed);
      if (static_cast<double>(m) > T && deficit <= target_deficit) break;
    }
    out.terms_used = m;
    out.series_deficit = deficit;
    if (deficit > options.tolerance)
      throw NumericalError("series truncation " + std::to_string(options.series_truncation) +
                               " too small: remaining Poisson-mixing mass " + std::to_string(deficit),
                           deficit);
  }

  // Large-time part.
  const double beyond = rho_tail(f, T);
  std::vector<double> tail_part(acc.v.size(), 0.0);
  double tail_total = 0.0;
  if (T > 0.0 && beyond > 1e-3 * options.tolerance) {
    const HeatKernelExpansion hk(walk);
    double worst_err = 0.0;
    for (std::size_t i = 0; i < acc.v.size(); ++i) {
      const LatticePoint x = acc.site(i);
      double err_acc = 0.0;
      const quad::Result v = detail::integrate_rho_beyond(f.rho(), T, [&](double t) {
        return hk(x, t).value;
      });
      const quad::Result e = detail::integrate_rho_beyond(f.rho(), T, [&](double t) {
        return hk(x, t).error;
      });
      err_acc = e.value + v.error;
      tail_part[i] = v.value;
      worst_err = std::max(worst_err, err_acc);
    }
    out.expansion_error = worst_err;
    tail_total = beyond - tail_part[acc.offset(LatticePoint{})];
  } else if (T > 0.0) {
    out.discarded_rho_mass = beyond;
  } else {
    // Pure drift, or all rho atoms beyond the switch time.
    if (beyond > 0.0) {
      const HeatKernelExpansion hk(walk);
      for (std::size_t i = 0; i < acc.v.size(); ++i) {
        const LatticePoint x = acc.site(i);
        tail_part[i] = detail::integrate_rho_beyond(f.rho(), T, [&](double t) {
                         return hk(x, t).value;
                       }).value;
      }
      tail_total = beyond - tail_part[acc.offset(LatticePoint{})];
    }
  }

  // Density families may carry mass beyond their integration range.
  if (const auto* d = f.as<DensityFamily>(); d && d->tail_bound)
    out.discarded_rho_mass += d->tail_bound(d->t_max);

  std::map<LatticePoint, double> atoms;
  double materialized = 0.0;
  for (std::size_t i = 0; i < acc.v.size(); ++i) {
    const LatticePoint x = acc.site(i);
    if (x.is_zero()) continue;
    const double v = f.beta() * walk.atom(x) + acc.v[i] + tail_part[i];
    if (v > 0.0) {
      atoms[x] = v;
      materialized += v;
    }
  }
  const double total = f.beta() + (mixed - q0_mixed) + tail_total;
  double tail_mass = total - materialized;
  if (tail_mass < 0.0) {
    if (tail_mass < -std::max(options.tolerance, 1e-12))
      throw NumericalError("materialized mass exceeds the total jump mass", -tail_mass);
    tail_mass = 0.0;
  }
  out.achieved_tolerance = out.series_deficit + out.expansion_error + out.discarded_rho_mass;
  if (out.achieved_tolerance > options.tolerance)
    throw NumericalError("subordinated atoms reached only " + std::to_string(out.achieved_tolerance) +
                             " (requested " + std::to_string(options.tolerance) + ")",
                         out.achieved_tolerance);
  out.atoms = LatticeAtoms(n, std::move(atoms), tail_mass, R);
  return out;
}

}  // namespace levylab
