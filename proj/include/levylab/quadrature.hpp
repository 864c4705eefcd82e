#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "levylab/errors.hpp"

namespace levylab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n nodes on [-1, 1].
inline Rule gauss_legendre(int n) {
  if (n < 1) throw PreconditionError("Gauss-Legendre rule needs at least one node");
  Rule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    r.nodes[lo] = -x;
    r.nodes[hi] = x;
    r.weights[lo] = w;
    r.weights[hi] = w;
  }
  if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return r;
}

/// Composite Gauss-Legendre rule on [a, b] with equal panels.
inline Rule composite_gauss_legendre(double a, double b, int panels, int nodes_per_panel) {
  const Rule base = gauss_legendre(nodes_per_panel);
  Rule r;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      r.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
      r.weights.push_back(0.5 * h * base.weights[i]);
    }
  }
  return r;
}

/// Adaptive Gauss-Kronrod (61 point) on a finite interval.
template <class F>
Result adaptive(F&& f, double a, double b, double rel_tol = 1e-12, unsigned max_depth = 10) {
  if (a == b) return {};
  // Boost's error floor does not scale with the interval length, so short
  // shells near a singularity never converge. Work on [0, 1] instead.
  const double len = b - a;
  auto unit = [&](double u) { return len * f(a + len * u); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      unit, 0.0, 1.0, max_depth, rel_tol, &err);
  return {v, err};
}

/// Integral over (0, b] of a function with an integrable singularity at 0,
/// summed over dyadic shells. Throws DivergenceError when shell
/// contributions fail to decay.
template <class F>
Result integrate_to_zero(F&& g, double b, double rel_tol = 1e-13, int max_shells = 200) {
  Result total;
  double hi = b;
  double first = 0.0;
  int small_run = 0;
  for (int k = 0; k < max_shells; ++k) {
    const double lo = 0.5 * hi;
    const Result shell = adaptive(g, lo, hi, std::max(rel_tol * 1e-2, 1e-12));
    total.value += shell.value;
    total.error += shell.error;
    if (k == 0) first = std::abs(shell.value);
    const double scale = std::max(std::abs(total.value), std::numeric_limits<double>::min());
    if (std::abs(shell.value) <= rel_tol * scale) {
      if (++small_run >= 4) {
        total.error += std::abs(shell.value);
        return total;
      }
    } else {
      small_run = 0;
    }
    if (k >= 60 && std::abs(shell.value) > 1e-3 * std::max(first, 1e-300))
      throw DivergenceError("integrand not integrable at the origin", total.value);
    hi = lo;
  }
  throw DivergenceError("dyadic shell sum did not converge at the origin", total.value);
}

/// Integral over [a, infinity) of a nonoscillatory integrand, summed over
/// dyadic shells [a 2^k, a 2^(k+1)).
template <class F>
Result integrate_to_infinity(F&& g, double a, double rel_tol = 1e-13, int max_shells = 400) {
  if (!(a > 0.0)) throw PreconditionError("lower limit must be positive");
  Result total;
  double lo = a;
  double first = 0.0;
  int small_run = 0;
  for (int k = 0; k < max_shells; ++k) {
    const double hi = 2.0 * lo;
    const Result shell = adaptive(g, lo, hi, std::max(rel_tol * 1e-2, 1e-12));
    total.value += shell.value;
    total.error += shell.error;
    if (k == 0) first = std::abs(shell.value);
    const double scale = std::max(std::abs(total.value), std::numeric_limits<double>::min());
    if (std::abs(shell.value) <= rel_tol * scale) {
      if (++small_run >= 4) {
        total.error += 2.0 * std::abs(shell.value);
        return total;
      }
    } else {
      small_run = 0;
    }
    if (k >= 60 && std::abs(shell.value) > 1e-3 * std::max(first, 1e-300))
      throw DivergenceError("integrand not integrable at infinity", total.value);
    lo = hi;
  }
  throw DivergenceError("dyadic shell sum did not converge at infinity", total.value);
}

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// extrapolated limit and the difference of the last two estimates.
inline Result wynn_epsilon(const std::vector<double>& partial) {
  const std::size_t n = partial.size();
  if (n == 0) return {};
  if (n < 3) return {partial.back(), n == 2 ? std::abs(partial[1] - partial[0]) : INFINITY};
  // eps_{k+1}^{(i)} = eps_{k-1}^{(i+1)} + 1 / (eps_k^{(i+1)} - eps_k^{(i)}); even columns
  // carry the extrapolated estimates.
  std::vector<double> older(n + 1, 0.0);
  std::vector<double> col = partial;
  std::vector<double> estimates;
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> next(n - k);
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = col[i + 1] - col[i];
      if (d == 0.0) return {col[i + 1], 0.0};
      next[i] = older[i + 1] + 1.0 / d;
    }
    older = std::move(col);
    col = std::move(next);
    if (k % 2 == 0) estimates.push_back(col.back());
  }
  if (estimates.empty()) return {partial.back(), std::abs(partial.back() - partial[n - 2])};
  const double best = estimates.back();
  const double err = estimates.size() >= 2
                         ? std::abs(best - estimates[estimates.size() - 2])
                         : std::abs(best - partial.back());
  return {best, err};
}

/// Integral over [a, infinity) of an oscillatory integrand with decaying
/// amplitude: sums half-period panels and extrapolates with Wynn's epsilon.
template <class F>
Result oscillatory_tail(F&& g, double a, double half_period, double abs_tol = 1e-13,
                        int max_panels = 4000) {
  std::vector<double> partial;
  double sum = 0.0;
  double err = 0.0;
  double lo = a;
  Result best{0.0, INFINITY};
  for (int k = 0; k < max_panels; ++k) {
    const Result panel = adaptive(g, lo, lo + half_period, 1e-14);
    sum += panel.value;
    err += panel.error;
    partial.push_back(sum);
    lo += half_period;
    if (partial.size() >= 12 && partial.size() % 2 == 0) {
      // Use a sliding window of the most recent partial sums.
      const std::size_t w = std::min<std::size_t>(partial.size(), 24);
      std::vector<double> window(partial.end() - static_cast<std::ptrdiff_t>(w), partial.end());
      const Result ext = wynn_epsilon(window);
      if (std::abs(ext.value - best.value) < abs_tol && ext.error < abs_tol) {
        return {ext.value, std::abs(ext.value - best.value) + ext.error + err};
      }
      best = ext;
    }
  }
  throw NumericalError("oscillatory tail integral did not converge", best.error);
}

}  // namespace levylab::quad
