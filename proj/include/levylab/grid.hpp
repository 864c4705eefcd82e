#pragma once

// Periodic sampling grids on the torus [-L, L)^n and Fourier multipliers on
// them (FFTW).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"

namespace levylab {

/// M^n samples at x_j = -L + j (2L/M), first axis slowest.
class PeriodicGridField {
 public:
  PeriodicGridField() = default;
  PeriodicGridField(int dim, double half_width, int points)
      : dim_(dim), L_(half_width), M_(points) {
    check_dim(dim);
    if (!(half_width > 0.0)) throw PreconditionError("box half-width must be positive");
    if (points < 2 || (points & (points - 1)) != 0)
      throw PreconditionError("points per axis must be a power of two");
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= static_cast<std::size_t>(points);
    values_.assign(n, 0.0);
  }

  /// Unit-spacing grid matching Z^n sites -M/2 .. M/2-1.
  static PeriodicGridField lattice(int dim, int points) {
    return PeriodicGridField(dim, 0.5 * points, points);
  }

  int dim() const { return dim_; }
  double half_width() const { return L_; }
  int points() const { return M_; }
  double spacing() const { return 2.0 * L_ / M_; }
  std::size_t size() const { return values_.size(); }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::array<int, kMaxDim> index(std::size_t i) const {
    std::array<int, kMaxDim> idx{};
    for (int ax = dim_ - 1; ax >= 0; --ax) {
      idx[static_cast<std::size_t>(ax)] = static_cast<int>(i % static_cast<std::size_t>(M_));
      i /= static_cast<std::size_t>(M_);
    }
    return idx;
  }
  std::size_t flat(const std::array<int, kMaxDim>& idx) const {
    std::size_t o = 0;
    for (int ax = 0; ax < dim_; ++ax) {
      int j = idx[static_cast<std::size_t>(ax)] % M_;
      if (j < 0) j += M_;
      o = o * static_cast<std::size_t>(M_) + static_cast<std::size_t>(j);
    }
    return o;
  }
  std::vector<double> coords(std::size_t i) const {
    const auto idx = index(i);
    std::vector<double> x(static_cast<std::size_t>(dim_));
    for (int ax = 0; ax < dim_; ++ax)
      x[static_cast<std::size_t>(ax)] = -L_ + spacing() * idx[static_cast<std::size_t>(ax)];
    return x;
  }

  void fill(const std::function<double(const std::vector<double>&)>& u) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] = u(coords(i));
  }

  bool conforms(const PeriodicGridField& o) const {
    return dim_ == o.dim_ && M_ == o.M_ && L_ == o.L_;
  }

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

 private:
  int dim_ = 1;
  double L_ = 1.0;
  int M_ = 2;
  std::vector<double> values_;
};

/// Symbol values at the grid frequencies xi_k = pi k / L, k in FFT order.
class SymbolGrid {
 public:
  SymbolGrid() = default;

  /// Samples psi at every grid frequency and checks psi(0) = 0, psi >= -1e-12
  /// and, when `symmetric`, psi(-xi) = psi(xi).
  SymbolGrid(int dim, double half_width, int points,
             const std::function<double(const std::vector<double>&)>& psi, bool symmetric = true)
      : shape_(dim, half_width, points) {
    const std::size_t n = shape_.size();
    values_.resize(n);
    for (std::size_t i = 0; i < n; ++i) values_[i] = psi(frequency(i));
    validate(symmetric);
  }

  static SymbolGrid lattice(int dim, int points,
                            const std::function<double(const std::vector<double>&)>& psi,
                            bool symmetric = true) {
    return SymbolGrid(dim, 0.5 * points, points, psi, symmetric);
  }

  int dim() const { return shape_.dim(); }
  double half_width() const { return shape_.half_width(); }
  int points() const { return shape_.points(); }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::vector<double> frequency(std::size_t i) const {
    const auto idx = shape_.index(i);
    const int M = shape_.points();
    std::vector<double> xi(static_cast<std::size_t>(dim()));
    for (int ax = 0; ax < dim(); ++ax) {
      int k = idx[static_cast<std::size_t>(ax)];
      if (k >= M / 2) k -= M;
      xi[static_cast<std::size_t>(ax)] = std::numbers::pi * k / shape_.half_width();
    }
    return xi;
  }

  bool conforms(const PeriodicGridField& u) const { return shape_.conforms(u); }

 private:
  void validate(bool symmetric) {
    if (std::abs(values_[0]) > 1e-12)
      throw NumericalError("symbol grid violates psi(0) = 0", std::abs(values_[0]));
    values_[0] = 0.0;
    for (double v : values_) {
      if (!std::isfinite(v)) throw NumericalError("symbol grid has non-finite values");
      if (v < -1e-12) throw NumericalError("symbol grid has negative values", -v);
    }
    if (!symmetric) return;
    const int M = shape_.points();
    for (std::size_t i = 0; i < values_.size(); ++i) {
      auto idx = shape_.index(i);
      bool nyquist = false;
      for (int ax = 0; ax < dim(); ++ax) {
        int& k = idx[static_cast<std::size_t>(ax)];
        if (k == M / 2) nyquist = true;
        k = (M - k) % M;
      }
      if (nyquist) continue;
      const double a = values_[i];
      const double b = values_[shape_.flat(idx)];
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
        throw NumericalError("symbol grid is not even although the input is symmetric",
                             std::abs(a - b));
    }
  }

  PeriodicGridField shape_;
  std::vector<double> values_;
};

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place complex DFT of an M^n array through FFTW.
class FftPlan {
 public:
  FftPlan(int dim, int points, int sign) : n_(1) {
    std::vector<int> dims(static_cast<std::size_t>(dim), points);
    for (int i = 0; i < dim; ++i) n_ *= static_cast<std::size_t>(points);
    data_ = fftw_alloc_complex(n_);
    if (!data_) throw NumericalError("FFTW allocation failed");
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft(dim, dims.data(), data_, data_, sign, FFTW_ESTIMATE);
    if (!plan_) {
      fftw_free(data_);
      throw NumericalError("FFTW planning failed");
    }
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(data_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
  std::size_t size() const { return n_; }
  void execute() { fftw_execute(plan_); }

 private:
  std::size_t n_;
  fftw_complex* data_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace detail

struct MultiplierResult {
  PeriodicGridField field;
  double imag_residue = 0.0;  // max |Im| of the inverse transform, discarded
};

/// F^{-1}(m F u) for a real multiplier m given per frequency index.
inline MultiplierResult apply_multiplier(const PeriodicGridField& u, const std::vector<double>& m) {
  if (m.size() != u.size()) throw ShapeError("multiplier does not conform to the field");
  detail::FftPlan fwd(u.dim(), u.points(), FFTW_FORWARD);
  detail::FftPlan inv(u.dim(), u.points(), FFTW_BACKWARD);
  std::complex<double>* a = fwd.data();
  for (std::size_t i = 0; i < u.size(); ++i) a[i] = u[i];
  fwd.execute();
  std::complex<double>* b = inv.data();
  const double scale = 1.0 / static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) b[i] = a[i] * (m[i] * scale);
  inv.execute();
  MultiplierResult out{PeriodicGridField(u.dim(), u.half_width(), u.points()), 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) {
    out.field[i] = b[i].real();
    out.imag_residue = std::max(out.imag_residue, std::abs(b[i].imag()));
  }
  return out;
}

/// Embeds a lattice field into a unit-spacing torus with M points per axis;
/// sites are taken modulo M.
inline PeriodicGridField embed(const LatticeField& u, int points) {
  if (2 * u.radius() + 1 > points) throw ShapeError("lattice window does not fit on the torus");
  PeriodicGridField g = PeriodicGridField::lattice(u.dim(), points);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const LatticePoint k = u.site(i);
    std::array<int, kMaxDim> idx{};
    for (int ax = 0; ax < u.dim(); ++ax) idx[static_cast<std::size_t>(ax)] = k[ax] + points / 2;
    g[g.flat(idx)] = u.values()[i];
  }
  return g;
}

inline LatticeField extract(const PeriodicGridField& g, int radius) {
  if (2 * radius + 1 > g.points()) throw ShapeError("window larger than the torus");
  LatticeField u(g.dim(), radius);
  for (std::size_t i = 0; i < u.size(); ++i) {
    const LatticePoint k = u.site(i);
    std::array<int, kMaxDim> idx{};
    for (int ax = 0; ax < u.dim(); ++ax) idx[static_cast<std::size_t>(ax)] = k[ax] + g.points() / 2;
    u.values()[i] = g[g.flat(idx)];
  }
  return u;
}

}  // namespace levylab
