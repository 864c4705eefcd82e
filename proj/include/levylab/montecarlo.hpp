#pragma once

// Monte Carlo for compound Poisson walks, subordinators, killed processes
// and exit distributions.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <vector>

#include "levylab/bernstein.hpp"
#include "levylab/errors.hpp"
#include "levylab/lattice.hpp"
#include "levylab/random.hpp"
#include "levylab/subordination.hpp"

namespace levylab {

struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;
  double elapsed_seconds = 0.0;
};

namespace detail {

/// Runs value(engine, i) for i < n, spread over threads; results indexed by i.
template <class F>
std::vector<double> parallel_samples(std::size_t n, const RngSpec& rng, unsigned threads, F&& value) {
  std::vector<double> out(n);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      PhiloxEngine eng(rng, i);
      out[i] = value(eng, i);
    }
  };
  if (threads == 1) {
    work(0, n);
    return out;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo < hi) pool.emplace_back(work, lo, hi);
  }
  for (auto& th : pool) th.join();
  return out;
}

/// Mean and standard error, shifted by the first value so constant samples
/// give SE = 0 exactly.
inline std::pair<double, double> mean_and_se(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n == 0) return {0.0, 0.0};
  const double v0 = v[0];
  double s = 0.0;
  for (double x : v) s += x - v0;
  const double dmean = s / static_cast<double>(n);
  if (n < 2) return {v0 + dmean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - v0 - dmean) * (x - v0 - dmean);
  const double var = ss / static_cast<double>(n - 1);
  return {v0 + dmean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace detail

/// Step sampler for a probability walk.
class WalkSampler {
 public:
  explicit WalkSampler(const LatticeAtoms& walk) : dim_(walk.dim()) {
    if (!walk.is_probability())
      throw PreconditionError("compound Poisson sampling needs a probability walk");
    for (const auto& [l, p] : walk.masses()) {
      steps_.push_back(l);
      probs_.push_back(p);
    }
    pick_ = std::discrete_distribution<std::size_t>(probs_.begin(), probs_.end());
  }

  int dim() const { return dim_; }

  /// Sum of m i.i.d. steps.
  template <class Eng>
  LatticePoint sum_of_steps(long long m, Eng& eng) const {
    LatticePoint x;
    if (m <= 32) {
      auto pick = pick_;
      for (long long i = 0; i < m; ++i) x = x + steps_[pick(eng)];
      return x;
    }
    // Multinomial step counts by sequential binomials; coordinates are
    // clamped far outside any window instead of overflowing.
    std::array<long long, kMaxDim> acc{};
    long long left = m;
    double mass_left = 1.0;
    for (std::size_t j = 0; j < steps_.size() && left > 0; ++j) {
      long long cnt = left;
      if (j + 1 < steps_.size()) {
        const double q = std::clamp(probs_[j] / mass_left, 0.0, 1.0);
        cnt = std::binomial_distribution<long long>(left, q)(eng);
      }
      left -= cnt;
      mass_left -= probs_[j];
      for (int a = 0; a < dim_; ++a) acc[static_cast<std::size_t>(a)] += cnt * steps_[j][a];
    }
    constexpr long long kFar = 1LL << 30;
    for (int a = 0; a < dim_; ++a)
      x.c[static_cast<std::size_t>(a)] = static_cast<int>(std::clamp(acc[static_cast<std::size_t>(a)], -kFar, kFar));
    return x;
  }

 private:
  int dim_;
  std::vector<LatticePoint> steps_;
  std::vector<double> probs_;
  std::discrete_distribution<std::size_t> pick_;
};

/// N ~ Poisson(t); beyond t = 1e12 the normal limit N ~ round(t + sqrt(t) Z) is used.
template <class Eng>
long long sample_poisson(double t, Eng& eng) {
  if (t <= 0.0) return 0;
  if (t <= 1e12) return std::poisson_distribution<long long>(t)(eng);
  const double z = std::normal_distribution<double>(0.0, 1.0)(eng);
  return std::llround(std::max(0.0, t + std::sqrt(t) * z));
}

template <class Eng>
LatticePoint sample_compound_poisson(const WalkSampler& walk, double t, Eng& eng) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  return walk.sum_of_steps(sample_poisson(t, eng), eng);
}

template <class Eng>
LatticePoint sample_compound_poisson(const LatticeAtoms& walk, double t, Eng& eng) {
  return sample_compound_poisson(WalkSampler(walk), t, eng);
}

/// Whether T_t can be sampled exactly for this Bernstein function.
inline void check_samplable(const BernsteinFunction& f) {
  if (const auto* s = f.as<StableFamily>(); s && s->s != 0.5)
    throw PreconditionError("stable subordinators are sampled for s = 1/2 only");
  if (f.as<DensityFamily>()) throw PreconditionError("density-family subordinators cannot be sampled");
}

/// T_t with E exp(-lambda T_t) = exp(-t f(lambda)).
template <class Eng>
double sample_subordinator(const BernsteinFunction& f, double t, Eng& eng) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  check_samplable(f);
  double T = f.beta() * t;
  if (t == 0.0) return T;
  if (f.as<StableFamily>()) {
    const double z = std::normal_distribution<double>(0.0, 1.0)(eng);
    return T + t * t / (2.0 * z * z);
  }
  if (f.as<LogFamily>()) return T + std::gamma_distribution<double>(t, 1.0)(eng);
  for (const auto& [ti, wi] : f.as<AtomFamily>()->atoms)
    T += static_cast<double>(sample_poisson(wi * t, eng)) * ti;
  return T;
}

/// E u(x + X_{T_tau}), tau ~ Exp(lambda) independent; equals lambda R_lambda u(x).
inline MonteCarloEstimate estimate_resolvent(const LatticeAtoms& walk, const std::optional<BernsteinFunction>& f,
                                             double lambda, const LatticeField& u, const LatticePoint& x,
                                             std::size_t n_samples, const RngSpec& rng, unsigned threads = 1) {
  if (!(lambda > 0.0)) throw DomainError("resolvent parameter lambda must be positive");
  if (n_samples < 1) throw PreconditionError("need at least one sample");
  if (u.dim() != walk.dim()) throw ShapeError("field and walk dimensions differ");
  if (f) check_samplable(*f);
  const WalkSampler sampler(walk);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> v = detail::parallel_samples(n_samples, rng, threads, [&](PhiloxEngine& eng, std::size_t) {
    const double tau = std::exponential_distribution<double>(lambda)(eng);
    const double T = f ? sample_subordinator(*f, tau, eng) : tau;
    return u(x + sample_compound_poisson(sampler, T, eng));
  });
  const auto [mean, se] = detail::mean_and_se(v);
  MonteCarloEstimate e{mean, se, n_samples, rng.seed, rng.stream, 0.0};
  e.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return e;
}

struct ExitDistribution {
  std::map<LatticePoint, double> probability;
  std::map<LatticePoint, double> standard_error;
  double beyond_reach = 0.0;     // exits through non-materialized tail atoms
  double beyond_reach_se = 0.0;
  double budget_exceeded = 0.0;  // fraction of paths still inside after the jump budget
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double elapsed_seconds = 0.0;

  double total_mass() const {
    double s = beyond_reach;
    for (const auto& [k, p] : probability) s += p;
    return s;
  }
};

/// Exit position of the embedded jump chain from G = B_h(0) started at x.
/// With f, the chain jumps by the subordinated atoms; their tail mass counts
/// as exit beyond the materialized reach.
inline ExitDistribution estimate_exit_distribution(const LatticeAtoms& walk, const std::optional<BernsteinFunction>& f,
                                                   double h, const LatticePoint& x, std::size_t n_samples,
                                                   const RngSpec& rng, long long jump_budget = 1000000,
                                                   unsigned threads = 1,
                                                   const SubordinationOptions& sub = {}) {
  if (!in_lattice_ball(x, h)) throw PreconditionError("exit start point must lie in G = B_h(0)");
  if (n_samples < 1) throw PreconditionError("need at least one sample");
  if (jump_budget < 1) throw PreconditionError("jump budget must be positive");
  LatticeAtoms chain = walk;
  if (f) {
    SubordinationOptions opt = sub;
    opt.reach = std::max(opt.reach, static_cast<int>(std::ceil(2.0 * h)) + 1);
    chain = subordinated_levy_atoms(*f, walk, opt).atoms;
  }
  if (chain.total_mass() <= 0.0) throw PreconditionError("jump chain has no jumps");
  std::vector<LatticePoint> steps;
  std::vector<double> w;
  for (const auto& [l, p] : chain.masses()) {
    steps.push_back(l);
    w.push_back(p);
  }
  const bool has_tail = chain.tail_mass() > 0.0;
  if (has_tail) w.push_back(chain.tail_mass());
  const std::discrete_distribution<std::size_t> pick0(w.begin(), w.end());

  // Each sample records its exit site and returns 0, or returns a negative code.
  constexpr double kBeyond = -1.0;
  constexpr double kBudget = -2.0;
  std::vector<LatticePoint> exits(n_samples);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> code = detail::parallel_samples(n_samples, rng, threads, [&](PhiloxEngine& eng, std::size_t i) {
    auto pick = pick0;
    LatticePoint pos = x;
    for (long long j = 0; j < jump_budget; ++j) {
      const std::size_t s = pick(eng);
      if (s == steps.size()) return kBeyond;
      pos = pos + steps[s];
      if (!in_lattice_ball(pos, h)) {
        exits[i] = pos;
        return 0.0;
      }
    }
    return kBudget;
  });
  ExitDistribution out;
  out.samples = n_samples;
  out.seed = rng.seed;
  std::map<LatticePoint, std::size_t> counts;
  std::size_t beyond = 0;
  std::size_t budget = 0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    if (code[i] == kBeyond)
      ++beyond;
    else if (code[i] == kBudget)
      ++budget;
    else
      ++counts[exits[i]];
  }
  const double n = static_cast<double>(n_samples);
  auto se = [n](double p) { return n > 1 ? std::sqrt(p * (1.0 - p) / (n - 1.0)) : 0.0; };
  for (const auto& [k, c] : counts) {
    const double p = static_cast<double>(c) / n;
    out.probability[k] = p;
    out.standard_error[k] = se(p);
  }
  out.beyond_reach = static_cast<double>(beyond) / n;
  out.beyond_reach_se = se(out.beyond_reach);
  out.budget_exceeded = static_cast<double>(budget) / n;
  out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace levylab
