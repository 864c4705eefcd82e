// Acceptance checks: one PASS/FAIL line per criterion, with runtime and the
// measured quantity. Exit status is nonzero when any check fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "levylab/levylab.hpp"
#include "oracles.hpp"

using namespace levylab;

namespace {

struct Check {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Point pt(double x) {
  Point p(1);
  p(0) = x;
  return p;
}

LatticeAtoms fractional_walk(int reach, double tol = 1e-10) {
  SubordinationOptions o;
  o.reach = reach;
  o.tolerance = tol;
  return subordinated_levy_atoms(BernsteinFunction::stable(0.5), nearest_neighbour_walk(1), o).atoms;
}

Check c1_symbols() {
  Check c;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> U(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  const LatticeAtoms nn1 = nearest_neighbour_walk(1);
  for (int i = 0; i < 10000; ++i) {
    const double xi = U(gen);
    const auto p = symbol_lattice(nn1, {xi});
    worst = std::max({worst, std::abs(p.real() - oracle::nn_symbol_1d(xi)), std::abs(p.imag())});
  }
  for (int n : {2, 3}) {
    const LatticeAtoms w = nearest_neighbour_walk(n);
    for (int i = 0; i < 10000; ++i) {
      std::vector<double> xi(static_cast<std::size_t>(n));
      for (double& v : xi) v = U(gen);
      const auto p = symbol_lattice(w, xi);
      worst = std::max({worst, std::abs(p.real() - oracle::laplacian_symbol(xi)), std::abs(p.imag())});
    }
  }
  c.require(worst <= 1e-12, "max error " + sci(worst));
  c.note("max |psi - oracle| = " + sci(worst));
  return c;
}

Check c2_fractional_symbol() {
  Check c;
  double worst = 0.0;
  for (double s : {0.25, 0.5, 0.75})
    for (double xi : {0.5, 1.0, 2.0}) {
      const auto t = CharacteristicTriplet::pure_jump(RadialStable::make(s, 1));
      const double v = symbol_continuous(t, {xi}).value;
      worst = std::max(worst, std::abs(v / std::pow(xi, 2 * s) - 1.0));
    }
  c.require(worst <= 1e-6, "relative error " + sci(worst));
  c.note("max relative error = " + sci(worst));
  return c;
}

Check c3_subordination() {
  Check c;
  // Reach 128 resolves every interaction between sites of the radius-64 window.
  const LatticeAtoms a = fractional_walk(128);
  const int M = 1 << 17;
  const SymbolGrid sym = subordinated_symbol_grid(BernsteinFunction::stable(0.5), nearest_neighbour_walk(1), M);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double worst = 0.0, dropped = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    LatticeField u(1, 64);
    for (double& v : u.values()) v = U(gen);
    const GeneratorResult g = apply_generator_lattice(a, u, 64);
    dropped = std::max(dropped, g.dropped_mass);
    const LatticeField s = extract(apply_generator_spectral(sym, embed(u, M)).field, 64);
    for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(g.field.values()[i] - s.values()[i]));
  }
  c.require(worst <= 1e-8, "sup error " + sci(worst));
  c.require(dropped == 0.0, "dropped mass " + sci(dropped));
  c.note("sup |A_atoms u - f(psi) u| = " + sci(worst));
  return c;
}

/// Nearest-neighbour generator on the periodic grid, applied site by site.
PeriodicGridField nn_generator_periodic(const PeriodicGridField& u) {
  PeriodicGridField out(u.dim(), u.half_width(), u.points());
  const std::size_t M = u.size();
  for (std::size_t k = 0; k < M; ++k) out[k] = 0.5 * (u[(k + 1) % M] + u[(k + M - 1) % M]) - u[k];
  return out;
}

Check c4_resolvent() {
  Check c;
  const int M = 256;
  const SymbolGrid sym = lattice_symbol_grid(nearest_neighbour_walk(1), M);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double roundtrip = 0.0, excess = -INFINITY;
  for (double lambda : {0.5, 1.0, 2.0})
    for (int trial = 0; trial < 100; ++trial) {
      PeriodicGridField u = PeriodicGridField::lattice(1, M);
      for (double& v : u.values()) v = U(gen);
      const PeriodicGridField r = resolvent_apply(sym, lambda, u).field;
      const PeriodicGridField ar = nn_generator_periodic(r);
      for (std::size_t k = 0; k < u.size(); ++k) roundtrip = std::max(roundtrip, std::abs(lambda * r[k] - ar[k] - u[k]));
      excess = std::max(excess, lambda * r.sup_norm() - u.sup_norm());
    }
  c.require(roundtrip <= 1e-10, "roundtrip " + sci(roundtrip));
  c.require(excess <= 1e-10, "contraction excess " + sci(excess));
  c.note("roundtrip = " + sci(roundtrip) + ", max(lambda|Ru| - |u|) = " + sci(excess));
  return c;
}

Check c5_mc_resolvent() {
  Check c;
  const double lambda = 1.0;
  const std::size_t n = 100000;
  // Plain walk, delta field: lambda R u(0) = 1/sqrt(3).
  const LatticeField d = unit_delta(1, 0, LatticePoint(0));
  const auto e0 = estimate_resolvent(nearest_neighbour_walk(1), std::nullopt, lambda, d, LatticePoint(), n, {2024, 0});
  const int M = 4096;
  const double spec0 =
      lambda * extract(resolvent_apply(lattice_symbol_grid(nearest_neighbour_walk(1), M), lambda, embed(d, M)).field, 0)(
                   LatticePoint(0));
  const double z0 = (e0.mean - spec0) / e0.standard_error;
  c.require(std::abs(z0) <= 3.0, "plain z = " + sci(z0));
  c.require(std::abs(spec0 - oracle::nn_resolvent_origin(lambda)) < 1e-12, "spectral value off the closed form");
  // Stable(1/2)-subordinated walk, smooth-ish field.
  LatticeField u(1, 3);
  for (std::size_t i = 0; i < u.size(); ++i) u.values()[i] = 1.0 / (1.0 + std::abs(u.site(i)[0]));
  const auto f = BernsteinFunction::stable(0.5);
  const auto e1 = estimate_resolvent(nearest_neighbour_walk(1), f, lambda, u, LatticePoint(1), n, {2025, 0});
  const SymbolGrid sym = subordinated_symbol_grid(f, nearest_neighbour_walk(1), M);
  const double spec1 = lambda * extract(resolvent_apply(sym, lambda, embed(u, M)).field, 1)(LatticePoint(1));
  const double z1 = (e1.mean - spec1) / e1.standard_error;
  c.require(std::abs(z1) <= 3.0, "subordinated z = " + sci(z1));
  c.note("z plain = " + sci(z0) + ", z Stable(1/2) = " + sci(z1) + " at n = 1e5");
  return c;
}

Check c6_bernstein() {
  Check c;
  for (double s : {0.1, 0.5, 0.9})
    for (double a = 0.05; a <= 5.0; a += 0.05)
      if (exp_moment_finite(BernsteinFunction::stable(s), a)) c.require(false, "stable moment finite");
  const auto lg = BernsteinFunction::log();
  c.require(exp_moment_finite(lg, 0.9), "Log alpha=0.9 not finite");
  c.require(!exp_moment_finite(lg, 1.1), "Log alpha=1.1 finite");
  for (double a = 0.05; a <= 3.0; a += 0.05)
    if (exp_moment_finite(lg, a) != (a < 1.0)) c.require(false, "Log boundary wrong at " + sci(a));
  double worst = -INFINITY;
  for (const auto& f : {lg, BernsteinFunction::atoms({{1.0, 1.0}, {3.0, 0.5}}, 0.2)})
    for (double a : {0.5, 0.9}) {
      if (!exp_moment_finite(f, a)) continue;
      const double x = -a + 0.05 * a;
      c.require(std::isfinite(eval_extension(f, x)), "extension missing");
      const double h = 0.01;
      worst = std::max(worst, alternating_sign_violation(f, x, 1.0, 25, 4, h, 1e-8));
    }
  c.require(worst <= 0.0, "sign violation " + sci(worst));
  c.note("worst signed violation = " + sci(worst));
  return c;
}

Check c7_ucp() {
  Check c;
  const ConstraintSystem nn = build_constraint_matrix(nearest_neighbour_walk(1), 1.5, 5);
  const auto w = find_violation(nn.matrix);
  c.require(w.has_value(), "no nearest-neighbour witness");
  if (w) c.require(w->residual <= 1e-14, "nn residual " + sci(w->residual));
  const LatticeField d = unit_delta(1, 5, LatticePoint(3));
  const LatticeField Ad = apply_generator_lattice(nearest_neighbour_walk(1), d);
  for (const LatticePoint& k : lattice_ball(1, 1.5)) c.require(Ad(k) == 0.0, "delta_3 violates a constraint");

  const ConstraintSystem fr = build_constraint_matrix(fractional_walk(5), 1.5, 5);
  c.require(fr.matrix.cols() > fr.matrix.rows(), "fractional system not underdetermined");
  const auto wf = find_violation(fr.matrix);
  c.require(wf.has_value(), "no fractional witness");
  double refined = 0.0;
  if (wf) {
    c.require(wf->residual <= 1e-10 * wf->sigma_max, "fractional residual " + sci(wf->residual));
    refined = refine_and_score(field_from_vector(fr, wf->vector), fractional_walk(50), 1.5);
    c.require(refined > 1e-6, "refined residual " + sci(refined));
    const UcpProbeReport rep = nullspace_probe(fractional_walk(5), 1.5, 5, {fractional_walk(50)});
    c.require(rep.verdict == Verdict::TruncationArtifact, "verdict " + to_string(rep.verdict));
    c.note("nn residual = " + sci(w ? w->residual : NAN) + ", fractional residual/sigma_max = " +
           sci(wf->residual / wf->sigma_max) + ", refined = " + sci(refined));
  }
  return c;
}

Check c8_density() {
  Check c;
  const std::vector<int> K{1, 2, 4, 8, 16};
  LevyMeasure hole(RadialStable::make(0.5, 1));
  hole = apply_surgery(hole, Patch::hole(pt(2.0), 0.7));
  auto bump = [](const Point& y) {
    const double r = std::abs(y(0) - 2.0);
    return r < 0.4 ? std::pow(std::cos(0.5 * std::numbers::pi * r / 0.4), 2) : 0.0;
  };
  const UcpProbeReport h = density_probe(hole, ShiftSet::halton(1, 0.25, 16), bump, {pt(1.6), pt(2.4)}, K);
  double herr = 0.0;
  for (double r : h.residual_trace) herr = std::max(herr, std::abs(r - oracle::cos2_bump_norm_1d(0.4)));
  c.require(herr <= 1e-12, "hole residual off by " + sci(herr));

  auto sin2 = [](const Point& y) { return std::pow(std::sin(std::numbers::pi * (y(0) - 1.0)), 2); };
  const UcpProbeReport s =
      density_probe(RadialStable::make(0.5, 1), ShiftSet::halton(1, 0.5, 16), sin2, {pt(1.0), pt(2.0)}, K);
  for (std::size_t i = 1; i < s.residual_trace.size(); ++i)
    c.require(s.residual_trace[i] <= s.residual_trace[i - 1], "stable trace increases at K=" + std::to_string(K[i]));
  const double ratio = s.residual_trace.back() / s.residual_trace.front();
  c.require(s.residual_trace.back() > 0.0 && ratio < 0.1, "stable ratio " + sci(ratio));

  LevyMeasure poly(RadialStable::make(0.5, 1));
  poly = apply_surgery(poly, Patch::polynomial(pt(2.0), 1.0, {{{0, 0, 0}, 1.0}, {{1, 0, 0}, 0.5}, {{2, 0, 0}, 0.25}}));
  auto cubic = [](const Point& y) { return oracle::cubic_residual(y(0), 2.0, 0.5); };
  const UcpProbeReport p = density_probe(poly, ShiftSet::halton(1, 0.25, 16), cubic, {pt(1.5), pt(2.5)}, K);
  const double pmin = *std::min_element(p.residual_trace.begin(), p.residual_trace.end());
  const double pratio = pmin / oracle::cubic_residual_norm(0.5);
  c.require(pratio >= 0.5, "polynomial ratio " + sci(pratio));
  c.note("hole error = " + sci(herr) + ", stable K=16/K=1 = " + sci(ratio) + ", polynomial residual/|target| = " +
         sci(pratio));
  return c;
}

Check c9_exit() {
  Check c;
  const std::size_t n = 100000;
  double worst_z = 0.0;
  for (int start : {-1, 0, 1}) {
    const auto d = estimate_exit_distribution(nearest_neighbour_walk(1), std::nullopt, 1.5, LatticePoint(start), n,
                                              {99, static_cast<std::uint32_t>(start + 1)});
    const auto ref = oracle::exit_law_1d({{1, 0.5}, {-1, 0.5}}, 1.5, start);
    c.require(d.budget_exceeded == 0.0, "budget exceeded");
    for (const auto& [k, p] : ref) {
      const double got = d.probability.count(LatticePoint(k)) ? d.probability.at(LatticePoint(k)) : 0.0;
      const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
      const double z = se > 0.0 ? std::abs(got - p) / se : (got == p ? 0.0 : INFINITY);
      worst_z = std::max(worst_z, z);
    }
    for (const auto& [k, p] : d.probability)
      if (!ref.count(k[0])) c.require(p == 0.0, "unexpected exit site");
  }
  c.require(worst_z <= 3.0, "worst z " + sci(worst_z));
  c.note("worst |z| over bins = " + sci(worst_z));
  return c;
}

Check c10_reproducibility() {
  Check c;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "levylab_acceptance";
  int count = 0;
  for (const auto& e : example_catalog()) {
    std::string dumps[2];
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path out = root / (e.name + (rep ? "_b" : "_a"));
      fs::remove_all(out);
      const RunOutcome r = run_experiment(e.config, out);
      c.require(r.exit_code == 0, e.name + " exit " + std::to_string(r.exit_code));
      std::ifstream is(out / "report.json");
      nlohmann::json j = nlohmann::json::parse(is);
      j.erase("timestamp");
      dumps[rep] = j.dump();
    }
    c.require(dumps[0] == dumps[1], e.name + " reports differ");
    ++count;
  }
  c.note(std::to_string(count) + " bundled configs rerun");
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> checks{
      {"symbol correctness", c1_symbols},
      {"fractional symbol", c2_fractional_symbol},
      {"subordination consistency", c3_subordination},
      {"resolvent roundtrip and contraction", c4_resolvent},
      {"probabilistic resolvent identity", c5_mc_resolvent},
      {"exponential-moment equivalences", c6_bernstein},
      {"bounded-window violation construction", c7_ucp},
      {"density probe dichotomy", c8_density},
      {"exit-distribution oracle", c9_exit},
      {"reproducibility", c10_reproducibility},
  };
  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = checks[i].second();
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %zu (%s) [%.2fs]: %s\n", c.pass ? "PASS" : "FAIL", i + 1, checks[i].first.c_str(), dt,
                c.detail.c_str());
    std::fflush(stdout);
    failures += c.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
