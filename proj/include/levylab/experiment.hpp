#pragma once

// Config-driven experiment runner behind the levylab command-line tool.
// Exit codes: 0 success, 2 validation failure, 3 numerical failure.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>
#include "json.hpp"

#include "levylab/bernstein.hpp"
#include "levylab/config.hpp"
#include "levylab/errors.hpp"
#include "levylab/grid.hpp"
#include "levylab/io.hpp"
#include "levylab/lattice.hpp"
#include "levylab/levy_measure.hpp"
#include "levylab/montecarlo.hpp"
#include "levylab/operators.hpp"
#include "levylab/subordination.hpp"
#include "levylab/ucp_probe.hpp"

namespace levylab {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config seed
  unsigned threads = 1;
};

struct RunOutcome {
  int exit_code = kExitOk;
  std::string message;
  nlohmann::json report;
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s{"symbol",        "apply",         "resolvent",
                                          "bernstein-test", "subordinate",  "ucp-nullspace",
                                          "density-probe", "mc-resolvent",  "mc-exit"};
  return s;
}

namespace detail {

using nlohmann::json;
namespace cfg = levylab::config;
namespace fs = std::filesystem;

struct Context {
  const json& c;
  fs::path out;
  std::uint64_t seed;
  unsigned threads;
  json results = json::object();
  json errors = json::object();
  std::vector<std::string> artifacts;

  fs::path artifact(const std::string& name) {
    artifacts.push_back(name);
    return out / name;
  }
};

inline json point_json(const LatticePoint& p, int dim) { return p.coords(dim); }

inline json subordination_json(const SubordinationResult& r) {
  return {{"tail_mass", r.atoms.tail_mass()},         {"tail_radius", r.atoms.tail_radius()},
          {"materialized_mass", r.atoms.materialized_mass()},
          {"series_deficit", r.series_deficit},       {"expansion_error", r.expansion_error},
          {"discarded_rho_mass", r.discarded_rho_mass}, {"achieved_tolerance", r.achieved_tolerance},
          {"terms_used", r.terms_used},               {"switch_time", r.switch_time}};
}

inline std::vector<double> sweep(int points) {
  std::vector<double> xi;
  for (int j = 0; j <= points; ++j) xi.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * j / points);
  return xi;
}

inline void run_symbol(Context& x) {
  if (x.c.contains("walk")) {
    const cfg::WalkSpec w = cfg::walk(x.c.at("walk"));
    std::optional<BernsteinFunction> f;
    if (x.c.contains("bernstein")) f = cfg::bernstein(x.c.at("bernstein"));
    const int n = w.atoms.dim();
    const int points = cfg::get_or<int>(x.c, "points", 16);
    if (points < 2 || points % 2) throw ConfigError("points must be an even number >= 2");
    std::vector<std::vector<double>> xis;
    if (x.c.contains("xi")) {
      xis = cfg::get<std::vector<std::vector<double>>>(x.c, "xi");
    } else {
      for (double t : sweep(points)) {
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[0] = t;
        xis.push_back(v);
      }
    }
    auto header = io::axis_names("xi", n);
    header.insert(header.end(), {"psi_re", "psi_im"});
    io::CsvWriter csv(x.artifact("symbol.csv"), header);
    double max_imag = 0.0, min_re = INFINITY;
    for (const auto& xi : xis) {
      if (static_cast<int>(xi.size()) != n) throw ConfigError("frequency has the wrong dimension");
      std::complex<double> psi = symbol_lattice(w.atoms, xi);
      if (f) psi = subordinated_symbol(*f, w.atoms, xi);
      std::vector<double> row = xi;
      row.insert(row.end(), {psi.real(), psi.imag()});
      csv.row(row);
      max_imag = std::max(max_imag, std::abs(psi.imag()));
      min_re = std::min(min_re, psi.real());
    }
    x.results["rows"] = xis.size();
    x.results["max_abs_imag"] = max_imag;
    x.results["min_real"] = min_re;
    x.results["symmetric_walk"] = w.atoms.is_symmetric();
    if (w.subordination) x.results["subordination"] = subordination_json(*w.subordination);
    x.errors["symbol"] = 2.0 * w.atoms.tail_mass();
    return;
  }
  const LevyMeasure m = cfg::measure(cfg::require(x.c, "measure"));
  const int n = m.dim();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  if (x.c.contains("diffusion")) {
    const auto q = cfg::get<std::vector<std::vector<double>>>(x.c, "diffusion");
    if (static_cast<int>(q.size()) != n) throw ConfigError("diffusion matrix has the wrong size");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(q[static_cast<std::size_t>(i)].size()) != n)
        throw ConfigError("diffusion matrix has the wrong size");
      for (int j = 0; j < n; ++j) Q(i, j) = q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  const CharacteristicTriplet t(Point::Zero(n), Q, m);
  const auto xis = cfg::get<std::vector<std::vector<double>>>(x.c, "xi");
  auto header = io::axis_names("xi", n);
  header.insert(header.end(), {"psi", "error"});
  io::CsvWriter csv(x.artifact("symbol.csv"), header);
  double worst = 0.0;
  for (const auto& xi : xis) {
    const quad::Result r = symbol_continuous(t, xi);
    std::vector<double> row = xi;
    row.insert(row.end(), {r.value, r.error});
    csv.row(row);
    worst = std::max(worst, r.error);
  }
  x.results["rows"] = xis.size();
  x.errors["quadrature"] = worst;
}

inline void run_apply(Context& x) {
  if (x.c.contains("walk")) {
    const cfg::WalkSpec w = cfg::walk(x.c.at("walk"));
    const LatticeField u = cfg::lattice_field(cfg::require(x.c, "field"), w.atoms.dim(), x.seed);
    const int R = cfg::get_or<int>(x.c, "output_radius", u.radius() + w.atoms.reach());
    const GeneratorResult r = apply_generator_lattice(w.atoms, u, R);
    io::write_fields(x.artifact("field.csv"), {"u", "Au"}, {&u, &r.field});
    double sum = 0.0;
    for (double v : r.field.values()) sum += v;
    x.results["output_radius"] = R;
    x.results["sum_Au"] = sum;
    x.results["sup_Au"] = r.field.sup_norm();
    x.results["dropped_mass"] = r.dropped_mass;
    if (w.subordination) x.results["subordination"] = subordination_json(*w.subordination);
    return;
  }
  const LevyMeasure m = cfg::measure(cfg::require(x.c, "measure"));
  const json& fj = cfg::require(x.c, "field");
  if (cfg::get<std::string>(fj, "kind") != "gaussian")
    throw ConfigError("continuous generators act on {kind: gaussian, center, width} fields");
  const Point c = cfg::point(fj, "center");
  if (c.size() != m.dim()) throw ConfigError("field center has the wrong dimension");
  const SmoothFunction u = gaussian_bump(c, cfg::get<double>(fj, "width"));
  const CharacteristicTriplet t = CharacteristicTriplet::pure_jump(m);
  PvOptions opt;
  opt.spacing = cfg::get_or<double>(x.c, "spacing", opt.spacing);
  const auto pts = cfg::get<std::vector<std::vector<double>>>(x.c, "points");
  auto header = io::axis_names("x", m.dim());
  header.insert(header.end(), {"u", "Au", "error"});
  io::CsvWriter csv(x.artifact("pv.csv"), header);
  double worst = 0.0;
  for (const auto& p : pts) {
    if (static_cast<int>(p.size()) != m.dim()) throw ConfigError("point has the wrong dimension");
    const Point xp = Eigen::Map<const Eigen::VectorXd>(p.data(), m.dim());
    const quad::Result r = apply_generator_pv(t, u, xp, opt);
    std::vector<double> row = p;
    row.insert(row.end(), {u.value(xp), r.value, r.error});
    csv.row(row);
    worst = std::max(worst, r.error);
  }
  x.results["rows"] = pts.size();
  x.errors["pv"] = worst;
}

inline void run_resolvent(Context& x) {
  const double lambda = cfg::get<double>(x.c, "lambda");
  if (!(lambda > 0.0)) throw DomainError("resolvent parameter lambda must be positive (got " + io::num(lambda) + ")");
  const cfg::WalkSpec w = cfg::walk(cfg::require(x.c, "walk"));
  std::optional<BernsteinFunction> f;
  if (x.c.contains("bernstein")) f = cfg::bernstein(x.c.at("bernstein"));
  const int M = cfg::get_or<int>(x.c, "points", 256);
  const SymbolGrid sym = f ? subordinated_symbol_grid(*f, w.atoms, M) : lattice_symbol_grid(w.atoms, M);
  const LatticeField u = cfg::lattice_field(cfg::require(x.c, "field"), w.atoms.dim(), x.seed);
  const PeriodicGridField ug = embed(u, M);
  const MultiplierResult r = resolvent_apply(sym, lambda, ug);
  const MultiplierResult a = apply_generator_spectral(sym, r.field);
  double roundtrip = 0.0;
  for (std::size_t i = 0; i < ug.size(); ++i)
    roundtrip = std::max(roundtrip, std::abs(lambda * r.field[i] - a.field[i] - ug[i]));
  const LatticeField ru = extract(r.field, std::min(M / 2 - 1, u.radius()));
  io::write_fields(x.artifact("resolvent.csv"), {"u", "R_lambda_u"}, {&u, &ru});
  x.results["lambda"] = lambda;
  x.results["points"] = M;
  x.results["roundtrip_residual"] = roundtrip;
  x.results["lambda_sup_R_u"] = lambda * r.field.sup_norm();
  x.results["sup_u"] = ug.sup_norm();
  x.results["contraction_holds"] = lambda * r.field.sup_norm() <= ug.sup_norm() + 1e-10;
  x.errors["imag_residue"] = std::max(r.imag_residue, a.imag_residue);
}

inline void run_bernstein_test(Context& x) {
  const BernsteinFunction f = cfg::bernstein(cfg::require(x.c, "bernstein"));
  const json g = cfg::get_or<json>(x.c, "grid", json::object());
  const double lo = cfg::get_or<double>(g, "lo", 1e-3);
  const double hi = cfg::get_or<double>(g, "hi", 1e3);
  const int npts = cfg::get_or<int>(g, "points", 41);
  if (!(lo > 0.0 && hi > lo) || npts < 3) throw ConfigError("grid needs 0 < lo < hi and >= 3 points");
  io::CsvWriter csv(x.artifact("bernstein.csv"), {"lambda", "f"});
  std::vector<double> lam, val;
  for (int i = 0; i < npts; ++i) {
    lam.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (npts - 1)));
    val.push_back(eval(f, lam.back()));
    csv.row(std::vector<double>{lam.back(), val.back()});
  }
  bool nonneg = true, monotone = true, concave = true;
  for (int i = 0; i < npts; ++i) {
    nonneg = nonneg && val[static_cast<std::size_t>(i)] >= 0.0;
    if (i > 0) monotone = monotone && val[static_cast<std::size_t>(i)] >= val[static_cast<std::size_t>(i - 1)];
    if (i > 0) {
      const double a = lam[static_cast<std::size_t>(i - 1)], b = lam[static_cast<std::size_t>(i)];
      concave = concave && eval(f, 0.5 * (a + b)) >= 0.5 * (eval(f, a) + eval(f, b)) - 1e-12;
    }
  }
  x.results["nonnegative"] = nonneg;
  x.results["nondecreasing"] = monotone;
  x.results["midpoint_concave"] = concave;
  json moments = json::array();
  for (double alpha : cfg::get_or<std::vector<double>>(x.c, "alphas", {0.5, 0.9, 1.1, 1.5})) {
    json e{{"alpha", alpha}};
    try {
      const bool fin = exp_moment_finite(f, alpha);
      e["finite"] = fin;
      if (fin) {
        // Sign pattern of forward differences on (-alpha + delta, 0).
        const double d = 0.05 * alpha;
        const double h = 0.01 * alpha;
        const double worst = alternating_sign_violation(f, -alpha + d, -4.0 * h, 21, 4, h, 1e-8);
        e["sign_pattern_holds"] = worst <= 0.0;
        e["worst_violation"] = worst;
        e["extension_at_minus_alpha_half"] = eval_extension(f, -0.5 * alpha);
      }
    } catch (const UndecidableError& err) {
      e["finite"] = "undecidable";
      e["reason"] = err.what();
    }
    moments.push_back(e);
  }
  x.results["exp_moments"] = moments;
}

inline void run_subordinate(Context& x) {
  const BernsteinFunction f = cfg::bernstein(cfg::require(x.c, "bernstein"));
  const cfg::WalkSpec w = cfg::walk(cfg::require(x.c, "walk"));
  const SubordinationResult r = subordinated_levy_atoms(f, w.atoms, cfg::subordination_options(x.c));
  const int n = r.atoms.dim();
  auto header = io::axis_names("l", n);
  header.push_back("mass");
  io::CsvWriter csv(x.artifact("atoms.csv"), header);
  for (const auto& [l, p] : r.atoms.masses()) {
    std::vector<double> row = io::coords(l, n);
    row.push_back(p);
    csv.row(row);
  }
  x.results["subordination"] = subordination_json(r);
  x.results["atoms"] = r.atoms.size();
  x.results["symmetric"] = r.atoms.is_symmetric(1e-12);
  x.errors["achieved_tolerance"] = r.achieved_tolerance;
}

inline void run_ucp_nullspace(Context& x) {
  const json& wj = cfg::require(x.c, "walk");
  const cfg::WalkSpec w = cfg::walk(wj);
  const double h = cfg::get<double>(x.c, "h");
  const int N = cfg::get<int>(x.c, "N");
  const double tol = cfg::get_or<double>(x.c, "tol", 1e-10);
  std::vector<LatticeAtoms> refinements;
  for (int reach : cfg::get_or<std::vector<int>>(x.c, "refine_reach", {})) {
    if (!w.subordination) throw ConfigError("refine_reach applies to subordinated walks only");
    json rj = wj;
    rj["reach"] = reach;
    refinements.push_back(cfg::walk(rj).atoms);
  }
  const ConstraintSystem sys = build_constraint_matrix(w.atoms, h, N);
  const UcpProbeReport rep = nullspace_probe(w.atoms, h, N, refinements, tol);
  x.results["rows"] = sys.rows.size();
  x.results["cols"] = sys.cols.size();
  x.results["verdict"] = to_string(rep.verdict);
  x.results["levels"] = rep.levels;
  x.results["residual_trace"] = rep.residual_trace;
  x.results["dropped_mass"] = rep.dropped_mass;
  x.results["witness_found"] = rep.witness.has_value();
  if (rep.witness) io::write_fields(x.artifact("witness.csv"), {"w"}, {&*rep.witness});
  if (w.subordination) x.results["subordination"] = subordination_json(*w.subordination);
}

inline void run_density_probe(Context& x) {
  const LevyMeasure m = cfg::measure(cfg::require(x.c, "measure"));
  const double eps = cfg::get<double>(x.c, "epsilon");
  const auto levels = cfg::get_or<std::vector<int>>(x.c, "levels", {1, 2, 4, 8, 16});
  if (levels.empty()) throw ConfigError("levels must be nonempty");
  const json& rj = cfg::require(x.c, "region");
  const ProbeRegion region{cfg::point(rj, "lo"), cfg::point(rj, "hi")};
  ProbeQuadrature q;
  const json qj = cfg::get_or<json>(x.c, "quadrature", json::object());
  q.panels = cfg::get_or<int>(qj, "panels", q.panels);
  q.nodes = cfg::get_or<int>(qj, "nodes", q.nodes);
  if (q.panels < 1 || q.nodes < 1) throw ConfigError("quadrature needs positive panels and nodes");
  const auto target = cfg::target(cfg::require(x.c, "target"), region.lo, region.hi, q.panels, q.nodes);
  const ShiftSet shifts = ShiftSet::halton(m.dim(), eps, levels.back());
  const UcpProbeReport rep = density_probe(m, shifts, target, region, levels, q);
  io::CsvWriter csv(x.artifact("residuals.csv"), {"K", "residual", "gram_condition"});
  for (std::size_t i = 0; i < rep.levels.size(); ++i)
    csv.row(std::vector<double>{double(rep.levels[i]), rep.residual_trace[i], rep.condition_numbers[i]});
  x.results["verdict"] = to_string(rep.verdict);
  x.results["levels"] = rep.levels;
  x.results["residual_trace"] = rep.residual_trace;
  x.results["target_norm"] = rep.target_norm;
  x.results["warnings"] = rep.warnings;
  json cond = json::array();
  for (double c : rep.condition_numbers) cond.push_back(std::isfinite(c) ? json(c) : json("inf"));
  x.results["gram_condition"] = cond;
}

inline void run_mc_resolvent(Context& x) {
  const double lambda = cfg::get<double>(x.c, "lambda");
  if (!(lambda > 0.0)) throw DomainError("resolvent parameter lambda must be positive (got " + io::num(lambda) + ")");
  const cfg::WalkSpec w = cfg::walk(cfg::require(x.c, "walk"));
  std::optional<BernsteinFunction> f;
  if (x.c.contains("bernstein")) f = cfg::bernstein(x.c.at("bernstein"));
  if (f) check_samplable(*f);
  const int n = w.atoms.dim();
  const LatticeField u = cfg::lattice_field(cfg::require(x.c, "field"), n, x.seed);
  const LatticePoint p = x.c.contains("x") ? cfg::lattice_point(x.c, "x", n) : LatticePoint{};
  const auto samples = cfg::get<std::size_t>(x.c, "samples");
  const MonteCarloEstimate e = estimate_resolvent(w.atoms, f, lambda, u, p, samples, RngSpec{x.seed, 0}, x.threads);
  x.results["mean"] = e.mean;
  x.results["standard_error"] = e.standard_error;
  x.results["samples"] = e.count;
  x.results["seed"] = e.seed;
  const int M = cfg::get_or<int>(x.c, "points", 0);
  if (M > 0) {
    const SymbolGrid sym = f ? subordinated_symbol_grid(*f, w.atoms, M) : lattice_symbol_grid(w.atoms, M);
    const MultiplierResult r = resolvent_apply(sym, lambda, embed(u, M));
    const double spectral = lambda * extract(r.field, std::max(p.max_norm(), 0))(p);
    x.results["spectral"] = spectral;
    x.results["z_score"] = e.standard_error > 0.0 ? (e.mean - spectral) / e.standard_error : 0.0;
  }
}

inline void run_mc_exit(Context& x) {
  const cfg::WalkSpec w = cfg::walk(cfg::require(x.c, "walk"));
  std::optional<BernsteinFunction> f;
  if (x.c.contains("bernstein")) f = cfg::bernstein(x.c.at("bernstein"));
  const double h = cfg::get<double>(x.c, "h");
  const int n = w.atoms.dim();
  const LatticePoint start = x.c.contains("x") ? cfg::lattice_point(x.c, "x", n) : LatticePoint{};
  const auto samples = cfg::get<std::size_t>(x.c, "samples");
  const auto budget = cfg::get_or<long long>(x.c, "jump_budget", 1000000);
  const ExitDistribution d = estimate_exit_distribution(w.atoms, f, h, start, samples, RngSpec{x.seed, 0}, budget,
                                                        x.threads, cfg::subordination_options(x.c));
  auto header = io::axis_names("k", n);
  header.insert(header.end(), {"probability", "standard_error"});
  io::CsvWriter csv(x.artifact("exit.csv"), header);
  for (const auto& [k, pr] : d.probability) {
    std::vector<double> row = io::coords(k, n);
    row.insert(row.end(), {pr, d.standard_error.at(k)});
    csv.row(row);
  }
  x.results["bins"] = d.probability.size();
  x.results["beyond_reach"] = d.beyond_reach;
  x.results["budget_exceeded"] = d.budget_exceeded;
  x.results["total_mass"] = d.total_mass();
  x.results["samples"] = d.samples;
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json versions() {
  std::ostringstream eig;
  eig << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION;
  return {{"levylab", kVersion}, {"eigen", eig.str()}, {"boost", BOOST_LIB_VERSION}, {"fftw", std::string(fftw_version)}};
}

inline void write_report(const fs::path& out, const json& report) {
  if (out.empty()) return;
  std::ofstream os(out / "report.json");
  if (!os) throw std::runtime_error("cannot write " + (out / "report.json").string());
  os << report.dump(2) << '\n';
}

}  // namespace detail

/// Runs one experiment: validates the config, writes report.json and CSV
/// artifacts into `out` (skipped when `out` is empty).
inline RunOutcome run_experiment(const nlohmann::json& config, const std::filesystem::path& out,
                                 const RunOptions& options = {}) {
  using nlohmann::json;
  const auto t0 = std::chrono::steady_clock::now();
  RunOutcome outcome;
  json resolved = config;
  json& report = outcome.report;
  report["versions"] = detail::versions();
  report["threads"] = options.threads;
  try {
    try {
      if (!config.is_object()) throw ConfigError("config must be a JSON object");
      const auto sub = config::get<std::string>(config, "subcommand");
      report["subcommand"] = sub;
      if (std::find(subcommands().begin(), subcommands().end(), sub) == subcommands().end())
        throw ConfigError("unknown subcommand '" + sub + "'");
      if (options.seed) resolved["seed"] = *options.seed;
      if (!resolved.contains("seed")) throw ConfigError("missing required field 'seed' (no implicit seeding)");
      const auto seed = config::get<std::uint64_t>(resolved, "seed");
      report["config"] = resolved;
      if (!out.empty()) std::filesystem::create_directories(out);
      detail::Context ctx{resolved, out, seed, std::max(1u, options.threads), json::object(), json::object(), {}};
      if (sub == "symbol") detail::run_symbol(ctx);
      else if (sub == "apply") detail::run_apply(ctx);
      else if (sub == "resolvent") detail::run_resolvent(ctx);
      else if (sub == "bernstein-test") detail::run_bernstein_test(ctx);
      else if (sub == "subordinate") detail::run_subordinate(ctx);
      else if (sub == "ucp-nullspace") detail::run_ucp_nullspace(ctx);
      else if (sub == "density-probe") detail::run_density_probe(ctx);
      else if (sub == "mc-resolvent") detail::run_mc_resolvent(ctx);
      else detail::run_mc_exit(ctx);
      report["status"] = "ok";
      report["results"] = ctx.results;
      report["error_estimates"] = ctx.errors;
      report["artifacts"] = ctx.artifacts;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
  } catch (const std::invalid_argument& e) {
    outcome.exit_code = kExitValidation;
    outcome.message = e.what();
  } catch (const std::domain_error& e) {
    outcome.exit_code = kExitValidation;
    outcome.message = e.what();
  } catch (const NumericalError& e) {
    outcome.exit_code = kExitNumerical;
    outcome.message = e.what();
    report["achieved_tolerance"] = e.achieved_tolerance();
  } catch (const std::exception& e) {
    outcome.exit_code = kExitNumerical;
    outcome.message = e.what();
  }
  if (outcome.exit_code != kExitOk) {
    report["status"] = outcome.exit_code == kExitValidation ? "validation_error" : "numerical_error";
    report["error"] = outcome.message;
    if (!report.contains("config")) report["config"] = resolved;
  }
  report["timestamp"] = {
      {"utc", detail::utc_now()},
      {"elapsed_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  try {
    if (!out.empty()) {
      std::filesystem::create_directories(out);
      detail::write_report(out, report);
    }
  } catch (const std::exception& e) {
    if (outcome.exit_code == kExitOk) {
      outcome.exit_code = kExitNumerical;
      outcome.message = e.what();
    }
  }
  return outcome;
}

inline RunOutcome run_config_file(const std::filesystem::path& path, const std::filesystem::path& out,
                                  const RunOptions& options = {}) {
  std::ifstream is(path);
  if (!is) {
    RunOutcome o;
    o.exit_code = kExitValidation;
    o.message = "cannot read config file " + path.string();
    return o;
  }
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    RunOutcome o;
    o.exit_code = kExitValidation;
    o.message = std::string("config is not valid JSON: ") + e.what();
    return o;
  }
  return run_experiment(j, out, options);
}

}  // namespace levylab
