#pragma once

// Bundled experiment configs. Each one runs in a few seconds.

#include <string>
#include <vector>

#include "json.hpp"

namespace levylab {

struct CatalogEntry {
  std::string name;
  std::string description;
  nlohmann::json config;
};

inline std::vector<CatalogEntry> example_catalog() {
  using nlohmann::json;
  const json nn1 = {{"kind", "nearest_neighbour"}, {"dim", 1}};
  const json half = {{"kind", "stable"}, {"s", 0.5}};
  const json frac_walk = {{"kind", "subordinated"}, {"bernstein", half}, {"walk", nn1}, {"reach", 5}};
  const json stable1 = {{"kind", "radial_stable"}, {"s", 0.5}, {"dim", 1}};
  return {
      {"symbol-nearest-neighbour", "symbol of the 1D nearest-neighbour walk on [-pi, pi]",
       {{"subcommand", "symbol"}, {"seed", 1}, {"walk", nn1}, {"points", 16}}},
      {"symbol-discrete-laplacian-2d", "symbol of the 2D discrete Laplacian walk at a few frequencies",
       {{"subcommand", "symbol"},
        {"seed", 1},
        {"walk", {{"kind", "nearest_neighbour"}, {"dim", 2}}},
        {"xi", {{0.0, 0.0}, {3.141592653589793, 0.0}, {1.0, 2.0}, {3.141592653589793, 3.141592653589793}}}}},
      {"symbol-fractional-walk", "f(psi) for f = Stable(1/2) over the nearest-neighbour walk",
       {{"subcommand", "symbol"}, {"seed", 1}, {"walk", nn1}, {"bernstein", half}, {"points", 32}}},
      {"symbol-radial-stable", "quadrature symbol of the 1D s = 1/2 stable measure",
       {{"subcommand", "symbol"}, {"seed", 1}, {"measure", stable1}, {"xi", {{0.5}, {1.0}, {2.0}}}}},
      {"apply-lattice-laplacian", "nearest-neighbour generator applied to a delta field",
       {{"subcommand", "apply"},
        {"seed", 1},
        {"walk", nn1},
        {"field", {{"kind", "delta"}, {"at", {0}}, {"radius", 4}}}}},
      {"apply-fractional-pv", "principal-value fractional Laplacian of a Gaussian bump",
       {{"subcommand", "apply"},
        {"seed", 1},
        {"measure", stable1},
        {"field", {{"kind", "gaussian"}, {"center", {0.0}}, {"width", 1.0}}},
        {"points", {{0.0}, {0.5}, {2.0}}}}},
      {"resolvent-nearest-neighbour", "periodic resolvent with roundtrip and contraction checks",
       {{"subcommand", "resolvent"},
        {"seed", 7},
        {"lambda", 1.0},
        {"walk", nn1},
        {"points", 256},
        {"field", {{"kind", "random"}, {"radius", 32}}}}},
      {"resolvent-fractional", "resolvent of the Stable(1/2)-subordinated walk",
       {{"subcommand", "resolvent"},
        {"seed", 7},
        {"lambda", 0.5},
        {"walk", nn1},
        {"bernstein", half},
        {"points", 256},
        {"field", {{"kind", "random"}, {"radius", 32}}}}},
      {"bernstein-log", "exponential moments and extension sign pattern of log(1 + x)",
       {{"subcommand", "bernstein-test"},
        {"seed", 1},
        {"bernstein", {{"kind", "log"}}},
        {"alphas", {0.5, 0.9, 1.1, 2.0}}}},
      {"bernstein-stable", "Stable(1/2) has no finite exponential moments",
       {{"subcommand", "bernstein-test"}, {"seed", 1}, {"bernstein", half}, {"alphas", {0.1, 0.5, 1.0, 2.0}}}},
      {"bernstein-atoms", "finitely many atoms: every exponential moment is finite",
       {{"subcommand", "bernstein-test"},
        {"seed", 1},
        {"bernstein", {{"kind", "atoms"}, {"atoms", {{1.0, 0.5}, {2.0, 0.25}}}}},
        {"alphas", {0.5, 2.0}}}},
      {"subordinate-fractional", "atoms of Stable(1/2) over the nearest-neighbour walk, reach 64",
       {{"subcommand", "subordinate"}, {"seed", 1}, {"bernstein", half}, {"walk", nn1}, {"reach", 64}}},
      {"ucp-nullspace-nearest-neighbour", "bounded-window witness for the nearest-neighbour operator",
       {{"subcommand", "ucp-nullspace"}, {"seed", 1}, {"walk", nn1}, {"h", 1.5}, {"N", 5}}},
      {"ucp-nullspace-fractional", "fractional-walk witness at reach 5, rescored at reach 50",
       {{"subcommand", "ucp-nullspace"},
        {"seed", 1},
        {"walk", frac_walk},
        {"h", 1.5},
        {"N", 5},
        {"refine_reach", {50}}}},
      {"density-probe-hole", "hole-patched stable measure: residual stays at the target norm",
       {{"subcommand", "density-probe"},
        {"seed", 1},
        {"measure",
         {{"kind", "radial_stable"},
          {"s", 0.5},
          {"dim", 1},
          {"patches", {{{"kind", "hole"}, {"center", {2.0}}, {"radius", 0.7}}}}}},
        {"epsilon", 0.25},
        {"levels", {1, 2, 4, 8, 16}},
        {"region", {{"lo", {1.6}}, {"hi", {2.4}}}},
        {"target", {{"kind", "cos2_bump"}, {"center", {2.0}}, {"width", 0.4}}}}},
      {"density-probe-stable", "unpatched 1D stable measure: residual trend over nested shifts",
       {{"subcommand", "density-probe"},
        {"seed", 1},
        {"measure", stable1},
        {"epsilon", 0.5},
        {"levels", {1, 2, 4, 8, 16}},
        {"region", {{"lo", {1.0}}, {"hi", {2.0}}}},
        {"target", {{"kind", "sin2"}, {"lo", 1.0}, {"hi", 2.0}}}}},
      {"density-probe-polynomial", "degree-2 polynomial patch against a cubic residual target",
       {{"subcommand", "density-probe"},
        {"seed", 1},
        {"measure",
         {{"kind", "radial_stable"},
          {"s", 0.5},
          {"dim", 1},
          {"patches",
           {{{"kind", "polynomial"},
             {"center", {2.0}},
             {"radius", 1.0},
             {"monomials", {{{0}, 1.0}, {{1}, 0.5}, {{2}, 0.25}}}}}}}},
        {"epsilon", 0.25},
        {"levels", {1, 2, 4, 8, 16}},
        {"region", {{"lo", {1.5}}, {"hi", {2.5}}}},
        {"target", {{"kind", "monomial_residual"}, {"degree", 3}}}}},
      {"mc-resolvent-nearest-neighbour", "Monte Carlo lambda R_lambda u(0) against the spectral value",
       {{"subcommand", "mc-resolvent"},
        {"seed", 11},
        {"lambda", 1.0},
        {"walk", nn1},
        {"field", {{"kind", "delta"}, {"at", {0}}, {"radius", 0}}},
        {"samples", 20000},
        {"points", 256}}},
      {"mc-exit-nearest-neighbour", "exit distribution of the nearest-neighbour walk from {-1, 0, 1}",
       {{"subcommand", "mc-exit"}, {"seed", 13}, {"walk", nn1}, {"h", 1.5}, {"samples", 20000}}},
  };
}

}  // namespace levylab
