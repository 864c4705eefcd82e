#include <gtest/gtest.h>

#include <cmath>

#include "levylab/subordination.hpp"
#include "oracles.hpp"

using namespace levylab;

namespace {

SubordinationResult subordinate(const BernsteinFunction& f, int dim, int reach, double tol = 1e-10) {
  SubordinationOptions o;
  o.reach = reach;
  o.tolerance = tol;
  return subordinated_levy_atoms(f, nearest_neighbour_walk(dim), o);
}

}  // namespace

TEST(Subordination, StableOverNearestNeighbourMatchesClosedForm) {
  for (double s : {0.25, 0.5, 0.75}) {
    const SubordinationResult r = subordinate(BernsteinFunction::stable(s), 1, 64);
    EXPECT_LE(r.achieved_tolerance, 1e-10);
    EXPECT_EQ(r.atoms.tail_radius(), 64);
    for (int l = 1; l <= 64; ++l) {
      EXPECT_NEAR(r.atoms.atom(LatticePoint(l)), oracle::stable_nn_atom(s, l), 1e-10) << "s=" << s << " l=" << l;
      EXPECT_EQ(r.atoms.atom(LatticePoint(l)), r.atoms.atom(LatticePoint(-l)));
    }
    EXPECT_NEAR(r.atoms.total_mass(), oracle::stable_nn_total_mass(s), 1e-10) << "s=" << s;
  }
}

TEST(Subordination, DriftOnlyRescalesTheWalk) {
  const SubordinationResult r = subordinate(BernsteinFunction::drift(2.0), 1, 8);
  EXPECT_NEAR(r.atoms.atom(LatticePoint(1)), 1.0, 1e-14);
  EXPECT_NEAR(r.atoms.atom(LatticePoint(-1)), 1.0, 1e-14);
  EXPECT_NEAR(r.atoms.atom(LatticePoint(2)), 0.0, 1e-14);
  EXPECT_NEAR(r.atoms.tail_mass(), 0.0, 1e-14);
}

TEST(Subordination, SingleAtomIsThePoissonLawAtThatTime) {
  const SubordinationResult r = subordinate(BernsteinFunction::atoms({{1.5, 1.0}}), 1, 20);
  for (int l = 1; l <= 20; ++l) EXPECT_NEAR(r.atoms.atom(LatticePoint(l)), oracle::poisson_nn_law(1.5, l), 1e-14);
}

TEST(Subordination, LogFamilyTotalMass) {
  const SubordinationResult r = subordinate(BernsteinFunction::log(), 1, 64);
  // (1/2pi) int log(2 - cos xi) dxi = log((2 + sqrt 3) / 2)
  EXPECT_NEAR(r.atoms.total_mass(), std::log((2.0 + std::sqrt(3.0)) / 2.0), 1e-10);
  EXPECT_LE(r.achieved_tolerance, 1e-10);
}

TEST(Subordination, TwoDimensionalStableTotalMass) {
  const SubordinationResult r = subordinate(BernsteinFunction::stable(0.5), 2, 24, 1e-9);
  EXPECT_TRUE(r.atoms.is_symmetric(1e-13));
  EXPECT_NEAR(r.atoms.atom(LatticePoint(3, 1)), r.atoms.atom(LatticePoint(1, 3)), 1e-13);
  const int P = 2048;
  double mean = 0.0;
  for (int i = 0; i < P; ++i)
    for (int j = 0; j < P; ++j) {
      const double a = 2.0 * std::numbers::pi * i / P, b = 2.0 * std::numbers::pi * j / P;
      mean += std::sqrt(oracle::laplacian_symbol({a, b}));
    }
  mean /= static_cast<double>(P) * P;
  EXPECT_NEAR(r.atoms.total_mass(), mean, 1e-6);
}

TEST(Subordination, HeatKernelExpansionApproachesTheExactLaw) {
  const HeatKernelExpansion hk(nearest_neighbour_walk(1));
  const double t = 400.0;
  for (int x : {0, 5, 20, 40}) {
    const auto v = hk(LatticePoint(x), t);
    const double exact = oracle::poisson_nn_law(t, x, 2000);
    EXPECT_NEAR(v.value, exact, 5e-6 * exact) << x;
    EXPECT_LE(std::abs(v.value - exact), 10.0 * v.error) << x;
  }
}

TEST(Subordination, Preconditions) {
  EXPECT_THROW(HeatKernelExpansion(LatticeAtoms(1, {{LatticePoint(1), 1.0}})), PreconditionError);
  EXPECT_THROW(HeatKernelExpansion(LatticeAtoms(1, {{LatticePoint(2), 0.5}, {LatticePoint(-2), 0.5}})),
               PreconditionError);
  EXPECT_THROW(subordinated_levy_atoms(BernsteinFunction::log(),
                                       LatticeAtoms(1, {{LatticePoint(1), 0.3}, {LatticePoint(-1), 0.3}})),
               PreconditionError);
  SubordinationOptions o;
  o.reach = 0;
  EXPECT_THROW(subordinated_levy_atoms(BernsteinFunction::log(), nearest_neighbour_walk(1), o), PreconditionError);
}
