#include <gtest/gtest.h>

#include <cmath>

#include "levylab/levy_measure.hpp"

using namespace levylab;

namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

double sphere_area(int n) { return n == 1 ? 2.0 : n == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi; }

}  // namespace

TEST(LevyMeasure, StableConstantKnownValues) {
  EXPECT_NEAR(stable_constant(0.5, 1), 1.0 / std::numbers::pi, 1e-15);
  // n = 3, s = 1/2: c = 1 / pi^2
  EXPECT_NEAR(stable_constant(0.5, 3), 1.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
  EXPECT_THROW(stable_constant(1.0, 1), DomainError);
}

TEST(LevyMeasure, StableDensityAndOriginError) {
  const LevyMeasure m(RadialStable::make(0.25, 2));
  const double c = stable_constant(0.25, 2);
  EXPECT_NEAR(m.density(pt({3.0, 4.0})), c * std::pow(5.0, -2.5), 1e-16);
  EXPECT_THROW(m.density(pt({0.0, 0.0})), DomainError);
  EXPECT_TRUE(m.is_symmetric());
}

TEST(LevyMeasure, SmallBallAndTailIntegralsOfStableMeasures) {
  for (int n : {1, 2, 3})
    for (double s : {0.25, 0.5, 0.75}) {
      const LevyMeasure m(RadialStable::make(s, n));
      const double c = stable_constant(s, n);
      const quad::Result sb = small_ball_integral(m, 0.5);
      EXPECT_NEAR(sb.value, c * sphere_area(n) * std::pow(0.5, 2 - 2 * s) / (2 - 2 * s), 1e-9 * sb.value);
      const quad::Result tm = tail_mass(m, 2.0);
      EXPECT_NEAR(tm.value, c * sphere_area(n) * std::pow(2.0, -2 * s) / (2 * s), 1e-9 * tm.value);
    }
}

TEST(LevyMeasure, SurgeryReplacesTheDensityOnTheBall) {
  const LevyMeasure base(RadialStable::make(0.5, 1));
  const LevyMeasure hole = apply_surgery(base, Patch::hole(pt({2.0}), 0.5));
  EXPECT_EQ(hole.density(pt({2.2})), 0.0);
  EXPECT_EQ(hole.density(pt({1.0})), base.density(pt({1.0})));
  const LevyMeasure leb = apply_surgery(base, Patch::lebesgue(pt({-3.0}), 1.0));
  EXPECT_EQ(leb.density(pt({-3.5})), 1.0);
  const LevyMeasure ex = apply_surgery(base, Patch::exponential(pt({3.0}), 1.0, pt({0.5})));
  EXPECT_NEAR(ex.density(pt({3.2})), std::exp(1.6), 1e-15);
  Monomial a{{0, 0, 0}, 1.0}, b{{2, 0, 0}, 0.5};
  const LevyMeasure poly = apply_surgery(base, Patch::polynomial(pt({2.0}), 1.0, {a, b}));
  EXPECT_NEAR(poly.density(pt({2.5})), 1.0 + 0.5 * 6.25, 1e-15);
  // The last patch wins on overlaps.
  const LevyMeasure both = apply_surgery(hole, Patch::lebesgue(pt({2.0}), 0.2));
  EXPECT_EQ(both.density(pt({2.1})), 1.0);
  EXPECT_EQ(both.density(pt({2.4})), 0.0);
  EXPECT_FALSE(hole.is_symmetric());
}

TEST(LevyMeasure, SurgeryPreconditions) {
  const LevyMeasure base(RadialStable::make(0.5, 1));
  EXPECT_THROW(apply_surgery(base, Patch::hole(pt({0.5}), 1.0)), PreconditionError);
  EXPECT_THROW(apply_surgery(base, Patch::hole(pt({1.0, 1.0}), 0.5)), ShapeError);
  EXPECT_THROW(apply_surgery(base, Patch::hole(pt({2.0}), 0.0)), PreconditionError);
}

TEST(LevyMeasure, HoleIntegralsDropThePatchMass) {
  const LevyMeasure base(RadialStable::make(0.5, 1));
  const LevyMeasure hole = apply_surgery(base, Patch::hole(pt({3.0}), 1.0));
  // nu((2, 4)) = (1/pi) (2^{-1} - 4^{-1})
  const double removed = (0.5 - 0.25) / std::numbers::pi;
  EXPECT_NEAR(tail_mass(base, 1.0).value - tail_mass(hole, 1.0).value, removed, 1e-10);
}

TEST(LevyMeasure, LatticeSurgeryAndIntegrals) {
  const LatticeAtoms a(1, {{LatticePoint(1), 0.25}, {LatticePoint(-1), 0.25}, {LatticePoint(3), 0.5}});
  const LevyMeasure m(a);
  EXPECT_TRUE(m.is_lattice());
  EXPECT_DOUBLE_EQ(small_ball_integral(m, 2.0).value, 0.5);
  EXPECT_DOUBLE_EQ(tail_mass(m, 2.0).value, 0.5);
  const LevyMeasure h = apply_surgery(m, Patch::hole(pt({3.0}), 0.5));
  EXPECT_EQ(h.atom(LatticePoint(3)), 0.0);
  EXPECT_EQ(h.atom(LatticePoint(1)), 0.25);
  EXPECT_TRUE(LevyMeasure(nearest_neighbour_walk(2)).is_symmetric());
  EXPECT_FALSE(m.is_symmetric());
}

TEST(LevyMeasure, AsymmetricStableIsNotSymmetric) {
  const LevyMeasure m(AsymmetricStable1D{0.25, 0.75, 1.0, 1.0});
  EXPECT_FALSE(m.is_symmetric());
  EXPECT_NEAR(m.density(pt({-2.0})), std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(m.density(pt({2.0})), std::pow(2.0, -2.5), 1e-15);
}
