#include <gtest/gtest.h>

#include <cmath>

#include "levylab/operators.hpp"
#include "levylab/subordination.hpp"
#include "levylab/ucp_probe.hpp"
#include "oracles.hpp"

using namespace levylab;

namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

LatticeAtoms fractional_walk(int reach) {
  SubordinationOptions o;
  o.reach = reach;
  return subordinated_levy_atoms(BernsteinFunction::stable(0.5), nearest_neighbour_walk(1), o).atoms;
}

/// Column j of the constraint matrix recomputed by applying the generator to e_j.
void expect_matches_generator(const LatticeAtoms& a, double h, int N) {
  const ConstraintSystem sys = build_constraint_matrix(a, h, N);
  for (std::size_t j = 0; j < sys.cols.size(); ++j) {
    const LatticeField e = unit_delta(a.dim(), N, sys.cols[j]);
    const LatticeField Ae = apply_generator_lattice(a, e);
    for (std::size_t r = 0; r < sys.rows.size(); ++r)
      EXPECT_EQ(sys.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)), Ae(sys.rows[r]));
  }
}

}  // namespace

TEST(ConstraintMatrix, NearestNeighbourShapeAndLocality) {
  const ConstraintSystem sys = build_constraint_matrix(nearest_neighbour_walk(1), 1.5, 5);
  EXPECT_EQ(sys.matrix.rows(), 3);
  EXPECT_EQ(sys.matrix.cols(), 8);
  const auto zero = std::find(sys.rows.begin(), sys.rows.end(), LatticePoint(0)) - sys.rows.begin();
  EXPECT_EQ(sys.matrix.row(zero).cwiseAbs().sum(), 0.0);
  EXPECT_EQ(sys.dropped_mass, 0.0);
}

TEST(ConstraintMatrix, EntriesMatchTheGenerator) {
  expect_matches_generator(nearest_neighbour_walk(1), 1.5, 5);
  expect_matches_generator(nearest_neighbour_walk(2), 2.2, 4);
  expect_matches_generator(fractional_walk(5), 1.5, 5);
  expect_matches_generator(fractional_walk(8), 2.5, 4);
}

TEST(ConstraintMatrix, MatrixFreeConsistency) {
  const LatticeAtoms a = fractional_walk(6);
  const ConstraintSystem sys = build_constraint_matrix(a, 2.5, 6);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(sys.cols.size()), -1.0, 2.0);
  const Eigen::VectorXd Mv = sys.matrix * v;
  const LatticeField Au = apply_generator_lattice(a, field_from_vector(sys, v));
  for (std::size_t r = 0; r < sys.rows.size(); ++r) EXPECT_NEAR(Mv(static_cast<Eigen::Index>(r)), Au(sys.rows[r]), 1e-15);
}

TEST(ConstraintMatrix, EmptyUnknownSetIsAConfigError) {
  EXPECT_THROW(build_constraint_matrix(nearest_neighbour_walk(1), 1.5, 1), ConfigError);
  EXPECT_THROW(build_constraint_matrix(nearest_neighbour_walk(1), 0.0, 3), PreconditionError);
}

TEST(Violation, NearestNeighbourWitness) {
  const ConstraintSystem sys = build_constraint_matrix(nearest_neighbour_walk(1), 1.5, 5);
  const auto w = find_violation(sys.matrix);
  ASSERT_TRUE(w.has_value());
  EXPECT_LE(w->residual, 1e-14);
  EXPECT_NEAR(w->vector.norm(), 1.0, 1e-15);
  const LatticeField f = field_from_vector(sys, w->vector);
  for (const LatticePoint& k : lattice_ball(1, 1.5)) EXPECT_EQ(f(k), 0.0);
  // Hand witness u = delta_3.
  const LatticeField d = unit_delta(1, 5, LatticePoint(3));
  const LatticeField Ad = apply_generator_lattice(nearest_neighbour_walk(1), d);
  for (const LatticePoint& k : lattice_ball(1, 1.5)) EXPECT_EQ(Ad(k), 0.0);
  EXPECT_EQ(refine_and_score(d, nearest_neighbour_walk(1), 1.5), 0.0);
}

TEST(Violation, FullColumnRankHasNoWitness) {
  const ConstraintSystem sys = build_constraint_matrix(nearest_neighbour_walk(1), 3.5, 4);
  ASSERT_GE(sys.matrix.rows(), sys.matrix.cols());
  EXPECT_FALSE(find_violation(sys.matrix).has_value());
  Eigen::MatrixXd M(4, 2);
  M << 1, 0, 0, 1, 1, 1, 2, -1;
  EXPECT_FALSE(find_violation(M).has_value());
  EXPECT_THROW(find_violation(M, 0.0), PreconditionError);
}

TEST(Violation, FractionalWitnessIsATruncationArtifact) {
  const LatticeAtoms a5 = fractional_walk(5);
  const ConstraintSystem sys = build_constraint_matrix(a5, 1.5, 5);
  ASSERT_GT(sys.matrix.cols(), sys.matrix.rows());
  const auto w = find_violation(sys.matrix);
  ASSERT_TRUE(w.has_value());
  EXPECT_LE(w->residual, 1e-10 * w->sigma_max);
  const LatticeField f = field_from_vector(sys, w->vector);
  EXPECT_GT(refine_and_score(f, fractional_walk(50), 1.5), 1e-6);
  const UcpProbeReport rep = nullspace_probe(a5, 1.5, 5, {fractional_walk(50)});
  EXPECT_EQ(rep.verdict, Verdict::TruncationArtifact);
  ASSERT_EQ(rep.residual_trace.size(), 2u);
  EXPECT_GT(rep.dropped_mass, 0.0);
}

TEST(Violation, NearestNeighbourProbeStaysAViolation) {
  const UcpProbeReport rep = nullspace_probe(nearest_neighbour_walk(1), 1.5, 5, {nearest_neighbour_walk(1)});
  EXPECT_EQ(rep.verdict, Verdict::ViolationFound);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_NEAR(rep.witness->l2_norm(), 1.0, 1e-14);
}

TEST(Violation, ZeroWitnessIsRejected) {
  EXPECT_THROW(refine_and_score(LatticeField(1, 5), nearest_neighbour_walk(1), 1.5), PreconditionError);
}

TEST(Shifts, HaltonSetsAreNestedAndInsideTheBall) {
  const ShiftSet a = ShiftSet::halton(2, 0.3, 16);
  const ShiftSet b = ShiftSet::halton(2, 0.3, 4);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(a.points[static_cast<std::size_t>(i)], b.points[static_cast<std::size_t>(i)]);
  for (const auto& x : a.points) EXPECT_LT(x.norm(), 0.3);
  ShiftSet bad = b;
  bad.points[0] = pt({0.5, 0.0});
  EXPECT_THROW(bad.validate(), PreconditionError);
}

TEST(DensityProbe, HoleIsAnObstruction) {
  LevyMeasure m(RadialStable::make(0.5, 1));
  m = apply_surgery(m, Patch::hole(pt({2.0}), 0.7));
  const double w = 0.4;
  auto target = [&](const Point& y) {
    const double r = std::abs(y(0) - 2.0);
    return r < w ? std::pow(std::cos(0.5 * std::numbers::pi * r / w), 2) : 0.0;
  };
  const UcpProbeReport rep = density_probe(m, ShiftSet::halton(1, 0.25, 16), target, {pt({1.6}), pt({2.4})},
                                           {1, 2, 4, 8, 16});
  for (double r : rep.residual_trace) EXPECT_NEAR(r, oracle::cos2_bump_norm_1d(w), 1e-12);
  EXPECT_EQ(rep.verdict, Verdict::DensityObstruction);
}

TEST(DensityProbe, StableTrendIsPositive) {
  const LevyMeasure m(RadialStable::make(0.5, 1));
  auto target = [](const Point& y) { return std::pow(std::sin(std::numbers::pi * (y(0) - 1.0)), 2); };
  const UcpProbeReport rep =
      density_probe(m, ShiftSet::halton(1, 0.5, 16), target, {pt({1.0}), pt({2.0})}, {1, 2, 4, 8, 16});
  EXPECT_NEAR(rep.target_norm, oracle::sin2_norm(1.0, 2.0), 1e-13);
  for (std::size_t i = 1; i < rep.residual_trace.size(); ++i)
    EXPECT_LE(rep.residual_trace[i], rep.residual_trace[i - 1] + 1e-15);
  EXPECT_GT(rep.residual_trace.back(), 0.0);
  EXPECT_LT(rep.residual_trace.back(), 0.1 * rep.residual_trace.front());
  EXPECT_EQ(rep.verdict, Verdict::DensityTrendPositive);
}

TEST(DensityProbe, PolynomialPatchCannotReachHigherDegree) {
  LevyMeasure m(RadialStable::make(0.5, 1));
  Monomial c0{{0, 0, 0}, 1.0}, c1{{1, 0, 0}, 0.5}, c2{{2, 0, 0}, 0.25};
  m = apply_surgery(m, Patch::polynomial(pt({2.0}), 1.0, {c0, c1, c2}));
  auto target = [](const Point& y) { return oracle::cubic_residual(y(0), 2.0, 0.5); };
  const UcpProbeReport rep =
      density_probe(m, ShiftSet::halton(1, 0.25, 16), target, {pt({1.5}), pt({2.5})}, {1, 2, 4, 8, 16});
  EXPECT_NEAR(rep.target_norm, oracle::cubic_residual_norm(0.5), 1e-14);
  for (double r : rep.residual_trace) EXPECT_GE(r, 0.5 * oracle::cubic_residual_norm(0.5));
  EXPECT_EQ(rep.verdict, Verdict::DensityObstruction);
  EXPECT_FALSE(rep.warnings.empty());
}

TEST(DensityProbe, Preconditions) {
  const LevyMeasure m(RadialStable::make(0.5, 1));
  auto one = [](const Point&) { return 1.0; };
  EXPECT_THROW(density_probe(m, ShiftSet::halton(1, 0.5, 4), one, {pt({0.3}), pt({1.0})}, {1, 2}),
               PreconditionError);
  EXPECT_THROW(density_probe(m, ShiftSet::halton(1, 0.5, 4), one, {pt({1.0}), pt({2.0})}, {2, 1}),
               PreconditionError);
  EXPECT_THROW(density_probe(LevyMeasure(nearest_neighbour_walk(1)), ShiftSet::halton(1, 0.5, 4), one,
                             {pt({1.0}), pt({2.0})}, {1}),
               PreconditionError);
}
