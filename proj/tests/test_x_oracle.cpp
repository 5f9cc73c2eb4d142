#include <cmath>

#include <gtest/gtest.h>

#include "hypersqg/biot_savart.hpp"
#include "hypersqg/evolve_z.hpp"
#include "hypersqg/reduced_model.hpp"
#include "hypersqg/x_oracle.hpp"

using namespace hsqg;

namespace {

const BumpSpec kStd(1.0, 2.0, 1.0, 1.0);
const BumpSpec kZero(0.0, 2.0, 1.0, 1.0);

DisplacementProfile evolve_to(double T, const Z1Grid& g) {
  const ReducedModel m(g, kStd, Alpha(0.5), QuadratureRule());
  StepController c;
  DisplacementProfile d(g);
  double dt = c.dt_init;
  while (d.t < T) {
    const auto r = step_adaptive(d, std::min(dt, T - d.t), c, m);
    d = r.disp;
    dt = r.dt_next;
  }
  return d;
}

}  // namespace

TEST(MakeCloud, CellCenteredLatticeOverSupport) {
  const auto c = make_cloud(kStd, 4);
  ASSERT_EQ(c.current.size(), 16u);
  EXPECT_DOUBLE_EQ(c.cell_area, 0.5 * 0.25);
  EXPECT_DOUBLE_EQ(c.initial.front().x1, 1.25);
  EXPECT_DOUBLE_EQ(c.initial.front().x2, 0.125);
  EXPECT_THROW(make_cloud(kStd, 0), DomainError);
}

TEST(OracleOmega, ZeroFieldAndAboveAllProducts) {
  const auto z = make_cloud(kZero, 16);
  EXPECT_EQ(oracle_omega(0.1, z, 0.5), 0.0);
  const auto c = make_cloud(kStd, 16);
  EXPECT_EQ(oracle_omega(3.5, c, 0.5), 0.0);
}

TEST(OracleOmega, AgreesWithQuadratureAtRest) {
  const auto c = make_cloud(kStd, 512);
  const double ref = omega_x(0.1, InitialField{kStd}, Alpha(0.5), QuadratureRule());
  EXPECT_NEAR(oracle_omega(0.1, c, 0.5), ref, 1e-4 * ref);
}

TEST(OmegaTable, MatchesDirectSum) {
  auto c = make_cloud(kStd, 48);
  c = oracle_step(c, 0.05, 0.5);
  const OmegaTable table(c.current, c.carried, c.cell_area, 0.5);
  for (double a : {0.0, 0.02, 0.3, 1.1, 2.5, 4.0}) {
    const double direct = oracle_omega(a, c, 0.5);
    EXPECT_NEAR(table(a), direct, 1e-12 * std::max(1.0, direct)) << a;
  }
}

TEST(OracleStep, ZeroFieldLeavesCloudUnchanged) {
  const auto c = make_cloud(kZero, 8);
  const auto n = oracle_step(c, 0.1, 0.5);
  for (std::size_t i = 0; i < c.current.size(); ++i) EXPECT_EQ(n.current[i], c.current[i]);
  EXPECT_THROW(oracle_step(c, 0.0, 0.5), DomainError);
}

// Omega from the particle table is piecewise constant in a, so the stages see
// jumps and the drift decays below the smooth-field fourth order.
TEST(OracleStep, ProductDriftShrinksSuperlinearly) {
  const auto c = make_cloud(kStd, 24);
  const double d1 = max_product_drift(oracle_step(c, 0.4, 0.5));
  const double d2 = max_product_drift(oracle_step(c, 0.2, 0.5));
  EXPECT_GT(d1, 0.0);
  EXPECT_GE(std::log2(d1 / d2), 2.0) << d1 << " " << d2;
}

TEST(OracleStep, HundredStepsConserveProducts) {
  auto c = make_cloud(kStd, 64);
  const auto c0 = c;
  for (int i = 0; i < 100; ++i) c = oracle_step(c, 1e-3, 0.5);
  EXPECT_LT(max_product_drift(c), 1e-8);
  for (std::size_t i = 0; i < c.current.size(); ++i) {
    EXPECT_LE(c.current[i].x1, c0.current[i].x1);
    EXPECT_GE(c.current[i].x2, c0.current[i].x2);
    EXPECT_EQ(c.carried[i], c0.carried[i]);
  }
}

TEST(OracleStep, OversizedStepIsRejected) {
  const auto c = make_cloud(kStd, 16);
  EXPECT_THROW(oracle_step(c, 40.0, 0.5), SolverError);
}

TEST(CompareWithZ, ZeroAtStartAndForZeroField) {
  const Z1Grid g(-30.0, 2.2, 256);
  EXPECT_EQ(compare_with_z(make_cloud(kStd, 32), DisplacementProfile(g)), 0.0);
  auto z = make_cloud(kZero, 16);
  for (int i = 0; i < 5; ++i) z = oracle_step(z, 0.1, 0.5);
  EXPECT_EQ(compare_with_z(z, DisplacementProfile(g, 0.5)), 0.0);
}

TEST(CompareWithZ, AgreesWithReductionBeforeBlowup) {
  const Z1Grid g(-30.0, 2.2, 1024);
  const auto d = evolve_to(0.1, g);
  auto c = make_cloud(kStd, 256);
  for (int i = 0; i < 100; ++i) c = oracle_step(c, 1e-3, 0.5);
  EXPECT_LT(compare_with_z(c, d), 1e-4);
}
