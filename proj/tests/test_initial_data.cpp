#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hypersqg/initial_data.hpp"
#include "oracles.hpp"

using namespace hsqg;

namespace {

const BumpSpec kStd(1.0, 2.0, 1.0, 1.0);
const oracle::Bump kStdRef{};

}  // namespace

TEST(Omega0X, PeakAndSupport) {
  EXPECT_EQ(eval_omega0_x(kStd, {2.0, 0.0}), 1.0);
  EXPECT_EQ(eval_omega0_x(kStd, {4.0, 0.5}), 0.0);
  EXPECT_EQ(eval_omega0_x(kStd, {0.5, 0.5}), 0.0);
  EXPECT_EQ(eval_omega0_x(kStd, {2.0, 1.2}), 0.0);
}

TEST(Omega0X, PlateauRegionEqualsAmplitudeOnCenterLine) {
  // the x2 factor is 1 on [0, M/2], so (2, 0.3) sits on the plateau
  EXPECT_EQ(eval_omega0_x(kStd, {2.0, 0.3}), 1.0);
}

TEST(Omega0X, MatchesClosedFormInDecayZone) {
  const double v = eval_omega0_x(kStd, {2.0, 0.7});
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 1.0);
  EXPECT_NEAR(v, std::pow(std::cos(std::numbers::pi * 0.2), 2), 1e-14);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u1(0.8, 3.2), u2(-0.1, 1.1);
  for (int i = 0; i < 2000; ++i) {
    const double x1 = u1(rng), x2 = u2(rng);
    EXPECT_NEAR(eval_omega0_x(kStd, {x1, x2}), kStdRef(x1, x2), 1e-14);
  }
}

TEST(Omega0X, NonnegativeWithSupremumA) {
  const BumpSpec s(2.5, 3.0, 0.5, 2.0);
  double best = 0.0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const double v = eval_omega0_x(s, {2.4 + 1.2 * i / 200.0, -0.2 + 2.4 * j / 200.0});
      ASSERT_GE(v, 0.0);
      best = std::max(best, v);
    }
  }
  EXPECT_DOUBLE_EQ(best, 2.5);
}

TEST(Omega0X, C1AcrossSupportEdges) {
  // one-sided difference quotients straddling each edge agree
  const double h = 1e-7;
  auto f = [](double x1, double x2) { return eval_omega0_x(kStd, {x1, x2}); };
  for (double x2 : {0.2, 0.8}) {
    for (double e : {1.0, 3.0}) {
      const double left = (f(e, x2) - f(e - h, x2)) / h;
      const double right = (f(e + h, x2) - f(e, x2)) / h;
      EXPECT_LT(std::abs(left - right), 1e-6);
    }
  }
  for (double e : {0.5, 1.0}) {
    const double left = (f(2.0, e) - f(2.0, e - h)) / h;
    const double right = (f(2.0, e + h) - f(2.0, e)) / h;
    EXPECT_LT(std::abs(left - right), 1e-6);
  }
  // the analytic slope is continuous across the edge too
  EXPECT_NEAR(grad_omega0_x(kStd, {3.0 - 1e-12, 0.2}).first, 0.0, 1e-10);
  EXPECT_NEAR(grad_omega0_x(kStd, {2.0, 1.0 - 1e-12}).second, 0.0, 1e-10);
}

TEST(Omega0X, GradientMatchesFiniteDifferences) {
  const double h = 1e-6;
  for (auto [x1, x2] : {std::pair{1.6, 0.2}, {2.3, 0.7}, {2.9, 0.55}, {1.1, 0.95}}) {
    const auto [g1, g2] = grad_omega0_x(kStd, {x1, x2});
    EXPECT_NEAR(g1, (kStdRef(x1 + h, x2) - kStdRef(x1 - h, x2)) / (2 * h), 1e-8);
    EXPECT_NEAR(g2, (kStdRef(x1, x2 + h) - kStdRef(x1, x2 - h)) / (2 * h), 1e-8);
  }
}

TEST(BumpSpec, Validation) {
  EXPECT_THROW(BumpSpec(1.0, 1.0, 1.0, 1.0), DomainError);  // touches x1 = 0
  EXPECT_THROW(BumpSpec(-1.0, 2.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(BumpSpec(1.0, 2.0, 0.0, 1.0), DomainError);
  EXPECT_THROW(BumpSpec(1.0, 2.0, 1.0, 0.0), DomainError);
  EXPECT_THROW(profile_from_string("gaussian"), DomainError);
  EXPECT_EQ(profile_from_string(to_string(Profile::lifted)), Profile::lifted);
}

TEST(Omega0Z, AgreesWithXSide) {
  const auto q = x_to_z({2.0, 0.3});
  EXPECT_EQ(eval_omega0_z(kStd, q), eval_omega0_x(kStd, {2.0, 0.3}));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u1(0.9, 3.1), u2(1e-3, 1.05);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const PointX p{u1(rng), u2(rng)};
    worst = std::max(worst, std::abs(eval_omega0_z(kStd, x_to_z(p)) - eval_omega0_x(kStd, p)));
  }
  EXPECT_LT(worst, 1e-14);
}

TEST(Omega0Z, ZeroFarOutsideStrip) {
  EXPECT_EQ(eval_omega0_z(kStd, {0.0, 5.0}), 0.0);
  EXPECT_EQ(eval_omega0_z(kStd, {3.0, 0.0}), 0.0);
  EXPECT_EQ(eval_omega0_z(kStd, {-600.0, -900.0}), 0.0);
}

TEST(GradOmega0Z, ZeroOutsideSupport) {
  const auto [a, b] = grad_omega0_z(kStd, {0.0, 5.0});
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
}

TEST(GradOmega0Z, MatchesFiniteDifferences) {
  auto f = [](double z1, double z2) {
    const double x1 = std::exp(0.5 * (z1 + z2)), x2 = std::exp(0.5 * (z1 - z2));
    return kStdRef(x1, x2);
  };
  const double h = 1e-5;
  // peak image, decay zone, and near an x1 edge
  for (const PointX p : {PointX{2.0, 0.25}, PointX{2.4, 0.8}, PointX{1.2, 0.6}}) {
    const auto q = x_to_z(p);
    const auto [d1, d2] = grad_omega0_z(kStd, q);
    EXPECT_NEAR(d1, (f(q.z1 + h, q.z2) - f(q.z1 - h, q.z2)) / (2 * h), 1e-7);
    EXPECT_NEAR(d2, (f(q.z1, q.z2 + h) - f(q.z1, q.z2 - h)) / (2 * h), 1e-7);
  }
}

TEST(GradOmega0Z, MirrorIdentity) {
  // the x1 factor is even about c1, so g1(c1+u, x2) = -g1(c1-u, x2) and
  // g2 agrees; in z the pushed gradients obey the same reflection
  for (double u : {0.2, 0.5, 0.9}) {
    for (double x2 : {0.3, 0.7}) {
      const PointX pr{2.0 + u, x2}, pl{2.0 - u, x2};
      const auto [r1, r2] = grad_omega0_z(kStd, x_to_z(pr));
      const auto [l1, l2] = grad_omega0_z(kStd, x_to_z(pl));
      // x1 g1 = d1 + d2, x2 g2 = d1 - d2
      EXPECT_NEAR((r1 + r2) / pr.x1, -(l1 + l2) / pl.x1, 1e-12);
      EXPECT_NEAR((r1 - r2) / pr.x2, (l1 - l2) / pl.x2, 1e-12);
    }
  }
}

TEST(CrossSection, ZeroAboveSupportAndForZeroField) {
  const QuadratureRule rule;
  EXPECT_EQ(cross_section(kStd, std::log(3.0) + 0.01, rule).value, 0.0);
  EXPECT_EQ(cross_section(BumpSpec(0.0, 2.0, 1.0, 1.0), -1.0, rule).value, 0.0);
  EXPECT_EQ(cross_section_z(BumpSpec(0.0, 2.0, 1.0, 1.0), -1.0, rule), 0.0);
}

TEST(CrossSection, IdentityBothSidesAt20Samples) {
  const QuadratureRule rule;
  for (int i = 0; i < 20; ++i) {
    const double z1 = std::log(3.0) - 0.05 - 8.0 * i / 19.0;
    const double x_side = cross_section(kStd, z1, rule).value;
    const double z_side = cross_section_z(kStd, z1, rule);
    EXPECT_NEAR(x_side, z_side, 1e-8 * z_side) << "z1 = " << z1;
    EXPECT_NEAR(x_side, oracle::cross_section(z1, kStdRef), 1e-10 * x_side);
  }
}

TEST(CrossSection, NonnegativeAndStabilizing) {
  const QuadratureRule rule;
  double prev_gap = 1e300;
  const double lim = 2.0 * oracle::simpson([](double x1) { return kStdRef(x1, 0.0) / x1; },
                                           1.0, 3.0, 4000);
  for (double z1 : {-1.0, -2.0, -4.0, -8.0, -16.0}) {
    const double v = cross_section(kStd, z1, rule).value;
    EXPECT_GE(v, 0.0);
    const double gap = std::abs(v - lim);
    EXPECT_LE(gap, prev_gap);
    prev_gap = gap;
  }
  EXPECT_LT(prev_gap, 1e-12);
}

TEST(EstimateZ1C, StandardBumpMatchesAxisTrace) {
  const QuadratureRule rule;
  const auto ab = estimate_Z1_C(kStd, rule);
  const double lim = 2.0 * oracle::simpson([](double x1) { return kStdRef(x1, 0.0) / x1; },
                                           1.0, 3.0, 4000);
  EXPECT_GT(ab.C, 0.0);
  EXPECT_NEAR(ab.C, lim, 0.01 * lim);
  EXPECT_NEAR(ab.limit, lim, 1e-12);
  EXPECT_LT(ab.Z1, std::log(3.0));
  // every sample below Z1 clears C
  for (double z1 = ab.Z1; z1 > ab.Z1 - 10.0; z1 -= 0.1) {
    EXPECT_GE(cross_section(kStd, z1, rule).value, ab.C * (1 - 1e-12));
  }
}

TEST(EstimateZ1C, RefinementChangesCBelow1em8) {
  const auto a = estimate_Z1_C(kStd, QuadratureRule());
  const auto b = estimate_Z1_C(kStd, QuadratureRule(8, 16.0));
  EXPECT_LT(std::abs(a.C - b.C), 1e-8);
}

TEST(EstimateZ1C, AxisDegenerateDataRejected) {
  const BumpSpec lifted(1.0, 2.0, 1.0, 1.0, Profile::lifted);
  EXPECT_EQ(eval_omega0_x(lifted, {2.0, 0.0}), 0.0);
  EXPECT_THROW(estimate_Z1_C(lifted, QuadratureRule()), DomainError);
  EXPECT_THROW(estimate_Z1_C(BumpSpec(0.0, 2.0, 1.0, 1.0), QuadratureRule()), DomainError);
}
