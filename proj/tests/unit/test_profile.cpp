#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "gpcollapse/profile.hpp"
#include "shared_profile.hpp"

using namespace gpcollapse;
using gpcollapse::testing::profile;
namespace oracle = gpcollapse::testing::oracle;

TEST(SolveProfile, ShootingValueMatchesOracle) {
  const auto& q = profile();
  EXPECT_NEAR(q.q0(), 2.2062, 1e-3);
  EXPECT_NEAR(q.q0(), oracle::q0, 1e-9);
}

TEST(SolveProfile, OdeResidualSmall) { EXPECT_LT(profile().max_residual(), 1e-8); }

TEST(SolveProfile, MonotoneDecreasing) {
  const auto& q = profile().q();
  for (std::size_t i = 0; i + 1 < q.size(); ++i) ASSERT_LT(q[i + 1], q[i]) << "at node " << i;
  EXPECT_GT(q.back(), 0.0);
}

TEST(SolveProfile, InterpolationAndTail) {
  const auto& q = profile();
  EXPECT_DOUBLE_EQ(q(0.0), q.q0());
  EXPECT_EQ(q(q.r_max() + 1.0), 0.0);
  // Q(r) ~ A K0(r) in the tail; the oracle amplitude is 2.806.
  const double r = 10.0;
  EXPECT_NEAR(q(r) / std::cyl_bessel_k(0.0, r), 2.806, 5e-3);
}

TEST(SolveProfile, Preconditions) {
  EXPECT_THROW(solve_profile(10.0), std::invalid_argument);
  EXPECT_THROW(solve_profile(20.0, 1e-6), std::invalid_argument);
  EXPECT_THROW(solve_profile(20.0, 0.0), std::invalid_argument);
}

TEST(SolveProfile, BracketFailureIsDiagnosed) {
  ShootingOptions opts;
  opts.lower = 3.0;
  opts.upper = 4.0;
  try {
    solve_profile(20.0, 1e-12, opts);
    FAIL() << "expected BracketError";
  } catch (const BracketError& e) {
    EXPECT_NE(std::string(e.what()).find("bracket"), std::string::npos);
  }
}

TEST(ClassifyShot, SidesOfTheGroundState) {
  EXPECT_EQ(classify_shot(1.5, 20.0), -1);
  EXPECT_EQ(classify_shot(3.0, 20.0), +1);
}

TEST(SolveProfile, DoublingRmaxBarelyMovesAStar) {
  const double a20 = profile().mass();
  const double a40 = solve_profile(40.0).mass();
  EXPECT_LT(std::abs(a40 - a20), 1e-8);
}

TEST(ComputeConstants, ValuesAgainstOracle) {
  const auto k = compute_constants(profile());
  EXPECT_NEAR(k.a_star, 11.70, 0.01);
  EXPECT_NEAR(k.a_star / oracle::a_star, 1.0, 1e-8);
  EXPECT_NEAR(k.lambda_star / oracle::lambda_star, 1.0, 1e-8);
  EXPECT_NEAR(profile().moment(2.0) / oracle::second_moment, 1.0, 1e-8);
  EXPECT_NEAR(k.lambda_tilde, k.lambda_star, 1e-10);
}

TEST(ComputeConstants, Anharmonic) {
  const auto k2 = compute_constants(profile());
  const auto k4 = compute_constants(profile(), 4.0, 1.0);
  EXPECT_DOUBLE_EQ(k4.lambda_star, k2.lambda_star);
  EXPECT_NEAR(k4.lambda_tilde / oracle::lambda_tilde_s4, 1.0, 1e-8);
  EXPECT_NEAR(profile().moment(4.0) / oracle::fourth_moment, 1.0, 1e-7);
  EXPECT_NEAR(k4.energy_exponent(), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(k2.energy_constant(), 2.0 * k2.lambda_star * k2.lambda_star / k2.a_star, 1e-12);
  EXPECT_THROW(compute_constants(profile(), 0.0), std::invalid_argument);
  EXPECT_THROW(compute_constants(profile(), 2.0, -1.0), std::invalid_argument);
}

TEST(Pohozaev, Identities) {
  const auto& q = profile();
  const double a = q.mass();
  EXPECT_NEAR(q.gradient_norm_sq() / a, 1.0, 1e-6);
  EXPECT_NEAR(q.lp_integral(4.0) / (2.0 * a), 1.0, 1e-6);
}

TEST(MaterializeQ, NormalizedAndScaleInvariant) {
  const SpectralGrid g(256, 16.0);
  EXPECT_NEAR(materialize_Q(g, profile(), 1.0).norm_sq(), 1.0, 1e-6);
  const double reference = materialize_Q(g, profile(), 1.0).norm_sq();
  for (double lambda : {0.8, 1.5, 2.5}) {
    for (Point x : {Point{0.0, 0.0}, Point{1.0, -0.5}}) {
      EXPECT_NEAR(materialize_Q(g, profile(), lambda, x).norm_sq(), reference, 1e-7);
    }
  }
}

TEST(MaterializeQ, GagliardoNirenbergEquality) {
  const SpectralGrid g(512, 24.0);
  const double a = profile().mass();
  for (double lambda : {0.5, 1.0, 2.0}) {
    for (Point x : {Point{0.0, 0.0}, Point{1.0, 1.0}}) {
      const auto u = materialize_Q(g, profile(), lambda, x);
      const double lhs = gradient_norm_sq(u) * u.norm_sq();
      const double rhs = 0.5 * a * lp_integral(u, 4.0);
      EXPECT_NEAR(lhs / rhs, 1.0, 1e-5) << "lambda=" << lambda << " X=(" << x.x1 << "," << x.x2 << ")";
    }
  }
}

TEST(MaterializeQ, SupportOverflowSuggestsExtent) {
  const SpectralGrid g(64, 4.0);
  try {
    materialize_Q(g, profile(), 0.5);
    FAIL() << "expected SupportOverflow";
  } catch (const SupportOverflow& e) {
    EXPECT_GT(e.outer_mass(), 1e-8);
    EXPECT_GT(e.suggested_extent(), 4.0);
    // The suggestion is sufficient.
    const SpectralGrid wide(256, e.suggested_extent());
    EXPECT_NO_THROW(materialize_Q(wide, profile(), 0.5));
  }
  EXPECT_THROW(materialize_Q(g, profile(), 0.0), std::invalid_argument);
}

TEST(BlowupProfile, ConsistentWithFamily) {
  const SpectralGrid g(128, 10.0);
  const auto k = compute_constants(profile());
  // At gap 1 the concentration is exactly lambda_*.
  const auto qn = blowup_profile(g, profile(), k.a_star - 1.0);
  EXPECT_LT(distance(qn, materialize_Q(g, profile(), k.lambda_star)), 1e-10);
}

TEST(BlowupProfile, NormAndWidth) {
  const auto k = compute_constants(profile());
  for (double gap : {1e-1, 1e-2}) {
    const SpectralGrid g(256, 12.0 * std::pow(gap, 0.25));
    EXPECT_NEAR(blowup_profile(g, profile(), k.a_star - gap).norm_sq(), 1.0, 1e-6);
  }
  // Half-mass radius scales as gap^(1/4); same box relative to the profile.
  const SpectralGrid g1(256, 12.0 * std::pow(0.1, 0.25)), g2(256, 12.0 * std::pow(0.01, 0.25));
  const double w1 = mass_radius(blowup_profile(g1, profile(), k.a_star - 0.1));
  const double w2 = mass_radius(blowup_profile(g2, profile(), k.a_star - 0.01));
  EXPECT_NEAR((w1 / w2) / std::pow(10.0, 0.25), 1.0, 0.02);
}

TEST(BlowupProfile, RejectsSupercritical) {
  const SpectralGrid g(64, 4.0);
  const double a = profile().mass();
  EXPECT_THROW(blowup_profile(g, profile(), a), std::invalid_argument);
  EXPECT_THROW(blowup_profile(g, profile(), a + 1.0), std::invalid_argument);
  EXPECT_THROW(blowup_profile(g, profile(), 0.0), std::invalid_argument);
}

TEST(BlowupProfile, RescaledIsLambdaTilde) {
  const SpectralGrid g(128, 12.0);
  const auto k4 = compute_constants(profile(), 4.0);
  EXPECT_LT(distance(blowup_profile_rescaled(g, profile(), 4.0), materialize_Q(g, profile(), k4.lambda_tilde)), 1e-14);
}
