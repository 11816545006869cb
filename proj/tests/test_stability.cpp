#include <gtest/gtest.h>

#include <cmath>

#include "offdiag/stability/stability.hpp"

using namespace offdiag;

TEST(Trace, GeneralRelativityRoot) {
  // f = R: -2R + R - kappa2 T = 0 gives R0 = -kappa2 T0
  FModel gr = PowerLaw{1, 0, 1, 0};
  TraceRoot r = solve_trace_background(gr, -2.0, 1.5, 0.1, 10.0);
  EXPECT_NEAR(r.R0, 3.0, 1e-10);
}

TEST(Trace, CubicCorrection) {
  // f = R + eps R^3 leaves -R + eps R^3 - kappa2 T0
  const double eps = 0.01, k2T = -3.0;
  FModel m = PowerLaw{1, eps, 1, 3};
  TraceRoot r = solve_trace_background(m, -3.0, 1.0, 0.1, 5.0);
  double x = 3.0;
  for (int i = 0; i < 50; ++i) x -= (-x + eps * x * x * x - k2T) / (-1 + 3 * eps * x * x);
  EXPECT_NEAR(r.R0, x, 1e-9);
  EXPECT_NEAR(trace_background_residual(m, FPoint{r.R0, -3.0, 0.0}, 1.0), 0.0, 1e-8);
}

TEST(Oscillator, MarginArithmetic) {
  StabilityInputs s;
  s.Xi0 = 1;
  s.P0 = 1;
  s.f1_1 = 1;
  s.F2 = 1;
  s.T0 = -2;
  // 1 + 2 - (-2)
  EXPECT_NEAR(oscillator_criterion(s).margin, 5.0, 1e-15);
  EXPECT_TRUE(oscillator_criterion(s).pass);
  // 2/(-2) + 4 (1/(-2))
  EXPECT_NEAR(s.omega2(), -3.0, 1e-15);

  StabilityInputs z;
  z.P0 = -2;
  z.T0 = 0;
  EXPECT_NEAR(oscillator_criterion(z).margin, -4.0, 1e-15);
  EXPECT_FALSE(oscillator_criterion(z).pass);
}

TEST(Perturbation, TrivialStaysZero) {
  StabilityInputs s;
  s.Xi0 = -4;
  s.T0 = -2;
  PerturbationResult r = evolve_perturbation(s, [](double) { return 0.1; }, 0, 0, 0, 10, 101);
  EXPECT_EQ(r.cls, PerturbationClass::Trivial);
  for (const auto& y : r.traj.state) EXPECT_EQ(y[0], 0.0);
}

TEST(Perturbation, DampedEnvelope) {
  StabilityInputs s;
  s.Xi0 = -4;
  s.T0 = -2;  // omega2 = 4
  const double H = 0.1;
  PerturbationResult r = evolve_perturbation(s, [H](double) { return H; }, 1.0, 0.0, 0.0, 20.0, 401);
  EXPECT_NEAR(r.omega2, 4.0, 1e-15);
  EXPECT_EQ(r.cls, PerturbationClass::Damped);
  EXPECT_LT(damped_envelope_error(r, H), 0.02);
}

TEST(Perturbation, Growing) {
  StabilityInputs s;
  s.Xi0 = 4;
  s.T0 = -2;  // omega2 = -4
  PerturbationResult r = evolve_perturbation(s, [](double) { return 0.0; }, 1e-3, 0.0, 0.0, 3.0, 101);
  EXPECT_EQ(r.cls, PerturbationClass::Growing);
  EXPECT_NEAR(r.slope, 2.0, 0.05);
}

TEST(Divergence, EinsteinDeSitterConserves) {
  FlrwFluid d;
  VarSet tv{Var::T};
  d.H = parse_expression("2/(3*t)", tv);
  d.rho = parse_expression("4/(3*t^2)", tv);
  d.p = parse_expression("0", tv);
  DivergenceReport r = divergence_residual(d, PowerLaw{1, 0, 1, 0}, 1.0, 1.0, 3.0, 41);
  EXPECT_EQ(r.branch, "flrw");
  EXPECT_LT(r.sup, 1e-8);

  d.rho = parse_expression("1/t^3", tv);
  EXPECT_GT(divergence_residual(d, PowerLaw{1, 0, 1, 0}, 1.0, 1.0, 3.0, 41).sup, 1e-3);
}

TEST(Divergence, BianchiOnLcSolution) {
  GeneratingData g;
  g.Lambda = 1.0;
  g.PhiCheck = parse_expression("exp(x1 + x2 + t)", VarSet::spacetime());
  g.psi = parse_expression("0.5*(x1^2 + x2^2)", VarSet::spacetime());
  Grid3 grid({-0.5, 0.5, 4}, {-0.5, 0.5, 4}, {0, 1, 4});
  AFDMSolution s = assemble_lc(g, grid);
  DivergenceReport r = divergence_residual(s, grid);
  EXPECT_EQ(r.branch, "bianchi");
  EXPECT_LT(r.sup, 1e-5);
}
