#include <gtest/gtest.h>

#include <cmath>

#include "offdiag/cosmodyn/cosmodyn.hpp"

using namespace offdiag;

TEST(BigRip, HubbleAsPrinted) {
  // 2 / (3 (1 + varpi)(t_s - t)) with varpi = -4/3, t_s = 1, t = 0
  EXPECT_NEAR(big_rip_hubble(-4.0 / 3.0, 1.0, 0.0), -2.0, 1e-14);
  EXPECT_NEAR(big_rip_hubble(-2.0, 3.0, 1.0), -1.0 / 3.0, 1e-14);
}

TEST(BigRip, ExponentAndRipTime) {
  // 3 H0^2 = kappa2 rho0 gives H0 = 1; t_s = 2 / (3 |1 + varpi| H0) = 2
  BigRipFit fit = big_rip_exponent(-4.0 / 3.0, 3.0, 1.0);
  EXPECT_NEAR(fit.exponent, -1.0, 0.01);
  EXPECT_NEAR(fit.t_s_exact, 2.0, 1e-14);
  EXPECT_NEAR(fit.t_s, 2.0, 1e-6);
}

TEST(Dedm, FixedPointRatio) {
  FluidSpec f;
  // H = -Q/3(1 + varpi) = 1 and rho_DM / rho_DE = Q / 3H = 1/3
  auto r = dedm_fixed_point_residual(f, 1.0 / 3.0);
  EXPECT_NEAR(r[0], 0.0, 1e-14);
  EXPECT_NEAR(r[1], 0.0, 1e-14);
  auto bad = dedm_fixed_point_residual(f, -1.0 / 3.0);
  EXPECT_GT(std::fabs(bad[1]), 0.1);
  DedmFixedPoint fp = dedm_fixed_point(f);
  EXPECT_NEAR(fp.H, 1.0, 1e-14);
  EXPECT_EQ(fp.saddle, fp.eig[0] * fp.eig[1] < 0);
}

TEST(Dedm, UncoupledScaling) {
  FluidSpec f;
  f.Q = 0.0;
  f.varpi = -0.9;
  DedmResult r = evolve_coupled_dedm(f, 0.0, 2.0, 201);
  ASSERT_EQ(r.status, OdeStatus::Completed);
  auto a = r.traj.series("a"), de = r.traj.series("rho_DE"), dm = r.traj.series("rho_DM");
  for (std::size_t i = 0; i < a.size(); i += 50) {
    EXPECT_NEAR(dm[i] * std::pow(a[i], 3.0), f.rho0_DM * std::pow(f.a0, 3.0), 1e-7);
    EXPECT_NEAR(de[i] * std::pow(a[i], 3.0 * (1 + f.varpi)), f.rho0_DE, 1e-7);
  }
  EXPECT_LT(r.bookkeeping_residual, 1e-4);
}

TEST(Flrw, DeSitterResidualVanishes) {
  Trajectory tr;
  tr.names = {"a", "H"};
  for (int i = 0; i <= 100; ++i) {
    double t = 0.01 * i;
    tr.push(t, {std::exp(t), 1.0});
  }
  auto zero = [](double, double) { return 0.0; };
  FlrwResiduals r = effective_flrw_residual(tr, zero, zero, 3.0);
  EXPECT_LT(r.max1, 1e-13);
  EXPECT_LT(r.max2, 1e-10);
  FlrwResiduals off = effective_flrw_residual(tr, zero, zero, 2.0);
  EXPECT_NEAR(off.max1, 1.0, 1e-12);
}

TEST(Flrw, NumericHelpers) {
  std::vector<double> x, y, s;
  for (int i = 1; i <= 20; ++i) {
    x.push_back(0.1 * i);
    y.push_back(3 * std::pow(0.1 * i, 2.5));
  }
  EXPECT_NEAR(loglog_slope(x, y), 2.5, 1e-12);
  for (int i = 0; i <= 100; ++i) s.push_back(std::sin(0.01 * i));
  auto d = sample_derivative(s, 0.01);
  EXPECT_NEAR(d[50], std::cos(0.5), 1e-9);
  EXPECT_NEAR(d[0], 1.0, 1e-7);
}

TEST(Efolding, LcdmClosedForm) {
  LcdmSpec s{1.0, 0.9, 1.0, 1.0};
  for (double z : {0.0, 0.7, 2.5}) {
    double e = std::exp(-3 * z);
    LcdmPoint p = efolding_lcdm(s, z);
    EXPECT_NEAR(p.q, 1 + 0.3 * e, 1e-14);
    EXPECT_NEAR(p.Rhat, 12 + 0.9 * e, 1e-13);
    EXPECT_NEAR(p.X, 1 + 0.3 * e, 1e-13);
    EXPECT_NEAR(cscurv(lcdm_q_expr(s), z), p.Rhat, 1e-12);
  }
}

TEST(Efolding, PowerLawInversion) {
  for (double c : {0.5, 2.0, -1.5}) {
    for (double z : {-0.8, 0.1, 0.9}) {
      double R = powerlaw_rhat(c, 1.3, 0.7, z);
      auto u = invert_powerlaw(R, c, 1.3, 0.7);
      bool found = false;
      for (double v : u) found |= std::fabs(v - std::exp(c * z)) < 1e-10 * std::exp(c * z);
      EXPECT_TRUE(found) << "c=" << c << " z=" << z;
    }
  }
  auto u = invert_powerlaw(48.0, 4.0, 1.0, 2.0);
  ASSERT_EQ(u.size(), 1u);
  EXPECT_NEAR(u[0], 48.0 / 48.0, 1e-14);
}
