#include <gtest/gtest.h>

#include <cmath>

#include "offdiag/afdm/assemble.hpp"
#include "offdiag/afdm/checks.hpp"
#include "offdiag/nageometry/connection.hpp"
#include "offdiag/nageometry/curvature.hpp"

using namespace offdiag;

namespace {

Expr e(const char* s) { return parse_expression(s, VarSet::spacetime()); }

GeneratingData lc_data() {
  GeneratingData g;
  g.Lambda = 1.0;
  g.PhiCheck = e("exp(0.9*(t + 0.4*x1 - 0.3*x2)) + 0.5*exp(0.3*(t + 0.4*x1 - 0.3*x2))");
  g.psi = e("0.5*(x1^2 + x2^2)");
  g.nPotential = e("0.3*x1*x2");
  return g;
}

GeneratingData torsionful_data() {
  GeneratingData g;
  g.Lambda = 1.0;
  g.PhiHat = e("exp(0.5*x1 - 0.3*x2 + 0.8*t)*(1.2 + 0.1*sin(x1*x2))");
  g.vUpsilon = e("1 + 0.3*sin(t + x1)*cos(x2)");
  g.hUpsilon = e("0");
  g.psi = e("0.3*x1*x2");
  g.n2fun = {e("1"), e("1")};
  g.omegaMode = OmegaMode::Unit;
  return g;
}

Grid3 small_grid(double t0 = 0.2) { return Grid3({-0.5, 0.5, 5}, {-0.5, 0.5, 5}, {t0, 1, 5}); }

}  // namespace

TEST(AfdmLc, CoefficientsMatchClosedForm) {
  GeneratingData g = lc_data();
  AFDMSolution s = assemble_lc(g, small_grid());
  Point3 p{0.1, -0.2, 0.6};
  double P = g.PhiCheck.eval(p[0], p[1], p[2]);
  double Pt = evaluate_jet(g.PhiCheck, p, 1).d(kT);
  EXPECT_NEAR(s.metric.h3(p, 0).value(), P * P / 4, 1e-12);
  EXPECT_NEAR(s.metric.h4(p, 0).value(), -Pt * Pt / (P * P), 1e-12);
  // w_1 = d_1 PhiCheck / PhiCheck_t = 0.4 for a function of t + u(x)
  EXPECT_NEAR(s.metric.w1(p, 0).value(), 0.4, 1e-12);
  EXPECT_NEAR(s.metric.w2(p, 0).value(), -0.3, 1e-12);
  EXPECT_NEAR(s.metric.n1(p, 0).value(), 0.3 * p[1], 1e-12);
}

TEST(AfdmLc, ZeroTorsionConditionsAndSystem) {
  AFDMSolution s = assemble_lc(lc_data(), small_grid());
  LcReport lc = check_lc(s, small_grid());
  EXPECT_LT(lc.max(), 1e-8);
  EXPECT_LT(system_residuals(s, small_grid()).max(), 1e-6);
  EXPECT_LT(canonical_dtorsion(s.metric, {0.1, 0.2, 0.5}).max_norm, 1e-8);
}

TEST(AfdmLc, RejectsCurlfulW) {
  GeneratingData g = lc_data();
  g.PhiCheck = e("exp(t + x1) + exp(2*t + x2)");
  EXPECT_THROW(assemble_lc(g, small_grid()), AfdmError);
}

TEST(AfdmTorsionful, SystemHoldsAndTorsionInduced) {
  Grid3 grid({-0.5, 0.5, 5}, {-0.5, 0.5, 5}, {0, 1, 5});
  AFDMSolution s = assemble_torsionful(torsionful_data(), grid);
  EXPECT_LT(system_residuals(s, grid).max(), 1e-6);
  EXPECT_GT(canonical_dtorsion(s.metric, {0.2, -0.1, 0.5}).max_norm, 1e-3);
  EXPECT_TRUE(s.source_sign == 1 || s.source_sign == -1);
}

TEST(AfdmTorsionful, H3FromPhiHat) {
  GeneratingData g = torsionful_data();
  g.Lambda = 2.0;
  Grid3 grid({-0.5, 0.5, 5}, {-0.5, 0.5, 5}, {0, 1, 5});
  AFDMSolution s = assemble_torsionful(g, grid);
  Point3 p{0.3, 0.1, 0.4};
  double ph = g.PhiHat.eval(p[0], p[1], p[2]);
  EXPECT_NEAR(s.metric.h3(p, 0).value(), ph * ph / 8, 1e-12);
  EXPECT_GT(s.metric.h3(p, 0).value(), 0);
  EXPECT_LT(s.metric.h4(p, 0).value(), 0);
}

TEST(AfdmTorsionful, PoissonPsiWhenNoClosedForm) {
  GeneratingData g = torsionful_data();
  g.psi = Expr();
  g.hUpsilon = e("1");
  Grid3 grid({-0.5, 0.5, 9}, {-0.5, 0.5, 9}, {0, 1, 5});
  AFDMSolution s = assemble_torsionful(g, grid);
  ASSERT_TRUE(s.psi_grid.has_value());
  EXPECT_LT(s.psi_grid->residual, 1e-8);
}

TEST(Generating, NFormulaIdentity) {
  Point3 p{0.2, -0.3, 0.7};
  EXPECT_LT(n_formula_residual(e("1 + t^2 + 0.1*x1"), e("-(2 + sin(t*x2))"), e("x1*x2"), e("cos(x1)"), p, 0.1),
            1e-8);
  EXPECT_LT(w_identity_residual(e("exp(t)*(2 + x1^2) + t*x2"), p), 1e-12);
}

TEST(Generating, RedefinitionRoundTrip) {
  Grid3 grid({-0.5, 0.5, 4}, {-0.5, 0.5, 4}, {0, 1, 9});
  Expr ph = e("exp(0.3*x1 + t)*(1.5 + 0.1*x2)");
  Expr vU = e("1 + 0.2*t*x1");
  Field3 Phi = redefine_generating(ph, vU, 1.0, grid, Direction::Forward, 0.0);
  // Lambda Phi^2 = PhiHat^2 |vU| - int PhiHat^2 |vU|_t; at t0 the integral vanishes
  double x1 = grid.x1.node(2), x2 = grid.x2.node(1);
  double p0 = ph.eval(x1, x2, 0);
  EXPECT_NEAR(Phi.at(2, 1, 0), std::sqrt(p0 * p0 * vU.eval(x1, x2, 0)), 1e-12);
  for (double v : Phi.v) EXPECT_GT(v, 0);
}

TEST(EpsilonFamily, ZeroEpsIsFlrw) {
  Expr a = e("t^(2/3)");
  DMetric m = epsilon_family(a, 0.0, e("sin(x1)"), {e("x2"), e("-x1")}, {e("0.5*t"), e("0.2*x1")});
  Point3 p{0.2, 0.1, 1.3};
  Mat4 g = coordinate_metric(m, p);
  double a2 = std::pow(1.3, 4.0 / 3.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double want = i != j ? 0.0 : i == 3 ? -1.0 : a2;
      EXPECT_NEAR(g[i][j], want, 1e-14);
    }
}

TEST(EpsilonFamily, FirstOrderCrossTerms) {
  Expr a = e("1 + 0*t");
  DMetric m = epsilon_family(a, 0.1, e("0"), {e("2"), e("0")}, {e("0"), e("3")});
  Mat4 g = coordinate_metric(m, {0.0, 0.0, 1.0});
  EXPECT_NEAR(g[0][2], 0.1 * 2, 1e-14);
  EXPECT_NEAR(g[1][3], -0.1 * 3, 1e-14);
}
