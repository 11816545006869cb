#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "offdiag/reconstruct/fgt.hpp"
#include "offdiag/reconstruct/reconstruct.hpp"

using namespace offdiag;

TEST(Hypergeometric, ClosedForms) {
  for (double x : {-0.9, -0.3, 0.2, 0.8}) {
    EXPECT_NEAR(hyp2f1(1, 1, 2, x), -std::log(1 - x) / x, 1e-13);
    EXPECT_NEAR(hyp2f1(0.7, 1.9, 1.9, x), std::pow(1 - x, -0.7), 1e-13);
  }
  double h = 1e-5, x = 0.4;
  EXPECT_NEAR(hyp2f1_derivative(0.3, -0.5, 1.2, x, 1),
              (hyp2f1(0.3, -0.5, 1.2, x + h) - hyp2f1(0.3, -0.5, 1.2, x - h)) / (2 * h), 1e-8);
}

TEST(Hypergeometric, OneThirdPowerSolvesGauss) {
  // (1 - X)^{-1/3} = F(1/3, b; b; X) for any b
  auto F = [](const Jet& X) { return pow(1.0 - X, -1.0 / 3.0); };
  ChiConstants chi = chi_constants();
  double worst = 0;
  for (int i = 0; i <= 180; ++i) worst = std::max(worst, std::fabs(gauss_residual(chi, F, -0.9 + 0.01 * i)));
  EXPECT_LT(worst, 1e-10);
}

TEST(Chi, DerivedConstants) {
  ChiConstants c = lcdm_chi_constants();
  double hi = std::max(c.chi1, c.chi2), lo = std::min(c.chi1, c.chi2);
  EXPECT_NEAR(hi, (-7 + std::sqrt(73.0)) / 12, 1e-14);
  EXPECT_NEAR(lo, (-7 - std::sqrt(73.0)) / 12, 1e-14);
  EXPECT_DOUBLE_EQ(c.chi3, -0.5);
}

TEST(Lcdm, ReconstructionSatisfiesF1gen) {
  LcdmSpec s{1.0, 0.9, 1.0, 1.0};
  LcdmReconstruction r = reconstruct_lcdm(s, lcdm_chi_constants());
  F1genScan scan = f1gen_scan(FModel{r.model}, lcdm_q_expr(s), 0.0, 0.0, s.a0, 0.0, 3.0, 200);
  EXPECT_LT(scan.max, 1e-6);
  EXPECT_LT(ode2_residual_max(r.model, 400), 1e-8);
}

TEST(Euler, PhantomExponents) {
  double w = -1.1;
  double H0 = 1 / (3 * (1 + w));
  double A = -H0 * (1 + H0), B = (1 + 2 * H0) / 2;
  double disc = std::sqrt((1 - A) * (1 - A) - 4 * B);
  EulerReconstruction e = euler_reconstruct(w);
  EXPECT_FALSE(e.complex_roots);
  EXPECT_NEAR(e.m_plus.real(), (1 - A + disc) / 2, 1e-12);
  EXPECT_NEAR(e.m_minus.real(), (1 - A - disc) / 2, 1e-12);
  EXPECT_NEAR(e.m_plus.real(), 9.0895, 5e-4);
  EXPECT_NEAR(e.m_minus.real(), -0.3117, 5e-4);
  EXPECT_LT(std::abs(indicial_residual(e.A, e.B, e.m_plus)), 1e-12);
  EXPECT_LT(std::abs(indicial_residual(e.A, e.B, e.m_minus)), 1e-12);
  // a = (t_s - t)^{-H0} gives H = H0 / (t_s - t)
  EXPECT_NEAR(e.rip.H(0.5), H0 / 0.5, 1e-12 * std::fabs(H0));
}

TEST(Euler, OdeSolutionMatchesPowerLaw) {
  // m^2 - 3m + 2 = 0 has m = 1, 2, so f = R + R^2
  Ode2Spec spec;
  spec.kind = Ode2Kind::Euler;
  spec.A = -2;
  spec.B = 2;
  Tabulated t = solve_linear_ode2(spec, 1.0, 2.0, 3.0, 3.0, 201);
  EXPECT_NEAR(t.f.back(), 12.0, 1e-8);
  EXPECT_NEAR(t.fp.back(), 7.0, 1e-8);
  Jet j = t.eval(Jet::variable(0, 2.0, 2));
  EXPECT_NEAR(j.value(), 6.0, 1e-8);
  EXPECT_NEAR(j.partial(2, 0, 0), 2.0, 1e-6);
}

TEST(Ode2, SingularIntervalRejected) {
  Ode2Spec spec;  // Gauss: singular at X = 0 and 1
  EXPECT_THROW(solve_linear_ode2(spec, 0.5, 1.0, 0.0, 1.5, 101), ReconstructError);
}

TEST(Sources, FrVariant) {
  EXPECT_DOUBLE_EQ(effective_source_fr(2.0, 1.0, 1.0), 2.0);
  FDerivs d{2.0, 1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(effective_source(d, SourceSpec{1.0, 0.0, 1.0}), 2.0);
}

TEST(Fgt, DerivedCubic) {
  // hand reduction: 1.5 b^3 + 2.5 b^2 + b with the linear particular solution 0.6 xi P
  FgtRoots r = fgt_characteristic_roots();
  ASSERT_EQ(r.poly.size(), 4u);
  double s = r.poly[0] / 1.5;
  EXPECT_NEAR(r.poly[1] / s, 2.5, 1e-10);
  EXPECT_NEAR(r.poly[2] / s, 1.0, 1e-10);
  EXPECT_NEAR(r.poly[3] / s, 0.0, 1e-10);
  EXPECT_NEAR(r.linear, 0.6, 1e-10);
  std::vector<double> re;
  for (auto z : r.nonzero) {
    EXPECT_NEAR(z.imag(), 0.0, 1e-10);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  ASSERT_EQ(re.size(), 2u);
  EXPECT_NEAR(re[0], -1.0, 1e-10);
  EXPECT_NEAR(re[1], -2.0 / 3.0, 1e-10);
  EXPECT_FALSE(r.match);
}

TEST(Fgt, PrintedExponents) {
  FgtExponents e = FgtExponents::printed();
  ASSERT_EQ(e.real.size(), 1u);
  EXPECT_DOUBLE_EQ(e.real[0], kFgtB1);
  EXPECT_NEAR(e.pair_re, kFgtB2 / 3, 1e-15);
  EXPECT_NEAR(e.pair_im, kFgtB3 / 3, 1e-15);
  FgtModel m = fgt_printed_model({1, 0, 0, 0}, {0, 0, 0, 0}, 1.0);
  EXPECT_NEAR(m.P0(), -9.0, 1e-14);
  EXPECT_NEAR(m.T0(), -3.0, 1e-14);
}
