#include <gtest/gtest.h>

#include <cmath>

#include "offdiag/nageometry/connection.hpp"
#include "offdiag/nageometry/curvature.hpp"
#include "offdiag/nageometry/dmetric.hpp"

using namespace offdiag;

namespace {

JetField f(const char* s) { return field_from_expr(parse_expression(s, VarSet::spacetime())); }

// flat slicing of de Sitter with H = 1
DMetric de_sitter() { return DMetric::diagonal(f("exp(2*t)"), f("exp(2*t)"), f("exp(2*t)"), constant_field(-1)); }

DMetric generic_offdiagonal() {
  DMetric m = DMetric::diagonal(f("exp(0.2*x1*x2)"), f("1 + 0.1*x1^2"), f("2 + sin(t + x1)"),
                                f("-(1 + 0.2*t^2 + 0.1*x2)"));
  m.n1 = f("0.3*x2*t");
  m.n2 = f("sin(x1)");
  m.w1 = f("0.2*t + 0.1*x2");
  m.w2 = f("0.1*x1*t");
  return m;
}

}  // namespace

TEST(Curvature, DeSitterRicciIsThree) {
  CurvatureReport r = levi_civita_ricci(de_sitter(), {0.1, -0.2, 0.3});
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(r.ricci_mixed[a][b], a == b ? 3.0 : 0.0, 1e-12);
  EXPECT_NEAR(r.scalar, 12.0, 1e-11);
  EXPECT_NEAR(einstein_residual_at(r, {3, 3, 3, 3}), 0.0, 1e-12);
}

TEST(Curvature, UnitSphereTimesFlat) {
  // e^psi = 4/(1 + r^2)^2 has Gaussian curvature 1
  DMetric m = DMetric::diagonal(f("4/(1 + x1^2 + x2^2)^2"), f("4/(1 + x1^2 + x2^2)^2"), constant_field(1),
                                constant_field(-1));
  CurvatureReport r = levi_civita_ricci(m, {0.4, -0.3, 0.0});
  EXPECT_NEAR(r.ricci_mixed[0][0], 1.0, 1e-12);
  EXPECT_NEAR(r.ricci_mixed[1][1], 1.0, 1e-12);
  EXPECT_NEAR(r.ricci_mixed[2][2], 0.0, 1e-12);
  EXPECT_NEAR(r.ricci_mixed[3][3], 0.0, 1e-12);
}

TEST(Curvature, FrameIndependence) {
  DMetric m = generic_offdiagonal();
  EXPECT_LT(frame_transform_mismatch(m, {0.2, 0.1, 0.4}), 1e-10);
}

TEST(Curvature, ContractedBianchi) {
  DMetric m = generic_offdiagonal();
  EXPECT_LT(bianchi_residual(m, {0.2, -0.1, 0.3}), 1e-9);
}

TEST(Curvature, RegionSupOverGrid) {
  Grid3 g({-0.5, 0.5, 4}, {-0.5, 0.5, 4}, {0, 1, 4});
  RegionResidual r = einstein_residual(de_sitter(), 3.0, g);
  EXPECT_EQ(r.count, 64);
  EXPECT_LT(r.sup, 1e-11);
}

TEST(Connection, CanonicalIsMetricCompatible) {
  MetricJets mj = evaluate_metric(generic_offdiagonal(), {0.3, 0.2, 0.5}, 2);
  EXPECT_LT(metric_compatibility_residual(mj, canonical_dconnection_jets(mj)), 1e-12);
}

TEST(Connection, ProductMetricHasNoDistortion) {
  // h-part depends on x only, v-part on t only
  DMetric m = DMetric::diagonal(f("exp(x1*x2)"), f("exp(x1*x2)"), f("1 + t^2"), f("-(2 + t)"));
  EXPECT_LT(distortion_norm(m, {0.1, 0.2, 0.3}), 1e-12);
}

TEST(Anholonomy, OmegaFromCrossTerm) {
  DMetric m = DMetric::diagonal(constant_field(1), constant_field(1), constant_field(1), constant_field(-1));
  m.w1 = f("x2");
  Anholonomy a = anholonomy_coefficients(m, {0.1, 0.2, 0.3});
  // Omega^4_{12} = e_2(w_1) - e_1(w_2)
  EXPECT_NEAR(a.Omega[1][0][1], 1.0, 1e-14);
  EXPECT_NEAR(a.Omega[1][1][0], -1.0, 1e-14);
  EXPECT_NEAR(a.Omega[0][0][1], 0.0, 1e-14);
}

TEST(DMetric, CoordinateFormOfNConnection) {
  DMetric m = DMetric::diagonal(constant_field(2), constant_field(3), constant_field(5), constant_field(-7));
  m.n1 = constant_field(0.5);
  m.w2 = constant_field(0.25);
  Mat4 g = coordinate_metric(m, {0, 0, 0});
  EXPECT_DOUBLE_EQ(g[0][0], 2 + 5 * 0.25);
  EXPECT_DOUBLE_EQ(g[0][2], 5 * 0.5);
  EXPECT_DOUBLE_EQ(g[1][1], 3 - 7 * 0.0625);
  EXPECT_DOUBLE_EQ(g[1][3], -7 * 0.25);
  EXPECT_DOUBLE_EQ(g[0][1], 0.0);
}

TEST(DMetric, DegenerateRejected) {
  DMetric m = DMetric::diagonal(constant_field(0), constant_field(1), constant_field(1), constant_field(-1));
  EXPECT_THROW(levi_civita_ricci(m, {0, 0, 0}), DegenerateMetric);
}
