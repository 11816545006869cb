#include "offdiag/afdm/assemble.hpp"

#include <cmath>
#include <sstream>

#include "offdiag/fieldkit/quadrature.hpp"

namespace offdiag {

namespace {

JetField psi_field(const GeneratingData& g, AFDMSolution& s, const Grid3& grid) {
  if (!g.psi.empty()) {
    Expr psi = g.psi;
    return [psi](const Point3& p, int order) { return exp(evaluate_jet(psi, p, order)); };
  }
  Expr hU = g.hUpsilon.empty() ? Expr::constant(g.Lambda) : g.hUpsilon;
  if (hU.depends_on(Var::T)) throw AfdmError("hUpsilon must not depend on t");
  Expr bc = g.psiBoundary.empty() ? Expr::constant(0.0) : g.psiBoundary;
  Rect d{grid.x1.lo, grid.x1.hi, grid.x2.lo, grid.x2.hi, grid.x1.n, grid.x2.n};
  s.psi_domain = d;
  s.psi_grid = solve_poisson_2d([&](double x1, double x2) { return 2.0 * hU.eval(x1, x2, 0.0); }, d,
                                [&](double x1, double x2) { return bc.eval(x1, x2, 0.0); });
  return [](const Point3&, int) -> Jet {
    throw AfdmError("psi is only known on the Poisson grid; geometric checks need a closed-form psi");
  };
}

JetField omega_field(const AfdmCoefficients& c, OmegaMode mode) {
  if (mode == OmegaMode::Unit) return constant_field(1.0);
  JetField h4 = c.h4;
  return [h4](const Point3& p, int order) { return pow(abs(h4(p, order)), -0.5); };
}

JetField expr_or_zero(const Expr& e, double scale = 1.0) {
  if (e.empty()) return constant_field(0.0);
  return [e, scale](const Point3& p, int order) { return scale * evaluate_jet(e, p, order); };
}

}  // namespace

AFDMSolution assemble_torsionful(const GeneratingData& g, const Grid3& grid) {
  if (g.PhiHat.empty()) throw AfdmError("the torsionful branch needs PhiHat");
  AFDMSolution s;
  s.branch = Branch::Torsionful;
  s.data = g;
  s.grid = grid;
  s.coeffs = build_coefficients(g, grid);
  s.source_sign = s.coeffs.sign;
  JetField gh = psi_field(g, s, grid);
  s.metric.g1 = gh;
  s.metric.g2 = gh;
  s.metric.h3 = s.coeffs.h3;
  s.metric.h4 = s.coeffs.h4;
  s.metric.n1 = s.coeffs.n1;
  s.metric.n2 = s.coeffs.n2;
  s.metric.w1 = s.coeffs.w1;
  s.metric.w2 = s.coeffs.w2;
  s.metric.omega = omega_field(s.coeffs, g.omegaMode);
  return s;
}

double curl_w(const DMetric& m, const Grid3& grid) {
  double worst = 0.0;
  for (int i = 0; i < grid.x1.n; ++i)
    for (int j = 0; j < grid.x2.n; ++j)
      for (int k = 0; k < grid.t.n; ++k) {
        Point3 p = grid.point(i, j, k);
        double c = m.w2(p, 1).d(kX1) - m.w1(p, 1).d(kX2);
        worst = std::max(worst, std::fabs(c));
      }
  return worst;
}

AFDMSolution assemble_lc(const GeneratingData& g, const Grid3& grid) {
  if (g.PhiCheck.empty()) throw AfdmError("the Levi-Civita branch needs PhiCheck");
  GeneratingData d = g;
  d.PhiHat = Expr();
  d.vUpsilon = Expr::constant(g.Lambda);
  AFDMSolution s;
  s.branch = Branch::LeviCivita;
  s.data = d;
  s.grid = grid;
  s.coeffs = build_coefficients(d, grid);
  s.source_sign = s.coeffs.sign;
  JetField gh = psi_field(d, s, grid);
  s.metric.g1 = gh;
  s.metric.g2 = gh;
  s.metric.h3 = s.coeffs.h3;
  s.metric.h4 = s.coeffs.h4;
  s.metric.n1 = s.coeffs.n1;
  s.metric.n2 = s.coeffs.n2;
  s.metric.w1 = s.coeffs.w1;
  s.metric.w2 = s.coeffs.w2;
  s.metric.omega = constant_field(1.0);

  double curl = curl_w(s.metric, grid);
  if (curl > 1e-8) {
    std::ostringstream os;
    os << "w_i = d_i PhiCheck / PhiCheck_t is not curl-free (max |d1 w2 - d2 w1| = " << curl
       << "); PhiCheck is not admissible for the Levi-Civita branch";
    throw AfdmError(os.str());
  }
  return s;
}

double lc_potential(const AFDMSolution& s, const Point3& p) {
  const double x1lo = s.grid.x1.lo, x2lo = s.grid.x2.lo, t = p[2];
  const DMetric& m = s.metric;
  double a = integrate_gl([&](double x) { return m.w1({x, x2lo, t}, 0).value(); }, x1lo, p[0], 8);
  double b = integrate_gl([&](double y) { return m.w2({p[0], y, t}, 0).value(); }, x2lo, p[1], 8);
  return a + b;
}

Polarizations polarizations(const AFDMSolution& s, const Point3& p) {
  const GeneratingData& g = s.data;
  double a = g.aFactor.empty() ? 1.0 : g.aFactor.eval(p[0], p[1], p[2]);
  double ap = g.aPrime.empty() ? a : g.aPrime.eval(p[0], p[1], p[2]);
  double gh = s.metric.g1(p, 0).value();
  double h3 = s.metric.h3(p, 0).value();
  double h4 = s.metric.h4(p, 0).value();
  Polarizations out;
  out.eta1 = out.eta2 = gh / (a * a);
  out.eta3 = h3 / (ap * ap);
  out.eta4 = 1.0;
  out.h3hat = h3 / (a * a * std::fabs(h4));
  return out;
}

DMetric epsilon_family(const Expr& a, double eps, const Expr& chi3, const std::array<Expr, 2>& nCheck,
                       const std::array<Expr, 2>& wCheck) {
  if (a.empty()) throw AfdmError("epsilon_family needs a scale factor");
  DMetric m;
  JetField a2 = [a](const Point3& p, int order) {
    Jet v = evaluate_jet(a, p, order);
    return v * v;
  };
  m.g1 = a2;
  m.g2 = a2;
  m.h3 = [a2, chi3, eps](const Point3& p, int order) {
    Jet c = chi3.empty() ? Jet(0.0, order) : evaluate_jet(chi3, p, order);
    return a2(p, order) * (1.0 + eps * c);
  };
  m.h4 = constant_field(-1.0);
  m.n1 = expr_or_zero(nCheck[0], eps);
  m.n2 = expr_or_zero(nCheck[1], eps);
  m.w1 = expr_or_zero(wCheck[0], eps);
  m.w2 = expr_or_zero(wCheck[1], eps);
  m.omega = constant_field(1.0);
  return m;
}

DMetric epsilon_family(const AFDMSolution& base, double eps, const Expr& chi3, const std::array<Expr, 2>& nCheck,
                       const std::array<Expr, 2>& wCheck) {
  return epsilon_family(base.data.aFactor, eps, chi3, nCheck, wCheck);
}

}  // namespace offdiag
