#include "offdiag/afdm/checks.hpp"

#include <algorithm>
#include <cmath>

#include "offdiag/fieldkit/quadrature.hpp"

namespace offdiag {

double LcReport::max() const { return std::max({w_t, h3, curl_w, n_t, curl_n}); }

double SystemResiduals::max() const { return std::max({eq1m, eq2m, eq3m, eq4m, confeq}); }

namespace {

template <typename F>
void for_nodes(const Grid3& g, F&& f) {
  g.validate();
  for (int i = 0; i < g.x1.n; ++i)
    for (int j = 0; j < g.x2.n; ++j)
      for (int k = 0; k < g.t.n; ++k) f(g.point(i, j, k));
}

void bump(double& slot, double v) { slot = std::max(slot, std::isfinite(v) ? std::fabs(v) : INFINITY); }

}  // namespace

LcReport check_lc(const DMetric& m, const Grid3& region) {
  LcReport r;
  for_nodes(region, [&](const Point3& p) {
    MetricJets mj = evaluate_metric(m, p, 1);
    Jet l3 = 0.5 * log(abs(mj.diag(2)));
    Jet l4 = 0.5 * log(abs(mj.diag(3)));
    for (int i = 0; i < 2; ++i) {
      double w = mj.w[i].value();
      bump(r.w_t, mj.w[i].d(kT) - (l4.d(i) - w * l4.d(kT)));
      bump(r.h3, l3.d(i) - w * l3.d(kT));
      bump(r.n_t, mj.n[i].d(kT));
    }
    bump(r.curl_w, mj.w[1].d(kX1) - mj.w[0].d(kX2));
    bump(r.curl_n, mj.n[1].d(kX1) - mj.n[0].d(kX2));
  });
  return r;
}

LcReport check_lc(const AFDMSolution& s, const Grid3& region) { return check_lc(s.metric, region); }

SystemResiduals system_residuals(const AFDMSolution& s, const Expr& hU, const Expr& vU, const Grid3& region) {
  SystemResiduals r;
  const double sgn = s.source_sign;
  if (s.psi_grid) {
    r.eq1m = poisson_residual(*s.psi_grid, [&](double x1, double x2) { return 2.0 * hU.eval(x1, x2, 0.0); },
                              s.psi_domain);
  }
  for_nodes(region, [&](const Point3& p) {
    if (!s.psi_grid) {
      Jet psi = evaluate_jet(s.data.psi, p, 2);
      bump(r.eq1m, psi.partial(2, 0, 0) + psi.partial(0, 2, 0) - 2.0 * hU.eval(p[0], p[1], p[2]));
    }
    Jet h3 = s.metric.h3(p, 2);
    Jet h4 = s.metric.h4(p, 2).truncated(1);
    Jet h3t = h3.derivative(kT);
    Jet h3l = h3.truncated(1);
    Jet phi = log(abs(h3t / sqrt(abs(h3l * h4))));
    double u = sgn * vU.eval(p[0], p[1], p[2]);
    bump(r.eq2m, phi.d(kT) * h3t.value() - 2.0 * h3l.value() * h4.value() * u);

    Jet gam = (1.5 * log(abs(h3l)) - log(abs(h4))).derivative(kT);
    Jet n[2] = {s.metric.n1(p, 2), s.metric.n2(p, 2)};
    for (int i = 0; i < 2; ++i) bump(r.eq3m, n[i].partial(0, 0, 2) + gam.value() * n[i].d(kT));

    double w[2] = {s.metric.w1(p, 0).value(), s.metric.w2(p, 0).value()};
    for (int i = 0; i < 2; ++i) bump(r.eq4m, h3t.value() * phi.d(kT) * w[i] - h3t.value() * phi.d(i));

    Jet om = s.metric.omega(p, 1);
    for (int i = 0; i < 2; ++i) bump(r.confeq, om.d(i) - w[i] * om.d(kT));
  });
  return r;
}

SystemResiduals system_residuals(const AFDMSolution& s, const Grid3& region) {
  Expr hU = s.data.hUpsilon.empty() ? Expr::constant(s.data.Lambda) : s.data.hUpsilon;
  Expr vU = s.data.vUpsilon.empty() ? Expr::constant(s.data.Lambda) : s.data.vUpsilon;
  return system_residuals(s, hU, vU, region);
}

double n_formula_residual(const Expr& h3, const Expr& h4, const Expr& n1, const Expr& n2, const Point3& p,
                          double t0) {
  auto integrand = [&](double s, int ord) {
    Point3 q{p[0], p[1], s};
    return evaluate_jet(h4, q, ord) / pow(abs(evaluate_jet(h3, q, ord)), 1.5);
  };
  Jet n = evaluate_jet(n1, p, 2) + evaluate_jet(n2, p, 2) * time_integral_jet(integrand, t0, p[2], 2);
  Jet a = evaluate_jet(h3, p, 1), b = evaluate_jet(h4, p, 1);
  double gam = (1.5 * log(abs(a)) - log(abs(b))).d(kT);
  return std::fabs(n.partial(0, 0, 2) + gam * n.d(kT));
}

double w_identity_residual(const Expr& f, const Point3& p) {
  Jet j = evaluate_jet(f, p, 1);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    double w = j.d(i) / j.d(kT);
    worst = std::max(worst, std::fabs(j.d(i) - w * j.d(kT)));
  }
  return worst;
}

}  // namespace offdiag
