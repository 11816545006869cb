#include "offdiag/reconstruct/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace offdiag {

double effective_source(const FDerivs& d, const SourceSpec& s) {
  if (!(s.kappa2 > 0)) throw ReconstructError("kappa2 must be positive");
  if (d.f1 == 0.0) throw ReconstructError("df/dR vanishes; the effective source is undefined");
  return s.Lambda / d.f1 + d.f / (2.0 * d.f1) + (2.0 * s.Lambda - s.Lambda / s.kappa2 - s.p) * d.f2 / d.f1 +
         s.p * s.Lambda * d.f3 / d.f1;
}

double effective_source_fr(double f, double f1, double Lambda) {
  if (f1 == 0.0) throw ReconstructError("df/dR vanishes; the effective source is undefined");
  return Lambda / f1 + f / (2.0 * f1);
}

ChiConstants chi_constants() { return {1.0 / 3.0, -0.5, -0.5}; }

ChiConstants lcdm_chi_constants() {
  // 6 chi^2 + 7 chi - 1 = 0
  const double r = std::sqrt(73.0);
  return {(-7.0 + r) / 12.0, (-7.0 - r) / 12.0, -0.5};
}

double hyp2f1(double a, double b, double c, double x) {
  if (c <= 0.0 && std::floor(c) == c) throw ReconstructError("2F1: c is a non-positive integer");
  if (!(std::fabs(x) < 1.0)) throw ReconstructError("2F1 series needs |x| < 1; propagate the ODE instead");
  double sum = 1.0, term = 1.0;
  for (int k = 0; k < 1000000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    sum += term;
    if (term == 0.0) return sum;
    if (k > 2 && std::fabs(term) < 1e-16 * std::fabs(sum)) return sum;
  }
  throw ReconstructError("2F1 series did not converge");
}

double hyp2f1_derivative(double a, double b, double c, double x, int k) {
  double scale = 1.0;
  for (int j = 0; j < k; ++j) scale *= (a + j) * (b + j) / (c + j);
  if (scale == 0.0) return 0.0;
  return scale * hyp2f1(a + k, b + k, c + k, x);
}

double gauss_residual(const ChiConstants& chi, const std::function<Jet(const Jet&)>& F, double X) {
  Jet j = F(Jet::variable(kX1, X, 2));
  return X * (1.0 - X) * j.partial(2, 0, 0) + (chi.chi3 - (chi.chi1 + chi.chi2 + 1.0) * X) * j.d(kX1) -
         chi.chi1 * chi.chi2 * j.value();
}

const char* ode2_kind_name(Ode2Kind k) {
  switch (k) {
    case Ode2Kind::Gauss: return "gauss";
    case Ode2Kind::YEquation: return "y-equation";
    case Ode2Kind::Euler: return "euler";
    case Ode2Kind::Custom: return "custom";
  }
  return "?";
}

std::array<double, 3> Ode2Spec::coefficients(double s) const {
  switch (kind) {
    case Ode2Kind::Gauss:
      return {s * (1.0 - s), chi.chi3 - (chi.chi1 + chi.chi2 + 1.0) * s, -chi.chi1 * chi.chi2};
    case Ode2Kind::YEquation:
      return {4.0 * s * (1.0 - s), 3.0 + s, -2.0};
    case Ode2Kind::Euler:
      return {s * s, A * s, B};
    case Ode2Kind::Custom:
      if (!p2 || !p1 || !p0) throw ReconstructError("custom ODE needs p2, p1 and p0");
      return {p2(s), p1(s), p0(s)};
  }
  return {};
}

Jet Ode2Spec::native(const Jet& R) const {
  switch (kind) {
    case Ode2Kind::Gauss:
      return -3.0 + R / (3.0 * H0 * H0);
    case Ode2Kind::YEquation:
      if (q_s * q_p == 0.0) throw ReconstructError("Y-equation needs q_s q_p != 0");
      return -1.0 * (R * R) / (576.0 * q_s * q_p);
    default:
      return R;
  }
}

std::vector<double> Ode2Spec::singular_points() const {
  switch (kind) {
    case Ode2Kind::Gauss:
    case Ode2Kind::YEquation:
      return {0.0, 1.0};
    case Ode2Kind::Euler:
      return {0.0};
    case Ode2Kind::Custom:
      return {};
  }
  return {};
}

double Tabulated::lo() const { return s.front(); }
double Tabulated::hi() const { return s.back(); }

namespace {

Jet lagrange8(const std::vector<double>& s, const std::vector<double>& y, int start, const Jet& x) {
  Jet out(0.0, x.order());
  for (int i = start; i < start + 8; ++i) {
    Jet w(y[static_cast<std::size_t>(i)], x.order());
    for (int j = start; j < start + 8; ++j) {
      if (j == i) continue;
      w = w * ((x - s[static_cast<std::size_t>(j)]) / (s[static_cast<std::size_t>(i)] - s[static_cast<std::size_t>(j)]));
    }
    out = out + w;
  }
  return out;
}

}  // namespace

Jet Tabulated::eval(const Jet& x) const {
  const int n = static_cast<int>(s.size());
  if (n < 8) throw ReconstructError("tabulated model needs at least 8 samples");
  const double v = x.value();
  const double slack = 1e-12 * (hi() - lo());
  if (v < lo() - slack || v > hi() + slack) {
    std::ostringstream os;
    os << "tabulated model evaluated at " << v << " outside [" << lo() << ", " << hi() << "]";
    throw ReconstructError(os.str());
  }
  int idx = static_cast<int>(std::lower_bound(s.begin(), s.end(), v) - s.begin());
  int start = std::clamp(idx - 4, 0, n - 8);
  // value from the f samples, derivatives from the integrated f' samples
  double d[kMaxJetOrder + 1] = {};
  d[0] = lagrange8(s, f, start, Jet(v, 0)).value();
  if (x.order() > 0) {
    Jet g = lagrange8(s, fp, start, Jet::variable(kX1, v, x.order() - 1));
    for (int k = 1; k <= x.order(); ++k) d[k] = g.partial(k - 1, 0, 0);
  }
  return compose(x, d);
}

Tabulated solve_linear_ode2(const Ode2Spec& spec, double s0, double f0, double fp0, double s1, int samples,
                            const OdeControl& control) {
  if (samples < 8) throw ReconstructError("need at least 8 samples");
  if (s0 == s1) throw ReconstructError("empty integration range");
  const double lo = std::min(s0, s1), hi = std::max(s0, s1);
  for (double p : spec.singular_points()) {
    if (p >= lo && p <= hi) {
      std::ostringstream os;
      os << ode2_kind_name(spec.kind) << " equation: range [" << lo << ", " << hi << "] contains the singular point "
         << p;
      throw ReconstructError(os.str());
    }
  }
  std::vector<double> nodes = linspace(s0, s1, samples);
  if (spec.kind == Ode2Kind::Custom) {
    double first = spec.coefficients(nodes.front())[0];
    for (double x : nodes) {
      double p2 = spec.coefficients(x)[0];
      if (p2 == 0.0 || (p2 > 0) != (first > 0)) throw ReconstructError("leading coefficient vanishes on the range");
    }
  }
  OdeRhs rhs = [&spec](double s, const std::vector<double>& y, std::vector<double>& dy) {
    auto c = spec.coefficients(s);
    dy[0] = y[1];
    dy[1] = -(c[1] * y[1] + c[2] * y[0]) / c[0];
  };
  OdeResult r = integrate_ivp(rhs, {f0, fp0}, nodes, {"f", "fp"}, control);
  if (!r.ok()) throw ReconstructError("ODE propagation failed: " + r.message);

  Tabulated t;
  t.spec = spec;
  t.s = r.traj.s;
  t.f = r.traj.series("f");
  t.fp = r.traj.series("fp");
  if (s1 < s0) {
    std::reverse(t.s.begin(), t.s.end());
    std::reverse(t.f.begin(), t.f.end());
    std::reverse(t.fp.begin(), t.fp.end());
  }
  return t;
}

double ode2_residual(const Tabulated& t, double s) {
  Jet j = t.eval(Jet::variable(kX1, s, 2));
  auto c = t.spec.coefficients(s);
  return std::fabs(c[0] * j.partial(2, 0, 0) + c[1] * j.d(kX1) + c[2] * j.value());
}

double ode2_residual_max(const Tabulated& t, int probes) {
  if (probes < 1) throw ReconstructError("need at least one probe");
  double worst = 0.0;
  const double h = (t.hi() - t.lo()) / probes;
  for (int k = 0; k < probes; ++k) worst = std::max(worst, ode2_residual(t, t.lo() + (k + 0.5) * h));
  return worst;
}

std::string fmodel_kind(const FModel& m) {
  switch (m.index()) {
    case 0: return "power-law";
    case 1: return "gauss";
    case 2: return "fgt";
    default: return "tabulated";
  }
}

namespace {

Jet hyp2f1_jet(double a, double b, double c, const Jet& x) {
  double d[kMaxJetOrder + 1] = {};
  for (int k = 0; k <= x.order(); ++k) d[k] = hyp2f1_derivative(a, b, c, x.value(), k);
  return compose(x, d);
}

}  // namespace

Jet fmodel_jet(const FModel& m, double R, int order) {
  Jet r = Jet::variable(kX1, R, order);
  if (auto* p = std::get_if<PowerLaw>(&m)) {
    if (!(R > 0)) throw ReconstructError("power-law model needs R > 0");
    return p->Cp * pow(r, p->mp) + p->Cm * pow(r, p->mm);
  }
  if (auto* g = std::get_if<GaussSolution>(&m)) {
    const ChiConstants& c = g->chi;
    Jet X = -3.0 + r / (3.0 * g->H0 * g->H0);
    Jet out = g->A * hyp2f1_jet(c.chi1, c.chi2, c.chi3, X);
    if (g->B != 0.0) {
      if (!(X.value() > 0)) throw ReconstructError("the second Gauss branch needs X > 0");
      out = out + g->B * pow(X, 1.0 - c.chi3) *
                      hyp2f1_jet(c.chi1 - c.chi3 + 1.0, c.chi2 - c.chi3 + 1.0, 2.0 - c.chi3, X);
    }
    return out;
  }
  if (auto* t = std::get_if<Tabulated>(&m)) return t->eval(t->spec.native(r));
  throw ReconstructError("the F(P) + G(T) model is not a function of R alone");
}

FDerivs fmodel_derivatives(const FModel& m, const FPoint& x) {
  if (auto* g = std::get_if<FgtModel>(&m)) {
    const double P0 = g->P0(), T0 = g->T0(), h2 = g->H0 * g->H0;
    Jet F = fgt_jet(*g, Jet::variable(kX1, x.P / P0, 1), FgtWhich::F);
    Jet G = fgt_jet(*g, Jet::variable(kX1, x.T / T0, 1), FgtWhich::G);
    FDerivs d;
    d.f = x.R + h2 * (F.value() + G.value());
    d.f1 = 1.0;
    d.f2 = h2 * G.d(kX1) / T0;
    d.f3 = h2 * F.d(kX1) / P0;
    return d;
  }
  Jet j = fmodel_jet(m, x.R, 1);
  return {j.value(), j.d(kX1), 0.0, 0.0};
}

LcdmReconstruction reconstruct_lcdm(const LcdmSpec& s, const ChiConstants& chi, double zeta0, double zeta1,
                                    int samples, const OdeControl& control) {
  if (!(s.rho0 > 0)) throw ReconstructError("ΛCDM propagation needs rho0 > 0");
  if (!(zeta1 > zeta0)) throw ReconstructError("need zeta1 > zeta0");
  LcdmReconstruction out;
  out.spec = s;
  out.chi = chi;
  out.X_start = efolding_lcdm(s, zeta1).X;
  out.X_end = efolding_lcdm(s, zeta0).X;
  const double x = 1.0 - out.X_start;
  if (!(std::fabs(x) < 0.5)) throw ReconstructError("X(zeta1) too far from 1 for the series initial data");
  const double a = chi.chi1, b = chi.chi2, c = chi.chi1 + chi.chi2 + 1.0 - chi.chi3;
  Ode2Spec spec;
  spec.kind = Ode2Kind::Gauss;
  spec.chi = chi;
  spec.H0 = s.H0;
  const double f0 = hyp2f1(a, b, c, x);
  const double fp0 = -hyp2f1_derivative(a, b, c, x, 1);
  out.model = solve_linear_ode2(spec, out.X_start, f0, fp0, out.X_end, samples, control);
  return out;
}

double f1gen_residual(const FModel& m, const Expr& q, double rho0, double varpi, double a0, double zeta) {
  Jet qj = q.jet(JetBinding::line(Var::Zeta, zeta), 2);
  const double qv = qj.value(), q1 = qj.d(kX1), q2 = qj.partial(2, 0, 0);
  const double R = 3.0 * q1 + 12.0 * qv;
  if (3.0 * q2 + 12.0 * q1 == 0.0) throw ReconstructError("R(zeta) is stationary; zeta(R) does not exist");
  Jet f = fmodel_jet(m, R, 2);
  const double e = -3.0 * (1.0 + varpi);
  double rhs = -18.0 * qv * (q2 + 4.0 * q1) * f.partial(2, 0, 0) + 6.0 * (qv + 0.5 * q1) * f.d(kX1) +
               2.0 * rho0 * std::pow(a0, e) * std::exp(e * zeta);
  return f.value() - rhs;
}

F1genScan f1gen_scan(const FModel& m, const Expr& q, double rho0, double varpi, double a0, double zeta0,
                     double zeta1, int n) {
  if (n < 2) throw ReconstructError("need at least two scan points");
  F1genScan out;
  out.zeta = linspace(zeta0, zeta1, n);
  int sign = 0;
  for (double z : out.zeta) {
    Jet qj = q.jet(JetBinding::line(Var::Zeta, z), 2);
    double dR = 3.0 * qj.partial(2, 0, 0) + 12.0 * qj.d(kX1);
    int sg = dR > 0 ? 1 : (dR < 0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign)) throw ReconstructError("R(zeta) is not monotone on the window");
    sign = sg;
  }
  for (double z : out.zeta) {
    double r = f1gen_residual(m, q, rho0, varpi, a0, z);
    out.residual.push_back(r);
    if (!(std::fabs(r) <= out.max)) {
      out.max = std::isfinite(r) ? std::fabs(r) : INFINITY;
      out.worst_zeta = z;
    }
  }
  return out;
}

const char* h0_convention_name(H0Convention c) { return c == H0Convention::Inverse ? "inverse" : "linear"; }

double RipScale::a(double t) const {
  if (!(t < t_s)) throw ReconstructError("the scale factor is defined for t < t_s");
  return a0 * std::pow(t_s - t, -H0);
}

double RipScale::H(double t) const {
  if (!(t < t_s)) throw ReconstructError("the scale factor is defined for t < t_s");
  Jet a = a0 * pow(t_s - Jet::variable(kX1, t, 1), -H0);
  return a.d(kX1) / a.value();
}

std::complex<double> indicial_residual(double A, double B, std::complex<double> m) {
  return m * m + (A - 1.0) * m + B;
}

EulerReconstruction euler_reconstruct(double w_ph, H0Convention c, double t_s, double a0) {
  EulerReconstruction e;
  e.w_ph = w_ph;
  if (c == H0Convention::Inverse) {
    if (w_ph == -1.0) throw ReconstructError("w = -1 has no inverse-convention H0");
    e.H0 = 1.0 / (3.0 * (1.0 + w_ph));
  } else {
    e.H0 = (1.0 + w_ph) / 3.0;
  }
  e.A = -e.H0 * (1.0 + e.H0);
  e.B = (1.0 + 2.0 * e.H0) / 2.0;
  e.discriminant = (1.0 - e.A) * (1.0 - e.A) - 4.0 * e.B;
  std::complex<double> root = std::sqrt(std::complex<double>(e.discriminant, 0.0));
  e.m_plus = 0.5 * (1.0 - e.A + root);
  e.m_minus = 0.5 * (1.0 - e.A - root);
  e.complex_roots = e.discriminant < 0.0;
  if (!e.complex_roots) e.model = PowerLaw{1.0, 1.0, e.m_plus.real(), e.m_minus.real()};
  e.rip = RipScale{a0, t_s, e.H0};
  return e;
}

}  // namespace offdiag
