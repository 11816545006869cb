#include "offdiag/stability/stability.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "offdiag/nageometry/curvature.hpp"

namespace offdiag {

double trace_background_residual(const FModel& m, const FPoint& x, double kappa2) {
  FDerivs d = fmodel_derivatives(m, x);
  return -2.0 * d.f + x.R * d.f1 - kappa2 * x.T;
}

TraceRoot solve_trace_background(const FModel& m, double T0, double kappa2, double lo, double hi, double P0) {
  auto g = [&](double R) { return trace_background_residual(m, {R, T0, P0}, kappa2); };
  double glo = g(lo), ghi = g(hi);
  TraceRoot out;
  if (glo == 0.0 || ghi == 0.0) {
    out.R0 = glo == 0.0 ? lo : hi;
    return out;
  }
  if ((glo > 0) == (ghi > 0)) throw StabilityError("trace relation does not change sign on the bracket");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::bisect(g, lo, hi, boost::math::tools::eps_tolerance<double>(), iters);
  out.R0 = 0.5 * (r.first + r.second);
  out.residual = g(out.R0);
  out.iterations = static_cast<int>(iters);
  return out;
}

double StabilityInputs::omega2() const {
  if (T0 == 0.0) throw StabilityError("T0 must be nonzero");
  if (F2 == 0.0) throw StabilityError("F2 must be nonzero");
  return 2.0 * Xi0 / T0 + 4.0 * (P0 / T0) * (f1_1 / F2);
}

double StabilityInputs::source() const {
  if (source_override) return *source_override;
  if (T0 == 0.0) throw StabilityError("T0 must be nonzero");
  if (F2 == 0.0) throw StabilityError("F2 must be nonzero");
  return 2.0 * f1_1 / (T0 * F2) - (P0 / T0) * (F1 / F2) * (2.0 * mL - T0);
}

OscillatorCriterion oscillator_criterion(const StabilityInputs& s) {
  if (s.F2 == 0.0) throw StabilityError("F2 must be nonzero");
  OscillatorCriterion c;
  c.margin = s.Xi0 + 2.0 * s.P0 * s.f1_1 / s.F2 - s.T0;
  c.pass = c.margin >= 0.0;
  return c;
}

const char* perturbation_class_name(PerturbationClass c) {
  switch (c) {
    case PerturbationClass::Trivial: return "trivial";
    case PerturbationClass::Damped: return "damped";
    case PerturbationClass::Oscillatory: return "oscillatory";
    case PerturbationClass::Growing: return "growing";
  }
  return "?";
}

PerturbationResult evolve_perturbation(const StabilityInputs& s, const TimeFn& H, double dP0, double dPdot0,
                                       double t0, double t1, int samples, const TimeFn& dR,
                                       const OdeControl& control) {
  if (!H) throw StabilityError("H(t) is required");
  if (samples < 3 || !(t1 > t0)) throw StabilityError("need t1 > t0 and at least 3 samples");
  PerturbationResult out;
  out.omega2 = s.omega2();
  out.source = dR ? s.source() : 0.0;
  std::vector<double> nodes = linspace(t0, t1, samples);
  for (double t : nodes)
    if (!std::isfinite(H(t))) throw StabilityError("H is singular on the span");

  const double w2 = out.omega2, S = out.source;
  OdeRhs rhs = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    double src = dR ? S * dR(t) : 0.0;
    dy[0] = y[1];
    dy[1] = src - 3.0 * H(t) * y[1] - w2 * y[0];
  };
  OdeResult r = integrate_ivp(rhs, {dP0, dPdot0}, nodes, {"dP", "dPdot"}, control);
  out.status = r.status;
  out.message = r.message;

  const double scale = w2 != 0.0 ? std::fabs(w2) : 1.0;
  out.traj.names = {"dP", "dPdot", "envelope"};
  for (std::size_t k = 0; k < r.traj.size(); ++k) {
    double p = r.traj.state[k][0], v = r.traj.state[k][1];
    out.traj.push(r.traj.s[k], {p, v, std::sqrt(p * p + v * v / scale)});
  }

  // least squares on the final third
  const std::size_t n = out.traj.size();
  bool all_zero = true;
  for (std::size_t k = 0; k < n; ++k)
    if (out.traj.state[k][2] != 0.0) all_zero = false;
  if (all_zero) {
    out.cls = PerturbationClass::Trivial;
    return out;
  }
  if (r.status == OdeStatus::BlowUp) {
    out.cls = PerturbationClass::Growing;
    out.slope = INFINITY;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = n - n / 3 - 1; k < n; ++k) {
    double e = out.traj.state[k][2];
    if (!(e > 0)) continue;
    double x = out.traj.s[k], y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  double den = m * sxx - sx * sx;
  out.slope = m > 1 && den != 0.0 ? (m * sxy - sx * sy) / den : 0.0;
  if (out.slope > 1e-3)
    out.cls = PerturbationClass::Growing;
  else if (out.slope < -1e-3)
    out.cls = PerturbationClass::Damped;
  else
    out.cls = PerturbationClass::Oscillatory;
  return out;
}

double damped_envelope_error(const PerturbationResult& r, double H) {
  const double W2 = r.omega2 - 2.25 * H * H;
  if (!(W2 > 0)) throw StabilityError("not underdamped: omega2 <= 9H^2/4");
  if (r.traj.size() == 0) throw StabilityError("empty trajectory");
  const double W = std::sqrt(W2);
  auto amp = [&](std::size_t k) {
    double p = r.traj.state[k][0], v = r.traj.state[k][1];
    double q = (v + 1.5 * H * p) / W;
    return std::sqrt(p * p + q * q);
  };
  const double A0 = amp(0);
  if (A0 == 0.0) throw StabilityError("zero initial amplitude");
  double worst = 0.0;
  for (std::size_t k = 0; k < r.traj.size(); ++k) {
    double t = r.traj.s[k] - r.traj.s[0];
    worst = std::max(worst, std::fabs(amp(k) / (A0 * std::exp(-1.5 * H * t)) - 1.0));
  }
  return worst;
}

DivergenceReport divergence_residual(const AFDMSolution& s, const Grid3& region) {
  DivergenceReport out;
  out.branch = "bianchi";
  double sum = 0.0;
  for (int i = 0; i < region.x1.n; ++i)
    for (int j = 0; j < region.x2.n; ++j)
      for (int k = 0; k < region.t.n; ++k) {
        Point3 p = region.point(i, j, k);
        double r = bianchi_residual(s.metric, p);
        if (!std::isfinite(r)) r = INFINITY;
        if (r > out.sup || out.count == 0) {
          out.sup = std::max(out.sup, r);
          out.worst = p[0];
        }
        sum += r * r;
        ++out.count;
      }
  out.rms = out.count ? std::sqrt(sum / out.count) : 0.0;
  return out;
}

namespace {

Jet model_fT(const FModel& m, const Jet& T) {
  const auto* g = std::get_if<FgtModel>(&m);
  if (!g) return Jet(0.0, T.order());
  const double T0 = g->T0(), h2 = g->H0 * g->H0;
  Jet Tc = T / T0;
  Jet G = fgt_jet(*g, Jet::variable(kX1, Tc.value(), T.order() + 1), FgtWhich::G);
  double d[kMaxJetOrder + 1] = {};
  for (int k = 0; k <= T.order(); ++k) d[k] = h2 * G.partial(k + 1, 0, 0) / T0;
  return compose(Tc, d);
}

}  // namespace

DivergenceReport divergence_residual(const FlrwFluid& d, const FModel& m, double kappa2, double t0, double t1,
                                     int n) {
  if (d.H.empty() || d.rho.empty()) throw StabilityError("FLRW data needs H and rho");
  if (n < 1) throw StabilityError("need at least one sample");
  Expr p = d.p.empty() ? Expr::constant(0.0) : d.p;
  DivergenceReport out;
  out.branch = "flrw";
  out.t = n == 1 ? std::vector<double>{t0} : linspace(t0, t1, n);
  double sum = 0.0;
  for (double t : out.t) {
    JetBinding b = JetBinding::line(Var::T, t);
    Jet H = d.H.jet(b, 1), rho = d.rho.jet(b, 1), pr = p.jet(b, 1);
    Jet T = -1.0 * rho + 3.0 * pr;
    Jet fT = model_fT(m, T);
    if (fT.value() + kappa2 == 0.0) throw StabilityError("f_T = -kappa2: the divergence prefactor vanishes");
    const double C = -(rho.d(kX1) + 3.0 * H.value() * (rho.value() + pr.value()));
    const double lhs = (fT.value() + kappa2) * C;
    const double rhs = fT.value() * (0.5 * T.d(kX1) + pr.d(kX1) + 2.0 * C) - (rho.value() - pr.value()) * fT.d(kX1);
    out.lhs.push_back(lhs);
    out.rhs.push_back(rhs);
    double r = std::fabs(lhs - rhs);
    if (!std::isfinite(r)) r = INFINITY;
    if (r > out.sup || out.count == 0) {
      out.sup = std::max(out.sup, r);
      out.worst = t;
    }
    sum += r * r;
    ++out.count;
  }
  out.rms = std::sqrt(sum / out.count);
  return out;
}

}  // namespace offdiag
