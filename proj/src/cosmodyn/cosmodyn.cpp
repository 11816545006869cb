#include "offdiag/cosmodyn/cosmodyn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace offdiag {

double big_rip_hubble(double varpi, double t_s, double t) {
  if (!(varpi < -1.0)) throw CosmoError("big_rip_hubble needs a phantom equation of state (varpi < -1)");
  if (t == t_s) throw CosmoError("big_rip_hubble evaluated at the Rip time t = t_s");
  return 2.0 / (3.0 * (1.0 + varpi) * (t_s - t));
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs matching samples");
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(std::fabs(x[i])), ly = std::log(std::fabs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

BigRipFit big_rip_exponent(double varpi, double kappa2, double rho0) {
  if (!(varpi < -1.0)) throw CosmoError("a Big Rip needs varpi < -1");
  if (!(kappa2 > 0.0) || !(rho0 > 0.0)) throw CosmoError("kappa2 and rho0 must be positive");
  auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    double H = std::sqrt(kappa2 * std::max(y[0], 0.0) / 3.0);
    dy[0] = -3.0 * H * (1.0 + varpi) * y[0];
  };
  OdeControl ctl;
  ctl.rtol = 1e-12;
  ctl.atol = 1e-14;
  BigRipFit fit;
  fit.rho0 = rho0;
  double H0 = std::sqrt(kappa2 * rho0 / 3.0);
  fit.t_s_exact = 2.0 / (3.0 * std::fabs(1.0 + varpi) * H0);

  // First pass: extend the span until the integrator stops at the singularity.
  double T = 1.0 / H0;
  OdeResult first;
  for (int tries = 0; tries < 60; ++tries) {
    first = integrate_ivp(rhs, {rho0}, {0.0, T}, {"rho"}, ctl);
    if (!first.ok()) break;
    T *= 2.0;
  }
  if (first.ok()) throw CosmoError("no finite-time singularity found");
  fit.t_s = first.stop_s;

  std::vector<double> nodes{0.0};
  const int m = 41;
  for (int k = 0; k < m; ++k) {
    double frac = std::pow(10.0, -2.0 - 4.0 * k / (m - 1));
    nodes.push_back(fit.t_s * (1.0 - frac));
  }
  OdeResult second = integrate_ivp(rhs, {rho0}, nodes, {"rho"}, ctl);
  for (std::size_t i = 1; i < second.traj.size(); ++i) {
    double dt = fit.t_s - second.traj.s[i];
    fit.dt.push_back(dt);
    fit.H.push_back(std::sqrt(kappa2 * second.traj.state[i][0] / 3.0));
  }
  if (fit.dt.size() < 2) throw CosmoError("too few samples before the singularity");
  fit.exponent = loglog_slope(fit.dt, fit.H);
  return fit;
}

std::vector<double> sample_derivative(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 5) throw std::invalid_argument("sample_derivative needs at least 5 samples");
  std::vector<double> d(n);
  for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (-y[i + 2] + 8 * y[i + 1] - 8 * y[i - 1] + y[i - 2]) / (12 * h);
  d[0] = (-25 * y[0] + 48 * y[1] - 36 * y[2] + 16 * y[3] - 3 * y[4]) / (12 * h);
  d[1] = (-3 * y[0] - 10 * y[1] + 18 * y[2] - 6 * y[3] + y[4]) / (12 * h);
  d[n - 1] = (25 * y[n - 1] - 48 * y[n - 2] + 36 * y[n - 3] - 16 * y[n - 4] + 3 * y[n - 5]) / (12 * h);
  d[n - 2] = (3 * y[n - 1] + 10 * y[n - 2] - 18 * y[n - 3] + 6 * y[n - 4] - y[n - 5]) / (12 * h);
  return d;
}

namespace {

double hubble(const FluidSpec& f, double de, double dm) { return std::sqrt(f.kappa2 * std::max(de + dm, 0.0) / 3.0); }

double rel_std(const std::vector<double>& v) {
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double s = 0;
  for (double x : v) s += (x - mean) * (x - mean);
  s = std::sqrt(s / static_cast<double>(v.size()));
  return mean != 0 ? std::fabs(s / mean) : s;
}

}  // namespace

DedmResult evolve_coupled_dedm(const FluidSpec& f, double t0, double t1, int samples, const OdeControl& control) {
  if (!(f.kappa2 > 0.0)) throw CosmoError("kappa2 must be positive");
  if (!(f.rho0_DE > 0.0) || !(f.rho0_DM > 0.0)) throw CosmoError("initial densities must be positive");
  if (samples < 5) throw CosmoError("at least 5 samples are needed");
  auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    double H = hubble(f, y[1], y[2]);
    double src = f.coupling == DmCoupling::DarkEnergy ? y[1] : y[2];
    dy[0] = H * y[0];
    dy[1] = -3.0 * H * (1.0 + f.varpi) * y[1] - f.Q * y[1];
    dy[2] = -3.0 * H * y[2] + f.Q * src;
  };
  std::vector<double> nodes = linspace(t0, t1, samples);
  OdeResult r = integrate_ivp(rhs, {f.a0, f.rho0_DE, f.rho0_DM}, nodes, {"a", "rho_DE", "rho_DM"}, control);

  DedmResult out;
  out.status = r.status;
  out.message = r.message;
  out.stop_t = r.stop_s;
  out.traj.names = {"a", "H", "rho_DE", "rho_DM", "residual1", "residual2"};
  const std::size_t n = r.traj.size();
  std::vector<double> lnde(n), H(n);
  for (std::size_t i = 0; i < n; ++i) {
    lnde[i] = std::log(r.traj.state[i][1]);
    H[i] = hubble(f, r.traj.state[i][1], r.traj.state[i][2]);
  }
  std::vector<double> r1(n, 0.0), r2(n, 0.0);
  if (n >= 5) {
    double h = nodes[1] - nodes[0];
    auto dl = sample_derivative(lnde, h);
    auto dH = sample_derivative(H, h);
    for (std::size_t i = 0; i < n; ++i) {
      r1[i] = dl[i] + 3.0 * H[i] * (1.0 + f.varpi) + f.Q;
      r2[i] = 2.0 * dH[i] + 3.0 * H[i] * H[i] + f.kappa2 * f.varpi * r.traj.state[i][1];
      out.bookkeeping_residual = std::max(out.bookkeeping_residual, std::fabs(r1[i]));
      out.second_flrw_residual = std::max(out.second_flrw_residual, std::fabs(r2[i]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& y = r.traj.state[i];
    out.traj.push(r.traj.s[i], {y[0], H[i], y[1], y[2], r1[i], r2[i]});
  }

  AttractorReport& a = out.attractor;
  a.H_target = -f.Q / (3.0 * (1.0 + f.varpi));
  a.ratio_target_signed = 1.0 + f.varpi;
  a.ratio_target_abs = -(1.0 + f.varpi);
  if (n > 0) {
    std::size_t tail = std::max<std::size_t>(2, n / 10);
    tail = std::min(tail, n);
    std::vector<double> hs, rs;
    for (std::size_t i = n - tail; i < n; ++i) {
      hs.push_back(H[i]);
      rs.push_back(r.traj.state[i][2] / r.traj.state[i][1]);
    }
    a.H_final = hs.back();
    a.ratio_final = rs.back();
    a.H_rel_std = rel_std(hs);
    a.ratio_rel_std = rel_std(rs);
    a.converged = r.ok() && a.H_rel_std < 1e-3 && a.ratio_rel_std < 1e-3;
    a.H_error = std::fabs(a.H_final / a.H_target - 1.0);
    a.ratio_error_signed = std::fabs(a.ratio_final / a.ratio_target_signed - 1.0);
    a.ratio_error_abs = std::fabs(a.ratio_final / a.ratio_target_abs - 1.0);
  }
  return out;
}

DedmFixedPoint dedm_fixed_point(const FluidSpec& f) {
  DedmFixedPoint p;
  p.H = -f.Q / (3.0 * (1.0 + f.varpi));
  if (f.coupling == DmCoupling::DarkEnergy) {
    // rho_DM = Q rho_DE / 3H = -(1 + varpi) rho_DE, rho_DE + rho_DM = 3H^2 / kappa2
    p.rho_DE = 3.0 * p.H * p.H / (-f.varpi * f.kappa2);
    p.rho_DM = -(1.0 + f.varpi) * p.rho_DE;
  } else {
    p.rho_DE = 3.0 * p.H * p.H / f.kappa2;
    p.rho_DM = 0.0;
  }
  double dH = f.kappa2 / (6.0 * p.H);
  double de = p.rho_DE, dm = p.rho_DM;
  bool src_de = f.coupling == DmCoupling::DarkEnergy;
  p.jacobian[0][0] = -3.0 * (1.0 + f.varpi) * de * dH - 3.0 * (1.0 + f.varpi) * p.H - f.Q;
  p.jacobian[0][1] = -3.0 * (1.0 + f.varpi) * de * dH;
  p.jacobian[1][0] = -3.0 * dm * dH + (src_de ? f.Q : 0.0);
  p.jacobian[1][1] = -3.0 * dm * dH - 3.0 * p.H + (src_de ? 0.0 : f.Q);
  double tr = p.jacobian[0][0] + p.jacobian[1][1];
  double det = p.jacobian[0][0] * p.jacobian[1][1] - p.jacobian[0][1] * p.jacobian[1][0];
  double disc = tr * tr / 4.0 - det;
  if (disc >= 0) {
    p.eig[0] = tr / 2.0 - std::sqrt(disc);
    p.eig[1] = tr / 2.0 + std::sqrt(disc);
  } else {
    p.eig[0] = p.eig[1] = tr / 2.0;
  }
  p.saddle = det < 0;
  return p;
}

std::array<double, 2> dedm_fixed_point_residual(const FluidSpec& f, double ratio) {
  double H = -f.Q / (3.0 * (1.0 + f.varpi));
  double de = 1.0, dm = ratio * de;
  double src = f.coupling == DmCoupling::DarkEnergy ? de : dm;
  return {3.0 * H * (1.0 + f.varpi) * de + f.Q * de, 3.0 * H * dm - f.Q * src};
}

FlrwResiduals effective_flrw_residual(const Trajectory& traj, const TimeDensity& rho_m, const TimeDensity& p_m,
                                      double LambdaCheck, double kappa2, double varpiLambda) {
  int ca = traj.column("a"), cH = traj.column("H");
  if (ca < 0 || cH < 0) throw CosmoError("trajectory needs columns a and H");
  const std::size_t n = traj.size();
  if (n < 5) throw CosmoError("trajectory too short for differencing");
  double h = traj.s[1] - traj.s[0];
  for (std::size_t i = 2; i < n; ++i)
    if (std::fabs((traj.s[i] - traj.s[i - 1]) - h) > 1e-9 * std::fabs(h))
      throw CosmoError("effective_flrw_residual needs uniform samples");
  std::vector<double> H = traj.series("H");
  std::vector<double> dH = sample_derivative(H, h);
  FlrwResiduals out;
  for (std::size_t i = 0; i < n; ++i) {
    double t = traj.s[i], a = traj.state[i][static_cast<std::size_t>(ca)];
    double rho = rho_m(t, a), p = p_m(t, a);
    double e1 = 3.0 * H[i] * H[i] - kappa2 * rho - LambdaCheck;
    double e2 = 2.0 * dH[i] + kappa2 * (rho + p) + (1.0 + varpiLambda) * LambdaCheck;
    out.r1.push_back(e1);
    out.r2.push_back(e2);
    out.max1 = std::max(out.max1, std::fabs(e1));
    out.max2 = std::max(out.max2, std::fabs(e2));
  }
  return out;
}

LcdmPoint efolding_lcdm(const LcdmSpec& s, double zeta) {
  if (!(s.H0 > 0.0)) throw CosmoError("H0 must be positive");
  double m = s.kappa2 * s.rho0 * std::pow(s.a0, -3.0) * std::exp(-3.0 * zeta);
  LcdmPoint p;
  p.q = s.H0 * s.H0 + m / 3.0;
  double dq = -m;
  p.Rhat = 3.0 * dq + 12.0 * p.q;
  p.X = -3.0 + p.Rhat / (3.0 * s.H0 * s.H0);
  return p;
}

Expr lcdm_q_expr(const LcdmSpec& s) {
  std::ostringstream os;
  os.precision(17);
  os << s.H0 * s.H0 << " + " << s.kappa2 * s.rho0 * std::pow(s.a0, -3.0) / 3.0 << " * exp(-3 * zeta)";
  return parse_expression(os.str(), {Var::Zeta});
}

double cscurv(const Expr& q, double zeta) {
  Jet j = q.jet(JetBinding::line(Var::Zeta, zeta), 1);
  return 3.0 * j.d(kX1) + 12.0 * j.value();
}

double powerlaw_rhat(double c, double q_s, double q_p, double zeta) {
  double u = std::exp(c * zeta);
  return (12.0 - 3.0 * c) * q_s / u + (12.0 + 3.0 * c) * q_p * u;
}

std::vector<double> invert_powerlaw(double Rhat, double c, double q_s, double q_p) {
  const double A = (12.0 + 3.0 * c) * q_p, B = -Rhat, C = (12.0 - 3.0 * c) * q_s;
  std::vector<double> roots;
  if (A == 0.0) {
    if (B == 0.0) throw CosmoError("degenerate power-law inversion");
    roots.push_back(-C / B);
  } else if (C == 0.0) {
    roots.push_back(-B / A);
  } else {
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) throw CosmoError("negative discriminant in the power-law inversion");
    double sq = std::sqrt(disc);
    // stable pair of roots
    double qq = -0.5 * (B + (B >= 0 ? sq : -sq));
    roots.push_back(qq / A);
    roots.push_back(C / qq);
  }
  std::vector<double> pos;
  for (double r : roots)
    if (r > 0.0) pos.push_back(r);
  std::sort(pos.begin(), pos.end());
  if (pos.empty()) throw CosmoError("no positive root e^{c zeta} for this curvature");
  return pos;
}

}  // namespace offdiag
