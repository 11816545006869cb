#include "offdiag/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "offdiag/afdm/assemble.hpp"
#include "offdiag/afdm/checks.hpp"
#include "offdiag/cosmodyn/cosmodyn.hpp"
#include "offdiag/nageometry/curvature.hpp"
#include "offdiag/reconstruct/fgt.hpp"
#include "offdiag/reconstruct/reconstruct.hpp"
#include "offdiag/stability/stability.hpp"

#ifndef OFFDIAG_VERSION
#define OFFDIAG_VERSION "0.0.0"
#endif
#ifndef OFFDIAG_SCENARIO_DIR
#define OFFDIAG_SCENARIO_DIR "scenarios"
#endif

namespace offdiag {

namespace {

struct Ctx {
  const Scenario& s;
  std::vector<Table> tables;
  std::vector<Residual> residuals;
  std::string model;

  void gate(const std::string& name, double value, const std::string& note = "", bool lower = false) {
    Residual r;
    r.name = name;
    r.value = value;
    r.lower_bound = lower;
    r.note = note;
    if (auto it = s.tolerances.find(name); it != s.tolerances.end()) r.tolerance = it->second;
    if (std::find(s.ungated.begin(), s.ungated.end(), name) != s.ungated.end())
      r.note += r.note.empty() ? "not gated by the scenario" : " (not gated by the scenario)";
    residuals.push_back(std::move(r));
  }
  void info(const std::string& name, double value, const std::string& note = "") {
    Residual r;
    r.name = name;
    r.value = value;
    r.note = note;
    residuals.push_back(std::move(r));
  }
  void table(Table t) {
    if (s.wants(t.name)) tables.push_back(std::move(t));
  }
};

Expr expr_or_empty(const Scenario& s, const char* key) {
  const Expr* e = s.expression(key);
  return e ? *e : Expr();
}

const Expr& need_expr(const Scenario& s, const char* key) {
  const Expr* e = s.expression(key);
  if (!e) throw std::runtime_error(std::string("missing expression '") + key + "'");
  return *e;
}

// uniform doubles in [0, 1) from the top 53 bits; identical on every platform
struct Uniform {
  std::mt19937_64 gen;
  explicit Uniform(std::uint64_t seed) : gen(seed) {}
  double operator()() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
};

template <class F>
void for_nodes(const Grid3& g, F&& f) {
  for (int i = 0; i < g.x1.n; ++i)
    for (int j = 0; j < g.x2.n; ++j)
      for (int k = 0; k < g.t.n; ++k) f(g.point(i, j, k));
}

Table afdm_table(const DMetric& m, const Grid3& g) {
  Table t{"afdm", {"x1", "x2", "t", "g1", "g2", "h3", "h4", "n1", "n2", "w1", "w2", "omega"}, {}};
  for_nodes(g, [&](const Point3& p) {
    MetricJets mj = evaluate_metric(m, p, 0);
    t.add({p[0], p[1], p[2], mj.g1.value(), mj.g2.value(), mj.h3.value(), mj.h4.value(), mj.n[0].value(),
           mj.n[1].value(), mj.w[0].value(), mj.w[1].value(), mj.omega.value()});
  });
  return t;
}

// Pointwise |R^a_b - source_a delta^a_b| with the source (hU, hU, vU, vU).
double einstein_sweep(Ctx& c, const DMetric& m, const Grid3& g, const JetField& hU, const JetField& vU,
                      bool canonical) {
  Table t{"einstein_residual", {"x1", "x2", "t", "residual", "R11", "R22", "R33", "R44"}, {}};
  double sup = 0.0;
  for_nodes(g, [&](const Point3& p) {
    CurvatureReport r = canonical ? canonical_ricci(m, p) : levi_civita_ricci(m, p);
    double h = hU(p, 0).value(), v = vU(p, 0).value();
    double res = einstein_residual_at(r, {h, h, v, v});
    if (!std::isfinite(res)) res = INFINITY;
    sup = std::max(sup, res);
    t.add({p[0], p[1], p[2], res, r.ricci_mixed[0][0], r.ricci_mixed[1][1], r.ricci_mixed[2][2],
           r.ricci_mixed[3][3]});
  });
  c.table(std::move(t));
  return sup;
}

double torsion_sweep(Ctx& c, const DMetric& m, const Grid3& g) {
  Table t{"torsion", {"x1", "x2", "t", "Tijk", "Tija", "Taji", "Tcaj", "Tabc", "max"}, {}};
  double sup = 0.0;
  for_nodes(g, [&](const Point3& p) {
    TorsionReport r = canonical_dtorsion(m, p);
    sup = std::max(sup, r.max_norm);
    t.add({p[0], p[1], p[2], r.family_max[0], r.family_max[1], r.family_max[2], r.family_max[3], r.family_max[4],
           r.max_norm});
  });
  c.table(std::move(t));
  return sup;
}

JetField source_field(const Expr& e, double fallback) {
  return e.empty() ? constant_field(fallback) : field_from_expr(e);
}

void fill_generating(const Scenario& s, GeneratingData& g) {
  g.Lambda = s.constant("Lambda", 1.0);
  g.psi = expr_or_empty(s, "psi");
  g.psiBoundary = expr_or_empty(s, "psiBoundary");
  g.hUpsilon = expr_or_empty(s, "hUpsilon");
  g.vUpsilon = expr_or_empty(s, "vUpsilon");
  g.aFactor = expr_or_empty(s, "a");
}

void run_afdm_lc(Ctx& c, const Grid3& grid) {
  const Scenario& s = c.s;
  GeneratingData g;
  fill_generating(s, g);
  g.PhiCheck = need_expr(s, "PhiCheck");
  g.nPotential = expr_or_empty(s, "n");
  g.omegaMode = OmegaMode::Unit;
  AFDMSolution sol = assemble_lc(g, grid);

  const double L = g.Lambda;
  c.gate("einstein", einstein_sweep(c, sol.metric, grid, source_field(g.hUpsilon, L), constant_field(L), false),
         "sup |R^a_b - source delta^a_b|, Levi-Civita connection");
  c.gate("lc", check_lc(sol, grid).max(), "zero-torsion conditions");
  c.gate("system", system_residuals(sol, grid).max(), "decoupled system, max over the five equations");
  c.gate("torsion", torsion_sweep(c, sol.metric, grid), "canonical d-torsion");
  c.gate("divergence", divergence_residual(sol, grid).sup, "contracted Bianchi identity");
  c.table(afdm_table(sol.metric, grid));
}

void run_afdm_torsionful(Ctx& c, const Grid3& grid) {
  const Scenario& s = c.s;
  GeneratingData g;
  fill_generating(s, g);
  g.PhiHat = need_expr(s, "PhiHat");
  g.n1fun = {expr_or_empty(s, "n1_1"), expr_or_empty(s, "n1_2")};
  g.n2fun = {expr_or_empty(s, "n2_1"), expr_or_empty(s, "n2_2")};
  g.eps3 = static_cast<int>(s.constant("eps3", 0));
  g.eps4 = static_cast<int>(s.constant("eps4", 0));
  g.t0 = s.constant("t0", 0.0);
  g.omegaMode = s.option("omega", "unit") == "inverse-h4" ? OmegaMode::InverseH4 : OmegaMode::Unit;
  AFDMSolution sol = assemble_torsionful(g, grid);

  SystemResiduals r = system_residuals(sol, grid);
  c.gate("system", r.max(), "decoupled system, max over the five equations");
  c.info("eq1m", r.eq1m);
  c.info("eq2m", r.eq2m);
  c.info("eq3m", r.eq3m);
  c.info("eq4m", r.eq4m);
  c.info("confeq", r.confeq);
  c.info("source_sign", sol.source_sign);
  c.gate("torsion_min", torsion_sweep(c, sol.metric, grid), "largest canonical d-torsion component", true);
  c.gate("lc", check_lc(sol, grid).max(), "zero-torsion conditions (not expected to hold)");
  c.table(afdm_table(sol.metric, grid));
}

void run_epsilon_family(Ctx& c, const Grid3& grid) {
  const Scenario& s = c.s;
  const Expr& a = need_expr(s, "a");
  const Expr chi3 = expr_or_empty(s, "chi3");
  const std::array<Expr, 2> n{expr_or_empty(s, "n1"), expr_or_empty(s, "n2")};
  const std::array<Expr, 2> w{expr_or_empty(s, "w1"), expr_or_empty(s, "w2")};
  const double eps = s.constant("eps", 0.0);
  DMetric base = epsilon_family(a, 0.0, chi3, n, w);
  DMetric def = epsilon_family(a, eps, chi3, n, w);

  Table t{"epsilon", {"x1", "x2", "t", "a", "h3", "n1", "n2", "w1", "w2", "R_base", "R_eps"}, {}};
  double limit = 0.0, shift = 0.0;
  for_nodes(grid, [&](const Point3& p) {
    const double av = a.eval(p[0], p[1], p[2]);
    Mat4 g0 = coordinate_metric(base, p);
    const double diag[4] = {av * av, av * av, av * av, -1.0};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) limit = std::max(limit, std::fabs(g0[i][j] - (i == j ? diag[i] : 0.0)));
    MetricJets mj = evaluate_metric(def, p, 0);
    double R0 = levi_civita_ricci(base, p).scalar, R1 = levi_civita_ricci(def, p).scalar;
    shift = std::max(shift, std::fabs(R1 - R0));
    t.add({p[0], p[1], p[2], av, mj.h3.value(), mj.n[0].value(), mj.n[1].value(), mj.w[0].value(), mj.w[1].value(),
           R0, R1});
  });
  c.gate("flrw_limit", limit, "eps = 0 against diag(a^2, a^2, a^2, -1)");
  c.info("scalar_shift", shift, "max |R(eps) - R(0)|");
  c.gate("lc", check_lc(def, grid).max(), "zero-torsion conditions of the deformed metric");
  c.table(std::move(t));
}

void run_dedm(Ctx& c) {
  const Scenario& s = c.s;
  FluidSpec f;
  f.varpi = s.constant("varpi", f.varpi);
  f.Q = s.constant("Q", f.Q);
  f.rho0_DE = s.constant("rho0_DE", f.rho0_DE);
  f.rho0_DM = s.constant("rho0_DM", f.rho0_DM);
  f.kappa2 = s.constant("kappa2", f.kappa2);
  f.a0 = s.constant("a0", f.a0);
  f.coupling = s.option("coupling", "de") == "dm" ? DmCoupling::DarkMatter : DmCoupling::DarkEnergy;
  const double t0 = s.constant("t0", 0.0), t1 = s.constant("t1", 20.0);
  const int samples = static_cast<int>(s.constant("samples", 2001));
  const int trials = static_cast<int>(s.constant("trials", 0));

  DedmResult r = evolve_coupled_dedm(f, t0, t1, samples);
  Table t{"dedm", {"t"}, {}};
  for (const auto& n : r.traj.names) t.columns.push_back(n);
  for (std::size_t k = 0; k < r.traj.size(); ++k) {
    std::vector<Cell> row{r.traj.s[k]};
    for (double v : r.traj.state[k]) row.emplace_back(v);
    t.add(std::move(row));
  }
  c.table(std::move(t));
  if (r.status == OdeStatus::Completed)
    c.gate("bookkeeping", std::max(r.bookkeeping_residual, r.second_flrw_residual),
           "conservation and second FLRW equation, five-point differences of the samples");
  else
    c.info("bookkeeping", std::max(r.bookkeeping_residual, r.second_flrw_residual),
           "integration stopped at t = " + std::to_string(r.stop_t) + ": " + r.message);

  DedmFixedPoint fp = dedm_fixed_point(f);
  c.info("fixed_point_H", fp.H);
  c.info("fixed_point_eig_min", std::min(fp.eig[0], fp.eig[1]));
  c.info("fixed_point_eig_max", std::max(fp.eig[0], fp.eig[1]), fp.saddle ? "saddle" : "");

  if (trials > 0) {
    Table a{"attractor",
            {"trial", "rho0_DE", "rho0_DM", "status", "H_final", "ratio_final", "H_error", "ratio_error_abs",
             "ratio_error_signed", "converged"},
            {}};
    Uniform u(s.seed);
    double worst_H = 0.0, worst_ratio = 0.0;
    int converged = 0, stopped = 0;
    for (int i = 0; i < trials; ++i) {
      FluidSpec fi = f;
      fi.rho0_DE = fp.rho_DE * (0.5 + u());
      fi.rho0_DM = fp.rho_DM * (0.5 + u());
      DedmResult ri = evolve_coupled_dedm(fi, t0, t1, samples);
      const AttractorReport& ar = ri.attractor;
      double eH = ri.status == OdeStatus::Completed ? ar.H_error : INFINITY;
      double eR = ri.status == OdeStatus::Completed ? ar.ratio_error_abs : INFINITY;
      worst_H = std::max(worst_H, eH);
      worst_ratio = std::max(worst_ratio, eR);
      converged += ar.converged;
      stopped += ri.status != OdeStatus::Completed;
      a.add({static_cast<long long>(i), fi.rho0_DE, fi.rho0_DM,
             std::string(ri.status == OdeStatus::Completed ? "completed" : "stopped"), ar.H_final, ar.ratio_final,
             eH, eR, ar.ratio_error_signed, static_cast<long long>(ar.converged)});
    }
    c.table(std::move(a));
    c.gate("attractor_H", worst_H, "max relative error of H over " + std::to_string(trials) + " trials");
    c.gate("attractor_ratio", worst_ratio, "max relative error of rho_DM / rho_DE against |1 + varpi|");
    c.info("attractor_converged", converged);
    c.info("attractor_stopped", stopped, "trials that reached a singularity before t1");
  }

  if (s.constant("rip", 0.0) != 0.0) {
    BigRipFit b = big_rip_exponent(f.varpi, f.kappa2, f.rho0_DE);
    c.gate("rip_exponent", std::fabs(b.exponent + 1.0), "|fitted exponent + 1|");
    c.info("rip_time", b.t_s);
    c.info("rip_time_exact", b.t_s_exact);
    Table bt{"bigrip", {"ts_minus_t", "H"}, {}};
    for (std::size_t k = 0; k < b.dt.size(); ++k) bt.add({b.dt[k], b.H[k]});
    c.table(std::move(bt));
  }
}

void run_lcdm(Ctx& c) {
  const Scenario& s = c.s;
  LcdmSpec spec;
  spec.H0 = s.constant("H0", 1.0);
  spec.rho0 = s.constant("rho0", 0.9);
  spec.a0 = s.constant("a0", 1.0);
  spec.kappa2 = s.constant("kappa2", 1.0);
  const double z0 = s.constant("zeta0", 0.0), z1 = s.constant("zeta1", 3.0);
  const int samples = static_cast<int>(s.constant("samples", 4001));
  const int rows = static_cast<int>(s.constant("rows", 301));
  const bool printed = s.option("chi", "derived") == "printed";
  ChiConstants chi = printed ? chi_constants() : lcdm_chi_constants();

  LcdmReconstruction rec = reconstruct_lcdm(spec, chi, z0, z1, samples);
  FModel m = rec.model;
  Expr q = lcdm_q_expr(spec);
  F1genScan scan = f1gen_scan(m, q, 0.0, 0.0, spec.a0, z0, z1, rows);
  c.gate("f1gen", scan.max, std::string(printed ? "printed" : "derived") + " chi constants, no extra matter term");
  c.gate("ode", ode2_residual_max(rec.model, 400), "Gauss equation recomputed from the interpolant");

  Table t{"lcdm", {"zeta", "q", "Rhat", "X", "f", "f1gen_residual"}, {}};
  double rhat = 0.0;
  for (std::size_t k = 0; k < scan.zeta.size(); ++k) {
    const double z = scan.zeta[k];
    LcdmPoint p = efolding_lcdm(spec, z);
    const double printed_R = 12.0 * spec.H0 * spec.H0 + spec.kappa2 * spec.rho0 * std::exp(-3.0 * z) /
                                                            (spec.a0 * spec.a0 * spec.a0);
    rhat = std::max(rhat, std::fabs(p.Rhat - printed_R) / std::max(1.0, std::fabs(printed_R)));
    t.add({z, p.q, p.Rhat, p.X, fmodel_jet(m, p.Rhat, 0).value(), scan.residual[k]});
  }
  c.gate("rhat", rhat, "curvature from the corrected q against 12 H0^2 + kappa2 rho0 a0^-3 e^{-3 zeta}");
  c.info("chi1", chi.chi1);
  c.info("chi2", chi.chi2);
  c.info("chi3", chi.chi3);
  c.table(std::move(t));
  if (s.wants("model")) c.model = serialize_fmodel(m);
}

void run_powerlaw(Ctx& c) {
  const Scenario& s = c.s;
  const double w = s.constant("w_ph", -1.1);
  const double ts = s.constant("t_s", 1.0), a0 = s.constant("a0", 1.0);
  const int rows = std::max(2, static_cast<int>(s.constant("rows", 101)));
  H0Convention conv = s.option("convention", "inverse") == "linear" ? H0Convention::Linear : H0Convention::Inverse;
  EulerReconstruction e = euler_reconstruct(w, conv, ts, a0);

  c.info("H0", e.H0);
  c.info("A", e.A);
  c.info("B", e.B);
  c.info("m_plus_re", e.m_plus.real());
  c.info("m_plus_im", e.m_plus.imag());
  c.info("m_minus_re", e.m_minus.real());
  c.info("m_minus_im", e.m_minus.imag());
  c.gate("indicial", std::max(std::abs(indicial_residual(e.A, e.B, e.m_plus)),
                              std::abs(indicial_residual(e.A, e.B, e.m_minus))));

  Table t{"euler", {"t", "a", "H", "H_times_ts_minus_t"}, {}};
  double rip = 0.0;
  for (double tt : linspace(ts - 1.0, ts - 1e-3, rows)) {
    double H = e.rip.H(tt), prod = H * (ts - tt);
    rip = std::max(rip, std::fabs(prod - e.H0) / std::max(1.0, std::fabs(e.H0)));
    t.add({tt, e.rip.a(tt), H, prod});
  }
  c.gate("rip", rip, "H (t_s - t) against H0");
  c.table(std::move(t));

  if (!e.complex_roots) {
    double worst = 0.0;
    for (double R : linspace(0.5, 10.0, rows)) {
      Jet f = fmodel_jet(e.model, R, 2);
      double t1 = R * R * f.partial(2, 0, 0), t2 = e.A * R * f.d(kX1), t3 = e.B * f.value();
      worst = std::max(worst, std::fabs(t1 + t2 + t3) / std::max(1.0, std::fabs(t1) + std::fabs(t2) + std::fabs(t3)));
    }
    c.gate("euler_ode", worst, "R^2 f'' + A R f' + B f, relative");
    if (s.wants("model")) c.model = serialize_fmodel(e.model);
  } else {
    c.info("euler_ode", NAN, "complex indicial roots, no real power-law model");
  }

  if (s.has_constant("c")) {
    const double cc = s.constant("c", 0.0), qs = s.constant("q_s", 1.0), qp = s.constant("q_p", 1.0);
    Table r{"roundtrip", {"zeta", "Rhat", "zeta_back", "error"}, {}};
    double worst = 0.0;
    for (double z : linspace(-1.0, 1.0, rows)) {
      double Rh = powerlaw_rhat(cc, qs, qp, z);
      double best = INFINITY, back = NAN;
      for (double u : invert_powerlaw(Rh, cc, qs, qp)) {
        double zb = std::log(u) / cc;
        if (std::fabs(zb - z) < best) {
          best = std::fabs(zb - z);
          back = zb;
        }
      }
      worst = std::max(worst, best);
      r.add({z, Rh, back, best});
    }
    c.gate("roundtrip", worst, "zeta -> Rhat -> zeta over [-1, 1]");
    c.table(std::move(r));
  }
}

void run_fgt(Ctx& c) {
  const Scenario& s = c.s;
  FgtRoots r = fgt_characteristic_roots();
  double scale = 0.0;
  for (double p : r.poly) scale = std::max(scale, std::fabs(p));
  double worst = 0.0;
  for (auto z : r.roots) {
    std::complex<double> v = 0.0;
    for (double p : r.poly) v = v * z + p;
    worst = std::max(worst, std::abs(v) / scale);
  }
  c.gate("roots", worst, "characteristic cubic at its computed roots, relative");
  c.gate("exponent_match", r.mismatch,
         r.match ? "printed exponents reproduced" : "printed exponents not reproduced; derived exponents adopted");
  c.info("linear", r.linear, "coefficient of xi P in the particular solution");

  Table rt{"roots", {"source", "re", "im"}, {}};
  for (auto z : r.printed) rt.add({std::string("printed"), z.real(), z.imag()});
  for (auto z : r.nonzero) rt.add({std::string("derived"), z.real(), z.imag()});
  c.table(std::move(rt));

  const double xi = s.constant("xi", 1.0), H0 = s.constant("H0", 1.0), k2 = s.constant("kappa2", 1.0);
  std::array<double, 4> cs{s.constant("c1", 1.0), s.constant("c2", 1.0), s.constant("c3", 1.0),
                           s.constant("c4", 1.0)};
  FgtModel m = s.option("exponents", "derived") == "printed"
                   ? fgt_printed_model(cs, cs, xi, H0, k2)
                   : fgt_derived_model(r, {cs[0], cs[1], cs[2]}, s.constant("constant", 0.0), xi, H0, k2);
  const double lo = s.constant("arg_lo", 0.5), hi = s.constant("arg_hi", 2.0);
  const int rows = std::max(2, static_cast<int>(s.constant("rows", 31)));
  Table ft{"fgt", {"arg", "F", "G"}, {}};
  for (double x : linspace(lo, hi, rows)) ft.add({x, fgt_eval(m, x, FgtWhich::F), fgt_eval(m, x, FgtWhich::G)});
  c.table(std::move(ft));
  if (s.wants("model")) c.model = serialize_fmodel(m);
}

void run_stability(Ctx& c) {
  const Scenario& s = c.s;
  StabilityInputs in;
  in.Xi0 = s.constant("Xi0", 0.0);
  in.P0 = s.constant("P0", 0.0);
  in.T0 = s.constant("T0", 1.0);
  in.f1_1 = s.constant("f1_1", 1.0);
  in.F1 = s.constant("F1", 0.0);
  in.F2 = s.constant("F2", 1.0);
  in.mL = s.constant("mL", 0.0);
  in.kappa2 = s.constant("kappa2", 1.0);
  if (s.has_constant("source")) in.source_override = s.constant("source", 0.0);

  OscillatorCriterion oc = oscillator_criterion(in);
  c.info("margin", oc.margin, oc.pass ? "criterion holds" : "criterion violated");

  const Expr& Hx = need_expr(s, "H");
  const Expr dRx = expr_or_empty(s, "dR");
  TimeFn H = [&Hx](double t) { return Hx.eval(std::array<double, kNumVars>{0, 0, t, 0, 0, 0}); };
  TimeFn dR;
  if (!dRx.empty()) dR = [&dRx](double t) { return dRx.eval(std::array<double, kNumVars>{0, 0, t, 0, 0, 0}); };
  const double dP0 = s.constant("dP0", 1.0), dPdot0 = s.constant("dPdot0", 0.0);
  const double t0 = s.constant("t0", 0.0), t1 = s.constant("t1", 20.0);
  const int samples = static_cast<int>(s.constant("samples", 2001));
  PerturbationResult pr = evolve_perturbation(in, H, dP0, dPdot0, t0, t1, samples, dR, OdeControl{1e-11, 1e-14});
  c.info("omega2", pr.omega2);
  c.info("slope", pr.slope, perturbation_class_name(pr.cls));

  Table t{"perturbation", {"t", "dP", "dPdot", "envelope"}, {}};
  for (std::size_t k = 0; k < pr.traj.size(); ++k)
    t.add({pr.traj.s[k], pr.traj.state[k][0], pr.traj.state[k][1], pr.traj.state[k][2]});
  c.table(std::move(t));

  if (dP0 == 0.0 && dPdot0 == 0.0 && dRx.empty()) {
    double m = 0.0;
    for (const auto& y : pr.traj.state) m = std::max({m, std::fabs(y[0]), std::fabs(y[1])});
    c.gate("trivial", m, "zero perturbation stays zero");
  }
  if (!Hx.depends_on(Var::T) && dRx.empty() && pr.omega2 > 2.25 * H(t0) * H(t0) && (dP0 != 0.0 || dPdot0 != 0.0))
    c.gate("damping", damped_envelope_error(pr, H(t0)), "envelope against exp(-3Ht/2)");

  const std::string expect = s.option("expect", "any");
  if (expect != "any")
    c.gate("class", expect == perturbation_class_name(pr.cls) ? 0.0 : 1.0,
           std::string("classified ") + perturbation_class_name(pr.cls) + ", expected " + expect);

  if (const Expr* rho = s.expression("rho")) {
    FlrwFluid fl{Hx, *rho, expr_or_empty(s, "p")};
    DivergenceReport d = divergence_residual(fl, FModel{PowerLaw{1.0, 0.0, 1.0, 0.0}}, in.kappa2,
                                             std::max(t0, 1e-9), t1, 201);
    c.gate("divergence", d.sup, "homogeneous divergence relation for an f(R) model");
    Table dt{"divergence", {"t", "lhs", "rhs"}, {}};
    for (std::size_t k = 0; k < d.t.size(); ++k) dt.add({d.t[k], d.lhs[k], d.rhs[k]});
    c.table(std::move(dt));
  }
}

void run_audit(Ctx& c, const Grid3& grid) {
  const Scenario& s = c.s;
  auto field = [&](const char* k, double fallback) {
    const Expr* e = s.expression(k);
    return e ? field_from_expr(*e) : constant_field(fallback);
  };
  DMetric m;
  m.g1 = field("g1", 1);
  m.g2 = field("g2", 1);
  m.h3 = field("h3", 1);
  m.h4 = field("h4", -1);
  m.n1 = field("n1", 0);
  m.n2 = field("n2", 0);
  m.w1 = field("w1", 0);
  m.w2 = field("w2", 0);
  m.omega = field("omega", 1);
  const double L = s.constant("Lambda", 0.0);
  const bool canonical = s.option("connection", "levi-civita") == "canonical";
  c.gate("einstein", einstein_sweep(c, m, grid, constant_field(L), constant_field(L), canonical),
         canonical ? "canonical d-connection" : "Levi-Civita connection");
  double bianchi = 0.0;
  for_nodes(grid, [&](const Point3& p) { bianchi = std::max(bianchi, bianchi_residual(m, p)); });
  c.gate("bianchi", bianchi, "contracted Bianchi identity");
  c.gate("lc", check_lc(m, grid).max(), "zero-torsion conditions");
  c.gate("torsion", torsion_sweep(c, m, grid), "canonical d-torsion");
}

Grid3 effective_grid(const Scenario& s, const RunOptions& o) {
  Grid3 g = *s.grid;
  if (o.sample) {
    g.x1.n = (*o.sample)[0];
    g.x2.n = (*o.sample)[1];
    g.t.n = (*o.sample)[2];
  }
  g.validate();
  return g;
}

void write_file(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << bytes;
  if (!out) throw std::runtime_error("write failed for " + p.string());
}

}  // namespace

RunOutcome run_scenario(const Scenario& s, const RunOptions& o) {
  if (o.format != "csv" && o.format != "json") throw std::invalid_argument("format must be csv or json");
  RunOutcome out;
  RunManifest& man = out.manifest;
  man.scenario = s.name;
  man.kind = s.kind;
  man.scenario_sha256 = sha256_hex(s.source);
  man.tool_version = OFFDIAG_VERSION;
  man.seed = s.seed;
  man.format = o.format;
  man.started = manifest_timestamp();

  Ctx c{s, {}, {}, {}};
  try {
    if (s.kind == "afdm-lc")
      run_afdm_lc(c, effective_grid(s, o));
    else if (s.kind == "afdm-torsionful")
      run_afdm_torsionful(c, effective_grid(s, o));
    else if (s.kind == "epsilon-family")
      run_epsilon_family(c, effective_grid(s, o));
    else if (s.kind == "dedm")
      run_dedm(c);
    else if (s.kind == "lcdm-reconstruct")
      run_lcdm(c);
    else if (s.kind == "powerlaw-reconstruct")
      run_powerlaw(c);
    else if (s.kind == "fgt-reconstruct")
      run_fgt(c);
    else if (s.kind == "stability")
      run_stability(c);
    else if (s.kind == "residual-audit")
      run_audit(c, effective_grid(s, o));
    else
      throw std::invalid_argument("unknown scenario kind '" + s.kind + "'");
  } catch (const std::exception& e) {
    man.error = "scenario " + s.name + " (" + s.kind + "): " + e.what();
  }

  for (auto& r : c.residuals) {
    if (o.tolerance_all && r.tolerance && !r.lower_bound) r.tolerance = *o.tolerance_all;
    if (auto it = o.tolerance.find(r.name); it != o.tolerance.end()) r.tolerance = it->second;
  }
  man.residuals = std::move(c.residuals);
  out.tables = std::move(c.tables);
  out.model = std::move(c.model);

  bool residuals_ok = std::all_of(man.residuals.begin(), man.residuals.end(), [](const Residual& r) { return r.pass(); });
  man.pass = man.error.empty() && residuals_ok;
  out.exit_code = !man.error.empty() ? kExitError : residuals_ok ? kExitPass : kExitResidual;

  if (o.write) {
    try {
      std::filesystem::path dir = o.out_dir / s.name;
      std::filesystem::create_directories(dir);
      auto emit = [&](const std::string& file, const std::string& bytes) {
        write_file(dir / file, bytes);
        man.outputs.push_back({file, sha256_hex(bytes), static_cast<long long>(bytes.size())});
      };
      for (const auto& t : out.tables)
        emit(t.name + "." + o.format, o.format == "csv" ? to_csv(t) : to_json(t));
      if (!out.model.empty()) emit("model.kv", out.model);
      man.finished = manifest_timestamp();
      write_file(dir / "manifest.json", man.to_json());
    } catch (const std::exception& e) {
      man.error = "scenario " + s.name + ": " + e.what();
      man.pass = false;
      out.exit_code = kExitError;
    }
  } else {
    man.finished = manifest_timestamp();
  }
  return out;
}

std::vector<RunOutcome> run_batch(const std::vector<Scenario>& ss, const RunOptions& o, int jobs) {
  std::vector<RunOutcome> out(ss.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < ss.size();) out[i] = run_scenario(ss[i], o);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(ss.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

std::filesystem::path bundled_scenario_dir() {
  if (const char* e = std::getenv("OFFDIAG_SCENARIO_DIR"); e && *e) return e;
  return OFFDIAG_SCENARIO_DIR;
}

std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".scn") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::filesystem::path resolve_scenario(const std::string& arg) {
  std::filesystem::path p(arg);
  if (std::filesystem::is_regular_file(p)) return p;
  std::filesystem::path b = bundled_scenario_dir() / (arg + ".scn");
  if (std::filesystem::is_regular_file(b)) return b;
  return p;
}

}  // namespace offdiag
