// Acceptance run: one line per criterion. Criteria 1 and 7 are documented
// known failures (see README); the exit status is 0 iff every criterion has
// its documented outcome.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <ratio>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "offdiag/afdm/assemble.hpp"
#include "offdiag/afdm/checks.hpp"
#include "offdiag/cli/runner.hpp"
#include "offdiag/cosmodyn/cosmodyn.hpp"
#include "offdiag/fieldkit/poisson.hpp"
#include "offdiag/nageometry/connection.hpp"
#include "offdiag/nageometry/curvature.hpp"
#include "offdiag/reconstruct/fgt.hpp"
#include "offdiag/reconstruct/reconstruct.hpp"
#include "offdiag/stability/stability.hpp"

using namespace offdiag;

namespace {

enum class Expect { Pass, KnownFail };

struct Verdict {
  bool pass = false;
  std::string label;  // printed status when it differs from PASS / FAIL
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Expr st(const std::string& s) { return parse_expression(s, VarSet::spacetime()); }

std::string num(double v) { return fmt("(%.17g)", v); }

double unit(std::mt19937_64& g) { return std::generate_canonical<double, 53>(g); }
double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * unit(g); }

double max_torsion(const DMetric& m, const Grid3& g) {
  double t = 0;
  for (int i = 0; i < g.x1.n; ++i)
    for (int j = 0; j < g.x2.n; ++j)
      for (int k = 0; k < g.t.n; ++k) t = std::max(t, canonical_dtorsion(m, g.point(i, j, k)).max_norm);
  return t;
}

GeneratingData exponential_family(double Lambda) {
  GeneratingData g;
  g.Lambda = Lambda;
  g.PhiCheck = st("exp(x1 + x2 + t)");
  g.psi = st(num(Lambda / 2) + "*(x1^2 + x2^2)");
  return g;
}

Grid3 grid17() { return Grid3({-1, 1, 17}, {-1, 1, 17}, {0, 1, 17}); }

// ---------------------------------------------------------------------------

Verdict criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  double sup[2];
  const double lambdas[2] = {1.0, -1.0};
  for (int k = 0; k < 2; ++k) {
    AFDMSolution s = assemble_lc(exponential_family(lambdas[k]), grid17());
    sup[k] = einstein_residual(s.metric, lambdas[k], grid17()).sup;
  }
  double secs = seconds_since(t0);
  // constant-curvature h-part, Lambda > 0 only
  GeneratingData rep = exponential_family(1.0);
  rep.psi = st("ln(4/(1 + x1^2 + x2^2)^2)");
  double repaired = einstein_residual(assemble_lc(rep, grid17()).metric, 1.0, grid17()).sup;
  Verdict v;
  v.pass = sup[0] < 1e-6 && sup[1] < 1e-6 && secs < 30;
  v.detail = fmt("sup|R^a_b - Lambda delta| = %.3e (Lambda = 1), %.3e (Lambda = -1), tol 1e-6, %.1f s; "
                 "printed h-part gives R^1_1 = -Lambda e^-psi; e^psi = 4/(1+r^2)^2 gives %.1e",
                 sup[0], sup[1], secs, repaired);
  return v;
}

struct Generated {
  std::vector<AFDMSolution> lc, torsionful;
  std::vector<Grid3> lc_grid, tf_grid;
  double inverse_h4_confeq = 0;  // the same torsionful data with omega^2 = 1/|h4|
};

Generated generate(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Generated out;
  for (int i = 0; i < 5; ++i) {
    double L = uniform(rng, 0.5, 2.0) * (i % 2 ? -1 : 1);
    double a = uniform(rng, 0.5, 1.2), b1 = uniform(rng, -0.5, 0.5), b2 = uniform(rng, -0.5, 0.5);
    double c = uniform(rng, 0.1, 0.8), d = uniform(rng, 0.2, 0.4), e = uniform(rng, 0.0, 0.2);
    std::string u = "(t + " + num(b1) + "*x1 + " + num(b2) + "*x2 + " + num(e) + "*sin(x1*x2))";
    GeneratingData g;
    g.Lambda = L;
    g.PhiCheck = st("exp(" + num(a) + "*" + u + ") + " + num(c) + "*exp(" + num(d) + "*" + u + ")");
    g.psi = st(num(L / 2) + "*(x1^2 + x2^2)");
    g.nPotential = st(num(uniform(rng, -0.5, 0.5)) + "*x1*x2 + sin(" + num(uniform(rng, 0.1, 1)) + "*x1)");
    Grid3 grid({-0.5, 0.5, 5}, {-0.5, 0.5, 5}, {0.2, 1, 5});
    out.lc.push_back(assemble_lc(g, grid));
    out.lc_grid.push_back(grid);
  }
  for (int i = 0; i < 5; ++i) {
    GeneratingData g;
    g.Lambda = uniform(rng, 0.5, 2.0);
    g.PhiHat = st("exp(" + num(uniform(rng, -0.6, 0.6)) + "*x1 + " + num(uniform(rng, -0.6, 0.6)) + "*x2 + " +
                  num(uniform(rng, 0.5, 1.0)) + "*t)*(1.2 + " + num(uniform(rng, 0, 0.2)) + "*sin(x1*x2))");
    g.vUpsilon = st("1 + " + num(uniform(rng, 0, 0.4)) + "*sin(t + x1)*cos(x2)");
    g.hUpsilon = st("0");
    g.psi = st(num(uniform(rng, -0.5, 0.5)) + "*x1*x2");
    g.n1fun = {st(num(uniform(rng, -1, 1)) + "*x2"), st(num(uniform(rng, -1, 1)) + "*x1")};
    g.n2fun = {st("1"), st("1")};
    g.omegaMode = OmegaMode::Unit;
    Grid3 grid({-0.5, 0.5, 5}, {-0.5, 0.5, 5}, {0, 1, 5});
    out.torsionful.push_back(assemble_torsionful(g, grid));
    g.omegaMode = OmegaMode::InverseH4;
    out.inverse_h4_confeq = std::max(out.inverse_h4_confeq, system_residuals(assemble_torsionful(g, grid), grid).confeq);
    out.tf_grid.push_back(grid);
  }
  return out;
}

Verdict criterion2(const Generated& gen) {
  double worst = 0;
  for (std::size_t i = 0; i < gen.lc.size(); ++i)
    worst = std::max(worst, system_residuals(gen.lc[i], gen.lc_grid[i]).max());
  for (std::size_t i = 0; i < gen.torsionful.size(); ++i)
    worst = std::max(worst, system_residuals(gen.torsionful[i], gen.tf_grid[i]).max());

  std::mt19937_64 rng(7);
  double nf = 0;
  for (int i = 0; i < 20; ++i) {
    Expr h3 = st("2 + sin(" + num(uniform(rng, 0.5, 2)) + "*t + x1) + " + num(uniform(rng, 0, 0.5)) + "*x2^2");
    Expr h4 = st("-(1 + exp(" + num(uniform(rng, -1, 1)) + "*t*x2) + " + num(uniform(rng, 0, 0.5)) + "*x1^2)");
    Expr n1 = st(num(uniform(rng, -1, 1)) + "*x1*x2"), n2 = st("cos(" + num(uniform(rng, 0, 2)) + "*x1)");
    Point3 p{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, 0.2, 1.5)};
    nf = std::max(nf, n_formula_residual(h3, h4, n1, n2, p, 0.1));
  }
  Verdict v;
  v.pass = worst < 1e-6 && nf < 1e-8;
  v.detail = fmt("max system residual over 5 LC + 5 torsionful randomized solutions = %.3e (tol 1e-6); "
                 "n-formula identity = %.3e (tol 1e-8); torsionful omega = 1 (omega^2 = 1/|h4| would leave "
                 "e_i omega = %.2e)",
                 worst, nf, gen.inverse_h4_confeq);
  return v;
}

Verdict criterion3(const Generated& gen) {
  double lc = 0, tors = 0, tf = INFINITY;
  std::vector<AFDMSolution> lcs = gen.lc;
  std::vector<Grid3> grids = gen.lc_grid;
  Grid3 g9({-1, 1, 9}, {-1, 1, 9}, {0, 1, 9});
  lcs.push_back(assemble_lc(exponential_family(1.0), g9));
  grids.push_back(g9);
  for (std::size_t i = 0; i < lcs.size(); ++i) {
    lc = std::max(lc, check_lc(lcs[i], grids[i]).max());
    tors = std::max(tors, max_torsion(lcs[i].metric, grids[i]));
  }
  for (std::size_t i = 0; i < gen.torsionful.size(); ++i)
    tf = std::min(tf, max_torsion(gen.torsionful[i].metric, gen.tf_grid[i]));
  Verdict v;
  v.pass = lc < 1e-8 && tors < 1e-8 && tf > 1e-3;
  v.detail = fmt("LC conditions max = %.3e, d-torsion max = %.3e (tol 1e-8) over 6 LC solutions; "
                 "torsionful with 2n_k = 1: smallest max torsion component = %.3e (> 1e-3)",
                 lc, tors, tf);
  return v;
}

Verdict criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  auto F = [](const Jet& X) { return pow(1.0 - X, -1.0 / 3.0); };
  ChiConstants chi = chi_constants();
  double gauss = 0;
  for (int i = 0; i <= 1800; ++i) gauss = std::max(gauss, std::fabs(gauss_residual(chi, F, -0.9 + 0.001 * i)));

  using c1 = std::ratio<1, 3>;
  using c2 = std::ratio<-1, 2>;
  constexpr bool identity = std::ratio_equal_v<std::ratio_add<c1, c2>, std::ratio<-1, 6>> &&
                            std::ratio_equal_v<std::ratio_multiply<c1, c2>, std::ratio<-1, 6>>;
  bool stored = chi.chi1 == 1.0 / 3.0 && chi.chi2 == -0.5;

  LcdmSpec s{1.0, 0.9, 1.0, 1.0};
  LcdmReconstruction r = reconstruct_lcdm(s, lcdm_chi_constants());
  F1genScan scan = f1gen_scan(FModel{r.model}, lcdm_q_expr(s), 0.0, 0.0, s.a0, 0.0, 3.0, 301);
  double secs = seconds_since(t0);

  LcdmReconstruction pr = reconstruct_lcdm(s, chi);
  double printed = f1gen_scan(FModel{pr.model}, lcdm_q_expr(s), 0.0, 0.0, s.a0, 0.0, 3.0, 301).max;

  Verdict v;
  v.pass = gauss < 1e-10 && identity && stored && scan.max < 1e-6 && secs < 5;
  v.detail = fmt("Gauss residual of (1-X)^(-1/3) on [-0.9, 0.9] = %.3e (tol 1e-10); chi identity exact: %s; "
                 "f1gen max over zeta in [0,3] = %.3e (tol 1e-6) with chi = (-7 +- sqrt 73)/12, %.2f s; "
                 "chi = (1/3, -1/2) would give %.2f",
                 gauss, identity && stored ? "yes" : "no", scan.max, secs, printed);
  return v;
}

Verdict criterion5() {
  double rhat = 0;
  for (double H0 : {0.7, 1.0, 1.3})
    for (double rho0 : {0.0, 0.9, 2.5})
      for (double a0 : {1.0, 0.8}) {
        LcdmSpec s{H0, rho0, a0, 1.0};
        Expr q = lcdm_q_expr(s);
        for (int k = 0; k <= 30; ++k) {
          double z = 0.1 * k;
          double want = 12 * H0 * H0 + s.kappa2 * rho0 * std::pow(a0, -3) * std::exp(-3 * z);
          rhat = std::max(rhat, std::fabs(cscurv(q, z) - want));
        }
      }
  double trip = 0;
  for (double c : {-3.0, -1.0, 0.5, 2.0, 3.5})
    for (double z = -1.0; z <= 1.0001; z += 0.05) {
      double R = powerlaw_rhat(c, 1.0, 1.0, z);
      double best = INFINITY;
      for (double u : invert_powerlaw(R, c)) best = std::min(best, std::fabs(std::log(u) / c - z));
      trip = std::max(trip, best);
    }
  double c4 = 0;
  for (double R : {1.0, 24.0, 97.5}) {
    auto u = invert_powerlaw(R, 4.0);
    c4 = std::max(c4, u.size() == 1 ? std::fabs(u[0] - R / 24) : INFINITY);
  }
  Verdict v;
  v.pass = rhat < 1e-10 && trip < 1e-10 && c4 == 0.0;
  v.detail = fmt("max |Rhat - (12 H0^2 + kappa2 rho0 a0^-3 e^-3zeta)| = %.3e (tol 1e-10); roundtrip = %.3e (tol 1e-10); "
                 "c = 4 deviation from Rhat/24 = %.1e",
                 rhat, trip, c4);
  return v;
}

Verdict criterion6() {
  EulerReconstruction e = euler_reconstruct(-1.1, H0Convention::Inverse);
  double ip = std::abs(indicial_residual(e.A, e.B, e.m_plus)), im = std::abs(indicial_residual(e.A, e.B, e.m_minus));
  double rip = 0;
  for (double t = -2.0; t < e.rip.t_s; t += 0.01)
    rip = std::max(rip, std::fabs(e.rip.H(t) * (e.rip.t_s - t) - e.H0) / std::fabs(e.H0));
  bool digits = std::fabs(e.m_plus.real() - 9.0895) < 5e-5 && std::fabs(e.m_minus.real() + 0.3117) < 5e-5;
  Verdict v;
  v.pass = !e.complex_roots && digits && ip < 1e-12 && im < 1e-12 && rip < 1e-12;
  v.detail = fmt("m+ = %.6f, m- = %.6f; indicial residuals %.1e, %.1e (tol 1e-12); max rel |H (t_s - t) - H0| = %.1e",
                 e.m_plus.real(), e.m_minus.real(), ip, im, rip);
  return v;
}

Verdict criterion7() {
  auto t0 = std::chrono::steady_clock::now();
  FluidSpec f;
  f.Q = 1.0;
  f.varpi = -4.0 / 3.0;
  f.kappa2 = 3.0;
  DedmFixedPoint fp = dedm_fixed_point(f);
  std::mt19937_64 rng(20240607);
  double worst_H = 0, worst_signed = 0, worst_abs = 0;
  int stopped = 0;
  for (int i = 0; i < 10; ++i) {
    FluidSpec fi = f;
    fi.rho0_DE = fp.rho_DE * (0.5 + unit(rng));
    fi.rho0_DM = fp.rho_DM * (0.5 + unit(rng));
    DedmResult r = evolve_coupled_dedm(fi, 0.0, 20.0, 2001);
    if (r.status != OdeStatus::Completed) {
      ++stopped;
      worst_H = worst_signed = worst_abs = INFINITY;
      continue;
    }
    worst_H = std::max(worst_H, r.attractor.H_error);
    worst_signed = std::max(worst_signed, r.attractor.ratio_error_signed);
    worst_abs = std::max(worst_abs, r.attractor.ratio_error_abs);
  }
  BigRipFit b = big_rip_exponent(f.varpi, f.kappa2, 1.0);
  double secs = seconds_since(t0);
  Verdict v;
  v.pass = worst_H < 0.01 && worst_signed < 0.01 && std::fabs(b.exponent + 1) < 0.01 && secs < 10;
  v.detail = fmt("fixed point is a saddle (eigenvalues %.3f, %.3f); %d of 10 trials stopped at a singularity; "
                 "worst H error %.3g, ratio error vs 1+varpi %.3g (vs |1+varpi| %.3g), tol 0.01; "
                 "Big Rip exponent %.6f; %.2f s",
                 fp.eig[0], fp.eig[1], stopped, worst_H, worst_signed, worst_abs, b.exponent, secs);
  return v;
}

Verdict criterion8() {
  FgtRoots r = fgt_characteristic_roots();
  double poly_res = 0;
  for (auto z : r.roots) {
    std::complex<double> p = 0;
    for (double c : r.poly) p = p * z + c;
    poly_res = std::max(poly_res, std::abs(p));
  }
  std::ostringstream roots;
  for (auto z : r.nonzero) roots << " " << z.real() << (z.imag() != 0 ? fmt("%+gi", z.imag()) : "");
  Verdict v;
  v.pass = poly_res < 1e-10 && !r.nonzero.empty();
  if (!r.match) v.label = "PASS (fallback)";
  v.detail = fmt("derived nonzero roots {%s } (polynomial residual %.1e); distance to {b1, (b2 +- i b3)/3} = %.3f %s",
                 roots.str().c_str() + 1, poly_res, r.mismatch,
                 r.match ? "(match)" : "> 0.01: discrepancy logged, derived exponents adopted");
  return v;
}

Verdict criterion9() {
  StabilityInputs s;
  s.Xi0 = -4;
  s.T0 = -2;
  const double H = 0.1;
  auto Hf = [H](double) { return H; };
  PerturbationResult triv = evolve_perturbation(s, Hf, 0.0, 0.0, 0.0, 20.0, 401);
  bool exact = triv.cls == PerturbationClass::Trivial;
  for (const auto& y : triv.traj.state) exact = exact && y[0] == 0.0 && y[1] == 0.0;
  PerturbationResult d = evolve_perturbation(s, Hf, 1.0, 0.0, 0.0, 20.0, 401);
  double env = damped_envelope_error(d, H);

  StabilityInputs m1;
  m1.Xi0 = 1;
  m1.P0 = 1;
  m1.T0 = -2;
  StabilityInputs m2;
  m2.P0 = -2;
  m2.T0 = 0;
  bool margins = oscillator_criterion(m1).margin == 5.0 && oscillator_criterion(m2).margin == -4.0;

  Grid3 g({-1, 1, 7}, {-1, 1, 7}, {0, 1, 7});
  DivergenceReport b = divergence_residual(assemble_lc(exponential_family(1.0), g), g);
  Verdict v;
  v.pass = exact && env < 0.02 && margins && b.sup < 1e-5;
  v.detail = fmt("zero perturbation stays exactly zero: %s; damped envelope vs e^(-3Ht/2) max rel error %.2e (tol 0.02); "
                 "margins 5 and -4 exact: %s; LC Bianchi residual %.2e (tol 1e-5)",
                 exact ? "yes" : "no", env, margins ? "yes" : "no", b.sup);
  return v;
}

std::string random_expr(std::mt19937_64& g, int depth) {
  static const char* vars[] = {"x1", "x2", "t"};
  if (depth == 0 || unit(g) < 0.2) {
    if (unit(g) < 0.7) return vars[g() % 3];
    return num(uniform(g, -1, 1));
  }
  std::string a = random_expr(g, depth - 1);
  switch (g() % 11) {
    case 0: return "(" + a + " + " + random_expr(g, depth - 1) + ")";
    case 1: return "(" + a + " - " + random_expr(g, depth - 1) + ")";
    case 2: return "(" + a + "*" + random_expr(g, depth - 1) + ")";
    case 3: return "(" + a + "/(1.5 + sin(" + random_expr(g, depth - 1) + ")))";
    case 4: return "sin(" + a + ")";
    case 5: return "cos(" + a + ")";
    case 6: return "exp(0.5*sin(" + a + "))";
    case 7: return "ln(1 + " + a + "^2)";
    case 8: return "sqrt(2 + cos(" + a + "))";
    case 9: return "(" + a + ")^2";
    default: return "(" + a + ")^3";
  }
}

Verdict criterion10() {
  std::mt19937_64 rng(1234);
  const double h = 1e-5;
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    Expr e = st(random_expr(rng, 4));
    std::array<double, 3> p{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
    Jet j = evaluate_jet(e, p, 1);
    for (int d = 0; d < 3; ++d) {
      auto q = p, r = p;
      q[d] += h;
      r[d] -= h;
      double fd = (e.eval(q[0], q[1], q[2]) - e.eval(r[0], r[1], r[2])) / (2 * h);
      worst = std::max(worst, std::fabs(j.d(d) - fd) / std::max(1.0, std::fabs(j.d(d))));
    }
  }

  const double pi = std::acos(-1.0);
  auto rhs = [pi](double x, double y) { return -2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
  auto zero = [](double, double) { return 0.0; };
  double err[2];
  const int ns[2] = {33, 65};
  for (int k = 0; k < 2; ++k) {
    Rect dom{0, 1, 0, 1, ns[k], ns[k]};
    PoissonResult r = solve_poisson_2d(rhs, dom, zero);
    double e = 0;
    for (int i = 0; i < dom.n1; ++i)
      for (int j = 0; j < dom.n2; ++j)
        e = std::max(e, std::fabs(r.at(dom, i, j) - std::sin(pi * dom.x1(i)) * std::sin(pi * dom.x2(j))));
    err[k] = e;
  }
  double order = std::log2(err[0] / err[1]);

  namespace fs = std::filesystem;
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  fs::path base = fs::temp_directory_path() / fmt("offdiag-accept-%d", static_cast<int>(getpid()));
  std::vector<Scenario> ss;
  for (const char* name : {"lcdm", "dedm-attractor", "stability-damped", "decoupled-torsionful"})
    ss.push_back(*validate_scenario_file(resolve_scenario(name)).scenario);
  bool identical = true;
  int files = 0;
  for (int run = 0; run < 2; ++run) {
    RunOptions o;
    o.out_dir = base / std::to_string(run);
    run_batch(ss, o, run + 1);
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const auto& entry : fs::recursive_directory_iterator(base / "0")) {
    if (!entry.is_regular_file()) continue;
    fs::path other = base / "1" / fs::relative(entry.path(), base / "0");
    identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
    ++files;
  }
  fs::remove_all(base);
  unsetenv("SOURCE_DATE_EPOCH");

  Verdict v;
  v.pass = worst < 1e-6 && std::fabs(order - 2.0) <= 0.1 && identical && files > 0;
  v.detail = fmt("jet vs central differences, 1000 random expressions: max rel deviation %.2e (tol 1e-6); "
                 "Poisson order %.3f (2.0 +- 0.1); %d artifacts byte-identical across reruns: %s",
                 worst, order, files, identical ? "yes" : "no");
  return v;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    Expect expect;
    std::function<Verdict()> run;
  };
  Generated gen;
  bool generated = false;
  auto lazy = [&]() -> const Generated& {
    if (!generated) {
      gen = generate(42);
      generated = true;
    }
    return gen;
  };
  std::vector<Entry> entries{
      {1, Expect::KnownFail, criterion1},
      {2, Expect::Pass, [&] { return criterion2(lazy()); }},
      {3, Expect::Pass, [&] { return criterion3(lazy()); }},
      {4, Expect::Pass, criterion4},
      {5, Expect::Pass, criterion5},
      {6, Expect::Pass, criterion6},
      {7, Expect::KnownFail, criterion7},
      {8, Expect::Pass, criterion8},
      {9, Expect::Pass, criterion9},
      {10, Expect::Pass, criterion10},
  };

  int mismatches = 0;
  for (const auto& e : entries) {
    Verdict v;
    try {
      v = e.run();
    } catch (const std::exception& ex) {
      v.pass = false;
      v.detail = std::string("error: ") + ex.what();
    }
    std::string status = v.pass ? (v.label.empty() ? "PASS" : v.label) : "FAIL";
    bool as_documented = v.pass == (e.expect == Expect::Pass);
    if (e.expect == Expect::KnownFail) status += v.pass ? " (documented as a known failure, now passing)" : " (known failure)";
    mismatches += !as_documented;
    std::printf("criterion %d: %s: %s\n", e.id, status.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria differ from their documented outcome\n", mismatches);
  return mismatches == 0 ? 0 : 1;
}
