#pragma once
// f-model reconstruction: effective sources, hypergeometric and Euler type
// reconstruction equations, tabulated solutions and the ΛCDM propagation.

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "offdiag/cosmodyn/cosmodyn.hpp"
#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/jet.hpp"
#include "offdiag/fieldkit/ode.hpp"
#include "offdiag/reconstruct/fgt.hpp"

namespace offdiag {

class ReconstructError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceSpec {
  double Lambda = 0.0;
  double p = 0.0;
  double kappa2 = 1.0;
};

/// Values of f and its partials f_R, f_T, f_P at one point.
struct FDerivs {
  double f = 0, f1 = 0, f2 = 0, f3 = 0;
};

/// Lambda/f1 + f/2f1 + (2Lambda - Lambda/kappa2 - p) f2/f1 + p Lambda f3/f1.
double effective_source(const FDerivs& d, const SourceSpec& s);
/// f(R) variant: Lambda/f1 + f/2f1.
double effective_source_fr(double f, double f1, double Lambda);

struct ChiConstants {
  double chi1 = 0, chi2 = 0, chi3 = 0;
};

/// chi1 + chi2 = chi1 chi2 = -1/6, chi3 = -1/2: (1/3, -1/2, -1/2).
ChiConstants chi_constants();

/// Constants obtained by reducing the f1gen equation with the ΛCDM q(zeta) and
/// no matter term: chi1 + chi2 = -7/6, chi1 chi2 = -1/6, chi3 = -1/2.
ChiConstants lcdm_chi_constants();

/// Gauss series 2F1(a, b; c; x) for |x| < 1.
double hyp2f1(double a, double b, double c, double x);
/// k-th derivative in x, from d/dx F(a,b;c;x) = (ab/c) F(a+1,b+1;c+1;x).
double hyp2f1_derivative(double a, double b, double c, double x, int k);

/// x(1-x) F'' + [chi3 - (chi1 + chi2 + 1) x] F' - chi1 chi2 F at X, with F
/// given as a jet function of X along direction 0.
double gauss_residual(const ChiConstants& chi, const std::function<Jet(const Jet&)>& F, double X);

enum class Ode2Kind { Gauss, YEquation, Euler, Custom };
const char* ode2_kind_name(Ode2Kind k);

/// p2(s) f'' + p1(s) f' + p0(s) f = 0 in the native variable s:
///   Gauss      s = X = -3 + R/3H0^2   X(1-X) f'' + [chi3 - (chi1+chi2+1) X] f' - chi1 chi2 f
///   YEquation  R^2 = -576 q_s q_p Y   4Y(1-Y) f'' + (3+Y) f' - 2f
///   Euler      s = R                  R^2 f'' + A R f' + B f
///   Custom     s = R                  user coefficients
struct Ode2Spec {
  Ode2Kind kind = Ode2Kind::Gauss;
  ChiConstants chi = chi_constants();
  double H0 = 1.0;
  double q_s = 1.0, q_p = 1.0;
  double A = 0.0, B = 0.0;
  std::function<double(double)> p2, p1, p0;

  /// Coefficients (p2, p1, p0) at s.
  std::array<double, 3> coefficients(double s) const;
  /// Native variable as a function of R.
  Jet native(const Jet& R) const;
  /// Singular points of the leading coefficient (Custom: none known a priori).
  std::vector<double> singular_points() const;
};

/// ODE-propagated samples of f and f' over the native variable.
struct Tabulated {
  Ode2Spec spec;
  std::vector<double> s, f, fp;

  /// Eight-point Lagrange interpolants: the value from the f samples, the
  /// derivatives from the f' samples.
  Jet eval(const Jet& s) const;
  double lo() const;
  double hi() const;
};

/// Integrate from (f0, fp0) at s0 to s1 with samples equally spaced nodes.
/// Throws when [s0, s1] contains a singular point (Custom: a zero or sign
/// change of p2 on the nodes).
Tabulated solve_linear_ode2(const Ode2Spec& spec, double s0, double f0, double fp0, double s1, int samples,
                            const OdeControl& control = {});

/// |p2 f'' + p1 f' + p0 f| recomputed from jets of the interpolant.
double ode2_residual(const Tabulated& t, double s);
double ode2_residual_max(const Tabulated& t, int probes);

/// f = C+ R^m+ + C- R^m-
struct PowerLaw {
  double Cp = 1, Cm = 1, mp = 0, mm = 0;
};

/// A F(chi1,chi2;chi3;X) + B X^{1-chi3} F(chi1-chi3+1, chi2-chi3+1; 2-chi3; X), |X| < 1.
struct GaussSolution {
  double A = 1, B = 0;
  ChiConstants chi = chi_constants();
  double H0 = 1.0;
};

using FModel = std::variant<PowerLaw, GaussSolution, FgtModel, Tabulated>;
std::string fmodel_kind(const FModel& m);

/// f as a jet of R along direction 0 (f(R) models only).
Jet fmodel_jet(const FModel& m, double R, int order);

struct FPoint {
  double R = 0, T = 0, P = 0;
};
/// f, df/dR, df/dT, df/dP.
FDerivs fmodel_derivatives(const FModel& m, const FPoint& x);

struct LcdmReconstruction {
  LcdmSpec spec;
  ChiConstants chi;
  Tabulated model;
  double X_start = 0, X_end = 0;  // X at zeta1 and zeta0
};

/// Initial data F(chi1, chi2; chi1 + chi2 + 1 - chi3; 1 - X) at X(zeta1) from
/// the series, then propagation of the Gauss equation to X(zeta0).
LcdmReconstruction reconstruct_lcdm(const LcdmSpec& s, const ChiConstants& chi, double zeta0 = 0.0,
                                    double zeta1 = 3.0, int samples = 4001,
                                    const OdeControl& control = OdeControl{1e-12, 1e-14});

/// f - [-18 q (q'' + 4q') f_RR + 6 (q + q'/2) f_R + 2 rho0 a0^{-3(1+varpi)} e^{-3(1+varpi) zeta}]
/// at R = 3q' + 12q, for q given as an expression in zeta.
double f1gen_residual(const FModel& m, const Expr& q, double rho0, double varpi, double a0, double zeta);

struct F1genScan {
  double max = 0;
  double worst_zeta = 0;
  std::vector<double> zeta, residual;
};
/// Residual on n equally spaced points; throws if R(zeta) is not monotone.
F1genScan f1gen_scan(const FModel& m, const Expr& q, double rho0, double varpi, double a0, double zeta0,
                     double zeta1, int n);

enum class H0Convention { Inverse, Linear };
const char* h0_convention_name(H0Convention c);

/// a(t) = a0 (t_s - t)^{-H0}; H is computed from jets of a.
struct RipScale {
  double a0 = 1, t_s = 1, H0 = 0;
  double a(double t) const;
  double H(double t) const;
};

struct EulerReconstruction {
  double w_ph = 0, H0 = 0, A = 0, B = 0;
  double discriminant = 0;  // (1 - A)^2 - 4B
  bool complex_roots = false;
  std::complex<double> m_plus, m_minus;
  PowerLaw model;  // set for real roots
  RipScale rip;
};

/// H0 = 1/3(1 + w) (inverse) or (1 + w)/3 (linear), A = -H0(1 + H0),
/// B = (1 + 2H0)/2, 2m = 1 - A ± sqrt((1 - A)^2 - 4B).
EulerReconstruction euler_reconstruct(double w_ph, H0Convention c = H0Convention::Inverse, double t_s = 1.0,
                                      double a0 = 1.0);

/// m^2 + (A - 1) m + B
std::complex<double> indicial_residual(double A, double B, std::complex<double> m);

}  // namespace offdiag
