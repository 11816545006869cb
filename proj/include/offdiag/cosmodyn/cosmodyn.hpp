#pragma once
// Background cosmology: Big Rip law, coupled dark energy / dark matter,
// effective FLRW residuals, e-folding maps and power-law curvature inversion.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/ode.hpp"

namespace offdiag {

class CosmoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// H = 2 / (3 (1 + varpi)(t_s - t)) as printed; negative before the Rip for
/// varpi < -1, the expanding solution is |H|.
double big_rip_hubble(double varpi, double t_s, double t);

struct BigRipFit {
  double rho0 = 0, t_s = 0;  // t_s located by the integrator
  double exponent = 0;       // slope of ln H against ln(t_s - t)
  double t_s_exact = 0;      // 2 / (3 |1 + varpi| H0) for comparison
  std::vector<double> dt, H;
};

/// Integrates rho' = -3 H (1 + varpi) rho with 3 H^2 = kappa2 rho up to the
/// singularity and fits the divergence exponent of H over
/// t_s - t in [1e-6, 1e-2] t_s.
BigRipFit big_rip_exponent(double varpi, double kappa2, double rho0);

enum class DmCoupling { DarkEnergy, DarkMatter };

struct FluidSpec {
  double varpi = -4.0 / 3.0;
  double Q = 1.0;
  double rho0_DE = 0.75;
  double rho0_DM = 0.25;
  double kappa2 = 3.0;
  double a0 = 1.0;
  /// Source of the dark-matter equation: Q rho_DE (default) or Q rho_DM as printed.
  DmCoupling coupling = DmCoupling::DarkEnergy;
};

struct AttractorReport {
  bool converged = false;  // relative std over the last 10% below 1e-3
  double H_final = 0, ratio_final = 0;
  double H_target = 0;             // -Q / 3(1 + varpi)
  double ratio_target_signed = 0;  // 1 + varpi
  double ratio_target_abs = 0;     // -(1 + varpi)
  double H_rel_std = 0, ratio_rel_std = 0;
  double H_error = 0;             // |H_final / H_target - 1|
  double ratio_error_signed = 0;  // relative to 1 + varpi
  double ratio_error_abs = 0;     // relative to |1 + varpi|
};

struct DedmResult {
  Trajectory traj;  // columns a, H, rho_DE, rho_DM, residual1, residual2
  OdeStatus status = OdeStatus::Completed;
  std::string message;
  double stop_t = 0;
  AttractorReport attractor;
  /// max |residual1| and |residual2| over interior samples
  double bookkeeping_residual = 0, second_flrw_residual = 0;
};

/// Expanding branch H = sqrt(kappa2 (rho_DE + rho_DM) / 3). residual1 is
/// d ln rho_DE / dt + 3H(1 + varpi) + Q and residual2 is
/// 2H' + 3H^2 + kappa2 varpi rho_DE, both with derivatives by finite
/// differences of the samples.
DedmResult evolve_coupled_dedm(const FluidSpec& f, double t0, double t1, int samples,
                               const OdeControl& control = {});

/// Fixed point values (H, rho_DE, rho_DM) of the coupled system.
struct DedmFixedPoint {
  double H = 0, rho_DE = 0, rho_DM = 0;
  double jacobian[2][2] = {};
  double eig[2] = {};  // real parts
  bool saddle = false;
};
DedmFixedPoint dedm_fixed_point(const FluidSpec& f);

/// Residuals of both conservation laws at H = -Q/3(1+varpi), rho_DM = r rho_DE.
std::array<double, 2> dedm_fixed_point_residual(const FluidSpec& f, double ratio);

/// Least-squares slope of ln|y| against ln|x|.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Derivative of uniformly sampled data by five-point stencils.
std::vector<double> sample_derivative(const std::vector<double>& y, double h);

using TimeDensity = std::function<double(double t, double a)>;

struct FlrwResiduals {
  std::vector<double> r1, r2;
  double max1 = 0, max2 = 0;
};

/// 3H^2 - kappa2 rho_m - Lambda and 2H' + kappa2 (rho_m + p_m) + (1 + varpiLambda) Lambda
/// along a trajectory with columns a and H on uniform samples.
FlrwResiduals effective_flrw_residual(const Trajectory& traj, const TimeDensity& rho_m, const TimeDensity& p_m,
                                      double LambdaCheck, double kappa2 = 1.0, double varpiLambda = -1.0);

struct LcdmSpec {
  double H0 = 1.0;
  double rho0 = 0.0;
  double a0 = 1.0;
  double kappa2 = 1.0;
  double xi() const { return kappa2 * rho0 / (3.0 * H0 * H0); }
};

struct LcdmPoint {
  double q = 0, Rhat = 0, X = 0;
};

/// q = H0^2 + (kappa2/3) rho0 a0^-3 e^{-3 zeta}, Rhat = 3 q' + 12 q, X = -3 + Rhat / 3H0^2.
LcdmPoint efolding_lcdm(const LcdmSpec& s, double zeta);

/// The corrected q(zeta) as an expression in zeta.
Expr lcdm_q_expr(const LcdmSpec& s);

/// Rhat = 3 dq/dzeta + 12 q for q given as an expression in zeta.
double cscurv(const Expr& q, double zeta);

/// Rhat for q = q_s e^{-c zeta} + q_p e^{c zeta}.
double powerlaw_rhat(double c, double q_s, double q_p, double zeta);

/// Positive roots u = e^{c zeta} of (12 + 3c) q_p u^2 - Rhat u + (12 - 3c) q_s = 0,
/// ascending. c = 4 gives Rhat / (24 q_p); c = -4 is solved as a linear equation.
std::vector<double> invert_powerlaw(double Rhat, double c, double q_s = 1.0, double q_p = 1.0);

}  // namespace offdiag
