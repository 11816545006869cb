#pragma once
// Matter-instability diagnostics: the constant-interior trace relation, the
// damped-oscillator criterion, linear perturbation evolution and the
// energy-momentum divergence.

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "offdiag/afdm/assemble.hpp"
#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/ode.hpp"
#include "offdiag/reconstruct/reconstruct.hpp"

namespace offdiag {

class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// -2f + R f_R - kappa2 T at x.
double trace_background_residual(const FModel& m, const FPoint& x, double kappa2);

struct TraceRoot {
  double R0 = 0, residual = 0;
  int iterations = 0;
};
/// Bisection for R0 in [lo, hi] with T = T0 (and P = P0 for F(P) + G(T) models).
TraceRoot solve_trace_background(const FModel& m, double T0, double kappa2, double lo, double hi, double P0 = 0.0);

struct StabilityInputs {
  double Xi0 = 0, P0 = 0, T0 = 0;
  double f1_1 = 1;  // df1/dR
  double F1 = 0;    // dF/dP
  double F2 = 1;    // d2F/dP2
  double mL = 0;    // matter Lagrangian
  double kappa2 = 1;
  std::optional<double> source_override;

  /// 2 Xi0/T0 + 4 (P0/T0)(f1_1/F2)
  double omega2() const;
  /// 2 f1_1/(T0 F2) - (P0/T0)(F1/F2)(2 mL - T0) unless overridden.
  double source() const;
};

struct OscillatorCriterion {
  bool pass = false;
  double margin = 0;  // Xi0 + 2 P0 f1_1 / F2 - T0
};
OscillatorCriterion oscillator_criterion(const StabilityInputs& s);

enum class PerturbationClass { Trivial, Damped, Oscillatory, Growing };
const char* perturbation_class_name(PerturbationClass c);

struct PerturbationResult {
  Trajectory traj;  // columns dP, dPdot, envelope
  OdeStatus status = OdeStatus::Completed;
  std::string message;
  double omega2 = 0, source = 0;
  double slope = 0;  // least-squares slope of ln envelope over the final third
  PerturbationClass cls = PerturbationClass::Trivial;
};

using TimeFn = std::function<double(double)>;

/// dP'' + 3H dP' + omega2 dP = S dR(t); the envelope is
/// sqrt(dP^2 + dP'^2/|omega2|) (|omega2| replaced by 1 when it vanishes).
/// Growing if the slope exceeds 1e-3, damped below -1e-3.
PerturbationResult evolve_perturbation(const StabilityInputs& s, const TimeFn& H, double dP0, double dPdot0,
                                       double t0, double t1, int samples, const TimeFn& dR = nullptr,
                                       const OdeControl& control = {});

/// For constant H with omega2 > 9H^2/4: max over samples of
/// |A(t) / (A(0) e^{-3Ht/2}) - 1| with A^2 = dP^2 + ((dP' + 3H dP/2) / W)^2
/// and W^2 = omega2 - 9H^2/4.
double damped_envelope_error(const PerturbationResult& r, double H);

struct DivergenceReport {
  std::string branch;  // "bianchi" or "flrw"
  double sup = 0, rms = 0;
  double worst = 0;  // t for flrw, first coordinate of the worst node otherwise
  long count = 0;
  std::vector<double> t, lhs, rhs;  // flrw only
};

/// Contracted Bianchi identity of the Levi-Civita curvature on the grid.
DivergenceReport divergence_residual(const AFDMSolution& s, const Grid3& region);

struct FlrwFluid {
  Expr H, rho, p;  // functions of t
};

/// Time component of the divergence relation on a homogeneous background with
/// perfect fluid, multiplied through by f_T:
///   (f_T + kappa2) C  vs  f_T (T'/2 + p' + 2C) - (rho - p) f_T'
/// where C = -(rho' + 3H(rho + p)) and T = -rho + 3p. f_T comes from the
/// G(T) part of an F(P) + G(T) model and vanishes for f(R) models.
DivergenceReport divergence_residual(const FlrwFluid& d, const FModel& m, double kappa2, double t0, double t1,
                                     int n);

}  // namespace offdiag
