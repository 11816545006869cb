#pragma once
// F(P) + G(T) de Sitter reconstruction and the redshift-space residuals.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/jet.hpp"

namespace offdiag {

/// Exponent set of the homogeneous de Sitter solutions.
struct FgtExponents {
  std::vector<double> real;
  double pair_re = 0, pair_im = 0;  // P^{re} [cos(im ln P), sin(im ln P)]; im = 0 drops the pair
  double linear = 3.0;              // F has +linear xi P, G has -linear xi T

  /// b1 = -1.327, b2 = 3.414, b3 = 1.38: {b1}, (b2 ± i b3)/3.
  static FgtExponents printed();
};

inline constexpr double kFgtB1 = -1.327;
inline constexpr double kFgtB2 = 3.414;
inline constexpr double kFgtB3 = 1.38;

struct FgtCoefficients {
  std::vector<double> real;  // one per real exponent
  double cos = 0, sin = 0, constant = 0;
};

struct FgtModel {
  FgtExponents e = FgtExponents::printed();
  FgtCoefficients F, G;
  double xi = 1.0, H0 = 1.0, kappa2 = 1.0;

  double P0() const;  // -9 H0^4 xi / kappa2
  double T0() const;  // -3 H0^2 xi / kappa2
};

/// Model with the printed form: c = (c1..c4), ct = (c~1..c~4).
FgtModel fgt_printed_model(const std::array<double, 4>& c, const std::array<double, 4>& ct, double xi,
                         double H0 = 1.0, double kappa2 = 1.0);

enum class FgtWhich { F, G };

/// F(P) or G(T) in the normalized variables; arg must be positive.
double fgt_eval(const FgtModel& m, double arg, FgtWhich which);
Jet fgt_jet(const FgtModel& m, const Jet& arg, FgtWhich which);

using ZField = std::function<Jet(double z, int order)>;
ZField zfield(const Expr& e);  // expression in z
ZField zconstant(double v);

struct CeqModels {
  ZField f, G, F1;  // f, G and dF/dP as functions of z
  double kappa2 = 1.0;
};

struct CeqResidual {
  double e1 = 0, e2 = 0, e3 = 0;
};

/// The three redshift-space equations with u = 1 + z:
///   3H^2 + (f + G)/2 - (3/2)(3H^2 - uHH') s - (3/2) H^2 u s' - kappa2 rho
///   -3H^2 + uHH' - (1/2){f + G - (3H^2 - uHH') s + (3uH^2 - uHH') s' + u^2 s''}
///   F1' s - rho f'
/// The operator missing between the last two terms of the first equation is
/// taken as a minus.
CeqResidual ceq_residual(const CeqModels& m, const ZField& H, const ZField& rho, const ZField& varsigma, double z);

struct FgtRoots {
  std::vector<double> poly;                   // characteristic cubic, highest degree first
  std::vector<std::complex<double>> roots;    // all roots
  std::vector<std::complex<double>> nonzero;  // roots without the constant mode
  double linear = 0;                          // coefficient of xi P in the particular solution
  std::vector<std::complex<double>> printed;    // {b1, (b2 ± i b3)/3}
  double mismatch = 0;                        // Hausdorff distance between printed and nonzero roots
  bool match = false;                         // mismatch <= 0.01
};

/// Substitutes F = P^b, varsigma = rho dF/dP on the de Sitter background
/// (H = 1, P = T = (1+z)^3) into the sum of the first two redshift equations,
/// fits the polynomial in b and solves it.
FgtRoots fgt_characteristic_roots();

/// FGT model on the derived exponents.
FgtModel fgt_derived_model(const FgtRoots& r, const std::vector<double>& c, double constant, double xi,
                           double H0 = 1.0, double kappa2 = 1.0);

}  // namespace offdiag
