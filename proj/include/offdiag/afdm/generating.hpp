#pragma once
// Generating data, the generating-function redefinition and the AFDM
// coefficients h3, h4, n_k, w_k.
//
// Redefinition: (Phi^2)_t / |vU| = (PhiHat^2)_t / Lambda, integrated as
//   Lambda Phi^2 = PhiHat^2 |vU| - int_{t0}^{t} PhiHat^2 |vU|_t ds.
// Coefficients (s = eps3 eps4 fixed so that h4 < 0 < h3):
//   h3 = PhiHat^2 / (4 |Lambda|),
//   h4 = (Phi_t / Phi)(h3_t / h3) / (2 s vU),
//   n_k = 1n_k + 2n_k int_{t0}^{t} h4 / |h3|^{3/2} ds,
//   w_k = d_k Phi / Phi_t.

#include <array>
#include <memory>
#include <stdexcept>

#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/grid.hpp"
#include "offdiag/nageometry/dmetric.hpp"

namespace offdiag {

class AfdmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OmegaMode { Unit, InverseH4 };
enum class Branch { Torsionful, LeviCivita };
enum class Direction { Forward, Inverse };

const char* branch_name(Branch b);
const char* omega_mode_name(OmegaMode m);

struct GeneratingData {
  Expr psi;          // h-part: g1 = g2 = exp(psi); empty selects the Poisson solve
  Expr psiBoundary;  // Dirichlet data for the Poisson solve (default 0)
  Expr hUpsilon;     // default: Lambda
  Expr vUpsilon;     // default: Lambda
  Expr PhiHat;       // torsionful branch
  Expr PhiCheck;     // Levi-Civita branch
  double Lambda = 1.0;
  std::array<Expr, 2> n1fun;  // 1n_k(x); empty means 0
  std::array<Expr, 2> n2fun;  // 2n_k(x); empty means 0
  Expr nPotential;            // LC branch: n_k = d_k n
  Expr aFactor;               // scale factor a(x, t) for polarizations
  Expr aPrime;                // prime FLRW factor; defaults to aFactor
  int eps3 = 0, eps4 = 0;     // 0 selects the Lorentzian sign choice
  OmegaMode omegaMode = OmegaMode::Unit;  // 1/|h4| breaks e_i omega = 0 off the LC branch
  double t0 = 0.0;            // lower limit of the time integrals
};

/// Jet of Phi^2 from PhiHat and the v-source.
Jet phi_squared_jet(const JetField& PhiHat, const Expr& vUpsilon, double Lambda, double t0, const Point3& p,
                    int order);

/// Jet of PhiHat^2 recovered from Phi, using the relation at t0 and its t-derivative.
Jet phihat_squared_jet(const JetField& Phi, const Expr& vUpsilon, double Lambda, double t0, const Point3& p,
                       int order);

/// Samples of Phi (forward) or PhiHat (inverse) on the grid; the positive root is returned.
Field3 redefine_generating(const Expr& in, const Expr& vUpsilon, double Lambda, const Grid3& grid, Direction dir,
                           double t0);

/// Coefficient jets at one point, all of the requested order.
struct CoefficientJets {
  Jet Phi, h3, h4;
  Jet w[2];
};

struct AfdmCoefficients {
  Branch branch = Branch::Torsionful;
  int sign = -1;  // s = eps3 eps4; eq2m holds with the source s * vUpsilon
  JetField Phi, h3, h4, n1, n2, w1, w2;
  /// Direct access without going through the per-field closures.
  std::function<CoefficientJets(const Point3&, int)> local;
};

/// Builds the coefficient fields and validates them on the grid nodes:
/// nonzero Phi_t, positive radicand, h3 > 0 > h4, constant source sign.
AfdmCoefficients build_coefficients(const GeneratingData& g, const Grid3& grid);

/// The closed form printed next to the chain (diagnostic only):
/// (PhiHat^2)_t / 8 * [PhiHat^2 |vU| + int PhiHat^2 |vU|_t]^{-1}.
double printed_h4(const GeneratingData& g, const Point3& p);

}  // namespace offdiag
