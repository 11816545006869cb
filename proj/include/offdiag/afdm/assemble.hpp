#pragma once
// Assembled AFDM metrics: the torsionful family, the Levi-Civita branch and
// small epsilon-deformations of a rescaled FLRW metric.

#include <optional>

#include "offdiag/afdm/generating.hpp"
#include "offdiag/fieldkit/poisson.hpp"

namespace offdiag {

struct AFDMSolution {
  DMetric metric;
  Branch branch = Branch::Torsionful;
  int source_sign = -1;  // eq2m holds with the source source_sign * vUpsilon
  AfdmCoefficients coeffs;
  GeneratingData data;
  Grid3 grid;
  /// Set when psi came from the Poisson solve instead of a closed form.
  std::optional<PoissonResult> psi_grid;
  Rect psi_domain;
};

/// g1 = g2 = exp(psi), v-block and N-connection from build_coefficients,
/// omega = 1 or |h4|^{-1/2}. Throws unless the metric is Lorentzian on the grid.
AFDMSolution assemble_torsionful(const GeneratingData& g, const Grid3& grid);

/// Levi-Civita branch from PhiCheck: h3 = PhiCheck^2/4|Lambda|,
/// h4 = -(PhiCheck_t)^2/(|Lambda| PhiCheck^2), w_i = d_i PhiCheck/PhiCheck_t,
/// n_i = d_i n, omega = 1. Rejects generating functions whose w is not curl-free.
AFDMSolution assemble_lc(const GeneratingData& g, const Grid3& grid);

/// sup over grid nodes of |d_1 w_2 - d_2 w_1|.
double curl_w(const DMetric& m, const Grid3& grid);

/// A(x1, x2, t) = line integral of w_i dx^i from (x1lo, x2lo) along x1 then x2.
double lc_potential(const AFDMSolution& s, const Point3& p);

struct Polarizations {
  double eta1 = 1, eta2 = 1, eta3 = 1, eta4 = 1;
  double h3hat = 1;
};

/// eta_i = a^-2 e^psi, eta_3 = a_prime^-2 h3, eta_4 = 1, h3hat = h3 / (a^2 |h4|).
Polarizations polarizations(const AFDMSolution& s, const Point3& p);

/// a^2 [(dx1)^2 + (dx2)^2] + a^2 (1 + eps chi3)(dy3 + eps n_i dx^i)^2 - (dt + eps w_i dx^i)^2.
DMetric epsilon_family(const AFDMSolution& base, double eps, const Expr& chi3, const std::array<Expr, 2>& nCheck,
                       const std::array<Expr, 2>& wCheck);
DMetric epsilon_family(const Expr& a, double eps, const Expr& chi3, const std::array<Expr, 2>& nCheck,
                       const std::array<Expr, 2>& wCheck);

}  // namespace offdiag
