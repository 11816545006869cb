#pragma once
// Residuals of the decoupled system and the zero-torsion (LC) conditions.
//
// Decoupled system, with phi = ln|h3_t / sqrt|h3 h4||:
//   psi_11 + psi_22 = 2 hU
//   phi_t h3_t = 2 h3 h4 vU
//   n_i,tt + gamma n_i,t = 0,        gamma = (ln |h3|^{3/2} / |h4|)_t
//   beta w_i - alpha_i = 0,          alpha_i = h3_t d_i phi, beta = h3_t phi_t
//   d_i omega - w_i omega_t = 0

#include "offdiag/afdm/assemble.hpp"

namespace offdiag {

struct LcReport {
  double w_t = 0;     // w_i,t - (d_i - w_i d_t) ln sqrt|h4|
  double h3 = 0;      // (d_i - w_i d_t) ln sqrt|h3|
  double curl_w = 0;  // d_1 w_2 - d_2 w_1
  double n_t = 0;     // n_i,t
  double curl_n = 0;  // d_1 n_2 - d_2 n_1
  double tolerance = 1e-8;

  double max() const;
  bool pass() const { return max() < tolerance; }
};

/// Sup-norms of the LC conditions over the grid nodes. The v-coefficients
/// used are the full omega^2 h_a.
LcReport check_lc(const DMetric& m, const Grid3& region);
LcReport check_lc(const AFDMSolution& s, const Grid3& region);

struct SystemResiduals {
  double eq1m = 0, eq2m = 0, eq3m = 0, eq4m = 0, confeq = 0;
  double max() const;
};

/// Per-equation sup-norms over the grid nodes. The v-equation uses the signed
/// source s.source_sign * vUpsilon.
SystemResiduals system_residuals(const AFDMSolution& s, const Expr& hUpsilon, const Expr& vUpsilon,
                                 const Grid3& region);
SystemResiduals system_residuals(const AFDMSolution& s, const Grid3& region);

/// eq3m residual for n = 1n + 2n int_{t0}^{t} h4 / |h3|^{3/2} with arbitrary h3, h4.
double n_formula_residual(const Expr& h3, const Expr& h4, const Expr& n1, const Expr& n2, const Point3& p,
                          double t0);

/// (d_i - w_i d_t) f for w_i = d_i f / f_t; vanishes identically.
double w_identity_residual(const Expr& f, const Point3& p);

}  // namespace offdiag
