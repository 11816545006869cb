#include "offdiag/reconstruct/fgt.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "offdiag/reconstruct/reconstruct.hpp"

namespace offdiag {

FgtExponents FgtExponents::printed() {
  FgtExponents e;
  e.real = {kFgtB1};
  e.pair_re = kFgtB2 / 3.0;
  e.pair_im = kFgtB3 / 3.0;
  e.linear = 3.0;
  return e;
}

double FgtModel::P0() const { return -9.0 * H0 * H0 * H0 * H0 * xi / kappa2; }
double FgtModel::T0() const { return -3.0 * H0 * H0 * xi / kappa2; }

FgtModel fgt_printed_model(const std::array<double, 4>& c, const std::array<double, 4>& ct, double xi, double H0,
                         double kappa2) {
  if (!(kappa2 > 0)) throw ReconstructError("kappa2 must be positive");
  FgtModel m;
  m.F = {{c[0]}, c[1], c[2], c[3]};
  m.G = {{ct[0]}, ct[1], ct[2], ct[3]};
  m.xi = xi;
  m.H0 = H0;
  m.kappa2 = kappa2;
  return m;
}

Jet fgt_jet(const FgtModel& m, const Jet& arg, FgtWhich which) {
  if (!(arg.value() > 0)) throw ReconstructError("FGT functions need a positive argument");
  const FgtCoefficients& k = which == FgtWhich::F ? m.F : m.G;
  if (k.real.size() > m.e.real.size()) throw ReconstructError("more real coefficients than exponents");
  Jet out(k.constant, arg.order());
  for (std::size_t i = 0; i < k.real.size(); ++i) out = out + k.real[i] * pow(arg, m.e.real[i]);
  if (m.e.pair_im != 0.0) {
    // the printed G uses ln P inside the sine; its own argument is used here
    Jet l = m.e.pair_im * log(arg);
    out = out + pow(arg, m.e.pair_re) * (k.cos * cos(l) + k.sin * sin(l));
  }
  double lin = which == FgtWhich::F ? m.e.linear : -m.e.linear;
  return out + lin * m.xi * arg;
}

double fgt_eval(const FgtModel& m, double arg, FgtWhich which) { return fgt_jet(m, Jet(arg, 0), which).value(); }

ZField zfield(const Expr& e) {
  return [e](double z, int order) { return e.jet(JetBinding::line(Var::Z, z), order); };
}

ZField zconstant(double v) {
  return [v](double, int order) { return Jet(v, order); };
}

CeqResidual ceq_residual(const CeqModels& m, const ZField& H, const ZField& rho, const ZField& varsigma, double z) {
  Jet h = H(z, 1);
  if (h.value() == 0.0) throw ReconstructError("H = 0 at the evaluation point");
  const double u = 1.0 + z;
  const double Hv = h.value(), Hz = h.d(kX1), H2 = Hv * Hv;
  Jet s = varsigma(z, 2);
  const double sv = s.value(), sz = s.d(kX1), szz = s.partial(2, 0, 0);
  Jet f = m.f(z, 1);
  Jet F1 = m.F1(z, 1);
  const double G = m.G(z, 0).value();
  const double r = rho(z, 0).value();
  const double fG = f.value() + G;
  const double uHH = u * Hv * Hz;

  CeqResidual out;
  out.e1 = 3.0 * H2 + 0.5 * fG - 1.5 * (3.0 * H2 - uHH) * sv - 1.5 * H2 * u * sz - m.kappa2 * r;
  out.e2 = -3.0 * H2 + uHH -
           0.5 * (fG - (3.0 * H2 - uHH) * sv + (3.0 * u * H2 - uHH) * sz + u * u * szz);
  out.e3 = F1.d(kX1) * sv - r * f.d(kX1);
  return out;
}

namespace {

std::vector<std::complex<double>> poly_roots(std::vector<double> c) {
  double scale = 0.0;
  for (double x : c) scale = std::max(scale, std::fabs(x));
  while (c.size() > 1 && std::fabs(c.front()) <= 1e-12 * scale) c.erase(c.begin());
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<std::complex<double>> out;
  if (n < 1) return out;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -c[static_cast<std::size_t>(j + 1)] / c[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](auto a, auto b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  return out;
}

double one_sided(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  double worst = 0.0;
  for (auto x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (auto y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

FgtRoots fgt_characteristic_roots() {
  // de Sitter with H = 1, kappa2 = 1, xi = 1: rho = rho0 u^3 and P = P0 u^3.
  FgtModel ref;
  const double rho0 = 3.0 * ref.xi * ref.H0 * ref.H0 / ref.kappa2;
  const double P0 = ref.P0();
  CeqModels zero{zconstant(0.0), zconstant(0.0), zconstant(0.0), ref.kappa2};
  ZField H = zconstant(ref.H0);

  // varsigma = rho dF/dP for F = H0^2 Fc(Pc), Pc = u^3; dFc is dFc/dPc
  using Slope = std::function<Jet(const Jet& Pc)>;
  auto combined = [&](const Slope& dFc, double rho_scale) {
    ZField rho = [&](double z, int order) { return rho_scale * rho0 * pow(Jet::variable(kX1, 1.0 + z, order), 3.0); };
    ZField vs = [&](double z, int order) {
      Jet Pc = pow(Jet::variable(kX1, 1.0 + z, order), 3.0);
      return rho0 * Pc * (ref.H0 * ref.H0 / P0) * dFc(Pc);
    };
    CeqResidual r = ceq_residual(zero, H, rho, vs, 0.0);
    return r.e1 + r.e2;
  };
  auto power = [](double b) -> Slope { return [b](const Jet& Pc) { return b * pow(Pc, b - 1.0); }; };

  Eigen::Matrix4d V;
  Eigen::Vector4d y;
  for (int i = 0; i < 4; ++i) {
    double b = i;
    for (int j = 0; j < 4; ++j) V(i, j) = std::pow(b, 3 - j);
    y(i) = combined(power(b), 0.0);
  }
  Eigen::Vector4d c = V.fullPivLu().solve(y);
  double check = combined(power(4.5), 0.0) - (((c(0) * 4.5 + c(1)) * 4.5 + c(2)) * 4.5 + c(3));
  if (std::fabs(check) > 1e-9) throw ReconstructError("reduced de Sitter equation is not cubic in the exponent");

  FgtRoots out;
  out.poly = {c(0), c(1), c(2), c(3)};
  out.roots = poly_roots(out.poly);
  for (auto r : out.roots)
    if (std::abs(r) > 1e-9) out.nonzero.push_back(r);

  // particular solution Fc = lin xi Pc: the residual is affine in lin
  auto slope = [xi = ref.xi](double lin) -> Slope {
    return [lin, xi](const Jet& Pc) { return Jet(lin * xi, Pc.order()); };
  };
  double r0 = combined(slope(0.0), 1.0), r1 = combined(slope(1.0), 1.0);
  out.linear = -r0 / (r1 - r0);

  out.printed = {std::complex<double>(kFgtB1, 0.0), std::complex<double>(kFgtB2 / 3.0, kFgtB3 / 3.0),
               std::complex<double>(kFgtB2 / 3.0, -kFgtB3 / 3.0)};
  out.mismatch = std::max(one_sided(out.printed, out.nonzero), one_sided(out.nonzero, out.printed));
  out.match = out.mismatch <= 0.01;
  return out;
}

FgtModel fgt_derived_model(const FgtRoots& r, const std::vector<double>& c, double constant, double xi, double H0,
                           double kappa2) {
  FgtModel m;
  m.e.real.clear();
  m.e.pair_re = m.e.pair_im = 0.0;
  for (auto x : r.nonzero) {
    if (std::fabs(x.imag()) < 1e-12)
      m.e.real.push_back(x.real());
    else if (x.imag() > 0 && m.e.pair_im == 0.0) {
      m.e.pair_re = x.real();
      m.e.pair_im = x.imag();
    }
  }
  m.e.linear = r.linear;
  m.F.real = c;
  m.F.constant = constant;
  if (m.F.real.size() > m.e.real.size()) m.F.real.resize(m.e.real.size());
  m.G = m.F;
  m.xi = xi;
  m.H0 = H0;
  m.kappa2 = kappa2;
  return m;
}

}  // namespace offdiag
