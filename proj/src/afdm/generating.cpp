#include "offdiag/afdm/generating.hpp"

#include <cmath>
#include <sstream>

#include "offdiag/fieldkit/quadrature.hpp"

namespace offdiag {

const char* branch_name(Branch b) { return b == Branch::Torsionful ? "torsionful" : "levi-civita"; }

const char* omega_mode_name(OmegaMode m) { return m == OmegaMode::Unit ? "unit" : "inverse-h4"; }

namespace {

JetBinding at(const Point3& p, double t) { return JetBinding::spacetime(p[0], p[1], t); }

std::string where(const Point3& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(x1=" << p[0] << ", x2=" << p[1] << ", t=" << p[2] << ")";
  return os.str();
}

/// Jet of a function of x only, evaluated on the t0 slice.
Jet spatial_part(const Jet& j) {
  Jet out = j;
  for (int i = 0; i < jet_size(j.order()); ++i)
    if (jet_multi_index(i).n[2] != 0) out.coeff(i) = 0.0;
  return out;
}

Jet source_jet(const Expr& vU, const Point3& p, double t, int order) {
  Jet u = vU.jet(at(p, t), order);
  if (u.value() == 0.0) throw AfdmError("zero v-source at " + where({p[0], p[1], t}));
  return u;
}

bool is_zero(const Expr& e) {
  return e.empty() || (e.root()->kind == NodeKind::Const && e.root()->value == 0.0);
}

}  // namespace

Jet phi_squared_jet(const JetField& PhiHat, const Expr& vU, double Lambda, double t0, const Point3& p, int order) {
  if (Lambda == 0.0) throw AfdmError("Lambda must be nonzero");
  Jet ph = PhiHat(p, order);
  Jet out = ph * ph * abs(source_jet(vU, p, p[2], order));
  if (vU.depends_on(Var::T)) {
    auto integrand = [&](double s, int ord) {
      Point3 q{p[0], p[1], s};
      Jet h = PhiHat(q, ord);
      Jet u = abs(source_jet(vU, p, s, ord + 1)).derivative(kT);
      return h * h * u;
    };
    out -= time_integral_jet(integrand, t0, p[2], order);
  }
  return out / Lambda;
}

Jet phihat_squared_jet(const JetField& Phi, const Expr& vU, double Lambda, double t0, const Point3& p, int order) {
  if (Lambda == 0.0) throw AfdmError("Lambda must be nonzero");
  Point3 base{p[0], p[1], t0};
  Jet f0 = Phi(base, order);
  Jet out = spatial_part(Lambda * f0 * f0 / abs(source_jet(vU, p, t0, order)));
  auto integrand = [&](double s, int ord) {
    Point3 q{p[0], p[1], s};
    Jet f = Phi(q, ord + 1);
    Jet f2t = (f * f).derivative(kT);
    return Lambda * f2t / abs(source_jet(vU, p, s, ord));
  };
  out += time_integral_jet(integrand, t0, p[2], order);
  return out;
}

Field3 redefine_generating(const Expr& in, const Expr& vU, double Lambda, const Grid3& grid, Direction dir,
                           double t0) {
  grid.validate();
  JetField f = field_from_expr(in);
  Field3 out(grid);
  for (int i = 0; i < grid.x1.n; ++i)
    for (int j = 0; j < grid.x2.n; ++j)
      for (int k = 0; k < grid.t.n; ++k) {
        Point3 p = grid.point(i, j, k);
        double sq = dir == Direction::Forward ? phi_squared_jet(f, vU, Lambda, t0, p, 0).value()
                                              : phihat_squared_jet(f, vU, Lambda, t0, p, 0).value();
        if (!(sq > 0.0))
          throw AfdmError("negative radicand in the generating-function redefinition at " + where(p) +
                          ": the sign of Lambda does not match the source");
        out.at(i, j, k) = std::sqrt(sq);
      }
  return out;
}

namespace {

/// Shared state behind the coefficient closures. Evaluation is memoized for
/// the last few points; instances are not meant to be shared across threads.
class Generator {
 public:
  Generator(const GeneratingData& g, Branch branch, int sign) : g_(g), branch_(branch), s_(sign) {
    phihat_ = field_from_expr(branch == Branch::Torsionful ? g.PhiHat : g.PhiCheck);
    vU_ = g.vUpsilon.empty() ? Expr::constant(g.Lambda) : g.vUpsilon;
  }

  CoefficientJets local(const Point3& p, int order) {
    for (auto& c : cache_)
      if (c.valid && c.order == order && c.p == p) return c.v;
    CoefficientJets v = compute(p, order);
    auto& slot = cache_[next_];
    next_ = (next_ + 1) % cache_.size();
    slot = {true, p, order, v};
    return v;
  }

  Jet n_integral(const Point3& p, int order) {
    if (nint_.valid && nint_.order == order && nint_.p == p) return nint_.v;
    auto integrand = [&](double s, int ord) {
      CoefficientJets c = local({p[0], p[1], s}, ord);
      return c.h4 / pow(abs(c.h3), 1.5);
    };
    Jet v = time_integral_jet(integrand, g_.t0, p[2], order);
    nint_ = {true, p, order, v};
    return v;
  }

  Jet n(int k, const Point3& p, int order) {
    if (branch_ == Branch::LeviCivita) {
      if (!g_.nPotential.empty()) return g_.nPotential.jet(at(p, p[2]), order + 1).derivative(k);
      if (!g_.n1fun[static_cast<std::size_t>(k)].empty())
        return g_.n1fun[static_cast<std::size_t>(k)].jet(at(p, p[2]), order);
      return Jet(0.0, order);
    }
    const Expr& a1 = g_.n1fun[static_cast<std::size_t>(k)];
    const Expr& a2 = g_.n2fun[static_cast<std::size_t>(k)];
    Jet out = a1.empty() ? Jet(0.0, order) : a1.jet(at(p, p[2]), order);
    if (!is_zero(a2)) out += a2.jet(at(p, p[2]), order) * n_integral(p, order);
    return out;
  }

  const Expr& source() const { return vU_; }
  const JetField& phihat() const { return phihat_; }

 private:
  CoefficientJets compute(const Point3& p, int k) {
    if (k + 1 > kMaxJetOrder) throw AfdmError("coefficient jets limited to order " + std::to_string(kMaxJetOrder - 1));
    CoefficientJets c;
    const double L = g_.Lambda;
    if (branch_ == Branch::LeviCivita) {
      Jet F = phihat_(p, k + 1);
      Jet Ft = F.derivative(kT);
      Jet Fk = F.truncated(k);
      c.Phi = Fk;
      c.h3 = (F * F / (4.0 * std::fabs(L))).truncated(k);
      c.h4 = -(Ft * Ft) / (std::fabs(L) * Fk * Fk);
      for (int i = 0; i < 2; ++i) c.w[i] = F.derivative(i) / Ft;
      return c;
    }
    if (k + 2 > kMaxJetOrder && vU_.depends_on(Var::T))
      throw AfdmError("a time-dependent v-source limits torsionful coefficient jets to order " +
                      std::to_string(kMaxJetOrder - 2));
    Jet ph = phihat_(p, k + 1);
    Jet P2 = phi_squared_jet(phihat_, vU_, L, g_.t0, p, k + 1);
    if (!(P2.value() > 0.0))
      throw AfdmError("negative radicand in the generating-function redefinition at " + where(p));
    Jet Phi = sqrt(P2);
    Jet h3 = ph * ph / (4.0 * std::fabs(L));
    Jet Pt = Phi.derivative(kT);
    Jet U = vU_.jet(at(p, p[2]), k);
    c.Phi = Phi.truncated(k);
    c.h3 = h3.truncated(k);
    c.h4 = (Pt / c.Phi) * (h3.derivative(kT) / c.h3) / (2.0 * s_ * U);
    for (int i = 0; i < 2; ++i) c.w[i] = Phi.derivative(i) / Pt;
    return c;
  }

  struct Entry {
    bool valid = false;
    Point3 p{};
    int order = 0;
    CoefficientJets v;
  };
  struct NEntry {
    bool valid = false;
    Point3 p{};
    int order = 0;
    Jet v;
  };

  GeneratingData g_;
  Branch branch_;
  int s_;
  JetField phihat_;
  Expr vU_;
  std::array<Entry, 4> cache_{};
  std::size_t next_ = 0;
  NEntry nint_;
};

int sign_of(double v) { return v > 0 ? 1 : -1; }

std::vector<int> sample_nodes(const Axis& a) {
  int stride = std::max(1, (a.n - 1) / 8);
  std::vector<int> v;
  for (int i = 0; i < a.n; i += stride) v.push_back(i);
  if (v.back() != a.n - 1) v.push_back(a.n - 1);
  return v;
}

}  // namespace

AfdmCoefficients build_coefficients(const GeneratingData& g, const Grid3& grid) {
  grid.validate();
  if (g.Lambda == 0.0) throw AfdmError("Lambda must be nonzero");
  AfdmCoefficients out;
  const bool lc = g.PhiHat.empty();
  if (lc && g.PhiCheck.empty()) throw AfdmError("generating data needs PhiHat or PhiCheck");
  out.branch = lc ? Branch::LeviCivita : Branch::Torsionful;
  Expr vU = g.vUpsilon.empty() ? Expr::constant(g.Lambda) : g.vUpsilon;

  // Lorentzian choice: s = -sign(Lambda vU) (torsionful), s = -sign(Lambda) (LC)
  auto n1 = sample_nodes(grid.x1), n2 = sample_nodes(grid.x2), nt = sample_nodes(grid.t);
  int usign = 0;
  if (!lc) {
    for (int i : n1)
      for (int j : n2)
        for (int k : nt) {
          Point3 p = grid.point(i, j, k);
          double u = vU.eval(p[0], p[1], p[2]);
          if (u == 0.0) throw AfdmError("zero v-source at " + where(p));
          if (usign == 0) usign = sign_of(u);
          if (sign_of(u) != usign) throw AfdmError("v-source changes sign on the working region near " + where(p));
        }
  }
  int s = lc ? -sign_of(g.Lambda) : -sign_of(g.Lambda) * usign;
  if (g.eps3 != 0 || g.eps4 != 0) {
    if (std::abs(g.eps3) != 1 || std::abs(g.eps4) != 1) throw AfdmError("eps3 and eps4 must be +1 or -1");
    s = g.eps3 * g.eps4;
  }
  out.sign = s;

  auto gen = std::make_shared<Generator>(g, out.branch, s);
  out.local = [gen](const Point3& p, int order) { return gen->local(p, order); };
  out.Phi = [gen](const Point3& p, int order) { return gen->local(p, order).Phi; };
  out.h3 = [gen](const Point3& p, int order) { return gen->local(p, order).h3; };
  out.h4 = [gen](const Point3& p, int order) { return gen->local(p, order).h4; };
  out.w1 = [gen](const Point3& p, int order) { return gen->local(p, order).w[0]; };
  out.w2 = [gen](const Point3& p, int order) { return gen->local(p, order).w[1]; };
  out.n1 = [gen](const Point3& p, int order) { return gen->n(0, p, order); };
  out.n2 = [gen](const Point3& p, int order) { return gen->n(1, p, order); };

  for (int i : n1)
    for (int j : n2)
      for (int k : nt) {
        Point3 p = grid.point(i, j, k);
        JetField ph = field_from_expr(lc ? g.PhiCheck : g.PhiHat);
        double phv = ph(p, 0).value();
        if (phv == 0.0) throw AfdmError("generating function vanishes at " + where(p));
        Jet P = lc ? ph(p, 1) : sqrt(phi_squared_jet(ph, vU, g.Lambda, g.t0, p, 1));
        if (!std::isfinite(P.value()))
          throw AfdmError("negative radicand in the generating-function redefinition at " + where(p) +
                          ": the sign of Lambda does not match the source");
        if (std::fabs(P.d(kT)) < 1e-12) throw AfdmError("Phi_t vanishes at " + where(p) + " (h4 degenerate)");
        CoefficientJets c = gen->local(p, 0);
        if (!(c.h3.value() > 0.0)) throw AfdmError("h3 is not positive at " + where(p));
        if (!(c.h4.value() < 0.0))
          throw AfdmError("h4 is not negative at " + where(p) + ": the sign choice gives a non-Lorentzian metric");
      }
  return out;
}

double printed_h4(const GeneratingData& g, const Point3& p) {
  JetField ph = field_from_expr(g.PhiHat.empty() ? g.PhiCheck : g.PhiHat);
  Expr vU = g.vUpsilon.empty() ? Expr::constant(g.Lambda) : g.vUpsilon;
  Jet h = ph(p, 1);
  double num = (h * h).d(kT) / 8.0;
  double bracket = h.value() * h.value() * std::fabs(vU.eval(p[0], p[1], p[2]));
  if (vU.depends_on(Var::T)) {
    bracket += integrate_gl(
        [&](double s) {
          double v = ph({p[0], p[1], s}, 0).value();
          Jet u = abs(vU.jet(at(p, s), 1));
          return v * v * u.d(kT);
        },
        g.t0, p[2], 8);
  }
  return num / bracket;
}

}  // namespace offdiag
