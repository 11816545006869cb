#include "offdiag/nageometry/dmetric.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace offdiag {

JetField field_from_expr(const Expr& e) {
  return [e](const Point3& p, int order) { return evaluate_jet(e, p, order); };
}

JetField constant_field(double v) {
  return [v](const Point3&, int order) { return Jet(v, order); };
}

DMetric DMetric::diagonal(JetField g1, JetField g2, JetField h3, JetField h4) {
  DMetric m;
  m.g1 = std::move(g1);
  m.g2 = std::move(g2);
  m.h3 = std::move(h3);
  m.h4 = std::move(h4);
  m.n1 = m.n2 = m.w1 = m.w2 = constant_field(0.0);
  m.omega = constant_field(1.0);
  return m;
}

Jet MetricJets::diag(int alpha) const {
  switch (alpha) {
    case 0: return g1;
    case 1: return g2;
    case 2: return omega * omega * h3;
    default: return omega * omega * h4;
  }
}

MetricJets evaluate_metric(const DMetric& m, const Point3& p, int order) {
  MetricJets mj;
  mj.order = order;
  mj.g1 = m.g1(p, order);
  mj.g2 = m.g2(p, order);
  mj.h3 = m.h3(p, order);
  mj.h4 = m.h4(p, order);
  mj.n[0] = m.n1(p, order);
  mj.n[1] = m.n2(p, order);
  mj.w[0] = m.w1(p, order);
  mj.w[1] = m.w2(p, order);
  mj.omega = m.omega(p, order);
  return mj;
}

Jet coord_derivative(const Jet& f, int mu) {
  switch (mu) {
    case 0: return f.derivative(kX1);
    case 1: return f.derivative(kX2);
    case 2: return Jet(0.0, f.order() - 1);
    default: return f.derivative(kT);
  }
}

Jet frame_derivative(const MetricJets& mj, const Jet& f, int alpha) {
  if (alpha >= 2) return coord_derivative(f, alpha);
  // the n_i d_3 part drops out because nothing depends on y3
  return f.derivative(alpha) - mj.w[alpha] * f.derivative(kT);
}

Mat4J coordinate_metric_jets(const MetricJets& mj) {
  Mat4J g;
  Jet zero(0.0, mj.order);
  for (auto& row : g) row.fill(zero);
  Jet v3 = mj.omega * mj.omega * mj.h3;
  Jet v4 = mj.omega * mj.omega * mj.h4;
  const Jet* gi[2] = {&mj.g1, &mj.g2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Jet v = mj.n[i] * mj.n[j] * v3 + mj.w[i] * mj.w[j] * v4;
      if (i == j) v += *gi[i];
      g[i][j] = v;
    }
    g[i][2] = g[2][i] = mj.n[i] * v3;
    g[i][3] = g[3][i] = mj.w[i] * v4;
  }
  g[2][2] = v3;
  g[3][3] = v4;
  return g;
}

Mat4 values(const Mat4J& a) {
  Mat4 v{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) v[i][j] = a[i][j].value();
  return v;
}

Mat4 coordinate_metric(const DMetric& m, const Point3& p) {
  return values(coordinate_metric_jets(evaluate_metric(m, p, 0)));
}

double determinant(const Mat4& a) {
  Mat4 m = a;
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < 4; ++r) {
      double f = m[r][c] / m[c][c];
      for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

Mat4J inverse(const Mat4J& a, double* det_out) {
  double det = determinant(values(a));
  if (det_out) *det_out = det;
  if (!(std::fabs(det) >= kDegenerateDet)) {
    std::ostringstream os;
    os << "degenerate metric: |det g| = " << std::fabs(det) << " below " << kDegenerateDet;
    throw DegenerateMetric(os.str());
  }
  int order = a[0][0].order();
  Mat4J m = a, inv;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) inv[i][j] = Jet(i == j ? 1.0 : 0.0, order);
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::fabs(m[r][c].value()) > std::fabs(m[piv][c].value())) piv = r;
    std::swap(m[piv], m[c]);
    std::swap(inv[piv], inv[c]);
    Jet p = reciprocal(m[c][c]);
    for (int k = 0; k < 4; ++k) {
      m[c][k] *= p;
      inv[c][k] *= p;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      Jet f = m[r][c];
      for (int k = 0; k < 4; ++k) {
        m[r][k] -= f * m[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

NAdaptedFrame nadapted_frame(const MetricJets& mj) {
  NAdaptedFrame f;
  for (int i = 0; i < 4; ++i) f.E[i][i] = f.Theta[i][i] = 1.0;
  for (int i = 0; i < 2; ++i) {
    for (int a = 2; a < 4; ++a) {
      double N = mj.N(a, i).value();
      f.E[i][a] = -N;
      f.Theta[a][i] = N;
    }
  }
  return f;
}

NAdaptedFrame nadapted_frame(const DMetric& m, const Point3& p) { return nadapted_frame(evaluate_metric(m, p, 0)); }

Tensor3J anholonomy(const MetricJets& mj) {
  Tensor3J W;
  Jet zero(0.0, mj.order - 1);
  for (auto& a : W)
    for (auto& b : a) b.fill(zero);
  for (int a = 2; a < 4; ++a) {
    for (int i = 0; i < 2; ++i) {
      for (int b = 2; b < 4; ++b) {
        // [e_i, e_b] = d_b N_i^a e_a
        Jet d = coord_derivative(mj.N(a, i), b);
        W[a][i][b] = d;
        W[a][b][i] = -d;
      }
    }
    Jet om = frame_derivative(mj, mj.N(a, 0), 1) - frame_derivative(mj, mj.N(a, 1), 0);
    W[a][0][1] = om;
    W[a][1][0] = -om;
  }
  return W;
}

Anholonomy anholonomy_coefficients(const DMetric& m, const Point3& p) {
  MetricJets mj = evaluate_metric(m, p, 1);
  Tensor3J W = anholonomy(mj);
  Anholonomy out{};
  for (int b = 0; b < 2; ++b)
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 2; ++a) out.Wv[b][i][a] = W[b + 2][i][a + 2].value();
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.Omega[a][i][j] = W[a + 2][i][j].value();
  return out;
}

bool is_lorentzian(const MetricJets& mj) {
  return mj.g1.value() > 0 && mj.g2.value() > 0 && mj.diag(2).value() > 0 && mj.diag(3).value() < 0;
}

}  // namespace offdiag
