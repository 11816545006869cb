#include "offdiag/nageometry/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace offdiag {

Tensor4J riemann(const ConnectionJets& c, const Tensor3J& W, const FrameDerivative& e) {
  const int K = c.order - 1;
  // dG[g][a][d][b] = e_g G^a_{db}
  static thread_local Jet dG[4][4][4][4];
  for (int g = 0; g < 4; ++g)
    for (int a = 0; a < 4; ++a)
      for (int d = 0; d < 4; ++d)
        for (int b = 0; b < 4; ++b) dG[g][a][d][b] = e(c.G[a][d][b], g);
  Tensor4J R;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int g = 0; g < 4; ++g) {
        R[a][b][g][g] = Jet(0.0, K);
        for (int d = g + 1; d < 4; ++d) {
          Jet s = dG[g][a][d][b] - dG[d][a][g][b];
          for (int t = 0; t < 4; ++t) {
            s += c.G[a][g][t].truncated(K) * c.G[t][d][b].truncated(K);
            s -= c.G[a][d][t].truncated(K) * c.G[t][g][b].truncated(K);
            s -= c.G[a][t][b].truncated(K) * W[t][g][d].truncated(K);
          }
          R[a][b][g][d] = s;
          R[a][b][d][g] = -s;
        }
      }
  return R;
}

Mat4J ricci(const Tensor4J& R) {
  Mat4J r;
  for (int b = 0; b < 4; ++b)
    for (int d = 0; d < 4; ++d) {
      Jet s = R[0][b][0][d];
      for (int a = 1; a < 4; ++a) s += R[a][b][a][d];
      r[b][d] = s;
    }
  return r;
}

namespace {

FrameDerivative coordinate_derivative() {
  return [](const Jet& f, int mu) { return coord_derivative(f, mu); };
}

FrameDerivative nadapted_derivative(const MetricJets& mj) {
  return [&mj](const Jet& f, int a) { return frame_derivative(mj, f, a); };
}

Tensor3J zero_w(int order) {
  Tensor3J t;
  Jet z(0.0, order);
  for (auto& a : t)
    for (auto& b : a) b.fill(z);
  return t;
}

void finish_report(CurvatureReport& r, const Mat4& ginv) {
  double big = 0.0, asym = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      big = std::max(big, std::fabs(r.ricci_lower[a][b]));
      asym = std::max(asym, std::fabs(r.ricci_lower[a][b] - r.ricci_lower[b][a]));
    }
  r.asymmetry = big > 0 ? asym / big : asym;
  r.scalar = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int c = 0; c < 4; ++c) s += ginv[a][c] * r.ricci_lower[c][b];
      r.ricci_mixed[a][b] = s;
      r.scalar += ginv[a][b] * r.ricci_lower[a][b];
    }
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) r.einstein_mixed[a][b] = r.ricci_mixed[a][b] - (a == b ? 0.5 * r.scalar : 0.0);
}

Mat4 inverse_diag(const MetricJets& mj) {
  Mat4 m{};
  for (int a = 0; a < 4; ++a) m[a][a] = 1.0 / mj.diag(a).value();
  return m;
}

}  // namespace

CurvatureReport levi_civita_ricci(const MetricJets& mj) {
  ConnectionJets c = levi_civita_coordinate(mj);
  Tensor4J R = riemann(c, zero_w(c.order), coordinate_derivative());
  Mat4J ric = ricci(R);
  CurvatureReport rep;
  rep.frame = FrameTag::Coordinate;
  rep.ricci_lower = values(ric);
  Mat4J g = coordinate_metric_jets(mj);
  Mat4 ginv = values(inverse(g));
  finish_report(rep, ginv);
  return rep;
}

CurvatureReport levi_civita_ricci(const DMetric& m, const Point3& p) {
  return levi_civita_ricci(evaluate_metric(m, p, 2));
}

CurvatureReport canonical_ricci(const DMetric& m, const Point3& p) {
  MetricJets mj = evaluate_metric(m, p, 2);
  ConnectionJets c = canonical_dconnection_jets(mj);
  Tensor4J R = riemann(c, anholonomy(mj), nadapted_derivative(mj));
  CurvatureReport rep;
  rep.frame = FrameTag::NAdapted;
  rep.ricci_lower = values(ricci(R));
  finish_report(rep, inverse_diag(mj));
  return rep;
}

CurvatureReport levi_civita_ricci_nadapted(const DMetric& m, const Point3& p) {
  MetricJets mj = evaluate_metric(m, p, 2);
  ConnectionJets c = levi_civita_nadapted(mj);
  Tensor4J R = riemann(c, anholonomy(mj), nadapted_derivative(mj));
  CurvatureReport rep;
  rep.frame = FrameTag::NAdapted;
  rep.ricci_lower = values(ricci(R));
  finish_report(rep, inverse_diag(mj));
  return rep;
}

double frame_transform_mismatch(const DMetric& m, const Point3& p) {
  CurvatureReport coord = levi_civita_ricci(m, p);
  CurvatureReport frame = levi_civita_ricci_nadapted(m, p);
  NAdaptedFrame f = nadapted_frame(m, p);
  // T^mu_nu = E_a^mu T^a_b Theta^b_nu
  double big = 1e-300, worst = 0.0;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      double s = 0.0;
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) s += f.E[a][mu] * frame.ricci_mixed[a][b] * f.Theta[b][nu];
      worst = std::max(worst, std::fabs(s - coord.ricci_mixed[mu][nu]));
      big = std::max(big, std::fabs(coord.ricci_mixed[mu][nu]));
    }
  return worst / std::max(big, 1.0);
}

double einstein_residual_at(const CurvatureReport& r, const std::array<double, 4>& source) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      worst = std::max(worst, std::fabs(r.ricci_mixed[a][b] - (a == b ? source[static_cast<std::size_t>(a)] : 0.0)));
  return worst;
}

RegionResidual einstein_residual(const DMetric& m, const SourceFn& source, const Grid3& region, bool canonical) {
  region.validate();
  RegionResidual out;
  double sum2 = 0.0;
  for (int i = 0; i < region.x1.n; ++i)
    for (int j = 0; j < region.x2.n; ++j)
      for (int k = 0; k < region.t.n; ++k) {
        Point3 p = region.point(i, j, k);
        CurvatureReport r = canonical ? canonical_ricci(m, p) : levi_civita_ricci(m, p);
        double v = einstein_residual_at(r, source(p));
        if (!std::isfinite(v)) v = INFINITY;
        sum2 += v * v;
        if (v > out.sup || out.count == 0) {
          out.sup = v;
          out.worst = p;
        }
        ++out.count;
      }
  out.rms = std::sqrt(sum2 / static_cast<double>(out.count));
  return out;
}

RegionResidual einstein_residual(const DMetric& m, double lambda, const Grid3& region) {
  return einstein_residual(m, [lambda](const Point3&) { return std::array<double, 4>{lambda, lambda, lambda, lambda}; },
                           region, false);
}

double bianchi_residual(const DMetric& m, const Point3& p) {
  MetricJets mj = evaluate_metric(m, p, 3);
  ConnectionJets c = levi_civita_coordinate(mj);
  Tensor4J R = riemann(c, zero_w(c.order), coordinate_derivative());
  Mat4J ric = ricci(R);  // order 1
  Mat4J g = coordinate_metric_jets(mj);
  Mat4J ginv = inverse(g);
  Jet scalar(0.0, 1);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) scalar += ginv[a][b].truncated(1) * ric[a][b];
  Mat4J G;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) G[a][b] = ric[a][b] - 0.5 * scalar * g[a][b].truncated(1);
  double worst = 0.0;
  for (int b = 0; b < 4; ++b) {
    double div = 0.0;
    for (int gm = 0; gm < 4; ++gm)
      for (int a = 0; a < 4; ++a) {
        double gi = ginv[gm][a].value();
        if (gi == 0.0) continue;
        double cov = coord_derivative(G[a][b], gm).value();
        for (int l = 0; l < 4; ++l)
          cov -= c.G[l][gm][a].value() * G[l][b].value() + c.G[l][gm][b].value() * G[a][l].value();
        div += gi * cov;
      }
    worst = std::max(worst, std::fabs(div));
  }
  return worst;
}

}  // namespace offdiag
