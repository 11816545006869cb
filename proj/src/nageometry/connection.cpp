#include "offdiag/nageometry/connection.hpp"

#include <algorithm>
#include <cmath>

namespace offdiag {

namespace {

Tensor3J zero_tensor(int order) {
  Tensor3J t;
  Jet z(0.0, order);
  for (auto& a : t)
    for (auto& b : a) b.fill(z);
  return t;
}

}  // namespace

ConnectionCoeffs values(const ConnectionJets& c) {
  ConnectionCoeffs out;
  out.frame = c.frame;
  for (int a = 0; a < 4; ++a)
    for (int g = 0; g < 4; ++g)
      for (int b = 0; b < 4; ++b) out.G[a][g][b] = c.G[a][g][b].value();
  return out;
}

ConnectionJets levi_civita_coordinate(const MetricJets& mj) {
  const int K = mj.order - 1;
  Mat4J g = coordinate_metric_jets(mj);
  Mat4J ginv = inverse(g);
  // dg[m][n][l] = d_l g_mn
  Jet dg[4][4][4];
  for (int m = 0; m < 4; ++m)
    for (int n = m; n < 4; ++n)
      for (int l = 0; l < 4; ++l) dg[m][n][l] = dg[n][m][l] = coord_derivative(g[m][n], l);
  ConnectionJets c;
  c.frame = FrameTag::Coordinate;
  c.order = K;
  c.G = zero_tensor(K);
  for (int b = 0; b < 4; ++b) {
    for (int gm = b; gm < 4; ++gm) {
      Jet low[4];
      for (int d = 0; d < 4; ++d) low[d] = 0.5 * (dg[d][gm][b] + dg[d][b][gm] - dg[b][gm][d]);
      for (int a = 0; a < 4; ++a) {
        Jet s(0.0, K);
        for (int d = 0; d < 4; ++d) s += ginv[a][d].truncated(K) * low[d];
        c.G[a][b][gm] = c.G[a][gm][b] = s;
      }
    }
  }
  return c;
}

ConnectionJets levi_civita_nadapted(const MetricJets& mj) {
  ConnectionJets lc = levi_civita_coordinate(mj);
  const int K = lc.order;
  // E[alpha][mu] and Theta[alpha][mu] as jets
  Jet E[4][4], Th[4][4];
  for (int a = 0; a < 4; ++a)
    for (int m = 0; m < 4; ++m) E[a][m] = Th[a][m] = Jet(a == m ? 1.0 : 0.0, K + 1);
  for (int i = 0; i < 2; ++i)
    for (int a = 2; a < 4; ++a) {
      E[i][a] = -mj.N(a, i);
      Th[a][i] = mj.N(a, i);
    }
  ConnectionJets c;
  c.frame = FrameTag::NAdapted;
  c.order = K;
  c.G = zero_tensor(K);
  for (int gm = 0; gm < 4; ++gm) {
    for (int b = 0; b < 4; ++b) {
      // vector D_{e_g} e_b in coordinate components
      Jet v[4];
      for (int mu = 0; mu < 4; ++mu) {
        Jet s = frame_derivative(mj, E[b][mu], gm);
        for (int n = 0; n < 4; ++n)
          for (int l = 0; l < 4; ++l) s += E[gm][n].truncated(K) * E[b][l].truncated(K) * lc.G[mu][n][l];
        v[mu] = s;
      }
      for (int a = 0; a < 4; ++a) {
        Jet s(0.0, K);
        for (int mu = 0; mu < 4; ++mu) s += Th[a][mu].truncated(K) * v[mu];
        c.G[a][gm][b] = s;
      }
    }
  }
  return c;
}

ConnectionJets canonical_dconnection_jets(const MetricJets& mj) {
  const int K = mj.order - 1;
  ConnectionJets c;
  c.frame = FrameTag::NAdapted;
  c.order = K;
  c.G = zero_tensor(K);
  Jet d[4];
  for (int a = 0; a < 4; ++a) d[a] = mj.diag(a);
  for (int a = 0; a < 2; ++a)
    if (std::fabs(d[a].value()) < kDegenerateDet) throw DegenerateMetric("degenerate h-block of the d-metric");
  for (int a = 2; a < 4; ++a)
    if (std::fabs(d[a].value()) < kDegenerateDet) throw DegenerateMetric("degenerate v-block of the d-metric");
  Jet inv[4];
  for (int a = 0; a < 4; ++a) inv[a] = reciprocal(d[a]).truncated(K);
  // ed[a][g] = e_g(diag_a)
  Jet ed[4][4];
  for (int a = 0; a < 4; ++a)
    for (int g = 0; g < 4; ++g) ed[a][g] = frame_derivative(mj, d[a], g);
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  // L^i_{jk}: G[i][k][j]
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        int r = i;  // diagonal h-metric
        Jet s = delta(j, r) * ed[r][k] + delta(k, r) * ed[r][j];
        if (j == k) s -= ed[j][r];
        c.G[i][k][j] = 0.5 * inv[i] * s;
      }
  // L^a_{bk}: G[a][k][b]
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      for (int k = 0; k < 2; ++k) {
        Jet s = coord_derivative(mj.N(a, k), b);
        // 1/2 h^{ac}(e_k h_bc - h_dc d_b N^d_k - h_db d_c N^d_k), c = a
        Jet inner = delta(a, b) * ed[a][k] - d[a].truncated(K) * coord_derivative(mj.N(a, k), b) -
                    d[b].truncated(K) * coord_derivative(mj.N(b, k), a);
        s += 0.5 * inv[a] * inner;
        c.G[a][k][b] = s;
      }
  // C^i_{jc}: G[i][c][j]
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int cc = 2; cc < 4; ++cc)
        if (i == j) c.G[i][cc][j] = 0.5 * inv[i] * ed[i][cc];
  // C^a_{bc}: G[a][c][b]
  for (int a = 2; a < 4; ++a)
    for (int b = 2; b < 4; ++b)
      for (int cc = 2; cc < 4; ++cc) {
        Jet s = delta(b, a) * ed[a][cc] + delta(cc, a) * ed[a][b];
        if (b == cc) s -= ed[b][a];
        c.G[a][cc][b] = 0.5 * inv[a] * s;
      }
  return c;
}

ConnectionCoeffs canonical_dconnection(const DMetric& m, const Point3& p) {
  return values(canonical_dconnection_jets(evaluate_metric(m, p, 1)));
}

double metric_compatibility_residual(const MetricJets& mj, const ConnectionJets& c) {
  double worst = 0.0;
  Jet d[4];
  for (int a = 0; a < 4; ++a) d[a] = mj.diag(a);
  for (int g = 0; g < 4; ++g)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double v = a == b ? frame_derivative(mj, d[a], g).value() : 0.0;
        v -= c.G[b][g][a].value() * d[b].value() + c.G[a][g][b].value() * d[a].value();
        worst = std::max(worst, std::fabs(v));
      }
  return worst;
}

Tensor3J torsion(const ConnectionJets& c, const Tensor3J& W) {
  Tensor3J T = zero_tensor(c.order);
  for (int a = 0; a < 4; ++a)
    for (int g = 0; g < 4; ++g)
      for (int b = 0; b < 4; ++b) T[a][g][b] = c.G[a][g][b] - c.G[a][b][g] - W[a][g][b].truncated(c.order);
  return T;
}

TorsionReport canonical_dtorsion(const DMetric& m, const Point3& p) {
  MetricJets mj = evaluate_metric(m, p, 1);
  ConnectionJets c = canonical_dconnection_jets(mj);
  Tensor3J W = anholonomy(mj);
  TorsionReport r;
  auto G = [&](int a, int g, int b) { return c.G[a][g][b].value(); };
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < 2; ++z) {
        // L^i_{jk} = G[i][k][j]
        r.Tijk[x][y][z] = G(x, z, y) - G(x, y, z);
        // C^i_{ja} = G[i][a][j]
        r.Tija[x][y][z] = G(x, z + 2, y);
        // -Omega^a_{ji}
        r.Taji[x][y][z] = -W[x + 2][y][z].value();
        // L^c_{aj} - e_a(N^c_j), L^c_{aj} = G[c][j][a]
        r.Tcaj[x][y][z] = G(x + 2, z, y + 2) - coord_derivative(mj.N(x + 2, z), y + 2).value();
        // C^a_{bc} - C^a_{cb}, C^a_{bc} = G[a][c][b]
        r.Tabc[x][y][z] = G(x + 2, z + 2, y + 2) - G(x + 2, y + 2, z + 2);
      }
  const double (*fam[5])[2][2] = {r.Tijk, r.Tija, r.Taji, r.Tcaj, r.Tabc};
  for (int f = 0; f < 5; ++f) {
    double mx = 0.0;
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y)
        for (int z = 0; z < 2; ++z) mx = std::max(mx, std::fabs(fam[f][x][y][z]));
    r.family_max[f] = mx;
    r.max_norm = std::max(r.max_norm, mx);
  }
  return r;
}

double distortion_norm(const DMetric& m, const Point3& p) {
  MetricJets mj = evaluate_metric(m, p, 1);
  ConnectionJets dc = canonical_dconnection_jets(mj);
  ConnectionJets lc = levi_civita_nadapted(mj);
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int g = 0; g < 4; ++g)
      for (int b = 0; b < 4; ++b)
        worst = std::max(worst, std::fabs(dc.G[a][g][b].value() - lc.G[a][g][b].value()));
  return worst;
}

}  // namespace offdiag
