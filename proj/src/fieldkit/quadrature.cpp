#include "offdiag/fieldkit/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace offdiag {

namespace {

using GL = boost::math::quadrature::gauss<double, 8>;

// Rule nodes on [-1, 1] expanded from Boost's half-range tables.
struct Rule {
  std::vector<double> x, w;
  Rule() {
    const auto& a = GL::abscissa();
    const auto& wt = GL::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        x.push_back(0.0);
        w.push_back(wt[i]);
      } else {
        x.push_back(a[i]);
        w.push_back(wt[i]);
        x.push_back(-a[i]);
        w.push_back(wt[i]);
      }
    }
  }
};

const Rule& rule() {
  static const Rule r;
  return r;
}

int panels_for(double a, double b) { return std::max(1, static_cast<int>(std::ceil(std::fabs(b - a) / 0.25))); }

}  // namespace

std::vector<double> cumulative_integral_1d(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> F(n, 0.0);
  if (n < 2) return F;
  if (n % 2 == 0) {
    for (std::size_t k = 1; k < n; ++k) F[k] = F[k - 1] + 0.5 * h * (f[k - 1] + f[k]);
    return F;
  }
  // Simpson on pairs of intervals; odd end points use the three-point rule on
  // the single trailing interval.
  for (std::size_t k = 2; k < n; k += 2) F[k] = F[k - 2] + h / 3.0 * (f[k - 2] + 4 * f[k - 1] + f[k]);
  F[1] = h / 12.0 * (5 * f[0] + 8 * f[1] - f[2]);
  for (std::size_t k = 3; k < n; k += 2) F[k] = F[k - 1] + h / 12.0 * (-f[k - 2] + 8 * f[k - 1] + 5 * f[k]);
  return F;
}

Field3 cumulative_time_integral(const Field3& f, const Grid3& grid, double t0) {
  grid.validate();
  if (f.v.size() != grid.size()) throw GridError("field does not match grid");
  if (std::fabs(t0 - grid.t.lo) > 1e-12 * std::max(1.0, std::fabs(t0)))
    throw GridError("t0 must equal the first t node of the grid");
  Field3 out(grid);
  std::vector<double> line(static_cast<std::size_t>(grid.t.n));
  double h = grid.t.spacing();
  for (int i = 0; i < grid.x1.n; ++i) {
    for (int j = 0; j < grid.x2.n; ++j) {
      for (int k = 0; k < grid.t.n; ++k) line[static_cast<std::size_t>(k)] = f.at(i, j, k);
      auto F = cumulative_integral_1d(line, h);
      for (int k = 0; k < grid.t.n; ++k) out.at(i, j, k) = F[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int panels) {
  const auto& r = rule();
  double h = (b - a) / panels, sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    double mid = a + (p + 0.5) * h;
    for (std::size_t q = 0; q < r.x.size(); ++q) sum += r.w[q] * f(mid + 0.5 * h * r.x[q]);
  }
  return 0.5 * h * sum;
}

Jet time_integral_jet(const std::function<Jet(double s, int order)>& integrand, double t0, double t, int order) {
  Jet out(0.0, order);
  Jet g = integrand(t, order >= 1 ? order - 1 : 0);
  // Coefficients with a t component: c[a, b, c+1] = g[a, b, c] / (c + 1).
  int n = jet_size(order);
  for (int i = 0; i < n; ++i) {
    const auto& m = jet_multi_index(i);
    if (m.n[2] == 0) continue;
    int src = jet_index(m.n[0], m.n[1], m.n[2] - 1);
    out.coeff(i) = g.coeff(src) / m.n[2];
  }
  if (t == t0) return out;
  const auto& r = rule();
  int panels = panels_for(t0, t);
  double h = (t - t0) / panels;
  std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
  for (int p = 0; p < panels; ++p) {
    double mid = t0 + (p + 0.5) * h;
    for (std::size_t q = 0; q < r.x.size(); ++q) {
      Jet gs = integrand(mid + 0.5 * h * r.x[q], order);
      for (int i = 0; i < n; ++i) {
        if (jet_multi_index(i).n[2] != 0) continue;
        acc[static_cast<std::size_t>(i)] += r.w[q] * gs.coeff(i);
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    if (jet_multi_index(i).n[2] != 0) continue;
    out.coeff(i) = 0.5 * h * acc[static_cast<std::size_t>(i)];
  }
  return out;
}

}  // namespace offdiag
