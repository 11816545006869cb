#pragma once
// d-metric data with one Killing direction (y3) and its N-adapted frames.
//
// Coordinates are u = (x1, x2, y3, t), indices 0..3, signature (+,+,+,-).
// The N-connection is N_i^3 = n_i, N_i^4 = w_i, the frames are
//   e_i = d_i - n_i d_3 - w_i d_4,   e_a = d_a,
//   e^i = dx^i,                      e^a = dy^a + N_i^a dx^i,
// and the d-metric is g_i (e^i)^2 + omega^2 h_a (e^a)^2.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/jet.hpp"

namespace offdiag {

using Point3 = std::array<double, 3>;
using JetField = std::function<Jet(const Point3& p, int order)>;

JetField field_from_expr(const Expr& e);
JetField constant_field(double v);

using Mat4 = std::array<std::array<double, 4>, 4>;
using Mat4J = std::array<std::array<Jet, 4>, 4>;

class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDegenerateDet = 1e-14;

struct DMetric {
  JetField g1, g2, h3, h4, n1, n2, w1, w2, omega;

  /// Diagonal d-metric with vanishing N-connection and unit omega.
  static DMetric diagonal(JetField g1, JetField g2, JetField h3, JetField h4);
};

/// Jets of all d-metric coefficients at one point.
struct MetricJets {
  int order = 0;
  Jet g1, g2, h3, h4, omega;
  Jet n[2], w[2];

  /// N_i^a with a = 2 (y3) or 3 (t).
  const Jet& N(int a, int i) const { return a == 2 ? n[i] : w[i]; }
  /// Diagonal N-adapted metric component.
  Jet diag(int alpha) const;
};

MetricJets evaluate_metric(const DMetric& m, const Point3& p, int order);

/// Coordinate partial d_mu of a jet; the Killing direction y3 gives zero.
Jet coord_derivative(const Jet& f, int mu);

/// Frame derivative e_alpha(f) in the N-adapted frame.
Jet frame_derivative(const MetricJets& mj, const Jet& f, int alpha);

Mat4J coordinate_metric_jets(const MetricJets& mj);
Mat4 coordinate_metric(const DMetric& m, const Point3& p);
Mat4 values(const Mat4J& a);

/// Inverse of a symmetric jet matrix; throws DegenerateMetric when |det| < 1e-14.
Mat4J inverse(const Mat4J& a, double* det_out = nullptr);
double determinant(const Mat4& a);

/// Frame vectors E[alpha][mu] and coframe Theta[alpha][mu] (rows are forms).
struct NAdaptedFrame {
  Mat4 E{};
  Mat4 Theta{};
};
NAdaptedFrame nadapted_frame(const DMetric& m, const Point3& p);
NAdaptedFrame nadapted_frame(const MetricJets& mj);

/// Anholonomy coefficients [e_a, e_b] = W^c_ab e_c as jets (order - 1).
/// Index layout W[c][a][b].
using Tensor3J = std::array<std::array<std::array<Jet, 4>, 4>, 4>;
Tensor3J anholonomy(const MetricJets& mj);

struct Anholonomy {
  // W^b_{ia} = d_a N_i^b, indexed [b - 2][i][a - 2]
  double Wv[2][2][2];
  // Omega^a_{ij} = e_j(N_i^a) - e_i(N_j^a), indexed [a - 2][i][j]
  double Omega[2][2][2];
};
Anholonomy anholonomy_coefficients(const DMetric& m, const Point3& p);

bool is_lorentzian(const MetricJets& mj);

}  // namespace offdiag
