#pragma once
// Riemann, Ricci and Einstein-equation residuals.
//
// In any frame with anholonomy W,
//   R^a_{bgd} = e_g G^a_{db} - e_d G^a_{gb} + G^a_{gt} G^t_{db} - G^a_{dt} G^t_{gb} - G^a_{tb} W^t_{gd},
// and Ricci is R_{bd} = R^a_{bad}, which is positive for de Sitter space.

#include <array>
#include <functional>

#include "offdiag/fieldkit/grid.hpp"
#include "offdiag/nageometry/connection.hpp"

namespace offdiag {

using Tensor4J = std::array<Tensor3J, 4>;  // R[a][b][g][d]

using FrameDerivative = std::function<Jet(const Jet& f, int alpha)>;

/// Riemann tensor of a connection (order c.order - 1).
Tensor4J riemann(const ConnectionJets& c, const Tensor3J& W, const FrameDerivative& e);

Mat4J ricci(const Tensor4J& R);

struct CurvatureReport {
  FrameTag frame = FrameTag::Coordinate;
  Mat4 ricci_lower{};
  Mat4 ricci_mixed{};
  Mat4 einstein_mixed{};
  double scalar = 0.0;
  /// max |R_{ab} - R_{ba}| relative to max |R_{ab}|
  double asymmetry = 0.0;
};

/// Levi-Civita curvature in the coordinate frame.
CurvatureReport levi_civita_ricci(const DMetric& m, const Point3& p);
CurvatureReport levi_civita_ricci(const MetricJets& mj);

/// Curvature of the canonical d-connection in the N-adapted frame; indices
/// are raised with the diagonal d-metric.
CurvatureReport canonical_ricci(const DMetric& m, const Point3& p);

/// Levi-Civita curvature computed in the N-adapted frame (with the W term).
CurvatureReport levi_civita_ricci_nadapted(const DMetric& m, const Point3& p);

/// Mixed Ricci tensor of the N-adapted computation transformed back to the
/// coordinate frame, minus the coordinate computation; max relative deviation.
double frame_transform_mismatch(const DMetric& m, const Point3& p);

/// max over a, b of |R^a_b - source_a delta^a_b|.
double einstein_residual_at(const CurvatureReport& r, const std::array<double, 4>& source);

struct RegionResidual {
  double sup = 0.0;
  double rms = 0.0;
  Point3 worst{};
  long count = 0;
};

using SourceFn = std::function<std::array<double, 4>(const Point3&)>;

/// Sup and RMS of the pointwise residual of R^a_b = source over every grid node.
RegionResidual einstein_residual(const DMetric& m, const SourceFn& source, const Grid3& region,
                                 bool canonical = false);
RegionResidual einstein_residual(const DMetric& m, double lambda, const Grid3& region);

/// max over b of |nabla^a (R_{ab} - R g_{ab} / 2)| for the Levi-Civita connection.
double bianchi_residual(const DMetric& m, const Point3& p);

}  // namespace offdiag
