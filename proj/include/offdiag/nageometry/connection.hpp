#pragma once
// Linear connections in the coordinate and N-adapted frames.
//
// Coefficients are stored with the derivative direction first:
//   D_{e_gamma} e_beta = G[alpha][gamma][beta] e_alpha.

#include <string>

#include "offdiag/nageometry/dmetric.hpp"

namespace offdiag {

enum class FrameTag { Coordinate, NAdapted };

struct ConnectionJets {
  FrameTag frame = FrameTag::Coordinate;
  int order = 0;
  Tensor3J G;
};

/// Point values of a connection.
struct ConnectionCoeffs {
  FrameTag frame = FrameTag::Coordinate;
  double G[4][4][4] = {};
};

ConnectionCoeffs values(const ConnectionJets& c);

/// Christoffel symbols of the coordinate metric; the result has order mj.order - 1.
ConnectionJets levi_civita_coordinate(const MetricJets& mj);

/// Levi-Civita connection expressed in the N-adapted frame.
ConnectionJets levi_civita_nadapted(const MetricJets& mj);

/// Canonical d-connection in the N-adapted frame (order mj.order - 1).
ConnectionJets canonical_dconnection_jets(const MetricJets& mj);
ConnectionCoeffs canonical_dconnection(const DMetric& m, const Point3& p);

/// max over gamma, alpha, beta of |(D_gamma g)(e_alpha, e_beta)| for the
/// diagonal d-metric and a connection in the N-adapted frame.
double metric_compatibility_residual(const MetricJets& mj, const ConnectionJets& c);

/// Torsion T^a_{gb} = G^a_{gb} - G^a_{bg} - W^a_{gb}.
Tensor3J torsion(const ConnectionJets& c, const Tensor3J& W);

struct TorsionReport {
  // index layout follows the printed families, h indices 0..1, v indices 0..1
  double Tijk[2][2][2] = {};  // T^i_{jk}
  double Tija[2][2][2] = {};  // T^i_{ja}
  double Taji[2][2][2] = {};  // T^a_{ji}
  double Tcaj[2][2][2] = {};  // T^c_{aj}
  double Tabc[2][2][2] = {};  // T^a_{bc}
  double max_norm = 0.0;
  double family_max[5] = {};
};

TorsionReport canonical_dtorsion(const DMetric& m, const Point3& p);

/// Distortion Z = D - nabla in the N-adapted frame, max norm.
double distortion_norm(const DMetric& m, const Point3& p);

}  // namespace offdiag
