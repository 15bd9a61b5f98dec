#pragma once

#include "qcqp_stability/hilbert_model.hpp"

namespace qcqps {

struct TrustRegionStep {
  Vector step;
  /// Model change g^T p + 1/2 p^T H p (nonpositive).
  double model_change = 0.0;
  bool on_boundary = false;
  bool hard_case = false;
};

/// Global minimizer of g^T p + 1/2 p^T H p subject to ||p|| <= radius, from a
/// full eigendecomposition of H (Moré-Sorensen characterization, hard case
/// included).
TrustRegionStep solve_trust_region(const Matrix& H, const Vector& g, double radius);

}  // namespace qcqps
