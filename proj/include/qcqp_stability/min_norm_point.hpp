#pragma once

#include "qcqp_stability/hilbert_model.hpp"

namespace qcqps {

struct MinNormPoint {
  Vector point;    // minimum-norm element of the convex hull
  Vector weights;  // convex combination weights, one per input column
};

/// Minimum-norm point of the convex hull of the columns of `points`
/// (Wolfe's algorithm).  Requires at least one column.
MinNormPoint min_norm_point(const Matrix& points);

}  // namespace qcqps
