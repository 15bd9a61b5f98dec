#pragma once

// Recession cone of the feasible set and the recession program
//
//   min { 1/2 <v, T v> : T_i v = 0, <c_i, v> <= 0 for all i }.
//
// Its solution set is {0} exactly when the form <v, T v> is strictly positive
// on every nonzero cone direction, which is decided here as a sign test over
// unit cone vectors.

#include "qcqp_stability/hilbert_model.hpp"

#include <optional>

namespace qcqps {

struct RecessionCone {
  Eigen::Index ambient_dim = 0;
  /// Orthonormal columns spanning the common kernel of the T_i.
  Matrix kernel_basis;
  /// Rows c_i^T * kernel_basis; the cone is {Z y : A y <= 0}.
  Matrix halfspace_matrix;

  Eigen::Index kernel_dim() const { return kernel_basis.cols(); }
  bool is_zero() const { return kernel_basis.cols() == 0; }
};

struct QprVerdict {
  /// Solution set of the recession program is {0}.
  bool trivial = true;
  /// Unit cone vector with <v, T v> <= value threshold, when not trivial.
  std::optional<Vector> witness;
  /// Best found value of <v, T v> over unit cone vectors (+inf for the zero cone).
  double min_rayleigh = 0.0;
  /// Threshold used for the sign decision.
  double value_threshold = 0.0;
  /// Exact face enumeration was carried out (false on the sampling-only path).
  bool exact = true;
  /// Sampling-only decision with min_rayleigh inside (-threshold, threshold).
  bool inconclusive = false;
  /// The cone the verdict was computed on.
  RecessionCone cone;
};

RecessionCone recession_cone(const ProblemInstance& problem, const ToleranceConfig& cfg);

bool contains(const RecessionCone& cone, const Vector& v, double tol);

struct QprOptions {
  int max_enumerated_halfspaces = 20;
  int samples_per_kernel_dim = 20000;
  bool sampling = true;
};

QprVerdict qpr_solve(const ProblemInstance& problem, const RecessionCone& cone,
                     const ToleranceConfig& cfg, const QprOptions& options = {});

/// Unit cone direction along which the objective decreases without bound
/// from `feasible_point` (the origin when omitted).
std::optional<Vector> unboundedness_direction(const ProblemInstance& problem,
                                              const QprVerdict& verdict,
                                              const std::optional<Vector>& feasible_point = {});

}  // namespace qcqps
