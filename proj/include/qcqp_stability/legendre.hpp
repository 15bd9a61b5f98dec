#pragma once

// Elliptic-plus-finite-rank splitting of a symmetric operator:
//
//   T = E - R,  E = T + sum_j (alpha - lambda_j) u_j u_j^T >= alpha I,
//
// where u_j are the eigenvectors of the r smallest eigenvalues.

#include "qcqp_stability/hilbert_model.hpp"

#include <optional>

namespace qcqps {

struct LegendreDecomposition {
  /// Ellipticity constant of E.
  double alpha = 0.0;
  int finite_rank = 0;
  /// dim x r, orthonormal columns.
  Matrix lifted_directions;
  Vector lifted_eigenvalues;
  /// Admissible perturbation size, slightly below alpha.
  double radius = 0.0;

  /// R = sum_j (alpha - lambda_j) u_j u_j^T.
  Matrix rank_part() const;
  Matrix elliptic_part(const SymOperator& t) const { return t.matrix() + rank_part(); }
};

/// r = min(rank_budget, #{lambda_j <= 0}) and alpha = lambda_{r+1}; none when
/// lambda_{r+1} <= 0.  Requires 0 <= rank_budget < dim.
std::optional<LegendreDecomposition> legendre_decomposition(const SymOperator& t, int rank_budget);

/// alpha (1 - 1e-6).
double legendre_perturbation_radius(const LegendreDecomposition& decomp);

}  // namespace qcqps
