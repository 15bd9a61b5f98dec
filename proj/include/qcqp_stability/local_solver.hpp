#pragma once

// Local augmented-Lagrangian method for
//
//   min q_0(x)  s.t.  q_i(x) <= 0,
//
// with arbitrary (possibly indefinite) quadratic q_i.  Subproblems are
// minimized by a trust-region Newton method on the generalized Hessian.

#include "qcqp_stability/hilbert_model.hpp"

#include <vector>

namespace qcqps {

struct LocalSolverOptions {
  int max_inner = 200;
  int max_outer = 40;
  double rho0 = 10.0;
  double rho_growth = 10.0;
  double rho_max = 1e10;
  /// Target for max(0, max_i q_i) at termination.
  double feas_tol = 1e-12;
  /// Iterates beyond this norm count as diverged.
  double divergence_norm = 1e8;
};

struct LocalResult {
  Vector x;
  Vector multipliers;
  double objective = 0.0;
  /// max(0, max_i q_i(x)).
  double violation = 0.0;
  bool converged = false;
  bool diverged = false;
  int inner_iterations = 0;
  int outer_iterations = 0;
};

LocalResult augmented_lagrangian(const QuadraticFunction& objective,
                                 const std::vector<QuadraticFunction>& constraints,
                                 const Vector& x0, const LocalSolverOptions& options = {});

/// ||grad q_0 + sum_i lambda_i grad q_i|| at x.
double kkt_residual(const QuadraticFunction& objective,
                    const std::vector<QuadraticFunction>& constraints, const Vector& x,
                    const Vector& multipliers);

}  // namespace qcqps
