#pragma once

// Slater regularity of the constraint system g_i(x) <= 0: existence of a point
// with every g_i strictly negative.  Decided by minimizing the convex function
// s(x) = max_i g_i(x).

#include "qcqp_stability/hilbert_model.hpp"

#include <optional>
#include <string>

namespace qcqps {

enum class RegularityStatus { Regular, Irregular, Inconclusive };

const char* to_string(RegularityStatus status);

struct RegularityResult {
  RegularityStatus status = RegularityStatus::Inconclusive;
  /// Slater point; present iff status == Regular.
  std::optional<Vector> witness;
  /// Best value of max_i g_i found (-inf when there are no constraints).
  double margin = 0.0;
  /// Point attaining `margin`.
  Vector best_point;
  /// Norm of the minimum-norm subgradient at `best_point` over the nearly
  /// active constraints.
  double stationarity = 0.0;
  /// Starts whose descent stopped at a certified stationary point.
  int certified_starts = 0;
  int starts_run = 0;
  /// For Irregular results: the evidence points to an empty feasible set
  /// (margin > feas_tol) rather than a feasible set without interior points.
  bool suggests_infeasible = false;
  std::string note;
};

struct RegularityOptions {
  int starts = 20;
  int budget = 2000;  // descent iterations per start
  double stationarity_tol = 1e-6;
};

/// s(x) = max_i g_i(x) together with the min-norm subgradient over
/// constraints within `eps` of the max.
double max_constraint_stationarity(const ProblemInstance& problem, const Vector& x, double eps);

RegularityResult slater_point(const ProblemInstance& problem, const ToleranceConfig& cfg,
                              const RegularityOptions& options = {});

inline RegularityResult slater_point(const ProblemInstance& problem, const ToleranceConfig& cfg,
                                     int budget) {
  RegularityOptions options;
  options.budget = budget;
  return slater_point(problem, cfg, options);
}

/// Best found value of inf_x max_i g_i(x); -infinity when m = 0.
double regularity_margin(const ProblemInstance& problem, const ToleranceConfig& cfg);

}  // namespace qcqps
