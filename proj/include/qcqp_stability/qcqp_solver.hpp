#pragma once

// Desk-scale global solver: feasibility and unboundedness screens followed by
// multi-start augmented-Lagrangian descent and clustering of the near-optimal
// local minima.  A grid oracle certifies results for dim <= 4.

#include "qcqp_stability/hilbert_model.hpp"
#include "qcqp_stability/local_solver.hpp"
#include "qcqp_stability/recession.hpp"
#include "qcqp_stability/regularity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcqps {

enum class SolveStatus { Solved, Unbounded, Infeasible, Inconclusive };

const char* to_string(SolveStatus status);

struct SolverConfig {
  ToleranceConfig tol;
  int restarts = 40;
  LocalSolverOptions local;
  RegularityOptions regularity;
  QprOptions qpr;
  /// Merge radius for minimizers, multiplied by max(1, ||x||).
  double cluster_radius = 1e-4;
  /// Points with value <= best + cluster_value_tol * (1 + |best|) are optimal.
  double cluster_value_tol = 1e-8;
  /// Axis directions (both signs) used as starts, capped by the dimension.
  int axis_starts = 8;
  int oracle_resolution = 201;

  void check() const;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Inconclusive;
  /// -inf when Unbounded, +inf when Infeasible; for Inconclusive the best
  /// feasible value found (+inf if none).
  double value = 0.0;
  std::vector<Vector> minimizers;
  /// Augmented-Lagrangian multipliers, one vector per minimizer.
  std::vector<Vector> multipliers;
  double diameter = 0.0;
  double value_tolerance = 0.0;
  std::optional<Vector> unbounded_direction;
  RegularityResult regularity;
  QprVerdict qpr;
  int restarts_run = 0;
  int local_converged = 0;
  int local_diverged = 0;
  /// Largest max_i g_i over the returned minimizers (<= 0 means feasible).
  double max_violation = 0.0;
  double runtime_seconds = 0.0;
  std::string note;
};

SolveResult solve_global(const ProblemInstance& problem, const SolverConfig& cfg = {});

/// phi(omega) from solve_global; +inf iff Infeasible, -inf iff Unbounded.
/// Inconclusive results return the best upper bound found and set
/// *inconclusive when the pointer is given.
double optimal_value(const ProblemInstance& problem, const SolverConfig& cfg = {},
                     bool* inconclusive = nullptr);

struct SolutionSetEstimate {
  SolveStatus status = SolveStatus::Inconclusive;
  std::vector<Vector> representatives;
  double diameter = 0.0;
};

SolutionSetEstimate solution_set_estimate(const ProblemInstance& problem,
                                          const SolverConfig& cfg = {});

struct Box {
  Vector lower;
  Vector upper;
};

/// [-r, r]^n with r = 2 (1 + ||x||).
Box default_oracle_box(const Vector& best_point);

struct OracleResult {
  /// Grid minimum of f over feasible grid points; +inf when none is feasible.
  double value = 0.0;
  std::vector<Vector> argmin;
  /// Largest grid spacing over the axes.
  double spacing = 0.0;
  long long feasible_points = 0;
};

/// Exhaustive grid evaluation for dim <= 4.  Grid points with value within
/// value_tol * (1 + |min|) of the minimum are returned as argmin.
OracleResult brute_force_oracle(const ProblemInstance& problem, const Box& box, int resolution,
                                double feas_tol = 0.0, double value_tol = 1e-9);

/// Largest |f(x) - f(y)| / ||x - y|| bound over the box: ||T|| r_max + ||c||.
double lipschitz_bound(const ProblemInstance& problem, const Box& box);

}  // namespace qcqps
