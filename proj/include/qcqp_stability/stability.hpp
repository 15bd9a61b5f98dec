#pragma once

// Empirical stability of the solution map and the optimal value function
// under sampled and directed perturbations of the parameter.

#include "qcqp_stability/hilbert_model.hpp"
#include "qcqp_stability/qcqp_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qcqps {

struct PerturbationSpec {
  /// Strictly decreasing, positive.
  std::vector<double> radii{0.1, 0.03, 0.01};
  int samples_per_radius = 8;
  bool perturb_T = true;
  bool perturb_c = true;
  bool perturb_Ti = true;
  bool perturb_ci = true;
  bool perturb_alpha = true;
  std::uint64_t seed = 20170609;
  bool psd_repair = true;

  void check() const;
};

struct PerturbationSample {
  ProblemInstance instance;
  double distance = 0.0;
  /// Largest spectral-norm change made by the PSD repair of a constraint operator.
  double clip = 0.0;
  /// Factor applied to the raw perturbation to stay within the radius.
  double shrink = 1.0;
};

/// Samples within product-norm distance delta of the instance.  Sample k uses
/// the same random shape for every delta, scaled by delta.
std::vector<PerturbationSample> sample_perturbations_detailed(const ProblemInstance& problem,
                                                              const PerturbationSpec& spec,
                                                              double delta);
std::vector<ProblemInstance> sample_perturbations(const ProblemInstance& problem,
                                                  const PerturbationSpec& spec, double delta);

/// One-parameter perturbation families used to exhibit instability.
enum class DirectedFamily {
  ObjectiveShiftUp,    // T + eps I
  ObjectiveShiftDown,  // T - eps I
  AlphaShift,          // alpha_i + eps for every i
  LinearSeparation,    // c + eps cbar, ||cbar|| = 1
};

const char* to_string(DirectedFamily family);
DirectedFamily directed_family_from_string(const std::string& name);

/// Throws std::invalid_argument for LinearSeparation without a unit cbar.
ProblemInstance directed_perturbation(const ProblemInstance& problem, DirectedFamily family,
                                      double eps, const std::optional<Vector>& cbar = {});

/// Normalized difference of the two farthest representatives; none when the
/// estimate has fewer than two.
std::optional<Vector> separation_vector(const SolveResult& base);

struct StabilityRow {
  double delta = 0.0;
  double usc_excess = 0.0;
  double lsc_deficiency = 0.0;
  double value_gap = 0.0;
  double lipschitz_quotient_max = 0.0;
  double infeasible_fraction = 0.0;
  double unbounded_fraction = 0.0;
  double inconclusive_fraction = 0.0;
  int samples = 0;
  int solved = 0;
  double max_distance = 0.0;
  double max_clip = 0.0;
};

struct StabilityOptions {
  PerturbationSpec spec;
  SolverConfig solver;
  /// When set, each radius contributes the single directed instance at eps = delta.
  std::optional<DirectedFamily> directed;
  std::optional<Vector> cbar;
  /// Solution-set estimates are the eps-level sets {x in F : f <= phi + eps}
  /// with eps = level_tol * (1 + |phi|).
  double level_tol = 1e-8;
};

struct StabilityReport {
  std::string label;
  std::string mode;  // "random" or the directed family name
  bool applicable = true;
  std::string note;
  SolveResult base;
  std::vector<StabilityRow> rows;
};

StabilityReport stability_report(const ProblemInstance& problem, const StabilityOptions& options);

/// Per-delta columns of stability_report, for callers needing one modulus.
std::vector<double> usc_estimate(const ProblemInstance& problem, const PerturbationSpec& spec,
                                 const SolverConfig& cfg);
std::vector<double> lsc_estimate(const ProblemInstance& problem, const PerturbationSpec& spec,
                                 const SolverConfig& cfg);
struct ValueContinuityRow {
  double delta = 0.0;
  double value_gap = 0.0;
  double lipschitz_quotient_max = 0.0;
};
std::vector<ValueContinuityRow> value_continuity_estimate(const ProblemInstance& problem,
                                                          const PerturbationSpec& spec,
                                                          const SolverConfig& cfg);

/// dist(x, S) where S is the eps-level set of the solved instance: the nearest
/// representative, improved by a local projection onto S.
double distance_to_solution_set(const ProblemInstance& problem, const SolveResult& solved,
                                const Vector& x, const SolverConfig& cfg, double level_tol = 1e-8);

enum class Tri { True, False, Unknown };
const char* to_string(Tri t);

struct ConditionReport {
  Tri cond_i = Tri::Unknown;
  Tri cond_ii = Tri::Unknown;
  Tri cond_iii = Tri::Unknown;
  Tri usc = Tri::Unknown;
  Tri lsc = Tri::Unknown;
  Tri sol_continuity = Tri::Unknown;
  Tri phi_continuity = Tri::Unknown;
  Tri phi_lipschitz = Tri::Unknown;
  bool phi_finite = false;
  SolveResult solve;
};

ConditionReport check_theorem_conditions(const ProblemInstance& problem,
                                         const SolverConfig& cfg = {});

enum class Property { Usc, Lsc, SolContinuity, PhiContinuity, PhiLipschitz };
const char* to_string(Property p);

struct PropertyCheck {
  Property property = Property::Usc;
  Tri predicted = Tri::Unknown;
  /// Family that produced the decisive table ("random" for predicted-true).
  std::string evidence;
  /// Modulus per radius; +inf marks a radius with an empty solution estimate
  /// under a directed family.
  std::vector<double> moduli;
  bool evaluated = false;
  bool corroborated = false;
};

struct CorroborationOptions {
  StabilityOptions stability;
  /// Moduli at or below this count as zero when testing for halving.
  double halving_floor = 1e-6;
  /// Lower bound a modulus must keep across the schedule when the property
  /// is predicted to fail.
  double failure_threshold = 0.1;
  /// Extra directed families tried for predicted failures.
  std::vector<DirectedFamily> extra_families;
};

struct PredictionTable {
  ConditionReport conditions;
  std::vector<PropertyCheck> checks;
  std::vector<StabilityReport> reports;
  bool all_corroborated() const;
};

/// Tests every prediction of check_theorem_conditions against the harness:
/// predicted-true properties need the modulus to halve between consecutive
/// radii, predicted-false ones need a directed family keeping it above the
/// failure threshold.
PredictionTable corroborate_predictions(const ProblemInstance& problem,
                                        const CorroborationOptions& options = {});

}  // namespace qcqps
