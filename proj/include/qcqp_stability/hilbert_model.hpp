#pragma once

// Core data model for quadratically constrained quadratic programs on a
// truncated Hilbert space.  The space is R^n with the Euclidean inner product;
// operators are dense symmetric matrices.
//
//   min  f(x) = 1/2 <x, T x> + <c, x>
//   s.t. g_i(x) = 1/2 <x, T_i x> + <c_i, x> + alpha_i <= 0,  i = 1..m
//
// The parameter of the program is the tuple
// (T, c, T_1..T_m, c_1..c_m, alpha_1..alpha_m), measured in the max-of-components
// product norm (spectral norm for operators, Euclidean for vectors).

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace qcqps {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Symmetric operator on R^n.  Input matrices are symmetrized as (M + M^T)/2;
/// the largest entrywise asymmetry of the raw input is kept for diagnostics.
class SymOperator {
 public:
  SymOperator() = default;
  explicit SymOperator(const Matrix& entries);

  static SymOperator zero(Eigen::Index dim);
  static SymOperator identity(Eigen::Index dim, double scale = 1.0);
  static SymOperator diagonal(const Vector& diag);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  double asymmetry() const { return asymmetry_; }
  /// Largest absolute entry of the raw input.
  double max_abs_entry() const { return max_abs_; }

  /// Spectral norm, i.e. the largest absolute eigenvalue.
  double spectral_norm() const;
  double min_eigenvalue() const;

  double quadratic_form(const Vector& x) const { return x.dot(entries_ * x); }

 private:
  Matrix entries_;
  double asymmetry_ = 0.0;
  double max_abs_ = 0.0;
};

/// q(x) = 1/2 <x, T x> + <c, x> + alpha
struct QuadraticFunction {
  SymOperator T;
  Vector c;
  double alpha = 0.0;

  Eigen::Index dim() const { return T.dim(); }
  double operator()(const Vector& x) const;
  Vector gradient(const Vector& x) const { return T.matrix() * x + c; }
};

struct ProblemInstance {
  Eigen::Index dim = 0;
  QuadraticFunction objective;  // alpha is ignored (fixed to 0)
  std::vector<QuadraticFunction> constraints;
  std::string label;

  std::size_t num_constraints() const { return constraints.size(); }
};

struct ToleranceConfig {
  double feas_tol = 1e-9;
  double kernel_tol = 1e-8;   // relative to the largest singular value
  double value_tol = 1e-9;    // scaled by (1 + ||T||) where used
  double psd_tol = 1e-9;      // relative to the spectral norm
  std::uint64_t seed = 20170609;

  /// Throws std::invalid_argument if any tolerance is not strictly positive.
  void check() const;
};

double eval_objective(const ProblemInstance& problem, const Vector& x);
double eval_constraint(const ProblemInstance& problem, std::size_t i, const Vector& x);
/// max_i g_i(x); -infinity when there are no constraints.
double max_constraint(const ProblemInstance& problem, const Vector& x);
bool is_feasible(const ProblemInstance& problem, const Vector& x, double tol);

/// Product-norm distance between two parameters of equal shape.
double omega_distance(const ProblemInstance& a, const ProblemInstance& b);

/// Spectral norm of a matrix interpreted as a symmetric operator (the
/// symmetric part is used).
double spectral_norm(const Matrix& m);

struct Diagnostic {
  enum class Kind { Shape, Asymmetry, NotPsd, NonFinite };
  Kind kind;
  /// -1 for the objective, otherwise the constraint index.
  int component;
  std::string message;
};

const char* to_string(Diagnostic::Kind kind);

/// Every violated invariant of the instance; empty means valid.
std::vector<Diagnostic> validate(const ProblemInstance& problem, const ToleranceConfig& cfg = {});

/// Throws std::invalid_argument describing the first diagnostic when invalid.
void require_valid(const ProblemInstance& problem, const ToleranceConfig& cfg = {});

}  // namespace qcqps
