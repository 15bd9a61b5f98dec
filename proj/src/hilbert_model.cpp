#include "qcqp_stability/hilbert_model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qcqps {

namespace {

constexpr double kSymmetryTol = 1e-12;

void require_dim(const ProblemInstance& problem, const Vector& x) {
  if (x.size() != problem.dim) {
    std::ostringstream os;
    os << "dimension mismatch: vector of length " << x.size() << ", instance dimension "
       << problem.dim;
    throw std::invalid_argument(os.str());
  }
}

double operator_distance(const SymOperator& a, const SymOperator& b) {
  return spectral_norm(a.matrix() - b.matrix());
}

}  // namespace

SymOperator::SymOperator(const Matrix& entries) {
  if (entries.rows() != entries.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  if (entries.size() > 0) {
    asymmetry_ = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    max_abs_ = entries.cwiseAbs().maxCoeff();
  }
  entries_ = 0.5 * (entries + entries.transpose());
}

SymOperator SymOperator::zero(Eigen::Index dim) { return SymOperator(Matrix::Zero(dim, dim)); }

SymOperator SymOperator::identity(Eigen::Index dim, double scale) {
  return SymOperator(scale * Matrix::Identity(dim, dim));
}

SymOperator SymOperator::diagonal(const Vector& diag) {
  return SymOperator(Matrix(diag.asDiagonal()));
}

double SymOperator::spectral_norm() const { return qcqps::spectral_norm(entries_); }

double SymOperator::min_eigenvalue() const {
  if (entries_.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double QuadraticFunction::operator()(const Vector& x) const {
  return 0.5 * x.dot(T.matrix() * x) + c.dot(x) + alpha;
}

void ToleranceConfig::check() const {
  if (!(feas_tol > 0 && kernel_tol > 0 && value_tol > 0 && psd_tol > 0)) {
    throw std::invalid_argument("all tolerances must be strictly positive");
  }
}

double eval_objective(const ProblemInstance& problem, const Vector& x) {
  require_dim(problem, x);
  const auto& f = problem.objective;
  return 0.5 * x.dot(f.T.matrix() * x) + f.c.dot(x);
}

double eval_constraint(const ProblemInstance& problem, std::size_t i, const Vector& x) {
  if (i >= problem.constraints.size()) {
    throw std::out_of_range("constraint index " + std::to_string(i) + " out of range");
  }
  require_dim(problem, x);
  return problem.constraints[i](x);
}

double max_constraint(const ProblemInstance& problem, const Vector& x) {
  require_dim(problem, x);
  double s = -std::numeric_limits<double>::infinity();
  for (const auto& g : problem.constraints) s = std::max(s, g(x));
  return s;
}

bool is_feasible(const ProblemInstance& problem, const Vector& x, double tol) {
  require_dim(problem, x);
  for (const auto& g : problem.constraints) {
    if (!(g(x) <= tol)) return false;
  }
  return true;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

double omega_distance(const ProblemInstance& a, const ProblemInstance& b) {
  if (a.dim != b.dim || a.constraints.size() != b.constraints.size()) {
    throw std::invalid_argument("omega_distance: instances differ in shape");
  }
  double d = operator_distance(a.objective.T, b.objective.T);
  d = std::max(d, (a.objective.c - b.objective.c).norm());
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& ga = a.constraints[i];
    const auto& gb = b.constraints[i];
    d = std::max(d, operator_distance(ga.T, gb.T));
    d = std::max(d, (ga.c - gb.c).norm());
    d = std::max(d, std::abs(ga.alpha - gb.alpha));
  }
  return d;
}

const char* to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::Shape: return "shape";
    case Diagnostic::Kind::Asymmetry: return "asymmetry";
    case Diagnostic::Kind::NotPsd: return "not_psd";
    case Diagnostic::Kind::NonFinite: return "non_finite";
  }
  return "unknown";
}

std::vector<Diagnostic> validate(const ProblemInstance& problem, const ToleranceConfig& cfg) {
  std::vector<Diagnostic> out;
  auto name = [](int component) {
    return component < 0 ? std::string("objective") : "constraint " + std::to_string(component);
  };

  if (problem.dim < 1) {
    out.push_back({Diagnostic::Kind::Shape, -1, "dimension must be at least 1"});
    return out;
  }

  auto check_function = [&](const QuadraticFunction& q, int component) {
    bool shape_ok = true;
    if (q.T.dim() != problem.dim) {
      out.push_back({Diagnostic::Kind::Shape, component,
                     name(component) + ": operator is " + std::to_string(q.T.dim()) + "x" +
                         std::to_string(q.T.dim()) + ", expected dimension " +
                         std::to_string(problem.dim)});
      shape_ok = false;
    }
    if (q.c.size() != problem.dim) {
      out.push_back({Diagnostic::Kind::Shape, component,
                     name(component) + ": vector has length " + std::to_string(q.c.size()) +
                         ", expected " + std::to_string(problem.dim)});
      shape_ok = false;
    }
    if (!shape_ok) return false;
    if (!q.T.matrix().allFinite() || !q.c.allFinite() || !std::isfinite(q.alpha)) {
      out.push_back({Diagnostic::Kind::NonFinite, component, name(component) + ": non-finite data"});
      return false;
    }
    if (q.T.asymmetry() > kSymmetryTol * (1.0 + q.T.max_abs_entry())) {
      std::ostringstream os;
      os << name(component) << ": operator is not symmetric (max |M_ij - M_ji| = "
         << q.T.asymmetry() << ")";
      out.push_back({Diagnostic::Kind::Asymmetry, component, os.str()});
    }
    return true;
  };

  check_function(problem.objective, -1);
  for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
    const auto& g = problem.constraints[i];
    if (!check_function(g, static_cast<int>(i))) continue;
    const double lmin = g.T.min_eigenvalue();
    const double tol = cfg.psd_tol * g.T.spectral_norm();
    if (lmin < -tol) {
      std::ostringstream os;
      os << "constraint " << i << ": operator is not positive semidefinite (smallest eigenvalue "
         << lmin << ")";
      out.push_back({Diagnostic::Kind::NotPsd, static_cast<int>(i), os.str()});
    }
  }
  return out;
}

void require_valid(const ProblemInstance& problem, const ToleranceConfig& cfg) {
  const auto diags = validate(problem, cfg);
  if (!diags.empty()) throw std::invalid_argument(diags.front().message);
}

}  // namespace qcqps
