#include "qcqp_stability/regularity.hpp"

#include "qcqp_stability/min_norm_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

namespace qcqps {

namespace {

struct DescentOutcome {
  Vector x;
  double value;
  bool stationary;
};

Vector constraint_values(const ProblemInstance& p, const Vector& x) {
  Vector g(static_cast<Eigen::Index>(p.constraints.size()));
  for (std::size_t i = 0; i < p.constraints.size(); ++i) g(static_cast<Eigen::Index>(i)) = p.constraints[i](x);
  return g;
}

Vector min_norm_subgradient(const ProblemInstance& p, const Vector& x, const Vector& g, double eps) {
  const double s = g.maxCoeff();
  std::vector<Vector> grads;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    if (g(static_cast<Eigen::Index>(i)) >= s - eps) grads.push_back(p.constraints[i].gradient(x));
  }
  Matrix cols(x.size(), static_cast<Eigen::Index>(grads.size()));
  for (std::size_t i = 0; i < grads.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = grads[i];
  return min_norm_point(cols).point;
}

// Epsilon-steepest descent on s(x) = max_i g_i(x): the search direction is the
// negative min-norm element of the convex hull of the eps-active gradients,
// with Armijo backtracking.  eps shrinks whenever no descent is possible.
DescentOutcome descend(const ProblemInstance& p, Vector x, int budget, double floor) {
  Vector g = constraint_values(p, x);
  double s = g.maxCoeff();
  double eps = 1e-3 * (1.0 + std::abs(s));
  double step = 1.0;
  bool stationary = false;

  for (int k = 0; k < budget; ++k) {
    if (s < floor) break;
    const double eps_min = 1e-13 * (1.0 + std::abs(s));
    const Vector d = min_norm_subgradient(p, x, g, eps);
    const double dn2 = d.squaredNorm();
    if (dn2 <= 1e-24) {
      if (eps <= eps_min) {
        stationary = true;
        break;
      }
      eps = std::max(eps_min, eps * 0.1);
      continue;
    }
    double t = std::min(step * 4.0, 1e12);
    bool accepted = false;
    while (t * std::sqrt(dn2) > 1e-16 * (1.0 + x.norm())) {
      const Vector trial = x - t * d;
      const Vector gt = constraint_values(p, trial);
      const double st = gt.maxCoeff();
      if (st <= s - 1e-4 * t * dn2) {
        x = trial;
        g = gt;
        s = st;
        step = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      if (eps <= eps_min) {
        stationary = true;
        break;
      }
      eps = std::max(eps_min, eps * 0.1);
    }
  }
  return {x, s, stationary};
}

Vector random_in_ball(std::mt19937_64& rng, Eigen::Index dim, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = normal(rng);
  const double n = v.norm();
  if (n == 0.0) return Vector::Zero(dim);
  return v * (radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim)) / n);
}

}  // namespace

const char* to_string(RegularityStatus status) {
  switch (status) {
    case RegularityStatus::Regular: return "regular";
    case RegularityStatus::Irregular: return "irregular";
    case RegularityStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

double max_constraint_stationarity(const ProblemInstance& problem, const Vector& x, double eps) {
  if (problem.constraints.empty()) return 0.0;
  return min_norm_subgradient(problem, x, constraint_values(problem, x), eps).norm();
}

RegularityResult slater_point(const ProblemInstance& problem, const ToleranceConfig& cfg,
                              const RegularityOptions& options) {
  cfg.check();
  RegularityResult result;
  const Eigen::Index n = problem.dim;
  if (problem.constraints.empty()) {
    result.status = RegularityStatus::Regular;
    result.witness = Vector::Zero(n);
    result.best_point = Vector::Zero(n);
    result.margin = -std::numeric_limits<double>::infinity();
    result.note = "no constraints";
    return result;
  }

  double data_scale = 0.0;
  for (const auto& g : problem.constraints) {
    data_scale = std::max({data_scale, g.c.norm(), std::abs(g.alpha), g.T.spectral_norm()});
  }
  double c_scale = 0.0;
  for (const auto& g : problem.constraints) c_scale = std::max(c_scale, g.c.norm());
  const double floor = -1e6 * (1.0 + data_scale);

  std::mt19937_64 rng(cfg.seed);
  result.margin = std::numeric_limits<double>::infinity();

  for (int start = 0; start < options.starts; ++start) {
    const Vector x0 = start == 0 ? Vector::Zero(n) : random_in_ball(rng, n, 1.0 + c_scale);
    const DescentOutcome out = descend(problem, x0, options.budget, floor);
    ++result.starts_run;
    if (out.stationary) ++result.certified_starts;
    if (out.value < result.margin) {
      result.margin = out.value;
      result.best_point = out.x;
    }
    if (out.value < -cfg.feas_tol) {
      result.status = RegularityStatus::Regular;
      result.witness = out.x;
      result.best_point = out.x;
      result.margin = out.value;
      result.stationarity = max_constraint_stationarity(problem, out.x, 1e-6 * (1.0 + std::abs(out.value)));
      return result;
    }
  }

  result.stationarity = max_constraint_stationarity(
      problem, result.best_point, 1e-6 * (1.0 + std::abs(result.margin)));
  result.suggests_infeasible = result.margin > cfg.feas_tol;
  std::ostringstream note;
  if (result.stationarity < options.stationarity_tol && result.certified_starts >= 2) {
    result.status = RegularityStatus::Irregular;
    note << (result.suggests_infeasible ? "no feasible point: " : "feasible without interior: ")
         << "min of max_i g_i = " << result.margin << " with subgradient distance "
         << result.stationarity;
  } else {
    result.status = RegularityStatus::Inconclusive;
    note << "budget exhausted near zero: best max_i g_i = " << result.margin
         << ", subgradient distance " << result.stationarity;
  }
  result.note = note.str();
  return result;
}

double regularity_margin(const ProblemInstance& problem, const ToleranceConfig& cfg) {
  return slater_point(problem, cfg).margin;
}

}  // namespace qcqps
