#include "qcqp_stability/local_solver.hpp"

#include "qcqp_stability/trust_region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcqps {

namespace {

struct Subproblem {
  const QuadraticFunction& f;
  const std::vector<QuadraticFunction>& g;
  const Vector& lambda;
  double rho;
};

enum class InnerExit { Stationary, SmallStep, Budget, Diverged };

// Change of the augmented Lagrangian along p, assembled from exact
// differences of the quadratics so that tiny decreases stay resolvable.
double augmented_change(const Subproblem& s, const Vector& p,
                        const std::vector<double>& gx, const std::vector<Vector>& grads,
                        const Vector& fgrad) {
  double d = fgrad.dot(p) + 0.5 * s.f.T.quadratic_form(p);
  for (std::size_t i = 0; i < s.g.size(); ++i) {
    const double dg = grads[i].dot(p) + 0.5 * s.g[i].T.quadratic_form(p);
    const double a = s.lambda(static_cast<Eigen::Index>(i)) + s.rho * gx[i];
    const double b = a + s.rho * dg;
    if (a > 0 && b > 0) {
      d += dg * (a + 0.5 * s.rho * dg);
    } else {
      const double ap = std::max(0.0, a);
      const double bp = std::max(0.0, b);
      d += (bp * bp - ap * ap) / (2.0 * s.rho);
    }
  }
  return d;
}

InnerExit minimize_subproblem(const Subproblem& s, Vector& x, const LocalSolverOptions& opt,
                              int& iterations) {
  const Eigen::Index n = x.size();
  double radius = std::max(1.0, x.norm());
  std::vector<double> gx(s.g.size());
  std::vector<Vector> grads(s.g.size());
  Matrix h(n, n);

  for (int it = 0; it < opt.max_inner; ++it) {
    ++iterations;
    const Vector fgrad = s.f.gradient(x);
    Vector grad = fgrad;
    h = s.f.T.matrix();
    for (std::size_t i = 0; i < s.g.size(); ++i) {
      gx[i] = s.g[i](x);
      grads[i] = s.g[i].gradient(x);
      const double a = s.lambda(static_cast<Eigen::Index>(i)) + s.rho * gx[i];
      if (a > 0) {
        grad += a * grads[i];
        h += a * s.g[i].T.matrix();
        h.noalias() += s.rho * grads[i] * grads[i].transpose();
      }
    }
    if (!grad.allFinite() || !h.allFinite()) return InnerExit::Diverged;
    if (grad.norm() <= 1e-300) return InnerExit::Stationary;

    const TrustRegionStep tr = solve_trust_region(h, grad, radius);
    if (!(tr.model_change < 0.0)) return InnerExit::Stationary;
    const double actual = augmented_change(s, tr.step, gx, grads, fgrad);
    const double ratio = actual / tr.model_change;
    const double pnorm = tr.step.norm();

    if (ratio > 1e-4 && actual < 0.0) {
      x += tr.step;
      if (x.norm() > opt.divergence_norm) return InnerExit::Diverged;
      if (ratio > 0.75 && tr.on_boundary) radius = std::min(2.0 * radius, 1e12);
      if (pnorm <= 1e-15 * (1.0 + x.norm())) return InnerExit::SmallStep;
    } else {
      radius = 0.25 * pnorm;
    }
    if (ratio < 0.25) radius = std::min(radius, 0.25 * pnorm);
    if (radius <= 1e-15 * (1.0 + x.norm())) return InnerExit::SmallStep;
  }
  return InnerExit::Budget;
}

double max_violation(const std::vector<QuadraticFunction>& g, const Vector& x) {
  double v = 0.0;
  for (const auto& q : g) v = std::max(v, q(x));
  return v;
}

}  // namespace

LocalResult augmented_lagrangian(const QuadraticFunction& objective,
                                 const std::vector<QuadraticFunction>& constraints,
                                 const Vector& x0, const LocalSolverOptions& options) {
  LocalResult res;
  Vector x = x0;
  Vector lambda = Vector::Zero(static_cast<Eigen::Index>(constraints.size()));
  double rho = options.rho0;
  double alpha_scale = 0.0;
  for (const auto& q : constraints) alpha_scale = std::max(alpha_scale, std::abs(q.alpha));
  const double feas_target = options.feas_tol * (1.0 + alpha_scale);
  double previous_violation = std::numeric_limits<double>::infinity();

  for (int outer = 0; outer < options.max_outer; ++outer) {
    ++res.outer_iterations;
    const Vector x_before = x;
    const Subproblem sub{objective, constraints, lambda, rho};
    const InnerExit exit = minimize_subproblem(sub, x, options, res.inner_iterations);
    if (exit == InnerExit::Diverged) {
      if (rho < options.rho_max && !constraints.empty()) {
        rho = std::min(rho * options.rho_growth, options.rho_max);
        x = x_before;
        continue;
      }
      res.diverged = true;
      break;
    }
    if (constraints.empty()) {
      res.converged = exit != InnerExit::Budget;
      break;
    }

    Vector next(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      next(i) = std::max(0.0, lambda(i) + rho * constraints[static_cast<std::size_t>(i)](x));
    }
    const double change = (next - lambda).cwiseAbs().maxCoeff();
    lambda = next;
    const double violation = max_violation(constraints, x);
    if (violation <= feas_target && change <= 1e-10 * (1.0 + lambda.cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }
    if (violation > 0.25 * previous_violation) rho = std::min(rho * options.rho_growth, options.rho_max);
    previous_violation = violation;
  }

  res.x = x;
  res.multipliers = lambda;
  res.objective = objective(x);
  res.violation = max_violation(constraints, x);
  if (!x.allFinite()) {
    res.diverged = true;
    res.converged = false;
  }
  return res;
}

double kkt_residual(const QuadraticFunction& objective,
                    const std::vector<QuadraticFunction>& constraints, const Vector& x,
                    const Vector& multipliers) {
  Vector r = objective.gradient(x);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    r += multipliers(static_cast<Eigen::Index>(i)) * constraints[i].gradient(x);
  }
  return r.norm();
}

}  // namespace qcqps
