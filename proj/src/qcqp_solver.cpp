#include "qcqp_stability/qcqp_solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qcqps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Candidate {
  Vector x;
  Vector multipliers;
  double value;
};

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

double data_scale(const ProblemInstance& p) {
  double s = std::max(p.objective.T.spectral_norm(), p.objective.c.norm());
  for (const auto& g : p.constraints) {
    s = std::max({s, g.T.spectral_norm(), g.c.norm(), std::abs(g.alpha)});
  }
  return s;
}

// Largest t >= 0 keeping x + t d feasible, for a feasible x.
double ray_extent(const ProblemInstance& p, const Vector& x, const Vector& d) {
  double t = kInf;
  for (const auto& g : p.constraints) {
    const double a = g.T.quadratic_form(d);
    const double b = g.gradient(x).dot(d);
    const double c0 = std::min(0.0, g(x));
    double ti = kInf;
    if (a > 1e-14 * (1.0 + g.T.spectral_norm())) {
      const double disc = std::sqrt(b * b - 2.0 * a * c0);
      ti = b > 0 ? -2.0 * c0 / (b + disc) : (disc - b) / a;
    } else if (b > 0) {
      ti = -c0 / b;
    }
    t = std::min(t, std::max(0.0, ti));
  }
  return t;
}

// Moves an infeasible x along the segment towards a strictly feasible point
// until every constraint is nonpositive.
Vector pull_inside(const ProblemInstance& p, const Vector& x, const Vector& inner) {
  if (max_constraint(p, x) <= 0.0) return x;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (max_constraint(p, x + mid * (inner - x)) <= 0.0) hi = mid; else lo = mid;
  }
  return x + hi * (inner - x);
}

Vector random_unit(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector d(n);
  do {
    for (Eigen::Index i = 0; i < n; ++i) d(i) = normal(rng);
  } while (d.norm() == 0.0);
  return d.normalized();
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

void SolverConfig::check() const {
  tol.check();
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (!(cluster_radius > 0) || !(cluster_value_tol > 0)) {
    throw std::invalid_argument("cluster tolerances must be positive");
  }
  if (oracle_resolution < 2) throw std::invalid_argument("oracle resolution must be at least 2");
}

SolveResult solve_global(const ProblemInstance& problem, const SolverConfig& cfg) {
  cfg.check();
  require_valid(problem, cfg.tol);
  const auto started = std::chrono::steady_clock::now();
  auto finish = [&](SolveResult& r) {
    r.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return r;
  };

  SolveResult res;
  const Eigen::Index n = problem.dim;
  const double feas_tol = cfg.tol.feas_tol;

  res.regularity = slater_point(problem, cfg.tol, cfg.regularity);
  const RegularityResult& reg = res.regularity;
  if (reg.status == RegularityStatus::Irregular && reg.suggests_infeasible) {
    res.status = SolveStatus::Infeasible;
    res.value = kInf;
    res.note = reg.note;
    return finish(res);
  }
  if (reg.status != RegularityStatus::Regular && reg.margin > feas_tol) {
    res.status = SolveStatus::Inconclusive;
    res.value = kInf;
    res.note = "no feasible point found; " + reg.note;
    return finish(res);
  }
  const Vector anchor = reg.witness ? *reg.witness : reg.best_point;

  const RecessionCone cone = recession_cone(problem, cfg.tol);
  res.qpr = qpr_solve(problem, cone, cfg.tol, cfg.qpr);
  res.unbounded_direction = unboundedness_direction(problem, res.qpr, anchor);
  if (res.unbounded_direction) {
    res.status = SolveStatus::Unbounded;
    res.value = -kInf;
    res.note = "objective decreases without bound along a recession direction";
    return finish(res);
  }

  // Starts: the anchor, axis rays to the boundary, random points on random rays.
  // Rays that never leave the feasible set are cut at `cap`.
  const double cap = 10.0 * (1.0 + anchor.norm() + data_scale(problem));
  auto extent = [&](const Vector& d) {
    const double t = ray_extent(problem, anchor, d);
    return std::isfinite(t) ? t : cap;
  };
  std::vector<Vector> starts{anchor};
  const auto axes = std::min<Eigen::Index>(n, cfg.axis_starts);
  for (Eigen::Index j = 0; j < axes && static_cast<int>(starts.size()) <= cfg.restarts; ++j) {
    for (double sign : {1.0, -1.0}) {
      if (static_cast<int>(starts.size()) > cfg.restarts) break;
      Vector d = Vector::Zero(n);
      d(j) = sign;
      starts.push_back(anchor + extent(d) * d);
    }
  }
  std::mt19937_64 rng(cfg.tol.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  while (static_cast<int>(starts.size()) <= cfg.restarts) {
    const Vector d = random_unit(rng, n);
    const double u = unif(rng);
    starts.push_back(anchor + u * extent(d) * d);
  }

  std::vector<Candidate> candidates;
  double best_start = kInf;
  Vector best_start_point;
  for (const Vector& x0 : starts) {
    ++res.restarts_run;
    if (is_feasible(problem, x0, feas_tol)) {
      const double v = eval_objective(problem, x0);
      if (v < best_start) {
        best_start = v;
        best_start_point = x0;
      }
    }
    const LocalResult lr =
        augmented_lagrangian(problem.objective, problem.constraints, x0, cfg.local);
    if (lr.diverged) {
      ++res.local_diverged;
      continue;
    }
    if (lr.converged) ++res.local_converged;
    Vector x = lr.x;
    if (reg.witness) x = pull_inside(problem, x, *reg.witness);
    if (!is_feasible(problem, x, feas_tol)) continue;
    candidates.push_back({x, lr.multipliers, eval_objective(problem, x)});
  }

  if (candidates.empty()) {
    res.status = SolveStatus::Inconclusive;
    res.value = best_start;
    res.note = "no local solve ended feasible";
    return finish(res);
  }

  double best = kInf;
  for (const auto& c : candidates) best = std::min(best, c.value);
  if (best_start < best - cfg.cluster_value_tol * (1.0 + std::abs(best))) {
    // A start beat every local solve; keep it so the value stays an upper bound
    // over all visited feasible points.
    candidates.push_back({best_start_point,
                          Vector::Zero(static_cast<Eigen::Index>(problem.constraints.size())),
                          best_start});
    best = best_start;
    res.note = "a start point improved on every local solve";
  }

  res.value_tolerance = cfg.cluster_value_tol * (1.0 + std::abs(best));
  std::vector<Candidate> near;
  for (auto& c : candidates) {
    if (c.value <= best + res.value_tolerance) near.push_back(std::move(c));
  }
  std::sort(near.begin(), near.end(), [](const Candidate& a, const Candidate& b) {
    if (a.value != b.value) return a.value < b.value;
    return lex_less(a.x, b.x);
  });
  for (const auto& c : near) {
    const double radius = cfg.cluster_radius * std::max(1.0, c.x.norm());
    bool merged = false;
    for (const auto& r : res.minimizers) {
      if ((r - c.x).norm() <= radius) {
        merged = true;
        break;
      }
    }
    if (!merged) {
      res.minimizers.push_back(c.x);
      res.multipliers.push_back(c.multipliers);
    }
  }

  res.value = best;
  res.max_violation = -kInf;
  for (std::size_t i = 0; i < res.minimizers.size(); ++i) {
    res.max_violation = std::max(res.max_violation, max_constraint(problem, res.minimizers[i]));
    for (std::size_t j = i + 1; j < res.minimizers.size(); ++j) {
      res.diameter = std::max(res.diameter, (res.minimizers[i] - res.minimizers[j]).norm());
    }
  }
  if (problem.constraints.empty()) res.max_violation = 0.0;

  if (res.qpr.inconclusive && res.local_diverged > 0) {
    res.status = SolveStatus::Inconclusive;
    res.note = "recession test inconclusive and some local solves diverged";
  } else {
    res.status = SolveStatus::Solved;
  }
  return finish(res);
}

double optimal_value(const ProblemInstance& problem, const SolverConfig& cfg, bool* inconclusive) {
  const SolveResult r = solve_global(problem, cfg);
  if (inconclusive) *inconclusive = r.status == SolveStatus::Inconclusive;
  return r.value;
}

SolutionSetEstimate solution_set_estimate(const ProblemInstance& problem, const SolverConfig& cfg) {
  const SolveResult r = solve_global(problem, cfg);
  SolutionSetEstimate est;
  est.status = r.status;
  if (r.status == SolveStatus::Solved) {
    est.representatives = r.minimizers;
    est.diameter = r.diameter;
  }
  return est;
}

Box default_oracle_box(const Vector& best_point) {
  const double r = 2.0 * (1.0 + best_point.norm());
  return {Vector::Constant(best_point.size(), -r), Vector::Constant(best_point.size(), r)};
}

OracleResult brute_force_oracle(const ProblemInstance& problem, const Box& box, int resolution,
                                double feas_tol, double value_tol) {
  const auto n = static_cast<int>(problem.dim);
  if (n > 4) throw std::invalid_argument("brute_force_oracle: dimension above 4");
  if (box.lower.size() != n || box.upper.size() != n) {
    throw std::invalid_argument("brute_force_oracle: box dimension mismatch");
  }
  if (resolution < 2) throw std::invalid_argument("brute_force_oracle: resolution below 2");

  // Plain arrays: the inner loop runs up to resolution^4 times.
  struct Quad {
    std::vector<double> t;
    std::vector<double> c;
    double alpha;
  };
  auto flatten = [n](const QuadraticFunction& q) {
    Quad out{std::vector<double>(static_cast<std::size_t>(n * n)),
             std::vector<double>(static_cast<std::size_t>(n)), q.alpha};
    for (int i = 0; i < n; ++i) {
      out.c[static_cast<std::size_t>(i)] = q.c(i);
      for (int j = 0; j < n; ++j) out.t[static_cast<std::size_t>(i * n + j)] = q.T.matrix()(i, j);
    }
    return out;
  };
  auto eval = [n](const Quad& q, const double* x) {
    double v = q.alpha;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += q.t[static_cast<std::size_t>(i * n + j)] * x[j];
      v += x[i] * (0.5 * row + q.c[static_cast<std::size_t>(i)]);
    }
    return v;
  };
  Quad f = flatten(problem.objective);
  f.alpha = 0.0;
  std::vector<Quad> g;
  for (const auto& q : problem.constraints) g.push_back(flatten(q));

  OracleResult out;
  out.value = kInf;
  for (int i = 0; i < n; ++i) {
    out.spacing = std::max(out.spacing, (box.upper(i) - box.lower(i)) / (resolution - 1));
  }

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double x[4] = {0, 0, 0, 0};
  std::vector<std::pair<double, std::array<double, 4>>> near;
  auto coord = [&](int axis, int k) {
    return box.lower(axis) + (box.upper(axis) - box.lower(axis)) * k / (resolution - 1);
  };
  while (true) {
    for (int i = 0; i < n; ++i) x[i] = coord(i, idx[static_cast<std::size_t>(i)]);
    bool feasible = true;
    for (const auto& q : g) {
      if (eval(q, x) > feas_tol) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      ++out.feasible_points;
      const double v = eval(f, x);
      if (v <= out.value + value_tol * (1.0 + std::abs(std::min(v, out.value)))) {
        out.value = std::min(out.value, v);
        near.push_back({v, {x[0], x[1], x[2], x[3]}});
        if (near.size() > 200000) {
          const double cut = out.value + value_tol * (1.0 + std::abs(out.value));
          std::erase_if(near, [cut](const auto& e) { return e.first > cut; });
        }
      }
    }
    int axis = 0;
    while (axis < n && ++idx[static_cast<std::size_t>(axis)] == resolution) {
      idx[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == n) break;
  }

  const double cut = out.value + value_tol * (1.0 + std::abs(out.value));
  for (const auto& [v, p] : near) {
    if (v > cut) continue;
    Vector pt(n);
    for (int i = 0; i < n; ++i) pt(i) = p[static_cast<std::size_t>(i)];
    out.argmin.push_back(pt);
  }
  return out;
}

double lipschitz_bound(const ProblemInstance& problem, const Box& box) {
  const Vector far = box.lower.cwiseAbs().cwiseMax(box.upper.cwiseAbs());
  return problem.objective.T.spectral_norm() * far.norm() + problem.objective.c.norm();
}

}  // namespace qcqps
