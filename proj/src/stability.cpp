#include "qcqp_stability/stability.hpp"

#include "qcqp_stability/recession.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qcqps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix random_symmetric_unit(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  Matrix e = 0.5 * (g + g.transpose());
  const double s = spectral_norm(e);
  return s > 0 ? Matrix(e / s) : Matrix(Matrix::Zero(n, n));
}

Vector random_in_unit_ball(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  const double norm = v.norm();
  if (norm == 0.0) return Vector::Zero(n);
  return v * (std::pow(unif(rng), 1.0 / static_cast<double>(n)) / norm);
}

struct Shape {
  Matrix t;
  double ut = 0.0;
  Vector c;
  std::vector<Matrix> ti;
  std::vector<double> uti;
  std::vector<Vector> ci;
  std::vector<double> alpha;
};

Shape draw_shape(const ProblemInstance& p, std::uint64_t seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  Shape s;
  s.t = random_symmetric_unit(rng, p.dim);
  s.ut = unit(rng);
  s.c = random_in_unit_ball(rng, p.dim);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    s.ti.push_back(random_symmetric_unit(rng, p.dim));
    s.uti.push_back(unit(rng));
    s.ci.push_back(random_in_unit_ball(rng, p.dim));
    s.alpha.push_back(sym(rng));
  }
  return s;
}

// Eigenvalue clipping at zero; returns the spectral size of the correction.
double clip_psd(Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
  const Vector& ev = es.eigenvalues();
  if (ev.size() == 0 || ev(0) >= 0.0) return 0.0;
  const Vector clipped = ev.cwiseMax(0.0);
  m = es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
  m = 0.5 * (m + m.transpose());
  return -ev(0);
}

PerturbationSample build_sample(const ProblemInstance& p, const PerturbationSpec& spec,
                                const Shape& s, double delta, double scale) {
  PerturbationSample out;
  out.shrink = scale;
  out.instance = p;
  ProblemInstance& q = out.instance;
  const double d = delta * scale;
  if (spec.perturb_T) q.objective.T = SymOperator(p.objective.T.matrix() + d * s.ut * s.t);
  if (spec.perturb_c) q.objective.c = p.objective.c + d * s.c;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    auto& g = q.constraints[i];
    if (spec.perturb_Ti) {
      Matrix m = p.constraints[i].T.matrix() + d * s.uti[i] * s.ti[i];
      if (spec.psd_repair) out.clip = std::max(out.clip, clip_psd(m));
      g.T = SymOperator(m);
    }
    if (spec.perturb_ci) g.c = p.constraints[i].c + d * s.ci[i];
    if (spec.perturb_alpha) g.alpha = p.constraints[i].alpha + d * s.alpha[i];
  }
  q.label = p.label.empty() ? "perturbed" : p.label + "_perturbed";
  out.distance = omega_distance(p, q);
  return out;
}

Tri tri_and(std::initializer_list<Tri> xs) {
  bool unknown = false;
  for (Tri t : xs) {
    if (t == Tri::False) return Tri::False;
    if (t == Tri::Unknown) unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::True;
}

Tri tri_of(bool b) { return b ? Tri::True : Tri::False; }

bool halves(const std::vector<double>& m, double floor) {
  for (std::size_t k = 0; k + 1 < m.size(); ++k) {
    if (!std::isfinite(m[k + 1])) return false;
    if (m[k + 1] > floor && m[k + 1] > 0.5 * m[k]) return false;
  }
  return true;
}

double modulus_of(Property p, const StabilityRow& r, bool empty_as_infinite) {
  if (empty_as_infinite && r.solved < r.samples) return kInf;
  switch (p) {
    case Property::Usc: return r.usc_excess;
    case Property::Lsc: return r.lsc_deficiency;
    case Property::SolContinuity: return std::max(r.usc_excess, r.lsc_deficiency);
    case Property::PhiContinuity: return r.value_gap;
    case Property::PhiLipschitz: return empty_as_infinite ? r.lipschitz_quotient_max : r.value_gap;
  }
  return 0.0;
}

}  // namespace

void PerturbationSpec::check() const {
  if (radii.empty()) throw std::invalid_argument("radius schedule is empty");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 0.0) || !std::isfinite(radii[i])) {
      throw std::invalid_argument("radii must be finite and >= 0");
    }
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw std::invalid_argument("radius schedule must be strictly decreasing");
    }
  }
  if (samples_per_radius < 1) throw std::invalid_argument("samples_per_radius must be at least 1");
}

std::vector<PerturbationSample> sample_perturbations_detailed(const ProblemInstance& problem,
                                                              const PerturbationSpec& spec,
                                                              double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be >= 0");
  if (spec.samples_per_radius < 1) throw std::invalid_argument("samples_per_radius must be at least 1");
  std::vector<PerturbationSample> out;
  for (int k = 0; k < spec.samples_per_radius; ++k) {
    if (delta == 0.0) {
      PerturbationSample s;
      s.instance = problem;
      out.push_back(std::move(s));
      continue;
    }
    const Shape shape = draw_shape(problem, spec.seed, k);
    double scale = 1.0;
    PerturbationSample s = build_sample(problem, spec, shape, delta, scale);
    // The PSD repair can push the distance past delta; shrink until it fits.
    for (int attempt = 0; attempt < 60 && s.distance > delta; ++attempt) {
      scale *= 0.5;
      s = build_sample(problem, spec, shape, delta, scale);
    }
    if (s.distance > delta) {
      s = PerturbationSample{};
      s.instance = problem;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<ProblemInstance> sample_perturbations(const ProblemInstance& problem,
                                                  const PerturbationSpec& spec, double delta) {
  std::vector<ProblemInstance> out;
  for (auto& s : sample_perturbations_detailed(problem, spec, delta)) out.push_back(std::move(s.instance));
  return out;
}

const char* to_string(DirectedFamily family) {
  switch (family) {
    case DirectedFamily::ObjectiveShiftUp: return "objective_shift_up";
    case DirectedFamily::ObjectiveShiftDown: return "objective_shift_down";
    case DirectedFamily::AlphaShift: return "alpha_shift";
    case DirectedFamily::LinearSeparation: return "linear_separation";
  }
  return "unknown";
}

DirectedFamily directed_family_from_string(const std::string& name) {
  for (auto f : {DirectedFamily::ObjectiveShiftUp, DirectedFamily::ObjectiveShiftDown,
                 DirectedFamily::AlphaShift, DirectedFamily::LinearSeparation}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown directed family: " + name);
}

ProblemInstance directed_perturbation(const ProblemInstance& problem, DirectedFamily family,
                                      double eps, const std::optional<Vector>& cbar) {
  ProblemInstance q = problem;
  const Eigen::Index n = problem.dim;
  switch (family) {
    case DirectedFamily::ObjectiveShiftUp:
      q.objective.T = SymOperator(problem.objective.T.matrix() + eps * Matrix::Identity(n, n));
      break;
    case DirectedFamily::ObjectiveShiftDown:
      q.objective.T = SymOperator(problem.objective.T.matrix() - eps * Matrix::Identity(n, n));
      break;
    case DirectedFamily::AlphaShift:
      for (auto& g : q.constraints) g.alpha += eps;
      break;
    case DirectedFamily::LinearSeparation:
      if (!cbar || cbar->size() != n || std::abs(cbar->norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("linear separation needs a unit vector cbar");
      }
      q.objective.c = problem.objective.c + eps * *cbar;
      break;
  }
  q.label = problem.label + "_" + to_string(family);
  return q;
}

std::optional<Vector> separation_vector(const SolveResult& base) {
  if (base.minimizers.size() < 2) return std::nullopt;
  double best = -1.0;
  Vector d;
  for (std::size_t i = 0; i < base.minimizers.size(); ++i) {
    for (std::size_t j = i + 1; j < base.minimizers.size(); ++j) {
      const Vector diff = base.minimizers[i] - base.minimizers[j];
      if (diff.norm() > best) {
        best = diff.norm();
        d = diff;
      }
    }
  }
  if (!(best > 0)) return std::nullopt;
  return Vector(d / best);
}

double distance_to_solution_set(const ProblemInstance& problem, const SolveResult& solved,
                                const Vector& x, const SolverConfig& cfg, double level_tol) {
  if (solved.minimizers.empty()) return kInf;
  const double phi = solved.value;
  const double level = phi + level_tol * (1.0 + std::abs(phi));
  const double feas_tol = cfg.tol.feas_tol;
  if (is_feasible(problem, x, feas_tol) && eval_objective(problem, x) <= level) return 0.0;

  double best = kInf;
  const Vector* nearest = nullptr;
  for (const auto& r : solved.minimizers) {
    const double d = (r - x).norm();
    if (d < best) {
      best = d;
      nearest = &r;
    }
  }

  // Projection onto {z in F : f(z) <= level} from the nearest representative.
  const Eigen::Index n = problem.dim;
  const QuadraticFunction dist{SymOperator::identity(n), -x, 0.0};
  std::vector<QuadraticFunction> cons = problem.constraints;
  cons.push_back(QuadraticFunction{problem.objective.T, problem.objective.c, -level});
  const LocalResult lr = augmented_lagrangian(dist, cons, *nearest, cfg.local);
  if (!lr.diverged && is_feasible(problem, lr.x, feas_tol) &&
      eval_objective(problem, lr.x) <= level + feas_tol * (1.0 + std::abs(phi))) {
    best = std::min(best, (lr.x - x).norm());
  }
  return best;
}

StabilityReport stability_report(const ProblemInstance& problem, const StabilityOptions& options) {
  options.spec.check();
  StabilityReport report;
  report.label = problem.label;
  report.mode = options.directed ? to_string(*options.directed) : "random";
  report.base = solve_global(problem, options.solver);
  const SolveResult& base = report.base;
  if (base.status != SolveStatus::Solved) {
    report.applicable = false;
    report.note = std::string("base instance not solved: ") + to_string(base.status);
    return report;
  }
  if (options.directed == DirectedFamily::LinearSeparation && !options.cbar) {
    report.applicable = false;
    report.note = "linear separation skipped: solution estimate is a singleton";
    return report;
  }
  const double phi = base.value;

  for (double delta : options.spec.radii) {
    std::vector<PerturbationSample> samples;
    if (options.directed) {
      PerturbationSample s;
      s.instance = directed_perturbation(problem, *options.directed, delta, options.cbar);
      s.distance = omega_distance(problem, s.instance);
      samples.push_back(std::move(s));
    } else {
      samples = sample_perturbations_detailed(problem, options.spec, delta);
    }

    StabilityRow row;
    row.delta = delta;
    int infeasible = 0;
    int unbounded = 0;
    int inconclusive = 0;
    for (const auto& s : samples) {
      ++row.samples;
      row.max_distance = std::max(row.max_distance, s.distance);
      row.max_clip = std::max(row.max_clip, s.clip);
      if (s.distance == 0.0) {
        ++row.solved;
        continue;
      }
      const SolveResult r = solve_global(s.instance, options.solver);
      if (r.status == SolveStatus::Infeasible || r.status == SolveStatus::Unbounded) {
        ++(r.status == SolveStatus::Infeasible ? infeasible : unbounded);
        // phi jumps to +-inf
        const double jump = r.status == SolveStatus::Infeasible ? kInf : -kInf;
        if (jump != phi) {
          row.value_gap = kInf;
          if (s.distance >= delta / 10.0 && s.distance > 0.0) row.lipschitz_quotient_max = kInf;
        }
        continue;
      }
      if (r.status == SolveStatus::Inconclusive) { ++inconclusive; continue; }
      ++row.solved;
      for (const auto& xp : r.minimizers) {
        row.usc_excess = std::max(row.usc_excess, distance_to_solution_set(
                                                      problem, base, xp, options.solver, options.level_tol));
      }
      for (const auto& xs : base.minimizers) {
        row.lsc_deficiency = std::max(row.lsc_deficiency, distance_to_solution_set(
                                                              s.instance, r, xs, options.solver, options.level_tol));
      }
      const double gap = std::abs(r.value - phi);
      row.value_gap = std::max(row.value_gap, gap);
      if (s.distance >= delta / 10.0 && s.distance > 0.0) {
        row.lipschitz_quotient_max = std::max(row.lipschitz_quotient_max, gap / s.distance);
      }
    }
    row.infeasible_fraction = static_cast<double>(infeasible) / row.samples;
    row.unbounded_fraction = static_cast<double>(unbounded) / row.samples;
    row.inconclusive_fraction = static_cast<double>(inconclusive) / row.samples;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<double> usc_estimate(const ProblemInstance& problem, const PerturbationSpec& spec,
                                 const SolverConfig& cfg) {
  StabilityOptions o;
  o.spec = spec;
  o.solver = cfg;
  std::vector<double> out;
  for (const auto& r : stability_report(problem, o).rows) out.push_back(r.usc_excess);
  return out;
}

std::vector<double> lsc_estimate(const ProblemInstance& problem, const PerturbationSpec& spec,
                                 const SolverConfig& cfg) {
  StabilityOptions o;
  o.spec = spec;
  o.solver = cfg;
  std::vector<double> out;
  for (const auto& r : stability_report(problem, o).rows) out.push_back(r.lsc_deficiency);
  return out;
}

std::vector<ValueContinuityRow> value_continuity_estimate(const ProblemInstance& problem,
                                                          const PerturbationSpec& spec,
                                                          const SolverConfig& cfg) {
  StabilityOptions o;
  o.spec = spec;
  o.solver = cfg;
  std::vector<ValueContinuityRow> out;
  for (const auto& r : stability_report(problem, o).rows) {
    out.push_back({r.delta, r.value_gap, r.lipschitz_quotient_max});
  }
  return out;
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Property p) {
  switch (p) {
    case Property::Usc: return "sol_usc";
    case Property::Lsc: return "sol_lsc";
    case Property::SolContinuity: return "sol_continuity";
    case Property::PhiContinuity: return "phi_continuity";
    case Property::PhiLipschitz: return "phi_lipschitz";
  }
  return "unknown";
}

ConditionReport check_theorem_conditions(const ProblemInstance& problem, const SolverConfig& cfg) {
  ConditionReport rep;
  rep.solve = solve_global(problem, cfg);
  const QprVerdict qpr = qpr_solve(problem, recession_cone(problem, cfg.tol), cfg.tol, cfg.qpr);
  rep.cond_i = qpr.inconclusive ? Tri::Unknown : tri_of(qpr.trivial);
  switch (rep.solve.regularity.status) {
    case RegularityStatus::Regular: rep.cond_ii = Tri::True; break;
    case RegularityStatus::Irregular: rep.cond_ii = Tri::False; break;
    case RegularityStatus::Inconclusive: rep.cond_ii = Tri::Unknown; break;
  }
  switch (rep.solve.status) {
    case SolveStatus::Solved: {
      const double radius = cfg.cluster_radius *
                            std::max(1.0, rep.solve.minimizers.front().norm());
      rep.cond_iii = tri_of(rep.solve.minimizers.size() == 1 && rep.solve.diameter <= radius);
      break;
    }
    case SolveStatus::Infeasible:
    case SolveStatus::Unbounded: rep.cond_iii = Tri::False; break;
    case SolveStatus::Inconclusive: rep.cond_iii = Tri::Unknown; break;
  }
  rep.phi_finite = rep.solve.status == SolveStatus::Solved;
  rep.usc = tri_and({rep.cond_i, rep.cond_ii});
  rep.lsc = tri_and({rep.cond_i, rep.cond_ii, rep.cond_iii});
  rep.sol_continuity = rep.lsc;
  rep.phi_lipschitz = rep.lsc;
  rep.phi_continuity = rep.phi_finite ? tri_and({rep.cond_i, rep.cond_ii}) : Tri::Unknown;
  return rep;
}

bool PredictionTable::all_corroborated() const {
  for (const auto& c : checks) {
    if (c.evaluated && !c.corroborated) return false;
  }
  return true;
}

PredictionTable corroborate_predictions(const ProblemInstance& problem,
                                        const CorroborationOptions& options) {
  PredictionTable table;
  table.conditions = check_theorem_conditions(problem, options.stability.solver);
  const ConditionReport& cr = table.conditions;
  const std::vector<std::pair<Property, Tri>> predictions{
      {Property::Usc, cr.usc},
      {Property::Lsc, cr.lsc},
      {Property::SolContinuity, cr.sol_continuity},
      {Property::PhiContinuity, cr.phi_continuity},
      {Property::PhiLipschitz, cr.phi_lipschitz}};
  for (const auto& [p, t] : predictions) {
    PropertyCheck c;
    c.property = p;
    c.predicted = t;
    table.checks.push_back(c);
  }
  if (cr.solve.status != SolveStatus::Solved) return table;

  const StabilityReport* random = nullptr;
  std::map<DirectedFamily, std::size_t> directed;
  auto random_report = [&]() {
    if (!random) {
      StabilityOptions o = options.stability;
      o.directed.reset();
      table.reports.push_back(stability_report(problem, o));
      random = &table.reports.back();
    }
    return random;
  };

  std::vector<DirectedFamily> failure_families;
  if (cr.cond_i == Tri::False) {
    failure_families.push_back(DirectedFamily::ObjectiveShiftDown);
  } else if (cr.cond_ii == Tri::False) {
    failure_families.push_back(DirectedFamily::AlphaShift);
  } else if (cr.cond_iii == Tri::False) {
    failure_families.push_back(DirectedFamily::LinearSeparation);
  }
  for (auto f : options.extra_families) {
    if (std::find(failure_families.begin(), failure_families.end(), f) == failure_families.end()) {
      failure_families.push_back(f);
    }
  }

  table.reports.reserve(1 + failure_families.size());
  for (auto& c : table.checks) {
    if (c.predicted == Tri::True) {
      const StabilityReport* r = random_report();
      if (!r->applicable) continue;
      c.evaluated = true;
      c.evidence = "random";
      bool all_solved = true;
      for (const auto& row : r->rows) {
        c.moduli.push_back(modulus_of(c.property, row, false));
        if (row.solved == 0) all_solved = false;
      }
      c.corroborated = all_solved && halves(c.moduli, options.halving_floor);
      if (c.property == Property::PhiLipschitz && c.corroborated) {
        // Difference quotients must stay bounded along the schedule.
        const double first = std::max(r->rows.front().lipschitz_quotient_max, options.halving_floor);
        for (const auto& row : r->rows) {
          if (!(row.lipschitz_quotient_max <= 2.0 * first)) c.corroborated = false;
        }
      }
    } else if (c.predicted == Tri::False) {
      for (auto f : failure_families) {
        auto it = directed.find(f);
        if (it == directed.end()) {
          StabilityOptions o = options.stability;
          o.directed = f;
          if (f == DirectedFamily::LinearSeparation) o.cbar = separation_vector(cr.solve);
          table.reports.push_back(stability_report(problem, o));
          it = directed.emplace(f, table.reports.size() - 1).first;
        }
        const StabilityReport& r = table.reports[it->second];
        if (!r.applicable) continue;
        std::vector<double> moduli;
        bool holds = true;
        for (const auto& row : r.rows) {
          const double m = modulus_of(c.property, row, true);
          moduli.push_back(m);
          if (!(m >= options.failure_threshold)) holds = false;
        }
        c.evaluated = true;
        if (holds || c.moduli.empty()) {
          c.moduli = moduli;
          c.evidence = to_string(f);
          c.corroborated = holds;
        }
        if (holds) break;
      }
    }
  }
  return table;
}

}  // namespace qcqps
