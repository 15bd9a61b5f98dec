#include "qcqp_stability/cli.hpp"

#include "qcqp_stability/families.hpp"
#include "qcqp_stability/problem_io.hpp"
#include "qcqp_stability/report.hpp"

#include <CLI11.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qcqps {

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kInconclusive = 2;

struct Common {
  std::string positional;
  std::string input;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> feas_tol;
  std::optional<double> kernel_tol;
  std::optional<double> value_tol;
  std::optional<double> psd_tol;
  std::optional<int> restarts;
};

struct StabilityArgs {
  std::vector<double> radii{0.1, 0.03, 0.01};
  int samples = 8;
  std::string directed;
  bool predictions = false;
  bool no_psd_repair = false;
};

struct ReproArgs {
  std::string family;
  int n = 4;
  double eps = 0.0;
  bool perturbed = false;
  bool problem_only = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_common(CLI::App* sub, Common& c, bool positional_input) {
  if (positional_input) sub->add_option("problem", c.positional, "problem JSON file");
  sub->add_option("--input,-i", c.input, "problem JSON file");
  sub->add_option("--out,-o", c.out, "report path (standard output when omitted)");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--feas-tol", c.feas_tol);
  sub->add_option("--kernel-tol", c.kernel_tol);
  sub->add_option("--value-tol", c.value_tol);
  sub->add_option("--psd-tol", c.psd_tol);
  sub->add_option("--restarts", c.restarts, "solver restarts");
}

SolverConfig solver_config(const Common& c) {
  SolverConfig cfg;
  if (c.seed) cfg.tol.seed = *c.seed;
  if (c.feas_tol) cfg.tol.feas_tol = *c.feas_tol;
  if (c.kernel_tol) cfg.tol.kernel_tol = *c.kernel_tol;
  if (c.value_tol) cfg.tol.value_tol = *c.value_tol;
  if (c.psd_tol) cfg.tol.psd_tol = *c.psd_tol;
  if (c.restarts) cfg.restarts = *c.restarts;
  try {
    cfg.check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::string input_path(const Common& c) {
  if (!c.positional.empty() && !c.input.empty()) throw UsageError("give the input either positionally or with --input");
  const std::string path = c.positional.empty() ? c.input : c.positional;
  if (path.empty()) throw UsageError("an input problem file is required");
  return path;
}

void print_diagnostics(const std::vector<Diagnostic>& diags, std::ostream& err) {
  for (const auto& d : diags) {
    err << to_string(d.kind) << ": " << d.message << '\n';
  }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis for quadratic programs with convex quadratic constraints",
               "qcqp-stability"};
  app.require_subcommand(1);
  Common common;
  StabilityArgs stab;
  ReproArgs repro;

  auto* validate_cmd = app.add_subcommand("validate", "check instance invariants");
  auto* solve = app.add_subcommand("solve", "global solve and solution-set estimate");
  auto* recession = app.add_subcommand("recession", "recession cone of the feasible set");
  auto* qpr = app.add_subcommand("qpr", "decide triviality of the recession program");
  auto* regularity = app.add_subcommand("regularity", "Slater regularity of the constraints");
  auto* stability = app.add_subcommand("stability", "empirical semicontinuity and value moduli");
  auto* conditions = app.add_subcommand("conditions", "stability conditions and predictions");
  auto* reproduce = app.add_subcommand("repro", "generate and analyse a built-in example");
  for (auto* sub : {validate_cmd, solve, recession, qpr, regularity, stability, conditions}) {
    add_common(sub, common, true);
  }
  add_common(reproduce, common, false);

  stability->add_option("--radii", stab.radii, "decreasing radius schedule")->delimiter(',');
  stability->add_option("--samples", stab.samples, "samples per radius");
  stability->add_option("--directed", stab.directed,
                        "objective_shift_up, objective_shift_down, alpha_shift or linear_separation");
  stability->add_flag("--predictions", stab.predictions, "test every prediction of the conditions");
  stability->add_flag("--no-psd-repair", stab.no_psd_repair);

  reproduce->add_option("family", repro.family,
                        "unbounded_L2, k_not_open, not_usc, not_lsc or lipschitz")->required();
  reproduce->add_option("--n", repro.n, "truncation dimension");
  reproduce->add_option("--eps", repro.eps, "family parameter");
  reproduce->add_flag("--perturbed", repro.perturbed, "perturbed k_not_open variant");
  reproduce->add_flag("--problem-only", repro.problem_only, "emit only the problem file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  }

  try {
    const SolverConfig cfg = solver_config(common);
    if (common.format == "csv" && !stability->parsed()) {
      throw UsageError("csv output is only available for stability reports");
    }

    if (reproduce->parsed()) {
      FamilyParams params{repro.n, repro.eps, repro.perturbed};
      const ProblemInstance p = make_family(family_from_string(repro.family), params);
      if (repro.problem_only) {
        emit_report(dump(to_json(p)), common.out, out);
        return kOk;
      }
      const ConditionReport cr = check_theorem_conditions(p, cfg);
      nlohmann::json j;
      j["family"] = repro.family;
      j["params"] = {{"n", repro.n}, {"eps", repro.eps}, {"perturbed", repro.perturbed}};
      if (family_from_string(repro.family) == FamilyId::NotUsc) {
        j["note"] = "heuristic shadow: an empty solution set has no finite truncation, growth of the "
                    "minimizer norm in n stands in for it";
      }
      j["problem"] = to_json(p);
      j["solve"] = to_json(cr.solve);
      j["conditions"] = to_json(cr);
      emit_report(dump(j), common.out, out);
      return cr.solve.status == SolveStatus::Inconclusive ? kInconclusive : kOk;
    }

    const ProblemInstance p = load_problem(input_path(common));
    const auto diags = validate(p, cfg.tol);
    if (validate_cmd->parsed()) {
      nlohmann::json j{{"label", p.label}, {"valid", diags.empty()}, {"diagnostics", to_json(diags)}};
      emit_report(dump(j), common.out, out);
      print_diagnostics(diags, err);
      return diags.empty() ? kOk : kInvalid;
    }
    if (!diags.empty()) {
      err << "invalid instance\n";
      print_diagnostics(diags, err);
      return kInvalid;
    }

    if (solve->parsed()) {
      const SolveResult r = solve_global(p, cfg);
      emit_report(dump(to_json(r)), common.out, out);
      return r.status == SolveStatus::Inconclusive ? kInconclusive : kOk;
    }
    if (recession->parsed()) {
      emit_report(dump(to_json(recession_cone(p, cfg.tol))), common.out, out);
      return kOk;
    }
    if (qpr->parsed()) {
      const RecessionCone cone = recession_cone(p, cfg.tol);
      const QprVerdict v = qpr_solve(p, cone, cfg.tol, cfg.qpr);
      nlohmann::json j = to_json(v);
      j["cone"] = to_json(cone);
      emit_report(dump(j), common.out, out);
      return v.inconclusive ? kInconclusive : kOk;
    }
    if (regularity->parsed()) {
      const RegularityResult r = slater_point(p, cfg.tol, cfg.regularity);
      emit_report(dump(to_json(r)), common.out, out);
      return r.status == RegularityStatus::Inconclusive ? kInconclusive : kOk;
    }
    if (conditions->parsed()) {
      const ConditionReport r = check_theorem_conditions(p, cfg);
      emit_report(dump(to_json(r)), common.out, out);
      const bool unknown = r.cond_i == Tri::Unknown || r.cond_ii == Tri::Unknown ||
                           r.cond_iii == Tri::Unknown;
      return unknown ? kInconclusive : kOk;
    }
    if (stability->parsed()) {
      StabilityOptions opts;
      opts.solver = cfg;
      opts.spec.radii = stab.radii;
      opts.spec.samples_per_radius = stab.samples;
      opts.spec.seed = cfg.tol.seed;
      opts.spec.psd_repair = !stab.no_psd_repair;
      try {
        opts.spec.check();
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (stab.predictions) {
        if (common.format == "csv") throw UsageError("prediction tables are JSON only");
        CorroborationOptions co;
        co.stability = opts;
        const PredictionTable t = corroborate_predictions(p, co);
        emit_report(dump(to_json(t)), common.out, out);
        return t.conditions.solve.status == SolveStatus::Inconclusive ? kInconclusive : kOk;
      }
      if (!stab.directed.empty()) {
        opts.directed = directed_family_from_string(stab.directed);
        if (*opts.directed == DirectedFamily::LinearSeparation) {
          opts.cbar = separation_vector(solve_global(p, cfg));
        }
      }
      const StabilityReport r = stability_report(p, opts);
      emit_report(common.format == "csv" ? stability_csv(r) : dump(to_json(r)), common.out, out);
      return r.base.status == SolveStatus::Inconclusive ? kInconclusive : kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}

}  // namespace qcqps
