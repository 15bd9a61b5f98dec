#include "qcqp_stability/report.hpp"

#include "qcqp_stability/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qcqps {

namespace {

using nlohmann::json;

json vectors(const std::vector<Vector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

json optional_vector(const std::optional<Vector>& v) { return v ? to_json(*v) : json(nullptr); }

// unknown becomes null
json tri(Tri t) {
  if (t == Tri::Unknown) return nullptr;
  return t == Tri::True;
}

}  // namespace

json to_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    out.push_back({{"kind", to_string(d.kind)}, {"component", d.component}, {"message", d.message}});
  }
  return out;
}

json to_json(const RegularityResult& r) {
  return {{"status", to_string(r.status)},
          {"witness", optional_vector(r.witness)},
          {"margin", extended_real(r.margin)},
          {"best_point", to_json(r.best_point)},
          {"stationarity", r.stationarity},
          {"certified_starts", r.certified_starts},
          {"starts_run", r.starts_run},
          {"suggests_infeasible", r.suggests_infeasible},
          {"note", r.note}};
}

json to_json(const RecessionCone& cone) {
  return {{"ambient_dim", cone.ambient_dim},
          {"kernel_dim", cone.kernel_dim()},
          {"kernel_basis", to_json(cone.kernel_basis)},
          {"halfspace_matrix", to_json(cone.halfspace_matrix)},
          {"is_zero", cone.is_zero()}};
}

json to_json(const QprVerdict& v) {
  return {{"trivial", v.trivial},
          {"witness", optional_vector(v.witness)},
          {"min_rayleigh", extended_real(v.min_rayleigh)},
          {"value_threshold", v.value_threshold},
          {"exact", v.exact},
          {"inconclusive", v.inconclusive}};
}

json to_json(const SolveResult& r) {
  json mult = json::array();
  for (const auto& m : r.multipliers) mult.push_back(to_json(m));
  return {{"status", to_string(r.status)},
          {"value", extended_real(r.value)},
          {"minimizers", vectors(r.minimizers)},
          {"multipliers", mult},
          {"diameter", r.diameter},
          {"value_tolerance", r.value_tolerance},
          {"unbounded_direction", optional_vector(r.unbounded_direction)},
          {"diagnostics",
           {{"restarts", r.restarts_run},
            {"local_converged", r.local_converged},
            {"local_diverged", r.local_diverged},
            {"max_violation", extended_real(r.max_violation)}}},
          {"regularity", to_json(r.regularity)},
          {"qpr", to_json(r.qpr)},
          {"note", r.note}};
}

json to_json(const StabilityRow& row) {
  return {{"delta", row.delta},
          {"usc_excess", row.usc_excess},
          {"lsc_deficiency", row.lsc_deficiency},
          {"value_gap", row.value_gap},
          {"lipschitz_quotient_max", row.lipschitz_quotient_max},
          {"infeasible_fraction", row.infeasible_fraction},
          {"unbounded_fraction", row.unbounded_fraction},
          {"inconclusive_fraction", row.inconclusive_fraction},
          {"samples", row.samples},
          {"solved", row.solved},
          {"max_distance", row.max_distance},
          {"max_clip", row.max_clip}};
}

json to_json(const StabilityReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  return {{"label", r.label},
          {"mode", r.mode},
          {"applicable", r.applicable},
          {"note", r.note},
          {"base_status", to_string(r.base.status)},
          {"base_value", extended_real(r.base.value)},
          {"base_minimizers", vectors(r.base.minimizers)},
          {"value_tolerance", r.base.value_tolerance},
          {"rows", rows}};
}

json to_json(const ConditionReport& r) {
  return {{"cond_i", tri(r.cond_i)},
          {"cond_ii", tri(r.cond_ii)},
          {"cond_iii", tri(r.cond_iii)},
          {"phi_finite", r.phi_finite},
          {"predictions",
           {{"sol_usc", tri(r.usc)},
            {"sol_lsc", tri(r.lsc)},
            {"sol_continuity", tri(r.sol_continuity)},
            {"phi_continuity", tri(r.phi_continuity)},
            {"phi_lipschitz", tri(r.phi_lipschitz)}}}};
}

json to_json(const PropertyCheck& c) {
  json moduli = json::array();
  for (double m : c.moduli) moduli.push_back(extended_real(m));
  return {{"property", to_string(c.property)},
          {"predicted", tri(c.predicted)},
          {"evaluated", c.evaluated},
          {"corroborated", c.corroborated},
          {"evidence", c.evidence},
          {"moduli", moduli}};
}

json to_json(const PredictionTable& t) {
  json checks = json::array();
  for (const auto& c : t.checks) checks.push_back(to_json(c));
  json reports = json::array();
  for (const auto& r : t.reports) reports.push_back(to_json(r));
  return {{"conditions", to_json(t.conditions)},
          {"checks", checks},
          {"all_corroborated", t.all_corroborated()},
          {"reports", reports}};
}

json to_json(const LegendreDecomposition& d) {
  return {{"alpha", d.alpha},
          {"finite_rank", d.finite_rank},
          {"lifted_directions", to_json(d.lifted_directions)},
          {"lifted_eigenvalues", to_json(d.lifted_eigenvalues)},
          {"radius", d.radius}};
}

json to_json(const OracleResult& r) {
  return {{"value", extended_real(r.value)},
          {"argmin", vectors(r.argmin)},
          {"spacing", r.spacing},
          {"feasible_points", r.feasible_points}};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string stability_csv(const StabilityReport& r) {
  std::ostringstream os;
  os << "delta,usc_excess,lsc_deficiency,value_gap,lipschitz_quotient_max,infeasible_fraction,"
        "unbounded_fraction\r\n";
  for (const auto& row : r.rows) {
    os << csv_field(format_double(row.delta)) << ',' << csv_field(format_double(row.usc_excess))
       << ',' << csv_field(format_double(row.lsc_deficiency)) << ','
       << csv_field(format_double(row.value_gap)) << ','
       << csv_field(format_double(row.lipschitz_quotient_max)) << ','
       << csv_field(format_double(row.infeasible_fraction)) << ','
       << csv_field(format_double(row.unbounded_fraction)) << "\r\n";
  }
  return os.str();
}

void emit_report(const std::string& content, const std::filesystem::path& path,
                 std::ostream& console) {
  if (path.empty() || path == "-") {
    console << content;
    console.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write report to " + path.string());
  out << content;
  out.close();
  if (!out) throw std::runtime_error("failed writing report to " + path.string());
}

}  // namespace qcqps
