#pragma once

// JSON and CSV serialization of analysis results.  Runtimes are left out so
// that identical inputs give byte-identical reports.

#include "qcqp_stability/hilbert_model.hpp"
#include "qcqp_stability/legendre.hpp"
#include "qcqp_stability/qcqp_solver.hpp"
#include "qcqp_stability/recession.hpp"
#include "qcqp_stability/regularity.hpp"
#include "qcqp_stability/stability.hpp"

#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace qcqps {

nlohmann::json to_json(const std::vector<Diagnostic>& diagnostics);
nlohmann::json to_json(const RegularityResult& r);
nlohmann::json to_json(const RecessionCone& cone);
nlohmann::json to_json(const QprVerdict& v);
nlohmann::json to_json(const SolveResult& r);
nlohmann::json to_json(const StabilityRow& row);
nlohmann::json to_json(const StabilityReport& r);
nlohmann::json to_json(const ConditionReport& r);
nlohmann::json to_json(const PropertyCheck& c);
nlohmann::json to_json(const PredictionTable& t);
nlohmann::json to_json(const LegendreDecomposition& d);
nlohmann::json to_json(const OracleResult& r);

/// Header plus one row per radius with the columns
/// delta,usc_excess,lsc_deficiency,value_gap,lipschitz_quotient_max,
/// infeasible_fraction,unbounded_fraction.
std::string stability_csv(const StabilityReport& r);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
/// 17 significant digits; inf, -inf and nan spelled out.
std::string format_double(double v);

/// Writes `content` to `path`, or to `console` when the path is empty or "-".
/// Throws std::runtime_error when the file cannot be written.
void emit_report(const std::string& content, const std::filesystem::path& path,
                 std::ostream& console = std::cout);

}  // namespace qcqps
