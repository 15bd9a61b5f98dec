#pragma once

// JSON problem files:
//   { "dim": n,
//     "objective":   {"T": [[...]], "c": [...]},
//     "constraints": [{"T": [[...]], "c": [...], "alpha": a}, ...],
//     "label": "..." }
// Matrices are row-major nested arrays.

#include "qcqp_stability/hilbert_model.hpp"

#include <json.hpp>

#include <filesystem>

namespace qcqps {

nlohmann::json to_json(const ProblemInstance& problem);
/// Accepts either a bare problem object or a report object with a "problem" key.
/// Shape errors are left to validate(); malformed JSON throws std::invalid_argument.
ProblemInstance problem_from_json(const nlohmann::json& j);

ProblemInstance load_problem(const std::filesystem::path& path);
void save_problem(const ProblemInstance& problem, const std::filesystem::path& path);

nlohmann::json to_json(const Vector& v);
nlohmann::json to_json(const Matrix& m);
/// +/-infinity become the strings "inf" / "-inf"; NaN becomes "nan".
nlohmann::json extended_real(double v);

}  // namespace qcqps
