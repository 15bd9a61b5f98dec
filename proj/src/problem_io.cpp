#include "qcqp_stability/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace qcqps {

namespace {

Vector vector_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw std::invalid_argument(std::string(what) + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[static_cast<std::size_t>(r)], what);
    if (row.size() != rows) throw std::invalid_argument(std::string(what) + " must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

QuadraticFunction function_from_json(const nlohmann::json& j, bool with_alpha) {
  if (!j.is_object()) throw std::invalid_argument("quadratic function must be an object");
  QuadraticFunction q;
  q.T = SymOperator(matrix_from_json(j.at("T"), "T"));
  q.c = vector_from_json(j.at("c"), "c");
  if (with_alpha) q.alpha = j.at("alpha").get<double>();
  return q;
}

}  // namespace

nlohmann::json to_json(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json to_json(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

nlohmann::json extended_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::json to_json(const ProblemInstance& problem) {
  nlohmann::json j;
  j["dim"] = problem.dim;
  j["objective"] = {{"T", to_json(problem.objective.T.matrix())},
                    {"c", to_json(problem.objective.c)}};
  j["constraints"] = nlohmann::json::array();
  for (const auto& g : problem.constraints) {
    j["constraints"].push_back(
        {{"T", to_json(g.T.matrix())}, {"c", to_json(g.c)}, {"alpha", g.alpha}});
  }
  j["label"] = problem.label;
  return j;
}

ProblemInstance problem_from_json(const nlohmann::json& in) {
  const nlohmann::json& j = (in.is_object() && in.contains("problem")) ? in.at("problem") : in;
  try {
    ProblemInstance p;
    p.dim = j.at("dim").get<Eigen::Index>();
    p.objective = function_from_json(j.at("objective"), false);
    if (j.contains("constraints")) {
      for (const auto& g : j.at("constraints")) p.constraints.push_back(function_from_json(g, true));
    }
    if (j.contains("label")) p.label = j.at("label").get<std::string>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed problem file: ") + e.what());
  }
}

ProblemInstance load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open problem file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("cannot parse " + path.string() + ": " + e.what());
  }
  return problem_from_json(j);
}

void save_problem(const ProblemInstance& problem, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(problem).dump(2) << '\n';
}

}  // namespace qcqps
