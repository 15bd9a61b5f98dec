#pragma once

#include "qcqp_stability/hilbert_model.hpp"

#include <initializer_list>
#include <vector>

namespace testing_util {

using qcqps::Matrix;
using qcqps::ProblemInstance;
using qcqps::QuadraticFunction;
using qcqps::SymOperator;
using qcqps::Vector;

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix diag(std::initializer_list<double> xs) { return vec(xs).asDiagonal(); }

inline QuadraticFunction quad(const Matrix& t, const Vector& c, double alpha = 0.0) {
  return QuadraticFunction{SymOperator(t), c, alpha};
}

inline ProblemInstance problem(const Matrix& t, const Vector& c,
                               std::vector<QuadraticFunction> cons = {}) {
  ProblemInstance p;
  p.dim = t.rows();
  p.objective = quad(t, c);
  p.constraints = std::move(cons);
  return p;
}

inline Vector unit(Eigen::Index n, Eigen::Index k) { return Vector::Unit(n, k); }

}  // namespace testing_util
