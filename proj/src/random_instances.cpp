#include "qcqp_stability/random_instances.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace qcqps {

namespace {

Matrix gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

}  // namespace

ProblemInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options) {
  if (options.min_dim < 1 || options.max_dim < options.min_dim || options.max_constraints < 1) {
    throw std::invalid_argument("random_instance: bad options");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(options.min_dim, options.max_dim);
  std::uniform_int_distribution<int> m_dist(1, options.max_constraints);
  std::uniform_real_distribution<double> slack(0.2, 1.0);
  const int n = dim_dist(rng);
  const int m = m_dist(rng);

  ProblemInstance p;
  p.dim = n;
  const Matrix g = gaussian(rng, n, n, 1.0);
  p.objective = QuadraticFunction{SymOperator(0.5 * (g + g.transpose())), gaussian(rng, n, 1, 1.0).col(0), 0.0};
  const Vector x0 = gaussian(rng, n, 1, 0.5).col(0);

  std::uniform_int_distribution<int> rank_dist(0, n);
  for (int i = 0; i < m; ++i) {
    Matrix t;
    if (i == 0 && options.bounded) {
      const Matrix b = gaussian(rng, n, n, 1.0);
      t = b * b.transpose() + 0.2 * Matrix::Identity(n, n);
    } else {
      const int r = rank_dist(rng);
      const Matrix b = gaussian(rng, n, r, 1.0);
      t = b * b.transpose();
    }
    QuadraticFunction q{SymOperator(t), gaussian(rng, n, 1, 0.5).col(0), 0.0};
    q.alpha = -(0.5 * q.T.quadratic_form(x0) + q.c.dot(x0)) - slack(rng);
    p.constraints.push_back(q);
  }
  std::ostringstream os;
  os << "random_" << seed;
  p.label = os.str();
  return p;
}

}  // namespace qcqps
