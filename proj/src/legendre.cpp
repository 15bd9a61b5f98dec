#include "qcqp_stability/legendre.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <stdexcept>

namespace qcqps {

Matrix LegendreDecomposition::rank_part() const {
  const Eigen::Index n = lifted_directions.rows();
  Matrix r = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < lifted_directions.cols(); ++j) {
    r += (alpha - lifted_eigenvalues(j)) * lifted_directions.col(j) * lifted_directions.col(j).transpose();
  }
  return r;
}

std::optional<LegendreDecomposition> legendre_decomposition(const SymOperator& t, int rank_budget) {
  const Eigen::Index n = t.dim();
  if (rank_budget < 0 || rank_budget >= n) {
    throw std::invalid_argument("legendre_decomposition: rank budget must lie in [0, dim)");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(t.matrix());
  const Vector& ev = es.eigenvalues();
  Eigen::Index nonpositive = 0;
  while (nonpositive < n && ev(nonpositive) <= 0.0) ++nonpositive;
  const Eigen::Index r = std::min<Eigen::Index>(rank_budget, nonpositive);
  if (!(ev(r) > 0.0)) return std::nullopt;

  LegendreDecomposition d;
  d.alpha = ev(r);
  d.finite_rank = static_cast<int>(r);
  d.lifted_directions = es.eigenvectors().leftCols(r);
  d.lifted_eigenvalues = ev.head(r);
  d.radius = legendre_perturbation_radius(d);
  return d;
}

double legendre_perturbation_radius(const LegendreDecomposition& decomp) {
  return decomp.alpha * (1.0 - 1e-6);
}

}  // namespace qcqps
