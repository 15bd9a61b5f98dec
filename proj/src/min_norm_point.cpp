#include "qcqp_stability/min_norm_point.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace qcqps {

namespace {

// Minimizer of ||P_S mu|| over the affine hull of the selected columns.
Vector affine_minimizer(const Matrix& points, const std::vector<Eigen::Index>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Matrix ps(points.rows(), k);
  for (Eigen::Index i = 0; i < k; ++i) ps.col(i) = points.col(support[static_cast<std::size_t>(i)]);
  Matrix kkt = Matrix::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = ps.transpose() * ps;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Vector rhs = Vector::Zero(k + 1);
  rhs(k) = 1.0;
  const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormPoint min_norm_point(const Matrix& points) {
  const Eigen::Index k = points.cols();
  if (k == 0) throw std::invalid_argument("min_norm_point: empty point set");

  const double scale = std::max(1e-300, points.colwise().squaredNorm().maxCoeff());
  const double tol = 1e-12 * scale;
  const double weight_eps = 1e-14;

  Eigen::Index start = 0;
  points.colwise().squaredNorm().minCoeff(&start);
  std::vector<Eigen::Index> support{start};
  std::vector<double> lambda{1.0};
  Vector x = points.col(start);

  auto rebuild = [&]() {
    x.setZero(points.rows());
    for (std::size_t i = 0; i < support.size(); ++i) x += lambda[i] * points.col(support[i]);
  };

  for (int major = 0; major < 100 * static_cast<int>(k) + 100; ++major) {
    Eigen::Index j = 0;
    (points.transpose() * x).minCoeff(&j);
    if (x.squaredNorm() - x.dot(points.col(j)) <= tol) break;
    if (std::find(support.begin(), support.end(), j) != support.end()) break;
    support.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 100 * static_cast<int>(k) + 100; ++minor) {
      const Vector mu = affine_minimizer(points, support);
      if (mu.minCoeff() > weight_eps) {
        for (std::size_t i = 0; i < support.size(); ++i) lambda[i] = mu(static_cast<Eigen::Index>(i));
        rebuild();
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < support.size(); ++i) {
        const double m = mu(static_cast<Eigen::Index>(i));
        if (m <= weight_eps) theta = std::min(theta, lambda[i] / (lambda[i] - m));
      }
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_lambda;
      for (std::size_t i = 0; i < support.size(); ++i) {
        const double l = lambda[i] + theta * (mu(static_cast<Eigen::Index>(i)) - lambda[i]);
        if (l > weight_eps) {
          kept.push_back(support[i]);
          kept_lambda.push_back(l);
        }
      }
      if (kept.empty()) {
        // Degenerate step; fall back to the last column added.
        kept.push_back(support.back());
        kept_lambda.push_back(1.0);
      }
      double total = 0.0;
      for (double l : kept_lambda) total += l;
      for (double& l : kept_lambda) l /= total;
      support = std::move(kept);
      lambda = std::move(kept_lambda);
      rebuild();
    }
  }

  MinNormPoint out;
  out.point = x;
  out.weights = Vector::Zero(k);
  for (std::size_t i = 0; i < support.size(); ++i) out.weights(support[i]) = lambda[i];
  return out;
}

}  // namespace qcqps
