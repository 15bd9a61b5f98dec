#include "qcqp_stability/recession.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace qcqps {

namespace {

constexpr double kConeFeasTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix normalized_rows(const Matrix& a) {
  Matrix out = a;
  for (Eigen::Index r = 0; r < out.rows(); ++r) {
    const double n = out.row(r).norm();
    if (n > 0) out.row(r) /= n;
  }
  return out;
}

bool in_reduced_cone(const Matrix& unit_rows, const Vector& y, double tol) {
  if (unit_rows.rows() == 0) return true;
  return (unit_rows * y).maxCoeff() <= tol * std::max(1.0, y.norm());
}

// Orthonormal basis of {y : rows(S) y = 0}.
Matrix face_subspace(const Matrix& unit_rows, const std::vector<Eigen::Index>& subset,
                     Eigen::Index k) {
  if (subset.empty()) return Matrix::Identity(k, k);
  Matrix as(static_cast<Eigen::Index>(subset.size()), k);
  for (std::size_t i = 0; i < subset.size(); ++i) as.row(static_cast<Eigen::Index>(i)) = unit_rows.row(subset[i]);
  Eigen::JacobiSVD<Matrix> svd(as, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * std::max(1.0, sv(0))) ++rank;
  }
  return svd.matrixV().rightCols(k - rank);
}

struct Candidate {
  double rayleigh = kInf;
  Vector y;
};

void consider(Candidate& best, const Matrix& m, const Vector& y) {
  const double n2 = y.squaredNorm();
  if (n2 == 0.0) return;
  const double r = y.dot(m * y) / n2;
  if (r < best.rayleigh) {
    best.rayleigh = r;
    best.y = y / std::sqrt(n2);
  }
}

// Minimum of the Rayleigh quotient over the polyhedral cone {A y <= 0}: every
// minimizer with a maximal active set S is a bottom eigenvector of the form
// restricted to {A_S y = 0}, so enumerating independent active sets and testing
// bottom eigenvectors for feasibility is exact.
Candidate enumerate_faces(const Matrix& m, const Matrix& unit_rows) {
  const Eigen::Index k = m.rows();
  const auto p = static_cast<int>(unit_rows.rows());
  const double mscale = 1.0 + spectral_norm(m);
  Candidate best;

  std::vector<Eigen::Index> subset;
  auto visit = [&](const std::vector<Eigen::Index>& s) {
    const Matrix w = face_subspace(unit_rows, s, k);
    if (w.cols() == 0) return;
    const Matrix ms = w.transpose() * m * w;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (ms + ms.transpose()));
    const auto& ev = es.eigenvalues();
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
      if (ev(j) > ev(0) + 1e-12 * mscale) break;
      const Vector y = w * es.eigenvectors().col(j);
      if (in_reduced_cone(unit_rows, y, kConeFeasTol)) consider(best, m, y);
      if (in_reduced_cone(unit_rows, -y, kConeFeasTol)) consider(best, m, -y);
    }
  };

  // Subsets of size < k suffice: a dependent active set has the same face
  // subspace as any maximal independent subset of it.
  const int max_size = static_cast<int>(std::min<Eigen::Index>(p, k - 1));
  std::vector<int> idx;
  visit({});
  for (int size = 1; size <= max_size; ++size) {
    idx.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      subset.assign(idx.begin(), idx.end());
      visit(subset);
      int pos = size - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == p - size + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return best;
}

// Rejection-sampled unit directions in the cone, the best few refined by
// projected gradient on the Rayleigh quotient.
Candidate sample_cone(const Matrix& m, const Matrix& unit_rows, int samples, std::uint64_t seed) {
  const Eigen::Index k = m.rows();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Candidate best;
  std::vector<std::pair<double, Vector>> pool;
  constexpr std::size_t kRefine = 8;

  Vector y(k);
  for (int s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < k; ++i) y(i) = normal(rng);
    const double n = y.norm();
    if (n == 0.0) continue;
    y /= n;
    if (!in_reduced_cone(unit_rows, y, 0.0)) continue;
    const double r = y.dot(m * y);
    if (pool.size() < kRefine) {
      pool.emplace_back(r, y);
    } else {
      auto worst = std::max_element(pool.begin(), pool.end(),
                                    [](const auto& a, const auto& b) { return a.first < b.first; });
      if (r < worst->first) *worst = {r, y};
    }
  }

  const double mnorm = std::max(1e-300, spectral_norm(m));
  for (auto& [r, v] : pool) {
    double eta = 0.5 / mnorm;
    for (int it = 0; it < 200 && eta * mnorm > 1e-12; ++it) {
      const Vector grad = m * v - r * v;
      Vector trial = v - eta * grad;
      trial.normalize();
      const double rt = trial.dot(m * trial);
      if (rt < r && in_reduced_cone(unit_rows, trial, 0.0)) {
        v = trial;
        r = rt;
        eta *= 1.5;
      } else {
        eta *= 0.5;
      }
    }
    consider(best, m, v);
  }
  return best;
}

}  // namespace

RecessionCone recession_cone(const ProblemInstance& problem, const ToleranceConfig& cfg) {
  const Eigen::Index n = problem.dim;
  RecessionCone cone;
  cone.ambient_dim = n;
  if (problem.constraints.empty()) {
    cone.kernel_basis = Matrix::Identity(n, n);
    cone.halfspace_matrix = Matrix(0, n);
    return cone;
  }

  const auto m = static_cast<Eigen::Index>(problem.constraints.size());
  Matrix stacked(m * n, n);
  for (Eigen::Index i = 0; i < m; ++i) stacked.middleRows(i * n, n) = problem.constraints[static_cast<std::size_t>(i)].T.matrix();
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  if (smax > 0) {
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cfg.kernel_tol * smax) ++rank;
    }
  }
  cone.kernel_basis = svd.matrixV().rightCols(n - rank);

  std::vector<Vector> rows;
  for (const auto& g : problem.constraints) {
    const Vector row = cone.kernel_basis.transpose() * g.c;
    if (row.norm() > cfg.kernel_tol * (1.0 + g.c.norm())) rows.push_back(row);
  }
  cone.halfspace_matrix = Matrix(static_cast<Eigen::Index>(rows.size()), cone.kernel_dim());
  for (std::size_t i = 0; i < rows.size(); ++i) cone.halfspace_matrix.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return cone;
}

bool contains(const RecessionCone& cone, const Vector& v, double tol) {
  if (v.size() != cone.ambient_dim) throw std::invalid_argument("contains: dimension mismatch");
  const double scale = std::max(1.0, v.norm());
  if (cone.is_zero()) return v.norm() <= tol * scale;
  const Vector y = cone.kernel_basis.transpose() * v;
  if ((v - cone.kernel_basis * y).norm() > tol * scale) return false;
  for (Eigen::Index r = 0; r < cone.halfspace_matrix.rows(); ++r) {
    const double lhs = cone.halfspace_matrix.row(r).dot(y);
    if (lhs > tol * scale * cone.halfspace_matrix.row(r).norm()) return false;
  }
  return true;
}

QprVerdict qpr_solve(const ProblemInstance& problem, const RecessionCone& cone,
                     const ToleranceConfig& cfg, const QprOptions& options) {
  QprVerdict verdict;
  verdict.cone = cone;
  verdict.value_threshold = cfg.value_tol * (1.0 + problem.objective.T.spectral_norm());
  const double vt = verdict.value_threshold;

  if (cone.is_zero()) {
    verdict.trivial = true;
    verdict.min_rayleigh = kInf;
    return verdict;
  }

  const Matrix& z = cone.kernel_basis;
  Matrix m = z.transpose() * problem.objective.T.matrix() * z;
  m = 0.5 * (m + m.transpose());
  const Eigen::Index k = m.rows();

  Candidate best;
  if (cone.halfspace_matrix.rows() == 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    best.rayleigh = es.eigenvalues()(0);
    best.y = es.eigenvectors().col(0);
  } else {
    const Matrix unit_rows = normalized_rows(cone.halfspace_matrix);
    const bool enumerate = unit_rows.rows() <= options.max_enumerated_halfspaces;
    if (enumerate) best = enumerate_faces(m, unit_rows);
    verdict.exact = enumerate;
    if (options.sampling || !enumerate) {
      const int samples = options.samples_per_kernel_dim * static_cast<int>(k);
      const Candidate sampled = sample_cone(m, unit_rows, samples, cfg.seed);
      if (sampled.rayleigh < best.rayleigh) best = sampled;
    }
    if (!enumerate && std::abs(best.rayleigh) < vt) verdict.inconclusive = true;
  }

  verdict.min_rayleigh = best.rayleigh;
  verdict.trivial = !(best.rayleigh <= vt);
  if (!verdict.trivial) {
    Vector v = z * best.y;
    v.normalize();
    verdict.witness = v;
  }
  return verdict;
}

std::optional<Vector> unboundedness_direction(const ProblemInstance& problem,
                                              const QprVerdict& verdict,
                                              const std::optional<Vector>& feasible_point) {
  if (verdict.trivial || !verdict.witness) return std::nullopt;
  const Matrix& t = problem.objective.T.matrix();
  const Vector& w = *verdict.witness;
  const double vt = verdict.value_threshold;
  if (w.dot(t * w) < -vt) return w;

  // Zero curvature: a decrease needs a negative slope of f along the ray.
  const Vector x = feasible_point.value_or(Vector::Zero(problem.dim));
  const Vector grad = t * x + problem.objective.c;
  const double slope_tol = 1e-9 * (1.0 + grad.norm());
  const RecessionCone& cone = verdict.cone;

  std::vector<Vector> candidates{w, -w};
  if (!cone.is_zero()) {
    // Steepest descent direction inside the zero-curvature eigenspace.
    const Matrix& z = cone.kernel_basis;
    Matrix m = z.transpose() * t * z;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    std::vector<Eigen::Index> flat;
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      if (std::abs(es.eigenvalues()(j)) <= vt) flat.push_back(j);
    }
    if (!flat.empty()) {
      Matrix e(z.rows(), static_cast<Eigen::Index>(flat.size()));
      for (std::size_t i = 0; i < flat.size(); ++i) e.col(static_cast<Eigen::Index>(i)) = z * es.eigenvectors().col(flat[i]);
      Vector d = -(e * (e.transpose() * grad));
      if (d.norm() > 0) candidates.push_back(d.normalized());
    }
  }
  for (const Vector& d : candidates) {
    if (!contains(cone, d, 1e-8)) continue;
    if (std::abs(d.dot(t * d)) > vt) continue;
    if (grad.dot(d) < -slope_tol) return d;
  }
  return std::nullopt;
}

}  // namespace qcqps
