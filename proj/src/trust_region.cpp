#include "qcqp_stability/trust_region.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcqps {

namespace {

// ||p(lambda)|| in eigen coordinates, skipping the components listed as zero.
double shifted_norm(const Vector& eig, const Vector& gh, double lambda) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double d = eig(i) + lambda;
    if (gh(i) != 0.0) s += (gh(i) / d) * (gh(i) / d);
  }
  return std::sqrt(s);
}

}  // namespace

TrustRegionStep solve_trust_region(const Matrix& H, const Vector& g, double radius) {
  const Eigen::Index n = g.size();
  if (H.rows() != n || H.cols() != n) throw std::invalid_argument("trust region: shape mismatch");
  if (!(radius > 0)) throw std::invalid_argument("trust region: radius must be positive");

  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (H + H.transpose()));
  const Vector& eig = es.eigenvalues();
  const Matrix& q = es.eigenvectors();
  Vector gh = q.transpose() * g;
  const double hscale = std::max(std::abs(eig(0)), std::abs(eig(n - 1)));
  const double eig_tol = 1e-13 * std::max(1.0, hscale);
  const double g_tol = 1e-15 * std::max(1.0, g.norm());

  TrustRegionStep out;
  const double lam_lo = std::max(0.0, -eig(0));

  // Components of g in the bottom eigenspace decide between easy and hard case.
  bool bottom_gradient = false;
  for (Eigen::Index i = 0; i < n && eig(i) <= eig(0) + eig_tol; ++i) {
    if (std::abs(gh(i)) > g_tol) bottom_gradient = true;
  }

  Vector ph(n);
  if (eig(0) > eig_tol) {
    for (Eigen::Index i = 0; i < n; ++i) ph(i) = -gh(i) / eig(i);
    if (ph.norm() <= radius) {
      out.step = q * ph;
      out.model_change = g.dot(out.step) + 0.5 * out.step.dot(H * out.step);
      return out;
    }
  }

  if (!bottom_gradient) {
    // Possible hard case: the boundary may be unreachable by shifting alone.
    Vector gz = gh;
    for (Eigen::Index i = 0; i < n && eig(i) <= eig(0) + eig_tol; ++i) gz(i) = 0.0;
    const double base = shifted_norm(eig, gz, lam_lo);
    const bool singular_shift = lam_lo > 0.0 || eig(0) <= eig_tol;
    if (singular_shift && base <= radius) {
      for (Eigen::Index i = 0; i < n; ++i) {
        ph(i) = gz(i) == 0.0 ? 0.0 : -gz(i) / (eig(i) + lam_lo);
      }
      const double tau = std::sqrt(std::max(0.0, radius * radius - base * base));
      ph(0) += tau;
      out.step = q * ph;
      out.on_boundary = true;
      out.hard_case = true;
      out.model_change = g.dot(out.step) + 0.5 * out.step.dot(H * out.step);
      return out;
    }
    gh = gz;
  }

  // ||p(lambda)|| = radius on (lam_lo, lam_hi]: safeguarded Newton on the
  // secular equation 1/||p|| - 1/radius = 0.
  double lo = lam_lo;
  double hi = lam_lo + gh.norm() / radius + eig_tol;
  double lam = hi;
  for (int it = 0; it < 200; ++it) {
    double s = 0.0;
    double ds = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (gh(i) == 0.0) continue;
      const double d = eig(i) + lam;
      s += gh(i) * gh(i) / (d * d);
      ds += -2.0 * gh(i) * gh(i) / (d * d * d);
    }
    const double norm = std::sqrt(s);
    if (std::abs(norm - radius) <= 1e-14 * radius) break;
    if (norm > radius) lo = lam; else hi = lam;
    // phi(lambda) = 1/norm - 1/radius, phi' = -ds / (2 norm^3)
    const double phi = 1.0 / norm - 1.0 / radius;
    const double dphi = -ds / (2.0 * s * norm);
    double next = lam - phi / dphi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    lam = next;
  }
  for (Eigen::Index i = 0; i < n; ++i) ph(i) = gh(i) == 0.0 ? 0.0 : -gh(i) / (eig(i) + lam);
  out.step = q * ph;
  out.on_boundary = true;
  out.model_change = g.dot(out.step) + 0.5 * out.step.dot(H * out.step);
  return out;
}

}  // namespace qcqps
