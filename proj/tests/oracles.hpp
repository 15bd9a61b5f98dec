#pragma once

// Independent reference computations used only by the tests.  None of these
// call into the library's numerical code.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// largest |eigenvalue| of a symmetric matrix by power iteration on A^2
inline double power_norm(const MatrixXd& a, int iters = 2000) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  VectorXd v = VectorXd::Ones(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) += 0.01 * static_cast<double>(i);
  double lam = 0.0;
  for (int k = 0; k < iters; ++k) {
    VectorXd w = a.transpose() * (a * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    lam = nw;
  }
  return std::sqrt(lam);
}

inline VectorXd fd_gradient(const std::function<double(const VectorXd&)>& f, const VectorXd& x,
                            double h = 1e-6) {
  VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2 * h);
  }
  return g;
}

inline double radical_inverse(unsigned long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// Halton points in [lo, hi]^d
inline std::vector<VectorXd> halton(int d, int count, double lo, double hi) {
  static const unsigned primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  std::vector<VectorXd> pts;
  for (int k = 1; k <= count; ++k) {
    VectorXd p(d);
    for (int j = 0; j < d; ++j) p(j) = lo + (hi - lo) * radical_inverse(k, primes[j]);
    pts.push_back(p);
  }
  return pts;
}

// plain nested-loop grid minimum over a box, dim 1 or 2
struct Grid {
  double value = std::numeric_limits<double>::infinity();
  std::vector<VectorXd> argmin;
};

inline Grid grid_min(const std::function<double(const VectorXd&)>& f,
                     const std::function<bool(const VectorXd&)>& feasible, int dim, double lo,
                     double hi, int res, double tie = 1e-9) {
  Grid g;
  const double h = (hi - lo) / (res - 1);
  std::vector<VectorXd> pts;
  if (dim == 1) {
    for (int i = 0; i < res; ++i) pts.push_back(VectorXd::Constant(1, lo + i * h));
  } else {
    for (int i = 0; i < res; ++i)
      for (int j = 0; j < res; ++j) {
        VectorXd p(2);
        p << lo + i * h, lo + j * h;
        pts.push_back(p);
      }
  }
  for (const auto& p : pts) {
    if (!feasible(p)) continue;
    const double v = f(p);
    if (v < g.value - tie) {
      g.value = v;
      g.argmin = {p};
    } else if (v <= g.value + tie) {
      g.argmin.push_back(p);
    }
  }
  return g;
}

inline MatrixXd random_symmetric(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
  return 0.5 * (a + a.transpose());
}

inline MatrixXd random_psd(std::mt19937_64& rng, int n, int rank) {
  std::normal_distribution<double> nd(0.0, 1.0);
  MatrixXd b(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) b(i, j) = nd(rng);
  return b * b.transpose();
}

}  // namespace oracle
