#include "qcqp_stability/families.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qcqps {

namespace {

void require_n(int n, int max_n = 0) {
  if (n < 2) throw std::invalid_argument("truncation n must be at least 2");
  if (max_n > 0 && n > max_n) {
    std::ostringstream os;
    os << "truncation n = " << n << " exceeds " << max_n << " (k^-k underflow guard)";
    throw std::invalid_argument(os.str());
  }
}

void require_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("eps must be finite and >= 0");
}

// k^-k for k = 1..n
Vector decaying_diagonal(int n) {
  Vector d(n);
  for (int k = 1; k <= n; ++k) d(k - 1) = std::pow(static_cast<double>(k), -static_cast<double>(k));
  return d;
}

QuadraticFunction make_quadratic(const SymOperator& t, const Vector& c, double alpha = 0.0) {
  return QuadraticFunction{t, c, alpha};
}

std::string label_of(const char* family, int n) {
  std::ostringstream os;
  os << family << "_n" << n;
  return os.str();
}

}  // namespace

const char* to_string(FamilyId id) {
  switch (id) {
    case FamilyId::UnboundedL2: return "unbounded_L2";
    case FamilyId::KNotOpen: return "k_not_open";
    case FamilyId::NotUsc: return "not_usc";
    case FamilyId::NotLsc: return "not_lsc";
    case FamilyId::Lipschitz: return "lipschitz";
  }
  return "unknown";
}

FamilyId family_from_string(const std::string& name) {
  if (name == "unbounded_L2" || name == "unbounded") return FamilyId::UnboundedL2;
  if (name == "k_not_open") return FamilyId::KNotOpen;
  if (name == "not_usc") return FamilyId::NotUsc;
  if (name == "not_lsc") return FamilyId::NotLsc;
  if (name == "lipschitz") return FamilyId::Lipschitz;
  throw std::invalid_argument("unknown example family: " + name);
}

std::vector<FamilyId> all_families() {
  return {FamilyId::UnboundedL2, FamilyId::KNotOpen, FamilyId::NotUsc, FamilyId::NotLsc,
          FamilyId::Lipschitz};
}

ProblemInstance make_unbounded(int n) {
  require_n(n);
  Vector t1(n);
  for (int j = 1; j <= n; ++j) t1(j - 1) = (j - 0.5) / n / n;
  ProblemInstance p;
  p.dim = n;
  p.objective = make_quadratic(SymOperator::zero(n), Vector::Zero(n));
  p.constraints.push_back(make_quadratic(SymOperator::diagonal(t1), Vector::Zero(n), -0.25));
  p.label = label_of("unbounded_L2", n);
  return p;
}

ProblemInstance make_k_not_open(int n, bool perturbed) {
  require_n(n, 12);
  Vector d = decaying_diagonal(n);
  if (perturbed) d.array() -= d(n - 1);
  ProblemInstance p;
  p.dim = n;
  p.objective = make_quadratic(SymOperator::zero(n), Vector::Zero(n));
  p.constraints.push_back(make_quadratic(SymOperator::diagonal(d), Vector::Zero(n), -1.0));
  p.label = label_of(perturbed ? "k_not_open_perturbed" : "k_not_open", n);
  return p;
}

ProblemInstance make_not_usc(int n, double eps) {
  require_n(n, 12);
  require_eps(eps);
  Vector d = decaying_diagonal(n);
  d.array() += eps;
  Vector c1(n);
  for (int k = 1; k <= n; ++k) c1(k - 1) = -1.0 / k;
  ProblemInstance p;
  p.dim = n;
  p.objective = make_quadratic(SymOperator::diagonal(d), Vector::Zero(n));
  p.constraints.push_back(make_quadratic(SymOperator::zero(n), c1, 1.0));
  p.label = label_of("not_usc", n);
  return p;
}

ProblemInstance make_not_lsc(int n, double eps) {
  require_eps(eps);
  ProblemInstance p = make_unbounded(n);
  p.objective.T = SymOperator::identity(n, eps);
  p.label = label_of("not_lsc", n);
  return p;
}

ProblemInstance make_lipschitz(int n) {
  require_n(n);
  Vector d = Vector::Ones(n);
  d(0) = 0.0;
  d(1) = -1.0;
  ProblemInstance p;
  p.dim = n;
  p.objective = make_quadratic(SymOperator::diagonal(d), Vector::Unit(n, 0));
  p.constraints.push_back(make_quadratic(SymOperator::identity(n), Vector::Zero(n), -0.5));
  p.label = label_of("lipschitz", n);
  return p;
}

ProblemInstance make_family(FamilyId id, const FamilyParams& params) {
  switch (id) {
    case FamilyId::UnboundedL2: return make_unbounded(params.n);
    case FamilyId::KNotOpen: return make_k_not_open(params.n, params.perturbed);
    case FamilyId::NotUsc: return make_not_usc(params.n, params.eps);
    case FamilyId::NotLsc: return make_not_lsc(params.n, params.eps);
    case FamilyId::Lipschitz: return make_lipschitz(params.n);
  }
  throw std::invalid_argument("unknown example family");
}

double not_usc_value(int n) {
  require_n(n, 12);
  double s = 0.0;
  for (int k = 1; k <= n; ++k) s += std::pow(static_cast<double>(k), k - 2.0);
  return 1.0 / (2.0 * s);
}

}  // namespace qcqps
