#pragma once

// Generators for the worked example instances, truncated to dimension n.
// L2[0,1] examples use the midpoint grid t_j = (j - 1/2)/n with the
// quadrature weight 1/n folded into the operator, so the Euclidean inner
// product is used throughout.

#include "qcqp_stability/hilbert_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcqps {

enum class FamilyId { UnboundedL2, KNotOpen, NotUsc, NotLsc, Lipschitz };

const char* to_string(FamilyId id);
/// Accepts "unbounded_L2" (or "unbounded"), "k_not_open", "not_usc",
/// "not_lsc", "lipschitz".  Throws std::invalid_argument otherwise.
FamilyId family_from_string(const std::string& name);
std::vector<FamilyId> all_families();

/// T = 0, c = 0, T_1 = diag(t_j / n), c_1 = 0, alpha_1 = -1/4.
ProblemInstance make_unbounded(int n);

/// T = 0, c = 0, T_1 = diag(k^-k), c_1 = 0, alpha_1 = -1; the perturbed
/// variant subtracts n^-n I from T_1.  2 <= n <= 12.
ProblemInstance make_k_not_open(int n, bool perturbed = false);

/// T = diag(k^-k) + eps I, c = 0, one linear constraint with
/// c_1 = (-1, -1/2, ..., -1/n), alpha_1 = 1.  2 <= n <= 12.
ProblemInstance make_not_usc(int n, double eps = 0.0);

/// make_unbounded(n) with T = eps I.
ProblemInstance make_not_lsc(int n, double eps = 0.0);

/// T = diag(0, -1, 1, ..., 1), c = e_1, T_1 = I, c_1 = 0, alpha_1 = -1/2.
ProblemInstance make_lipschitz(int n);

struct FamilyParams {
  int n = 4;
  double eps = 0.0;
  bool perturbed = false;
};

ProblemInstance make_family(FamilyId id, const FamilyParams& params);

/// phi_n = 1 / (2 sum_{k<=n} k^(k-2)) for make_not_usc(n, 0).
double not_usc_value(int n);

}  // namespace qcqps
