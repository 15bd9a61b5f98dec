#pragma once

#include "qcqp_stability/hilbert_model.hpp"

#include <cstdint>

namespace qcqps {

struct RandomInstanceOptions {
  int min_dim = 1;
  int max_dim = 4;
  int max_constraints = 3;
  /// The first constraint gets a positive definite operator, which makes the
  /// feasible set bounded.
  bool bounded = true;
};

/// Random valid instance: indefinite objective, PSD constraint operators of
/// random rank, constants chosen so that a random point is strictly feasible.
ProblemInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& options = {});

}  // namespace qcqps
