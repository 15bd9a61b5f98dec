#include "builders.hpp"
#include "oracles.hpp"

#include "qcqp_stability/families.hpp"
#include "qcqp_stability/qcqp_solver.hpp"
#include "qcqp_stability/random_instances.hpp"
#include "qcqp_stability/recession.hpp"

#include <doctest.h>

#include <cmath>

using namespace qcqps;
using namespace testing_util;

namespace {

ProblemInstance ball_concave() {
  return problem(diag({-1}), vec({0}), {quad(diag({1}), vec({0}), -0.5)});
}

}  // namespace

TEST_CASE("solve_global examples") {
  for (int n : {2, 4, 6}) {
    auto r = solve_global(make_lipschitz(n));
    CHECK(r.status == SolveStatus::Solved);
    CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-8));
    REQUIRE(r.minimizers.size() == 1);
    CHECK((r.minimizers[0] + unit(n, 0)).norm() < 1e-5);
  }

  auto ball = problem(Matrix::Identity(2, 2), vec({0, 0}), {quad(Matrix::Identity(2, 2), vec({0, 0}), -0.5)});
  auto r = solve_global(ball);
  CHECK(r.status == SolveStatus::Solved);
  CHECK(std::abs(r.value) < 1e-10);
  REQUIRE(r.minimizers.size() == 1);
  CHECK(r.minimizers[0].norm() < 1e-6);

  r = solve_global(ball_concave());
  CHECK(r.status == SolveStatus::Solved);
  CHECK(r.value == doctest::Approx(-0.5).epsilon(1e-8));
  REQUIRE(r.minimizers.size() == 2);
  CHECK(r.minimizers[0](0) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(r.minimizers[1](0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.diameter == doctest::Approx(2.0).epsilon(1e-5));

  // grid oracle over [-2, 2] with 1e5 points agrees
  auto g = oracle::grid_min([&](const Vector& x) { return -0.5 * x(0) * x(0); },
                            [](const Vector& x) { return 0.5 * x(0) * x(0) - 0.5 <= 0; }, 1, -2, 2, 100001);
  CHECK(r.value == doctest::Approx(g.value).epsilon(1e-6));
}

TEST_CASE("optimal value conventions") {
  CHECK(optimal_value(make_lipschitz(3)) == doctest::Approx(-1.0).epsilon(1e-8));
  auto infeasible = problem(Matrix::Identity(2, 2), vec({0, 0}), {quad(Matrix::Identity(2, 2), vec({0, 0}), 1.0)});
  CHECK(optimal_value(infeasible) == INFINITY);
  CHECK(solve_global(infeasible).status == SolveStatus::Infeasible);
  auto unbounded = problem(diag({0, -1}), vec({0, 0}));
  CHECK(optimal_value(unbounded) == -INFINITY);
  auto r = solve_global(unbounded);
  CHECK(r.status == SolveStatus::Unbounded);
  REQUIRE(r.unbounded_direction);
  CHECK(std::abs((*r.unbounded_direction)(1)) == doctest::Approx(1.0));
}

TEST_CASE("solution set estimates") {
  auto s = solution_set_estimate(make_lipschitz(4));
  REQUIRE(s.representatives.size() == 1);
  CHECK((s.representatives[0] + unit(4, 0)).norm() < 1e-6);

  s = solution_set_estimate(ball_concave());
  REQUIRE(s.representatives.size() == 2);

  s = solution_set_estimate(problem(Matrix::Identity(3, 3), Vector::Zero(3)));
  REQUIRE(s.representatives.size() == 1);
  CHECK(s.representatives[0].norm() < 1e-8);
}

TEST_CASE("brute force oracle") {
  auto p = make_lipschitz(2);
  Box box{Vector::Constant(2, -1.5), Vector::Constant(2, 1.5)};
  auto o = brute_force_oracle(p, box, 601);
  CHECK(o.value == doctest::Approx(-1.0).epsilon(3e-3));
  REQUIRE_FALSE(o.argmin.empty());
  CHECK((o.argmin[0] - vec({-1, 0})).norm() < 0.05);
  CHECK(o.spacing == doctest::Approx(3.0 / 600));

  // independent nested-loop grid
  auto g = oracle::grid_min([&](const Vector& x) { return eval_objective(p, x); },
                            [&](const Vector& x) { return is_feasible(p, x, 0.0); }, 2, -1.5, 1.5, 601);
  CHECK(o.value == doctest::Approx(g.value).epsilon(1e-12));

  auto infeasible = problem(Matrix::Identity(1, 1), vec({0}), {quad(diag({1}), vec({0}), 1.0)});
  o = brute_force_oracle(infeasible, Box{vec({-1}), vec({1})}, 101);
  CHECK(o.value == INFINITY);
  CHECK(o.argmin.empty());

  o = brute_force_oracle(ball_concave(), Box{vec({-2}), vec({2})}, 100001);
  CHECK(o.value == doctest::Approx(-0.5).epsilon(1e-9));
  REQUIRE(o.argmin.size() == 2);

  CHECK_THROWS_AS(brute_force_oracle(make_lipschitz(5), Box{Vector::Zero(5), Vector::Ones(5)}, 3),
                  std::invalid_argument);
}

TEST_CASE("solver config validation") {
  SolverConfig cfg;
  cfg.restarts = 0;
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
}

TEST_CASE("family constructions") {
  SUBCASE("unbounded") {
    const int n = 4;
    auto p = make_unbounded(n);
    CHECK(validate(p).empty());
    CHECK(recession_cone(p, {}).is_zero());
    // a spike along e1 made active
    const double t1 = p.constraints[0].T.matrix()(0, 0);
    Vector x = Vector::Zero(n);
    x(0) = std::sqrt(0.5 / t1);
    CHECK(std::abs(eval_constraint(p, 0, x)) < 1e-12);
    CHECK(eval_objective(p, x) == 0.0);
  }
  SUBCASE("not_lsc at eps 0 is the unbounded instance") {
    CHECK(omega_distance(make_not_lsc(6, 0.0), make_unbounded(6)) == 0.0);
    auto r = solve_global(make_not_lsc(8, 0.01));
    CHECK(r.status == SolveStatus::Solved);
    CHECK(std::abs(r.value) < 1e-9);
    REQUIRE(r.minimizers.size() == 1);
    CHECK(r.minimizers[0].norm() < 1e-5);
  }
  SUBCASE("not_usc closed form") {
    for (int n : {2, 3, 4}) {
      double s = 0;
      for (int k = 1; k <= n; ++k) s += std::pow(double(k), k - 2);
      CHECK(not_usc_value(n) == doctest::Approx(1 / (2 * s)));
    }
    CHECK(not_usc_value(2) == doctest::Approx(0.25));
    CHECK(not_usc_value(3) == doctest::Approx(0.1));
    auto r = solve_global(make_not_usc(3, 0.1));
    CHECK(r.status == SolveStatus::Solved);
  }
  SUBCASE("names") {
    for (auto id : all_families()) CHECK(family_from_string(to_string(id)) == id);
    CHECK(family_from_string("unbounded_L2") == FamilyId::UnboundedL2);
    CHECK_THROWS_AS(family_from_string("nope"), std::invalid_argument);
    CHECK_THROWS_AS(make_lipschitz(1), std::invalid_argument);
  }
}

TEST_CASE("random instances are valid and seed-deterministic") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto p = random_instance(seed);
    CHECK(validate(p).empty());
    CHECK(p.dim >= 1);
    CHECK(p.dim <= 4);
    CHECK(p.num_constraints() <= 3);
    CHECK(omega_distance(p, random_instance(seed)) == 0.0);
  }
}
