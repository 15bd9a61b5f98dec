#include "builders.hpp"
#include "oracles.hpp"

#include "qcqp_stability/hilbert_model.hpp"
#include "qcqp_stability/min_norm_point.hpp"
#include "qcqp_stability/problem_io.hpp"
#include "qcqp_stability/trust_region.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace qcqps;
using namespace testing_util;

namespace {

// the instance with a unique minimizer at -e1
ProblemInstance lipschitz4() {
  return problem(diag({0, -1, 1, 1}), vec({1, 0, 0, 0}),
                 {quad(Matrix::Identity(4, 4), Vector::Zero(4), -0.5)});
}

}  // namespace

TEST_CASE("objective evaluation") {
  CHECK(eval_objective(lipschitz4(), vec({-1, 0, 0, 0})) == doctest::Approx(-1.0));
  CHECK(eval_objective(lipschitz4(), Vector::Zero(4)) == 0.0);
  auto p = problem(diag({1}), vec({2}));
  CHECK(eval_objective(p, vec({3})) == doctest::Approx(10.5));
  CHECK_THROWS_AS(eval_objective(p, vec({1, 2})), std::invalid_argument);
}

TEST_CASE("constraint evaluation") {
  CHECK(eval_constraint(lipschitz4(), 0, Vector::Zero(4)) == doctest::Approx(-0.5));
  auto zero = problem(diag({0, 0}), vec({0, 0}), {quad(diag({0, 0}), vec({0, 0}), 0.0)});
  CHECK(eval_constraint(zero, 0, vec({5, -7})) == 0.0);
  auto p = problem(diag({0, 0}), vec({0, 0}), {quad(diag({1, 0}), vec({0, -1}), 0.0)});
  CHECK(eval_constraint(p, 0, vec({2, 3})) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(eval_constraint(p, 1, vec({2, 3})), std::out_of_range);
}

TEST_CASE("gradients match finite differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    QuadraticFunction g = quad(oracle::random_symmetric(rng, n), Vector::NullaryExpr(n, [&] { return nd(rng); }), 0.3);
    Vector x = Vector::NullaryExpr(n, [&] { return nd(rng); });
    Vector fd = oracle::fd_gradient([&](const Vector& y) { return g(y); }, x);
    CHECK((fd - g.gradient(x)).norm() <= 1e-6 * (1 + fd.norm()));
  }
}

TEST_CASE("feasibility") {
  CHECK(is_feasible(lipschitz4(), Vector::Zero(4), 0.0));
  auto free = problem(diag({1, 1}), vec({0, 0}));
  CHECK(is_feasible(free, vec({1e6, -1e6}), 0.0));
  auto ball = problem(diag({0, 0}), vec({0, 0}), {quad(Matrix::Identity(2, 2), vec({0, 0}), -0.5)});
  CHECK_FALSE(is_feasible(ball, vec({1.1, 0}), 1e-9));
  CHECK(is_feasible(ball, vec({1.0, 0}), 1e-9));
}

TEST_CASE("omega distance examples") {
  auto a = lipschitz4();
  CHECK(omega_distance(a, a) == 0.0);

  auto b = problem(diag({0, 0}), vec({0, 0}), {quad(diag({1, 0.25}), vec({0, 0}), -1)});
  auto b2 = b;
  b2.constraints[0].T = SymOperator(b.constraints[0].T.matrix() - 0.25 * Matrix::Identity(2, 2));
  CHECK(omega_distance(b, b2) == doctest::Approx(0.25).epsilon(1e-14));

  auto c = a;
  c.objective.c(0) += 0.3;
  c.constraints[0].alpha += 0.1;
  CHECK(omega_distance(a, c) == doctest::Approx(0.3));

  auto shorter = problem(diag({1}), vec({0}));
  CHECK_THROWS_AS(omega_distance(a, shorter), std::invalid_argument);
}

TEST_CASE("operator norm agrees with power iteration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + trial % 6;
    Matrix s = oracle::random_symmetric(rng, n);
    CHECK(spectral_norm(s) == doctest::Approx(oracle::power_norm(s)).epsilon(1e-6));
  }
}

TEST_CASE("validation diagnostics") {
  CHECK(validate(lipschitz4()).empty());

  auto neg = problem(diag({1}), vec({0}), {quad(diag({-1}), vec({0}), 0)});
  auto d = validate(neg);
  REQUIRE(d.size() == 1);
  CHECK(d[0].kind == Diagnostic::Kind::NotPsd);
  CHECK(d[0].component == 0);
  CHECK(d[0].message.find("constraint 0") != std::string::npos);

  Matrix asym(2, 2);
  asym << 0, 1, 0, 0;
  auto a = problem(asym, vec({0, 0}));
  d = validate(a);
  REQUIRE(d.size() == 1);
  CHECK(d[0].kind == Diagnostic::Kind::Asymmetry);
  CHECK(d[0].component == -1);

  auto bad_shape = problem(diag({1, 1}), vec({0}));
  d = validate(bad_shape);
  REQUIRE_FALSE(d.empty());
  CHECK(d[0].kind == Diagnostic::Kind::Shape);

  auto nan = problem(diag({1}), vec({std::nan("")}));
  d = validate(nan);
  REQUIRE_FALSE(d.empty());
  CHECK(d[0].kind == Diagnostic::Kind::NonFinite);
  CHECK_THROWS_AS(require_valid(nan), std::invalid_argument);
}

TEST_CASE("tolerance config rejects non-positive values") {
  ToleranceConfig cfg;
  CHECK_NOTHROW(cfg.check());
  cfg.kernel_tol = 0.0;
  CHECK_THROWS_AS(cfg.check(), std::invalid_argument);
}

TEST_CASE("problem json round trip") {
  auto p = lipschitz4();
  p.label = "round_trip";
  auto q = problem_from_json(to_json(p));
  CHECK(q.label == "round_trip");
  CHECK(omega_distance(p, q) == 0.0);

  const auto path = std::filesystem::temp_directory_path() / "qcqps_round_trip.json";
  save_problem(p, path);
  auto r = load_problem(path);
  CHECK(omega_distance(p, r) == 0.0);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(problem_from_json(nlohmann::json::parse(R"({"dim": 1})")), std::invalid_argument);
  CHECK_THROWS_AS(load_problem("/nonexistent/p.json"), std::invalid_argument);
  CHECK(extended_real(INFINITY) == "inf");
  CHECK(extended_real(-INFINITY) == "-inf");
}

TEST_CASE("min norm point") {
  // segment from (1,1) to (1,-1): nearest point (1,0)
  Matrix pts(2, 2);
  pts << 1, 1, 1, -1;
  auto r = min_norm_point(pts);
  CHECK((r.point - vec({1, 0})).norm() < 1e-12);
  CHECK(r.weights.sum() == doctest::Approx(1.0));

  // origin inside the triangle
  Matrix tri(2, 3);
  tri << 1, -1, 0, 0, 1, -1;
  CHECK(min_norm_point(tri).point.norm() < 1e-10);
}

TEST_CASE("min norm point against Halton scan of the simplex") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 10; ++trial) {
    Matrix pts = Matrix::NullaryExpr(3, 3, [&] { return nd(rng) + 1.0; });
    const double got = min_norm_point(pts).point.norm();
    double best = INFINITY;
    for (const auto& u : oracle::halton(2, 20000, 0.0, 1.0)) {
      double a = u(0), b = u(1);
      if (a + b > 1) {
        a = 1 - a;
        b = 1 - b;
      }
      best = std::min(best, (a * pts.col(0) + b * pts.col(1) + (1 - a - b) * pts.col(2)).norm());
    }
    CHECK(got <= best + 1e-12);
    CHECK(got >= best - 5e-2);
  }
}

TEST_CASE("trust region subproblem") {
  SUBCASE("interior Newton step") {
    auto s = solve_trust_region(diag({2, 4}), vec({-2, -4}), 10.0);
    CHECK((s.step - vec({1, 1})).norm() < 1e-12);
    CHECK_FALSE(s.on_boundary);
    CHECK(s.model_change == doctest::Approx(-3.0));
  }
  SUBCASE("hard case") {
    auto s = solve_trust_region(diag({-1, 1}), vec({0, 1}), 2.0);
    CHECK(s.hard_case);
    CHECK(s.step.norm() == doctest::Approx(2.0));
  }
  SUBCASE("boundary solutions beat Halton samples of the ball") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 15; ++trial) {
      Matrix h = oracle::random_symmetric(rng, 2);
      Vector g = Vector::NullaryExpr(2, [&] { return nd(rng); });
      const double radius = 0.5 + trial * 0.1;
      auto s = solve_trust_region(h, g, radius);
      auto model = [&](const Vector& p) { return g.dot(p) + 0.5 * p.dot(h * p); };
      CHECK(s.step.norm() <= radius * (1 + 1e-10));
      CHECK(s.model_change == doctest::Approx(model(s.step)).epsilon(1e-9));
      double best = 0.0;
      for (const auto& p : oracle::halton(2, 4000, -radius, radius)) {
        if (p.norm() <= radius) best = std::min(best, model(p));
      }
      CHECK(s.model_change <= best + 1e-9);
    }
  }
  CHECK_THROWS_AS(solve_trust_region(diag({1}), vec({1}), 0.0), std::invalid_argument);
}
