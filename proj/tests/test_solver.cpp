#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <thread>

#include "scopt/conic_program.hpp"
#include "scopt/solver.hpp"

using namespace scopt;

namespace {

ConicProgram lp_min_x_geq_1() {
  ConicProgram prog(1);
  prog.add_objective_term(0, 1.);
  ConicBlock blk;
  blk.cone = Cone::Nonneg;
  blk.rows.push_back(AffineExpr::of_variable(0, 1., -1.));  // x - 1 >= 0
  prog.add_block(std::move(blk));
  return prog;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("one-dimensional lp") {
  SolveResult r = solve(lp_min_x_geq_1());
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(1.).epsilon(1e-7));
  CHECK(r.x(0) == doctest::Approx(1.).epsilon(1e-7));
}

TEST_CASE("norm of constant vector: min t s.t. ||(3,4)|| <= t") {
  ConicProgram prog(1);
  prog.add_objective_term(0, 1.);
  ConicBlock blk;
  blk.cone = Cone::Soc;
  blk.rows.push_back(AffineExpr::of_variable(0, 1.));
  blk.rows.push_back(AffineExpr::of_constant(3.));
  blk.rows.push_back(AffineExpr::of_constant(4.));
  prog.add_block(std::move(blk));
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(5.).epsilon(1e-7));
}

TEST_CASE("contradictory bounds are reported primal infeasible") {
  ConicProgram prog(1);
  ConicBlock b1;
  b1.cone = Cone::Nonneg;
  b1.rows.push_back(AffineExpr::of_variable(0, 1., -1.));  // x >= 1
  b1.rows.push_back(AffineExpr::of_variable(0, -1., 0.));  // -x >= 0
  prog.add_block(std::move(b1));
  SolveResult r = solve(prog);
  CHECK(r.status == SolveStatus::PrimalInfeasible);
}

TEST_CASE("unbounded objective is reported dual infeasible") {
  ConicProgram prog(1);
  prog.add_objective_term(0, -1.);
  ConicBlock blk;
  blk.cone = Cone::Nonneg;
  blk.rows.push_back(AffineExpr::of_variable(0, 1.));  // x >= 0, minimize -x
  prog.add_block(std::move(blk));
  SolveResult r = solve(prog);
  CHECK(r.status == SolveStatus::DualInfeasible);
}

TEST_CASE("rotated cone: min a s.t. 2*a*1 >= x^2, x = 2") {
  ConicProgram prog(2);  // a, x
  prog.add_objective_term(0, 1.);
  ConicBlock eq;
  eq.cone = Cone::Zero;
  eq.rows.push_back(AffineExpr::of_variable(1, 1., -2.));  // x = 2
  prog.add_block(std::move(eq));
  ConicBlock blk;
  blk.cone = Cone::RotatedSoc;
  blk.rows.push_back(AffineExpr::of_variable(0, 1.));
  blk.rows.push_back(AffineExpr::of_constant(1.));
  blk.rows.push_back(AffineExpr::of_variable(1, 1.));
  prog.add_block(std::move(blk));
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.).epsilon(1e-6));
}

TEST_CASE("equality + quadratic epigraph recovers projection") {
  // min t s.t. ||x - (1,2)||^2 <= t, x0 + x1 = 1. Optimum: projection of (1,2)
  // onto the line, distance^2 = 2.
  ConicProgram prog(3);  // x0 x1 t
  prog.add_objective_term(2, 1.);
  ConicBlock eq;
  eq.cone = Cone::Zero;
  eq.rows.push_back(AffineExpr::of_variable(0, 1., -1.).add(1, 1.));
  prog.add_block(std::move(eq));
  Eigen::MatrixXd f = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd b(2);
  b << -1., -2.;
  QuadraticForm q = QuadraticForm::real(f, b, 5.);
  for (auto& blk : quad_epigraph(q, AffineExpr::of_variable(2, 1.))) {
    prog.add_block(std::move(blk));
  }
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(2.).epsilon(1e-6));
  CHECK(r.x(0) == doctest::Approx(0.).epsilon(1e-5));
  CHECK(r.x(1) == doctest::Approx(1.).epsilon(1e-5));
}

// Independent brute-force oracle for min c'x over {||x-p|| <= r} . {|x_i| <= 2}:
// interior grid plus a dense sweep of the feasible-set boundary (circle and
// box edges), where any minimizer of a linear objective must lie.
namespace {

double ball_box_oracle(const Eigen::Vector2d& c, const Eigen::Vector2d& p, double radius) {
  const auto in_box = [](double x, double y) {
    return std::abs(x) <= 2. && std::abs(y) <= 2.;
  };
  const auto in_ball = [&](double x, double y) {
    return std::hypot(x - p(0), y - p(1)) <= radius;
  };
  double best = std::numeric_limits<double>::infinity();
  const int grid = 200;
  for (int i = 0; i <= grid; ++i) {
    for (int j = 0; j <= grid; ++j) {
      const double x = -2. + 4. * i / grid, y = -2. + 4. * j / grid;
      if (in_ball(x, y) && in_box(x, y)) best = std::min(best, c(0) * x + c(1) * y);
    }
  }
  const int sweep = 2'000'000;
  for (int i = 0; i < sweep; ++i) {
    const double th = 2. * M_PI * i / sweep;
    const double x = p(0) + radius * std::cos(th), y = p(1) + radius * std::sin(th);
    if (in_box(x, y)) best = std::min(best, c(0) * x + c(1) * y);
  }
  for (int e = 0; e < 4; ++e) {
    for (int i = 0; i <= 200000; ++i) {
      const double t = -2. + 4. * i / 200000.;
      const double x = (e == 0) ? -2. : (e == 1) ? 2. : t;
      const double y = (e == 2) ? -2. : (e == 3) ? 2. : t;
      if (in_ball(x, y)) best = std::min(best, c(0) * x + c(1) * y);
    }
  }
  return best;
}

}  // namespace

TEST_CASE("random small socps match a brute-force oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1., 1.);
  for (int trial = 0; trial < 12; ++trial) {
    Eigen::Vector2d c(unif(rng), unif(rng));
    Eigen::Vector2d p(unif(rng), unif(rng));
    const double radius = 0.3 + 0.5 * std::abs(unif(rng));

    ConicProgram prog(2);
    prog.set_objective(c);
    ConicBlock box;
    box.cone = Cone::Nonneg;
    for (int i = 0; i < 2; ++i) {
      box.rows.push_back(AffineExpr::of_variable(i, 1., 2.));
      box.rows.push_back(AffineExpr::of_variable(i, -1., 2.));
    }
    prog.add_block(std::move(box));
    ConicBlock ball;
    ball.cone = Cone::Soc;
    ball.rows.push_back(AffineExpr::of_constant(radius));
    ball.rows.push_back(AffineExpr::of_variable(0, 1., -p(0)));
    ball.rows.push_back(AffineExpr::of_variable(1, 1., -p(1)));
    prog.add_block(std::move(ball));

    SolveResult r = solve(prog);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(prog.max_violation(r.x) < 1e-7);
    const double oracle = ball_box_oracle(c, p, radius);
    const double scale = std::max(1., std::abs(oracle));
    CHECK(std::abs(r.objective - oracle) / scale < 1e-4);
  }
}

TEST_CASE("complementary slackness at optimum") {
  ConicProgram prog = lp_min_x_geq_1();
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(std::abs(r.slack.dot(r.dual)) < 1e-6);
}

TEST_CASE("deterministic for fixed input") {
  ConicProgram prog = lp_min_x_geq_1();
  SolveResult a = solve(prog);
  SolveResult b = solve(prog);
  CHECK(a.objective == b.objective);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("concurrent solves of independent programs") {
  SolveResult r1, r2;
  std::thread t1([&] { r1 = solve(lp_min_x_geq_1()); });
  std::thread t2([&] {
    ConicProgram prog(1);
    prog.add_objective_term(0, 1.);
    ConicBlock blk;
    blk.cone = Cone::Soc;
    blk.rows.push_back(AffineExpr::of_variable(0, 1.));
    blk.rows.push_back(AffineExpr::of_constant(3.));
    blk.rows.push_back(AffineExpr::of_constant(4.));
    prog.add_block(std::move(blk));
    r2 = solve(prog);
  });
  t1.join();
  t2.join();
  CHECK(r1.objective == doctest::Approx(1.).epsilon(1e-7));
  CHECK(r2.objective == doctest::Approx(5.).epsilon(1e-7));
}

}  // TEST_SUITE
