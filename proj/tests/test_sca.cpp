#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "scopt/sca.hpp"

using namespace scopt;

namespace {

QuadraticForm scalar_square() {
  Eigen::MatrixXd f(1, 1);
  f << 1.;
  return QuadraticForm::real(f, Eigen::VectorXd::Zero(1), 0.);
}

QuadraticForm scalar_const(double c) {
  return QuadraticForm::real_affine(Eigen::VectorXd::Zero(1), c);
}

// max t s.t. t <= 1 + p, 0 <= p <= 1, posed through the hyperbolic surrogate
// (ratio (1+p)/1 above the variable t). Monotone objective saturates power.
struct PowerToy {
  ScaProblem problem;
  Eigen::VectorXd x0;
};

PowerToy make_power_toy() {
  PowerToy toy;
  ScaProblem& p = toy.problem;
  p.num_vars = 2;  // p, t
  p.objective = Eigen::VectorXd::Zero(2);
  p.objective(1) = -1.;

  ConicBlock box;
  box.cone = Cone::Nonneg;
  box.relaxable = false;
  box.rows.push_back(AffineExpr::of_variable(0, 1.));
  box.rows.push_back(AffineExpr::of_variable(0, -1., 1.));
  box.rows.push_back(AffineExpr::of_variable(1, 1.));
  p.convex_blocks.push_back(std::move(box));

  p.polish = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y(1) = 1. + std::clamp(x(0), 0., 1.);
    return y;
  };

  Eigen::VectorXd b1(1);
  b1 << 0.5;
  const QuadraticForm h1 = QuadraticForm::real_affine(b1, 1.);  // 1 + p
  const QuadraticForm h2 = scalar_const(1.);

  Eigen::VectorXd x0(2);
  x0 << 0.1, 1.1;
  toy.x0 = x0;
  p.surrogates.push_back(app1(h1, h2, 1, x0));
  return toy;
}

// Nonconvex set |x| >= sqrt(2) via the linearized quadratic-over-linear bound
// with a constant ratio limit; objective min x^2 through its epigraph.
struct RingToy {
  ScaProblem problem;
};

RingToy make_ring_toy(double required = 2., bool boxed = false) {
  RingToy toy;
  ScaProblem& p = toy.problem;
  p.num_vars = 2;  // x, t
  p.objective = Eigen::VectorXd::Zero(2);
  p.objective(1) = 1.;
  for (auto& blk : quad_epigraph(scalar_square(), AffineExpr::of_variable(1, 1.))) {
    blk.relaxable = false;
    p.convex_blocks.push_back(std::move(blk));
  }
  if (boxed) {
    ConicBlock box;
    box.cone = Cone::Nonneg;
    box.relaxable = false;
    box.rows.push_back(AffineExpr::of_variable(0, 1., 1.));   // x >= -1
    box.rows.push_back(AffineExpr::of_variable(0, -1., 1.));  // x <= 1
    p.convex_blocks.push_back(std::move(box));
  }
  p.polish = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y(1) = x(0) * x(0);
    return y;
  };
  Eigen::VectorXd anchor(2);
  anchor << 1.5, 2.25;
  p.surrogates.push_back(
      app4(scalar_square(), scalar_const(1.), BoundRef::fixed(required), anchor));
  return toy;
}

}  // namespace

TEST_SUITE("sca") {

TEST_CASE("terminates at a fixed point with unchanged objective") {
  PowerToy toy = make_power_toy();
  Eigen::VectorXd x_star(2);
  x_star << 1., 2.;
  ScaConfig cfg;
  ScaRunResult res = run_sca(toy.problem, x_star, cfg);
  CHECK(res.status == ScaStatus::Converged);
  CHECK(static_cast<int>(res.trace.iterates.size()) == cfg.stop_window);
  for (const auto& it : res.trace.iterates) {
    CHECK(it.objective == doctest::Approx(-2.).epsilon(1e-6));
  }
}

TEST_CASE("monotone objective saturates the power budget") {
  PowerToy toy = make_power_toy();
  ScaRunResult res = run_sca(toy.problem, toy.x0);
  REQUIRE(res.status == ScaStatus::Converged);
  CHECK(res.x(0) == doctest::Approx(1.).epsilon(1e-5));
  CHECK(res.trace.iterates.back().objective == doctest::Approx(-2.).epsilon(1e-5));
  CHECK(!res.trace.non_monotone);
  CHECK(res.trace.iterates.back().max_violation <= 1e-6);
}

TEST_CASE("infeasible start is rejected with guidance toward the relaxed phase") {
  RingToy toy = make_ring_toy();
  Eigen::VectorXd x0(2);
  x0 << 0.1, 0.01;
  ScaRunResult res = run_sca(toy.problem, x0);
  CHECK(res.status == ScaStatus::InfeasibleStart);
}

TEST_CASE("relaxed phase reaches the nonconvex set, then the driver converges") {
  RingToy toy = make_ring_toy();
  Eigen::VectorXd x0(2);
  x0 << 0.1, 0.01;
  ScaConfig cfg;
  ScaRunResult feas = find_feasible(toy.problem, x0, cfg);
  REQUIRE(feas.status == ScaStatus::Converged);
  CHECK(feas.trace.iterates.back().slack_q <= 1e-6);
  // Slack sequence nonincreasing.
  for (size_t i = 1; i < feas.trace.iterates.size(); ++i) {
    CHECK(feas.trace.iterates[i].slack_q <=
          feas.trace.iterates[i - 1].slack_q + 1e-8);
  }
  ScaRunResult res = run_sca(toy.problem, feas.x, cfg);
  REQUIRE(res.status == ScaStatus::Converged);
  CHECK(std::abs(res.x(0)) == doctest::Approx(std::sqrt(2.)).epsilon(1e-4));
  CHECK(res.trace.iterates.back().objective == doctest::Approx(2.).epsilon(1e-4));
}

TEST_CASE("feasible start short-circuits the relaxed phase") {
  RingToy toy = make_ring_toy();
  Eigen::VectorXd x0(2);
  x0 << 2., 4.;
  ScaRunResult res = find_feasible(toy.problem, x0);
  CHECK(res.status == ScaStatus::Converged);
  CHECK(res.trace.iterates.size() == 1);
  CHECK(res.trace.iterates[0].slack_q == 0.);
}

TEST_CASE("contradictory requirements end in FeasibilityNotReached") {
  RingToy toy = make_ring_toy(9., /*boxed=*/true);  // |x| >= 3 inside |x| <= 1
  Eigen::VectorXd x0(2);
  x0 << 0.3, 0.09;
  ScaConfig cfg;
  cfg.max_iters = 25;
  ScaRunResult res = find_feasible(toy.problem, x0, cfg);
  CHECK(res.status == ScaStatus::FeasibilityNotReached);
  CHECK(res.trace.iterates.back().slack_q > 1e-3);
}

TEST_CASE("per-constraint slacks reach the same feasible set") {
  RingToy toy = make_ring_toy();
  Eigen::VectorXd x0(2);
  x0 << 0.1, 0.01;
  ScaConfig cfg;
  cfg.per_constraint_slack = true;
  ScaRunResult res = find_feasible(toy.problem, x0, cfg);
  REQUIRE(res.status == ScaStatus::Converged);
  CHECK(toy.problem.max_violation(res.x) <= 1e-6);
}

TEST_CASE("proximal weight zero reproduces the plain driver exactly") {
  PowerToy toy = make_power_toy();
  ScaConfig cfg;
  cfg.prox_weight = 0.;
  ScaRunResult a = run_sca(toy.problem, toy.x0);
  ScaRunResult b = run_sca_proximal(toy.problem, toy.x0, cfg);
  REQUIRE(a.trace.iterates.size() == b.trace.iterates.size());
  for (size_t i = 0; i < a.trace.iterates.size(); ++i) {
    CHECK(a.trace.iterates[i].objective == b.trace.iterates[i].objective);
  }
  CHECK(a.x == b.x);
}

TEST_CASE("proximal term pins the iterate on a flat objective") {
  // Constant objective over a disc-like set: without the proximal term the
  // subproblem solution is degenerate; with it the iterate stops moving.
  ScaProblem p;
  p.num_vars = 2;
  p.objective = Eigen::VectorXd::Zero(2);  // flat
  ConicBlock box;
  box.cone = Cone::Nonneg;
  for (int j = 0; j < 2; ++j) {
    box.rows.push_back(AffineExpr::of_variable(j, 1., 1.));
    box.rows.push_back(AffineExpr::of_variable(j, -1., 1.));
  }
  p.convex_blocks.push_back(std::move(box));

  Eigen::VectorXd x0(2);
  x0 << 0.3, -0.4;
  ScaConfig cfg;
  cfg.prox_weight = 1.;
  cfg.prox_adaptive = true;
  ScaRunResult res = run_sca_proximal(p, x0, cfg);
  REQUIRE(res.status == ScaStatus::Converged);
  // First step has no proximal term and may move; engaged steps must not.
  const auto& last = res.trace.iterates.back();
  CHECK(last.prox_engaged);
  CHECK(last.step_inf < 1e-4);
}

TEST_CASE("descent inequality holds on engaged iterations") {
  PowerToy toy = make_power_toy();
  ScaConfig cfg;
  cfg.prox_weight = 1e-3;
  cfg.prox_adaptive = false;  // engage everywhere
  ScaRunResult res = run_sca_proximal(toy.problem, toy.x0, cfg);
  REQUIRE(res.status == ScaStatus::Converged);
  double prev = -1. - 0.1;  // objective at x0: -(1 + p0) after polish
  for (const auto& it : res.trace.iterates) {
    if (it.prox_engaged) {
      CHECK(prev - it.objective >= cfg.prox_weight * it.step_norm2 - 1e-6);
    }
    prev = it.objective;
  }
}

TEST_CASE("stationarity: re-solving at the final point barely moves it") {
  PowerToy toy = make_power_toy();
  ScaRunResult res = run_sca(toy.problem, toy.x0);
  REQUIRE(res.status == ScaStatus::Converged);
  SolveResult step = sca_step(toy.problem, res.x);
  REQUIRE(step.usable());
  CHECK((step.x.head(2) - res.x).lpNorm<Eigen::Infinity>() <= 1e-3);
}

}  // TEST_SUITE
