#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "scopt/conic_program.hpp"
#include "scopt/surrogate.hpp"
#include "scopt/surrogate_check.hpp"

using namespace scopt;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

Eigen::VectorXd vec3(double a, double b, double c) {
  Eigen::VectorXd v(3);
  v << a, b, c;
  return v;
}

// Scalar affine forms over one variable: h(x) = slope * x.
QuadraticForm scalar_affine(double slope) {
  Eigen::VectorXd b(1);
  b << slope / 2.;
  return QuadraticForm::real_affine(b, 0.);
}

// h(x) = x^2 over one variable.
QuadraticForm scalar_square() {
  Eigen::MatrixXd f(1, 1);
  f << 1.;
  return QuadraticForm::real(f, Eigen::VectorXd::Zero(1), 0.);
}

}  // namespace

TEST_SUITE("surrogate") {

TEST_CASE("app1: h1=2x, h2=x, anchored at (x,l)=(1,2)") {
  auto s = app1(scalar_affine(2.), scalar_affine(1.), 1, vec2(1., 2.));
  // y = h2/l = 0.5; tight at the anchor.
  CHECK(s->value(vec2(1., 2.)) == doctest::Approx(0.).epsilon(1e-12));
  CHECK(s->target(vec2(1., 2.)) == doctest::Approx(0.).epsilon(1e-12));
  // Upper bound away from the anchor: F(-0.75) >= f(-1) at (x,l)=(1,1).
  CHECK(s->value(vec2(1., 1.)) == doctest::Approx(-0.75));
  CHECK(s->target(vec2(1., 1.)) == doctest::Approx(-1.));
  // Gradient at the anchor: dF/dx = 0, dF/dl = h2 = 1.
  ConditionReport rep = verify_conditions(*s, {vec2(1., 1.), vec2(1.5, 2.)});
  CHECK(rep.anchor_gap < 1e-12);
  CHECK(rep.max_gradient_mismatch < 1e-6);
  CHECK(rep.max_upper_violation < 1e-12);
}

TEST_CASE("app1 emits exactly one rotated second-order block") {
  auto s = app1(scalar_affine(2.), scalar_affine(1.), 1, vec2(1., 2.));
  std::vector<ConicBlock> blocks;
  s->emit(blocks);
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].cone == Cone::RotatedSoc);
  // Block feasibility matches the sign of F at sampled points.
  for (double x : {0.5, 1., 2.}) {
    for (double l : {0.5, 1., 2., 3.}) {
      const Eigen::VectorXd p = vec2(x, l);
      const double viol = block_violation(blocks[0], p);
      if (s->value(p) <= -1e-9) CHECK(viol == 0.);
      if (s->value(p) >= 1e-9) CHECK(viol > 0.);
    }
  }
}

TEST_CASE("app1 rejects a nonpositive anchor ratio") {
  CHECK_THROWS_AS(app1(scalar_affine(2.), scalar_affine(1.), 1, vec2(-1., 2.)),
                  std::domain_error);
}

TEST_CASE("app2: same target as app1, tight and above it") {
  auto s = app2(scalar_affine(2.), scalar_affine(1.), 1, vec2(1., 2.));
  CHECK(s->value(vec2(1., 2.)) == doctest::Approx(0.).epsilon(1e-12));
  CHECK(s->value(vec2(1., 1.)) == doctest::Approx(-0.75));
  CHECK(s->target(vec2(1., 1.)) == doctest::Approx(-1.));
  // The gap F - f is the curvature of the linearized square, always >= 0.
  for (double x : {0.2, 0.7, 1.3, 1.9}) {
    for (double l : {0.4, 1.1, 2.6}) {
      const Eigen::VectorXd p = vec2(x, l);
      CHECK(s->value(p) - s->target(p) >= -1e-12);
    }
  }
}

TEST_CASE("app3: h1=h2=x anchored at x=1") {
  // Layout (x, u, z); anchor z = 1/h2 = 1 so y = 1.
  auto s = app3(scalar_affine(1.), scalar_affine(1.), 1, 2, vec3(1., 0.7, 1.));
  CHECK(s->value(vec3(1., 0.7, 1.)) == doctest::Approx(1. - 0.7));
  CHECK(s->target(vec3(1., 0.7, 1.)) == doctest::Approx(1. - 0.7));
  CHECK(s->value(vec3(2., 0., 1.)) == doctest::Approx(2.125));
  CHECK(s->target(vec3(2., 0., 1.)) == doctest::Approx(1.));

  std::vector<ConicBlock> blocks;
  s->emit(blocks);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].cone == Cone::RotatedSoc);
  CHECK(blocks[1].cone == Cone::RotatedSoc);

  ConditionReport rep = verify_conditions(*s, {vec3(1.5, 1., 1.)});
  CHECK(rep.anchor_gap < 1e-12);
  CHECK(rep.max_gradient_mismatch < 1e-6);
}

TEST_CASE("app3 rejects nonpositive h1 or h2 at the anchor") {
  CHECK_THROWS_AS(app3(scalar_affine(1.), scalar_affine(1.), 1, 2, vec3(-1., 0.5, 1.)),
                  std::domain_error);
}

TEST_CASE("app4: h1=h2=x^2, anchored at (x,l)=(1,1)") {
  auto s = app4(scalar_square(), scalar_square(), BoundRef::variable(1), vec2(1., 1.));
  // F(x,l) = x^2 - 2x + l.
  CHECK(s->value(vec2(1., 1.)) == doctest::Approx(0.));
  CHECK(s->value(vec2(2., 1.)) == doctest::Approx(1.));
  CHECK(s->target(vec2(2., 1.)) == doctest::Approx(0.));
  ConditionReport rep = verify_conditions(*s, {vec2(0.5, 1.), vec2(2., 2.)});
  CHECK(rep.anchor_gap < 1e-12);
  CHECK(rep.max_gradient_mismatch < 1e-6);
}

TEST_CASE("app4 complex case: |x|^2 embedded, gradient matches differences") {
  Eigen::MatrixXcd f(1, 1);
  f << std::complex<double>(1., 0.);
  QuadraticForm h = QuadraticForm::complex(f, Eigen::VectorXcd::Zero(1), 0.);
  QuadraticForm he = h.embedded();
  // Layout (Re x, Im x, l); anchor away from the origin.
  auto s = app4(he, he, BoundRef::variable(2), vec3(0.8, -0.4, 1.2));
  ConditionReport rep = verify_conditions(*s, {vec3(1., 0.5, 1.), vec3(0.3, -1., 2.)});
  CHECK(rep.anchor_gap < 1e-10);
  CHECK(rep.max_gradient_mismatch < 1e-6);
  CHECK(rep.max_upper_violation < 1e-10);
}

TEST_CASE("app4 with a constant lower limit") {
  auto s = app4(scalar_square(), scalar_square(), BoundRef::fixed(2.), vec2(1., 0.));
  // f = h2 - h1/2 = x^2/2; F = x^2 - (x^2/2 linearized at 1) = x^2 - x + 1/2.
  CHECK(s->target(vec2(3., 0.)) == doctest::Approx(4.5));
  CHECK(s->value(vec2(1., 0.)) == doctest::Approx(0.5));
  CHECK(s->value(vec2(3., 0.)) == doctest::Approx(6.5));
}

TEST_CASE("app5: h1=x^2 anchored at (x,l,z)=(0,1,1)") {
  auto s = app5(scalar_square(), 1, 2, vec3(0., 1., 1.));
  CHECK(s->value(vec3(0., 1., 1.)) == doctest::Approx(4.));
  CHECK(s->target(vec3(0., 1., 1.)) == doctest::Approx(4.));
  CHECK(s->value(vec3(1., 1., 1.)) == doctest::Approx(4.));
  CHECK(s->target(vec3(1., 1., 1.)) == doctest::Approx(0.));
  ConditionReport rep = verify_conditions(*s, {vec3(0.5, 1., 2.)});
  CHECK(rep.anchor_gap < 1e-12);
  CHECK(rep.max_gradient_mismatch < 1e-6);
}

TEST_CASE("app6: h1=h2=x^2 anchored at x=1") {
  auto s = app6(scalar_square(), scalar_square(), 1, vec2(1., 1.));
  CHECK(s->value(vec2(1., 1.)) == doctest::Approx(0.));
  CHECK(s->value(vec2(2., 1.)) == doctest::Approx(1.));
  CHECK(s->target(vec2(2., 1.)) == doctest::Approx(0.));
  ConditionReport rep = verify_conditions(*s, {vec2(0.5, 0.8), vec2(1.5, 2.)});
  CHECK(rep.anchor_gap < 1e-12);
  CHECK(rep.max_gradient_mismatch < 1e-6);
}

TEST_CASE("stale anchor is detected as a tightness gap") {
  auto s = app1(scalar_affine(2.), scalar_affine(1.), 1, vec2(1., 2.));
  const Eigen::VectorXd current = vec2(1.7, 0.9);
  // A correct update would re-anchor at `current`; the stale surrogate has a
  // strictly positive gap there.
  CHECK(std::abs(s->target(current) - s->value(current)) > 1e-3);
  CHECK(std::abs(s->reanchored(current)->target(current) -
                 s->reanchored(current)->value(current)) < 1e-12);
}

TEST_CASE("validity sweep over all six constructors") {
  SweepOptions opt;
  opt.instances = 30;  // the acceptance suite runs the full 100x200 sweep
  opt.samples = 60;
  opt.seed = 11;
  for (const SweepResult& r : sweep_all_surrogates(opt)) {
    CAPTURE(r.kind);
    CHECK(r.max_upper_violation <= opt.upper_tol);
    CHECK(r.max_anchor_gap <= opt.gap_tol);
    CHECK(r.max_gradient_mismatch <= opt.gradient_tol);
  }
}

TEST_CASE("emitted blocks match surrogate sign for quadratic kinds") {
  SweepOptions opt;
  opt.instances = 1;
  auto check_kind = [&](int kind) {
    Eigen::VectorXd anchor = vec3(1., 1.5, 1.2);
    std::unique_ptr<Surrogate> s;
    QuadraticForm q = scalar_square();
    switch (kind) {
      case 4: s = app4(q, q, BoundRef::variable(1), anchor); break;
      case 5: s = app5(q, 1, 2, anchor); break;
      case 6: s = app6(q, q, 1, anchor); break;
    }
    std::vector<ConicBlock> blocks;
    s->emit(blocks);
    for (double x : {0.4, 1., 1.8}) {
      for (double b : {0.6, 1.5, 2.4}) {
        Eigen::VectorXd p = vec3(x, b, 1.2);
        double worst = 0.;
        for (const auto& blk : blocks) worst = std::max(worst, block_violation(blk, p));
        const double fv = s->value(p);
        if (fv <= -1e-9) CHECK(worst == 0.);
        if (fv >= 1e-9) CHECK(worst > 0.);
      }
    }
  };
  check_kind(4);
  check_kind(5);
  check_kind(6);
}

}  // TEST_SUITE
