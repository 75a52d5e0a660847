#include <doctest.h>

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "scopt/conic_program.hpp"
#include "scopt/quadratic_form.hpp"

using namespace scopt;
using std::complex;

TEST_SUITE("quadratic_form") {

TEST_CASE("identity embedding: |x|^2 at x=1+i equals 2") {
  Eigen::MatrixXcd f(1, 1);
  f << complex<double>(1., 0.);
  QuadraticForm q = QuadraticForm::complex(f, Eigen::VectorXcd::Zero(1), 0.);
  Eigen::VectorXcd x(1);
  x << complex<double>(1., 1.);
  CHECK(q.value(x) == doctest::Approx(2.));
  QuadraticForm e = embed_complex(q);
  Eigen::VectorXd xr(2);
  xr << 1., 1.;
  CHECK(e.value(xr) == doctest::Approx(2.));
}

TEST_CASE("affine embedding: b=1 at x=i gives 0") {
  Eigen::VectorXcd b(1);
  b << complex<double>(1., 0.);
  QuadraticForm q = QuadraticForm::complex_affine(b, 0.);
  Eigen::VectorXcd x(1);
  x << complex<double>(0., 1.);
  CHECK(q.value(x) == doctest::Approx(0.));
  QuadraticForm e = q.embedded();
  Eigen::VectorXd xr(2);
  xr << 0., 1.;
  CHECK(e.value(xr) == doctest::Approx(0.));
}

TEST_CASE("embedding preserves values on random hermitian psd forms") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  auto cg = [&] { return complex<double>(gauss(rng), gauss(rng)); };
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXcd f(3, 3);
    Eigen::VectorXcd b(3);
    for (int i = 0; i < 3; ++i) {
      b(i) = cg();
      for (int j = 0; j < 3; ++j) f(i, j) = cg();
    }
    QuadraticForm q = QuadraticForm::complex(f, b, gauss(rng));
    QuadraticForm e = q.embedded();
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXcd x(3);
      for (int i = 0; i < 3; ++i) x(i) = cg();
      Eigen::VectorXd xr(6);
      xr << x.real(), x.imag();
      CHECK(std::abs(q.value(x) - e.value(xr)) <= 1e-12 * (1. + std::abs(q.value(x))));
    }
  }
}

TEST_CASE("conjugate gradient Ax+b of a complex form") {
  Eigen::MatrixXcd f(2, 2);
  f << complex<double>(1., 0.), complex<double>(0., 1.), complex<double>(0., 0.),
      complex<double>(2., 0.);
  Eigen::VectorXcd b(2);
  b << complex<double>(0.5, -0.5), complex<double>(0., 1.);
  QuadraticForm q = QuadraticForm::complex(f, b, 0.);
  Eigen::VectorXcd x(2);
  x << complex<double>(1., 2.), complex<double>(-1., 0.);
  Eigen::VectorXcd expected = f.adjoint() * (f * x) + b;
  CHECK((q.conjugate_gradient(x) - expected).norm() < 1e-14);
}

TEST_CASE("quad_epigraph: scalar square") {
  Eigen::MatrixXd f(1, 1);
  f << 1.;
  QuadraticForm q = QuadraticForm::real(f, Eigen::VectorXd::Zero(1), 0.);
  // h(x) = x^2 <= t with layout (x, t).
  auto blocks = quad_epigraph(q, AffineExpr::of_variable(1, 1.));
  REQUIRE(blocks.size() == 1);
  Eigen::VectorXd ok(2), bad(2);
  ok << 2., 4.;
  bad << 2., 3.9;
  CHECK(block_violation(blocks[0], ok) == 0.);
  CHECK(block_violation(blocks[0], bad) > 0.);
}

TEST_CASE("quad_epigraph: affine case reduces to one linear row") {
  Eigen::VectorXd b(1);
  b << 0.5;  // h(x) = x + 1
  QuadraticForm q = QuadraticForm::real_affine(b, 1.);
  auto blocks = quad_epigraph(q, AffineExpr::of_variable(1, 1.));
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].cone == Cone::Nonneg);
  CHECK(blocks[0].dim() == 1);
  Eigen::VectorXd ok(2), bad(2);
  ok << 1., 2.5;
  bad << 1., 1.5;
  CHECK(block_violation(blocks[0], ok) == 0.);
  CHECK(block_violation(blocks[0], bad) > 0.);
}

TEST_CASE("quad_epigraph feasibility matches sign of h(x) - t on random forms") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::MatrixXd f(3, 3);
    Eigen::VectorXd b(3);
    for (int i = 0; i < 3; ++i) {
      b(i) = gauss(rng);
      for (int j = 0; j < 3; ++j) f(i, j) = gauss(rng);
    }
    QuadraticForm q = QuadraticForm::real(f, b, gauss(rng));
    auto blocks = quad_epigraph(q, AffineExpr::of_variable(3, 1.));
    for (int k = 0; k < 100; ++k) {
      Eigen::VectorXd p(4);
      for (int i = 0; i < 4; ++i) p(i) = 2. * gauss(rng);
      const double h = q.value(Eigen::VectorXd(p.head(3)));
      const double viol = block_violation(blocks[0], p);
      if (h <= p(3) - 1e-10) CHECK(viol <= 1e-12);
      if (h >= p(3) + 1e-10) CHECK(viol > 0.);
    }
  }
}

TEST_CASE("sos completion of shifted squares") {
  Eigen::MatrixXd f(2, 2);
  f << 1., 0., 1., 1.;
  Eigen::VectorXd x0(2);
  x0 << 0.5, -1.;
  const Eigen::VectorXd fx0 = f * x0;
  QuadraticForm q = QuadraticForm::real(f, -f.transpose() * fx0, fx0.squaredNorm() + 0.25);
  auto sos = q.sos_form();
  CHECK(sos.constant == doctest::Approx(0.25));
  Eigen::VectorXd x(2);
  x << 1.2, 0.3;
  const double direct = q.value(x);
  const double via_sos = (sos.rows * x + sos.offset).squaredNorm() + sos.constant;
  CHECK(direct == doctest::Approx(via_sos));
}

TEST_CASE("sos completion rejects forms unbounded below") {
  Eigen::VectorXd b(1);
  b << 1.;
  CHECK_THROWS_AS(QuadraticForm::real_affine(b, 0.).sos_form(), std::domain_error);
}

}  // TEST_SUITE
