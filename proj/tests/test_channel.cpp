#include <doctest.h>

#include <cmath>

#include "scopt/channel.hpp"

using namespace scopt;

TEST_SUITE("channel") {

TEST_CASE("rayleigh draws have unit power and half-variance parts") {
  Rng rng(42);
  const int n = 100000;
  double p = 0., vr = 0., vi = 0.;
  for (int i = 0; i < n; ++i) {
    const auto h = rng.cnormal();
    p += std::norm(h);
    vr += h.real() * h.real();
    vi += h.imag() * h.imag();
  }
  CHECK(p / n == doctest::Approx(1.).epsilon(0.02));
  CHECK(vr / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(vi / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("same seed reproduces identical draws") {
  const auto a = gen_rayleigh(7, 16);
  const auto b = gen_rayleigh(7, 16);
  CHECK(a == b);
  Rng r1 = Rng::for_trial(3, 5);
  Rng r2 = Rng::for_trial(3, 5);
  for (int i = 0; i < 100; ++i) CHECK(r1.normal() == r2.normal());
}

TEST_CASE("trial streams are independent of trial count") {
  Rng direct = Rng::for_trial(11, 4);
  // Drawing other trials first must not disturb trial 4.
  for (std::uint64_t t = 0; t < 4; ++t) {
    Rng other = Rng::for_trial(11, t);
    (void)other.normal();
  }
  Rng again = Rng::for_trial(11, 4);
  for (int i = 0; i < 50; ++i) CHECK(direct.normal() == again.normal());
}

TEST_CASE("multicarrier gains: deterministic, positive, direct distance 10 m") {
  Rng r1(9), r2(9);
  const auto g1 = gen_multicarrier_gains(r1, 3, 8);
  const auto g2 = gen_multicarrier_gains(r2, 3, 8);
  for (int n = 0; n < 8; ++n) CHECK(g1.per_subcarrier[n] == g2.per_subcarrier[n]);
  for (int n = 0; n < 8; ++n) CHECK(g1.per_subcarrier[n].minCoeff() >= 0.);

  // Direct links share d = 10 while the adjacent cross distance is
  // sqrt(101); the gain model only sees the distance through d^-3, checked
  // here through the expectation test below.
  CHECK(std::hypot(0., 10.) == doctest::Approx(10.));
  CHECK(std::hypot(1., 10.) == doctest::Approx(std::sqrt(101.)));
}

TEST_CASE("mean direct gain matches shadowing times tap-power expectation") {
  // E[gain * d^3] = E[10^(N(0,3)/10)] * sum of tap variances
  //              = exp((3 ln10 / 10)^2 / 2) * (1 + e^-3 + ... + e^-15).
  double taps = 0.;
  for (int t = 0; t < 6; ++t) taps += std::exp(-3. * t);
  const double sigma_nat = 3. * std::log(10.) / 10.;
  const double expected = std::exp(0.5 * sigma_nat * sigma_nat) * taps;
  CHECK(taps == doctest::Approx(1.0524).epsilon(1e-3));

  Rng rng(1234);
  double acc = 0.;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const auto g = gen_multicarrier_gains(rng, 1, 2);
    acc += 0.5 * (g(0, 0, 0) + g(0, 0, 1)) * 1000.;
  }
  CHECK(acc / draws == doctest::Approx(expected).epsilon(0.03));
}

TEST_CASE("db and dbm conversions") {
  CHECK(from_db(20.) == doctest::Approx(100.));
  CHECK(from_db(15.) == doctest::Approx(31.6227766).epsilon(1e-9));
  CHECK(from_dbm(-30.) == doctest::Approx(1e-6));
  CHECK(from_dbm(32.) == doctest::Approx(1.584893192).epsilon(1e-9));
}

}  // TEST_SUITE
