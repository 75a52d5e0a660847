#include "scopt/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace scopt {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // Scramble so that small seeds do not produce correlated streams.
  splitmix64(state_);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x9e3779b97f4a7c15ULL * (trial + 1);
  return Rng(s);
}

std::uint64_t Rng::next_raw() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform();
  while (u1 <= 0.) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2. * std::log(u1));
  const double th = 2. * std::numbers::pi * u2;
  cached_ = r * std::sin(th);
  has_cached_ = true;
  return r * std::cos(th);
}

std::complex<double> Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2., im * std::numbers::sqrt2 / 2.};
}

Eigen::VectorXcd Rng::cnormal_vector(int n) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v(i) = cnormal();
  return v;
}

Eigen::VectorXcd gen_rayleigh(std::uint64_t seed, int n) {
  Rng rng(seed);
  return gen_rayleigh(rng, n);
}

Eigen::VectorXcd gen_rayleigh(Rng& rng, int n) {
  if (n <= 0) throw std::invalid_argument("gen_rayleigh: n must be positive");
  return rng.cnormal_vector(n);
}

MulticarrierGains gen_multicarrier_gains(Rng& rng, int links, int subcarriers,
                                         bool shadowing_in_db) {
  if (links <= 0 || subcarriers <= 0) {
    throw std::invalid_argument("gen_multicarrier_gains: dimensions must be positive");
  }
  MulticarrierGains g;
  g.links = links;
  g.subcarriers = subcarriers;
  g.per_subcarrier.assign(subcarriers, Eigen::MatrixXd::Zero(links, links));

  constexpr int kTaps = 6;
  for (int k = 0; k < links; ++k) {
    for (int l = 0; l < links; ++l) {
      // Tx l at (l+1, 10), Rx k at (k+1, 0).
      const double d = std::hypot(static_cast<double>(k - l), 10.);
      const double shadow_sigma = 3.;
      const double draw = shadow_sigma * rng.normal();
      const double shadow = shadowing_in_db ? std::pow(10., draw / 10.) : std::exp(draw);
      const double pathloss = shadow * std::pow(d, -3.);

      std::complex<double> taps[kTaps];
      for (int t = 0; t < kTaps; ++t) {
        const double var = std::exp(-3. * t);
        taps[t] = std::sqrt(var) * rng.cnormal();
      }
      for (int n = 0; n < subcarriers; ++n) {
        std::complex<double> h = 0.;
        for (int t = 0; t < kTaps; ++t) {
          const double phase =
              -2. * std::numbers::pi * static_cast<double>(n) * t / subcarriers;
          h += taps[t] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        g.per_subcarrier[n](k, l) = pathloss * std::norm(h);
      }
    }
  }
  return g;
}

double from_db(double db) { return std::pow(10., db / 10.); }

double from_dbm(double dbm) { return std::pow(10., (dbm - 30.) / 10.); }

}  // namespace scopt
