#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace scopt {

/// Deterministic random stream: mt19937_64 with a splitmix-scrambled seed and
/// a hand-rolled Box-Muller normal, so draws are identical across platforms
/// and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  /// Independent stream for one trial; trial data is unchanged by the total
  /// number of trials.
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  std::complex<double> cnormal();  // circularly symmetric, unit variance
  Eigen::VectorXcd cnormal_vector(int n);

 private:
  std::uint64_t next_raw();
  std::uint64_t state_;
  double cached_ = 0.;
  bool has_cached_ = false;
};

/// i.i.d. unit-variance Rayleigh-fading draws.
Eigen::VectorXcd gen_rayleigh(std::uint64_t seed, int n);
Eigen::VectorXcd gen_rayleigh(Rng& rng, int n);

/// Frequency-selective gains for a K-link, N-subcarrier network. Transmitter k
/// sits at (k, 10) m, receiver k at (k, 0) m; path loss is d^-3 with lognormal
/// shadowing of standard deviation 3 (interpreted in dB by default, natural
/// log otherwise); the impulse response has six taps with variance profile
/// [1, e^-3, ..., e^-15] mapped to subcarriers by an N-point DFT.
struct MulticarrierGains {
  int links = 0;
  int subcarriers = 0;
  // gain(k, l, n): transmitter l to receiver k on subcarrier n.
  std::vector<Eigen::MatrixXd> per_subcarrier;  // N matrices, each K x K

  double operator()(int k, int l, int n) const { return per_subcarrier[n](k, l); }
};

MulticarrierGains gen_multicarrier_gains(Rng& rng, int links, int subcarriers,
                                         bool shadowing_in_db = true);

/// x dB as a linear power ratio.
double from_db(double db);
/// x dBm in watts.
double from_dbm(double dbm);

}  // namespace scopt
