#pragma once

#include <Eigen/Dense>

#include "scopt/channel.hpp"
#include "scopt/quadratic_form.hpp"
#include "scopt/sca.hpp"

namespace scopt {

/// Amplify-and-forward relay network: one source-destination pair assisted by
/// K single-antenna relays applying complex weights w, overheard by M
/// eavesdroppers; no direct link.
struct SecureRelayInstance {
  int num_relays = 0;
  int num_eavesdroppers = 0;
  Eigen::VectorXcd source_channel;  // f, source -> relay k
  Eigen::VectorXcd dest_channel;    // g, relay k -> destination
  Eigen::MatrixXcd eve_channels;    // K x M, column m = h_m
  double source_power = 100.;
  double total_power = 31.6227766016838;
  Eigen::VectorXd per_relay_power;
  double noise = 1.;

  /// Rayleigh channels with the relay budgets split by the odd/even rule:
  /// P_k = P_tot/2K for odd k, 2 P_tot/K for even k (1-based).
  static SecureRelayInstance random(Rng& rng, int K, int M, double source_power_db = 20.,
                                    double total_power_db = 15., double noise = 1.);
  void validate() const;
};

/// Factored quadratic forms of the link qualities and transmit powers.
struct SecureRelayMatrices {
  QuadraticForm dest_signal;                 // rank-1
  QuadraticForm dest_noise;                  // diagonal
  std::vector<QuadraticForm> eve_signal;     // per eavesdropper, rank-1
  std::vector<QuadraticForm> eve_noise;      // per eavesdropper, diagonal
  QuadraticForm total_tx_power;
  std::vector<QuadraticForm> per_relay_tx_power;
};

SecureRelayMatrices build_matrices(const SecureRelayInstance& inst);

double dest_sinr(const SecureRelayInstance& inst, const Eigen::VectorXcd& w);
double eve_sinr(const SecureRelayInstance& inst, const Eigen::VectorXcd& w, int m);
/// log(1 + sinr_d) - log(1 + max_m sinr_e), in nats.
double secrecy_rate(const SecureRelayInstance& inst, const Eigen::VectorXcd& w);

struct SecureRelayProblem {
  ScaProblem problem;
  Eigen::VectorXd x0;
  int num_relays = 0;
  // Variable layout: [Re w; Im w] then the epigraph bounds.
  int var_alpha = 0;  // lower bound on 1 + sinr_d
  int var_beta = 0;   // upper bound on 1 + sinr_e
  int var_ratio = 0;  // epigraph of beta/alpha, the minimized objective
  int var_z = 0;      // slack coupling 1 <= alpha * z

  Eigen::VectorXcd weights(const Eigen::VectorXd& x) const;
};

/// Minimizes the bound u on beta/alpha: the ratio objective through the
/// inverted-denominator surrogate, the destination constraint through the
/// linearized quadratic-over-linear bound, each eavesdropper constraint
/// through the linearized-denominator bound, plus the convex power caps.
/// The start point scales a random draw to a fraction of the power budget and
/// reads the attained bounds off it.
SecureRelayProblem build_sca_problem(const SecureRelayInstance& inst, Rng& rng,
                                     double initial_power_fraction = 0.1);

}  // namespace scopt
