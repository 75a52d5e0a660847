#pragma once

#include <Eigen/Dense>
#include <vector>

#include "scopt/channel.hpp"
#include "scopt/quadratic_form.hpp"
#include "scopt/sca.hpp"

namespace scopt {

/// Two-hop network: M single-antenna source-destination pairs assisted by R
/// amplify-and-forward relays with N_R antennas each. The joint processing
/// matrix X is block diagonal with one N_R x N_R block per relay.
struct MimoRelayInstance {
  int num_relays = 0;        // R
  int antennas_per_relay = 0;  // N_R
  int num_pairs = 0;         // M
  Eigen::MatrixXcd src_channels;  // N x M, column i: sources -> relays
  Eigen::MatrixXcd dst_channels;  // N x M, column i: relays -> destination i
  double source_power = 100.;   // per-source symbol power
  double relay_noise = 1.;
  double dest_noise = 1.;
  Eigen::VectorXd per_antenna_power;  // size N = R * N_R

  int total_antennas() const { return num_relays * antennas_per_relay; }

  static MimoRelayInstance random(Rng& rng, int R, int NR, int M,
                                  double source_power_db = 20.,
                                  double relay_budget_db = 10.);
  void validate() const;
};

/// Quadratic forms over the supported entries of vec(X): the block-diagonal
/// pattern fixes all other coordinates at zero, so only R*N_R^2 complex
/// variables enter the solver.
struct VectorizedRelay {
  std::vector<int> support;  // vec(X) indices, column-major
  std::vector<QuadraticForm> pair_signal;         // per pair: sigma_s^2 |l_i^H X h_i|^2
  std::vector<QuadraticForm> pair_interference;   // per pair: interference + relay noise
  std::vector<QuadraticForm> antenna_tx_power;    // per antenna
};

VectorizedRelay vectorize(const MimoRelayInstance& inst);

/// Exact evaluations from the matrix form.
double pair_sinr(const MimoRelayInstance& inst, const Eigen::MatrixXcd& X, int i);
double antenna_power(const MimoRelayInstance& inst, const Eigen::MatrixXcd& X, int n);
double min_sinr(const MimoRelayInstance& inst, const Eigen::MatrixXcd& X);

struct MimoRelayProblem {
  ScaProblem problem;
  Eigen::VectorXd x0;
  VectorizedRelay vec;
  int support_size = 0;     // complex variables
  int var_min_sinr = 0;     // maximized epigraph variable
  std::vector<int> var_z;   // per-pair denominator slacks

  Eigen::MatrixXcd processing_matrix(const MimoRelayInstance& inst,
                                     const Eigen::VectorXd& x) const;
};

/// Max-min SINR with per-antenna power caps. Each pair couples through the
/// product bound theta * z_i <= signal_i (difference-of-squares surrogate)
/// with z_i capping the interference-plus-noise quadratic. The start point
/// rescales a random draw so the worst antenna sits at the given fraction of
/// its cap.
MimoRelayProblem build_sca_problem(const MimoRelayInstance& inst, Rng& rng,
                                   double power_margin = 0.9);

}  // namespace scopt
