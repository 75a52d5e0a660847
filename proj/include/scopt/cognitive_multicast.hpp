#pragma once

#include <Eigen/Dense>
#include <vector>

#include "scopt/channel.hpp"
#include "scopt/quadratic_form.hpp"
#include "scopt/sca.hpp"

namespace scopt {

/// Secondary multicast downlink: an N-antenna base station serves G groups of
/// single-antenna users (one beamformer per group) while capping the
/// interference leaked to L primary users.
struct CognitiveInstance {
  int num_antennas = 0;  // N
  int num_groups = 0;    // G
  std::vector<int> group_of_user;   // size M
  Eigen::MatrixXcd user_channels;   // M x N, row i = h_i
  Eigen::MatrixXcd primary_channels;  // L x N, row j = l_j
  Eigen::VectorXd qos;    // per-user SINR target, linear
  Eigen::VectorXd caps;   // per-primary interference cap, linear
  Eigen::VectorXd noise;  // per-user sigma_i^2

  int num_users() const { return static_cast<int>(group_of_user.size()); }
  int num_primary() const { return static_cast<int>(primary_channels.rows()); }
  int stacked_dim() const { return num_antennas * num_groups; }

  static CognitiveInstance random(Rng& rng, int N, int G, int users_per_group, int L,
                                  double qos_db = 10., double cap_db = 5.);
  void validate() const;
};

/// Block forms over the stacked beamformer x = [x_1; ...; x_G].
struct CognitiveBlocks {
  std::vector<QuadraticForm> own_signal;     // user's group block, rank-1
  std::vector<QuadraticForm> cross_signal;   // all other group blocks, rank G-1
  std::vector<QuadraticForm> primary_leak;   // per primary user, rank G
};

CognitiveBlocks build_block_matrices(const CognitiveInstance& inst);

double user_sinr(const CognitiveInstance& inst, const Eigen::VectorXcd& stacked, int i);
double primary_interference(const CognitiveInstance& inst, const Eigen::VectorXcd& stacked,
                            int j);
double total_power(const Eigen::VectorXcd& stacked);

struct CognitiveProblem {
  ScaProblem problem;
  Eigen::VectorXd x0;   // random start; run find_feasible first
  int var_power = 0;    // epigraph of ||x||^2
  int stacked = 0;      // G*N complex entries

  Eigen::VectorXcd beamformer(const Eigen::VectorXd& x) const;
};

/// Power minimization under per-user SINR targets (linearized
/// quadratic-over-linear surrogates with the constant target as the ratio
/// bound) and convex interference caps. Starts from a random draw; the SINR
/// surrogates carry the feasibility slack while the caps and the objective
/// stay exact.
CognitiveProblem build_sca_problem(const CognitiveInstance& inst, Rng& rng);

}  // namespace scopt
