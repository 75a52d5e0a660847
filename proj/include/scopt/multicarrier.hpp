#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "scopt/channel.hpp"
#include "scopt/sca.hpp"

namespace scopt {

/// K interfering links sharing N independent subcarriers, single-antenna
/// nodes, interference treated as noise. Powers in watts, rates in nats.
struct MulticarrierInstance {
  int links = 0;
  int subcarriers = 0;
  MulticarrierGains gains;        // gain(k, l, n)
  double noise = 1e-6;            // receiver noise per subcarrier
  Eigen::VectorXd weights;        // w_k
  Eigen::VectorXd budget;         // per-transmitter total power
  Eigen::MatrixXd mask;           // K x N per-subcarrier cap
  Eigen::VectorXd circuit_power;  // per-link static consumption

  double normalized_noise(int k, int n) const { return noise / gains(k, k, n); }
  double normalized_gain(int k, int l, int n) const {
    return gains(k, l, n) / gains(k, k, n);
  }

  static MulticarrierInstance random(Rng& rng, int K, int N, double budget_dbm = 32.,
                                     double noise_dbm = -30., double circuit_dbm = 5.,
                                     bool shadowing_in_db = true);
  void validate() const;
};

/// Per-subcarrier and per-link rates at the power allocation p (K x N), nats.
Eigen::MatrixXd subcarrier_rates(const MulticarrierInstance& inst,
                                 const Eigen::MatrixXd& p);
Eigen::VectorXd link_rates(const MulticarrierInstance& inst, const Eigen::MatrixXd& p);
double weighted_sum_rate(const MulticarrierInstance& inst, const Eigen::MatrixXd& p);
Eigen::VectorXd link_energy_efficiency(const MulticarrierInstance& inst,
                                       const Eigen::MatrixXd& p);

/// Curvature bound for log(1 + x/y) over x >= x0 >= 0, y >= y0 > 0.
double lemma1_rho(double x0, double y0);
/// Per-(k, n) curvature bounds at the corners x0 = 0, y0 = normalized noise,
/// optionally shrunk for faster steps.
Eigen::MatrixXd rho_schedule(const MulticarrierInstance& inst, double shrink = 1.);

enum class WsrFormulation { GeneralSocp, GeometricMean, QuadraticDc };

/// Rotated-cone tower encoding hypo <= (prod leaves)^(1/#leaves) for positive
/// leaf variables. Leaves are padded to the next power of two with the
/// hypograph variable itself; each pair (a, b) feeds a fresh node variable v
/// with v^2 <= a b, and the tower root is constrained above the hypograph
/// variable. Node variables start at first_free_var.
struct GeomeanTower {
  std::vector<std::array<int, 3>> nodes;  // (a, b, out)
  int root = -1;
  int vars_used = 0;
};
GeomeanTower add_geomean_hypograph(std::vector<ConicBlock>& blocks,
                                   const std::vector<int>& leaves, int hypo_var,
                                   int first_free_var);

struct MulticarrierProblem {
  ScaProblem problem;
  int links = 0, subcarriers = 0;
  int p_of(int k, int n) const { return k * subcarriers + n; }
  Eigen::MatrixXd powers(const Eigen::VectorXd& x) const;
};

/// Weighted sum rate, epigraph path: per-subcarrier rate bounds t_kn coupled
/// to the powers through the relative-entropy inequality, its convex side
/// linearized and the bilinear side bounded app1-style. With equal_weights
/// the objective is replaced by the geometric-mean hypograph of the raw
/// SINR-plus-one ratios (a rotated-cone tower padded to a power of two);
/// rejects instances whose weights differ.
MulticarrierProblem build_wsr_socp(const MulticarrierInstance& inst,
                                   bool equal_weights = false);

/// Weighted sum rate, quadratic path: powers are the only variables; the rate
/// is handled as a difference of convex functions with curvature rho_schedule
/// and the subtracted part linearized, giving one convex quadratic objective
/// per iteration.
MulticarrierProblem build_wsr_qp(const MulticarrierInstance& inst, double rho_shrink = 1.);

/// Max-min energy efficiency: epigraph variable under per-link ratio bounds
/// (sum of rate bounds over consumed power) plus the same rate coupling as
/// the epigraph WSR path.
MulticarrierProblem build_maxmin_ee(const MulticarrierInstance& inst);

/// Uniform power split meeting budgets and masks.
Eigen::VectorXd uniform_power_start(const MulticarrierInstance& inst,
                                    const MulticarrierProblem& prob);
Eigen::VectorXd random_power_start(const MulticarrierInstance& inst,
                                   const MulticarrierProblem& prob, Rng& rng);

}  // namespace scopt
