#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "scopt/conic_program.hpp"
#include "scopt/solver.hpp"
#include "scopt/surrogate.hpp"

namespace scopt {

/// One nonconvex problem in minimization form: convex linear objective
/// (epigraph-lowered by the builder when needed), convex cone blocks, and a
/// list of anchored surrogates standing in for the nonconvex constraints.
struct ScaProblem {
  int num_vars = 0;
  Eigen::VectorXd objective;
  std::vector<ConicBlock> convex_blocks;
  std::vector<std::unique_ptr<Surrogate>> surrogates;

  /// Anchor-update pre-map applied to every accepted iterate: refreshes
  /// auxiliary epigraph variables with their exactly attained values. Must be
  /// total; defaults to the identity.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> polish;

  /// Exact objective used for the trace and the stopping rule (minimization
  /// sense); defaults to objective.dot(x).
  std::function<double(const Eigen::VectorXd&)> objective_value;

  double objective_at(const Eigen::VectorXd& x) const;
  Eigen::VectorXd polished(const Eigen::VectorXd& x) const;
  /// max over convex block violations and surrogate targets (their exact
  /// nonconvex constraint functions), 0 when feasible.
  double max_violation(const Eigen::VectorXd& x) const;
};

struct ScaConfig {
  int stop_window = 5;
  double stop_tol = 1e-3;
  bool relative_stop = false;  // window rule on |df|/max(1,|f|) instead of |df|
  int max_iters = 200;
  double feas_tol = 1e-6;

  // Proximal regularization; 0 disables. With prox_adaptive the term engages
  // only on iterations following a non-strict descent.
  double prox_weight = 0.;
  bool prox_adaptive = true;

  // Relaxed feasibility phase.
  double relax_penalty = 1.;
  double relax_growth = 10.;
  double relax_penalty_cap = 1e6;
  bool per_constraint_slack = false;

  SolverSettings solver;
};

enum class ScaStatus {
  Converged,
  IterationCap,
  InfeasibleStart,
  SubproblemFailure,
  FeasibilityNotReached,
};

const char* to_string(ScaStatus status);

struct ScaIterate {
  int iteration = 0;
  double objective = 0.;
  double max_violation = 0.;
  double slack_q = 0.;  // relaxed phase only
  SolveStatus solve_status = SolveStatus::Optimal;
  double solve_seconds = 0.;
  double step_norm2 = 0.;  // ||x_new - x_prev||^2 over the problem variables
  double step_inf = 0.;
  bool prox_engaged = false;
  bool accepted_with_warning = false;
};

struct ScaTrace {
  std::vector<ScaIterate> iterates;
  bool non_monotone = false;
};

struct ScaRunResult {
  ScaStatus status = ScaStatus::IterationCap;
  Eigen::VectorXd x;
  ScaTrace trace;
};

/// Iteratively solves the convexified subproblems from a feasible start,
/// re-anchoring all surrogates at each accepted (polished) iterate. Errors
/// with InfeasibleStart when x0 violates the constraints beyond feas_tol;
/// use find_feasible to produce a start point.
ScaRunResult run_sca(const ScaProblem& problem, const Eigen::VectorXd& x0,
                     const ScaConfig& config = {});

/// run_sca with the proximal term alpha*||x - x_prev||^2 added to stalled
/// subproblems (every subproblem when prox_adaptive is off).
ScaRunResult run_sca_proximal(const ScaProblem& problem, const Eigen::VectorXd& x0,
                              const ScaConfig& config);

/// Default proximal weight: 1e-4 times the initial objective magnitude.
double default_prox_weight(const ScaProblem& problem, const Eigen::VectorXd& x0);

/// Slack-relaxed phase: minimizes objective + penalty * q with every relaxable
/// constraint loosened to ... <= q, growing the penalty each iteration, until
/// q <= feas_tol. Accepts an arbitrary start.
ScaRunResult find_feasible(const ScaProblem& problem, const Eigen::VectorXd& x0,
                           const ScaConfig& config = {});

/// One convexified subproblem anchored at x (no relaxation, no proximal term);
/// exposed for stationarity diagnostics.
SolveResult sca_step(const ScaProblem& problem, const Eigen::VectorXd& anchor_x,
                     const ScaConfig& config = {});

}  // namespace scopt
