#pragma once

#include <Eigen/Dense>

#include "scopt/conic_program.hpp"

namespace scopt {

enum class SolveStatus {
  Optimal,
  PrimalInfeasible,
  DualInfeasible,
  MaxIterations,
  NumericalError,
};

const char* to_string(SolveStatus status);

struct SolverSettings {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  double rel_gap_tol = 1e-8;
  // Residual level at which a stalled solve is still reported with usable
  // residual fields (status MaxIterations) instead of NumericalError.
  double reduced_tol = 1e-5;
  int max_iters = 200;
  double static_reg = 1e-8;
  int refine_steps = 2;
  int equilibrate_steps = 3;
  double step_scale = 0.99;
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NumericalError;
  Eigen::VectorXd x;
  /// Cone multipliers in original block row order; zero blocks carry their
  /// equality multipliers.
  Eigen::VectorXd dual;
  /// Cone slacks in the same order; zero-block entries are 0.
  Eigen::VectorXd slack;
  double objective = 0.;
  double primal_residual = 0.;
  double dual_residual = 0.;
  double duality_gap = 0.;
  double rel_gap = 0.;
  int iterations = 0;
  double solve_seconds = 0.;

  /// True when the iterate is trustworthy at the reduced tolerance, i.e.
  /// status is Optimal, or MaxIterations with small residuals.
  bool usable(double tol = 1e-5) const;
};

/// Interior-point solve of min c'x over the program's cone blocks. Pure
/// function of (prog, settings); deterministic; safe to call concurrently on
/// independent programs.
SolveResult solve(const ConicProgram& prog, const SolverSettings& settings = {});

}  // namespace scopt
