#include "scopt/sca.hpp"

#include <cmath>
#include <stdexcept>

namespace scopt {

namespace {

constexpr double kMonotoneTol = 1e-6;
constexpr double kStrictDescentEps = 1e-12;

struct SubproblemSpec {
  const std::vector<std::unique_ptr<Surrogate>>* surrogates = nullptr;
  // Relaxation: number of appended slack variables (0 = none). With one slack
  // every relaxable constraint shares it; otherwise slacks are dealt out in
  // order.
  int num_slacks = 0;
  double penalty = 0.;
  // Proximal term penalty * ||x - prox_center||^2 lowered through one more
  // appended epigraph variable.
  double prox_weight = 0.;
  const Eigen::VectorXd* prox_center = nullptr;
};

ConicProgram build_subproblem(const ScaProblem& problem, const SubproblemSpec& spec) {
  const int n = problem.num_vars;
  const int slack_base = n;
  const int prox_var = n + spec.num_slacks;
  const int total = n + spec.num_slacks + (spec.prox_weight > 0. ? 1 : 0);

  ConicProgram prog(total);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(total);
  c.head(n) = problem.objective;
  for (int k = 0; k < spec.num_slacks; ++k) c(slack_base + k) = spec.penalty;
  if (spec.prox_weight > 0.) c(prox_var) = spec.prox_weight;
  prog.set_objective(c);

  int next_slack = 0;
  const bool shared = spec.num_slacks == 1;
  auto slack_for = [&](bool relaxable) -> int {
    if (spec.num_slacks == 0 || !relaxable) return -1;
    return shared ? slack_base : slack_base + next_slack++;
  };

  for (const ConicBlock& blk : problem.convex_blocks) {
    const int q = slack_for(blk.relaxable);
    if (q < 0) {
      prog.add_block(blk);
      continue;
    }
    ConicBlock relaxed = blk;
    switch (relaxed.cone) {
      case Cone::Nonneg:
        for (AffineExpr& row : relaxed.rows) row.add(q, 1.);
        break;
      case Cone::Zero:
        // Equalities stay exact; the slack only loosens inequalities.
        break;
      case Cone::Soc:
        relaxed.rows[0].add(q, 1.);
        break;
      case Cone::RotatedSoc:
        relaxed.rows[0].add(q, 1.);
        break;
    }
    prog.add_block(std::move(relaxed));
  }

  for (const auto& s : *spec.surrogates) {
    std::vector<ConicBlock> blocks;
    s->emit(blocks, slack_for(s->relaxable));
    for (ConicBlock& blk : blocks) prog.add_block(std::move(blk));
  }

  if (spec.num_slacks > 0) {
    ConicBlock nn;
    nn.cone = Cone::Nonneg;
    for (int k = 0; k < spec.num_slacks; ++k) {
      nn.rows.push_back(AffineExpr::of_variable(slack_base + k, 1.));
    }
    prog.add_block(std::move(nn));
  }

  if (spec.prox_weight > 0.) {
    ConicBlock blk;
    blk.cone = Cone::RotatedSoc;
    blk.rows.push_back(AffineExpr::of_variable(prox_var, 1.));
    blk.rows.push_back(AffineExpr::of_constant(0.5));
    for (int j = 0; j < n; ++j) {
      blk.rows.push_back(AffineExpr::of_variable(j, 1., -(*spec.prox_center)(j)));
    }
    prog.add_block(std::move(blk));
  }
  return prog;
}

int count_relaxable(const ScaProblem& problem) {
  int k = 0;
  for (const ConicBlock& b : problem.convex_blocks) {
    if (b.relaxable && b.cone != Cone::Zero) ++k;
  }
  for (const auto& s : problem.surrogates) {
    if (s->relaxable) ++k;
  }
  return k;
}

std::vector<std::unique_ptr<Surrogate>> anchored_at(
    const std::vector<std::unique_ptr<Surrogate>>& surrogates, const Eigen::VectorXd& x) {
  std::vector<std::unique_ptr<Surrogate>> out;
  out.reserve(surrogates.size());
  for (const auto& s : surrogates) out.push_back(s->reanchored(x));
  return out;
}

bool window_converged(const std::vector<double>& objs, const ScaConfig& cfg) {
  const int w = cfg.stop_window;
  if (static_cast<int>(objs.size()) < w + 1) return false;
  for (size_t i = objs.size() - w; i < objs.size(); ++i) {
    const double change = std::abs(objs[i] - objs[i - 1]);
    const double scale = cfg.relative_stop ? std::max(1., std::abs(objs[i - 1])) : 1.;
    if (change > cfg.stop_tol * scale) return false;
  }
  return true;
}

}  // namespace

double ScaProblem::objective_at(const Eigen::VectorXd& x) const {
  if (objective_value) return objective_value(x);
  return objective.dot(x.head(num_vars));
}

Eigen::VectorXd ScaProblem::polished(const Eigen::VectorXd& x) const {
  return polish ? polish(x) : x;
}

double ScaProblem::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.;
  for (const ConicBlock& b : convex_blocks) worst = std::max(worst, block_violation(b, x));
  for (const auto& s : surrogates) worst = std::max(worst, s->target(x));
  return worst;
}

const char* to_string(ScaStatus status) {
  switch (status) {
    case ScaStatus::Converged: return "converged";
    case ScaStatus::IterationCap: return "iteration_cap";
    case ScaStatus::InfeasibleStart: return "infeasible_start";
    case ScaStatus::SubproblemFailure: return "subproblem_failure";
    case ScaStatus::FeasibilityNotReached: return "feasibility_not_reached";
  }
  return "unknown";
}

ScaRunResult run_sca(const ScaProblem& problem, const Eigen::VectorXd& x0,
                     const ScaConfig& config) {
  ScaRunResult out;
  Eigen::VectorXd x = problem.polished(x0);
  if (problem.max_violation(x) > config.feas_tol) {
    out.status = ScaStatus::InfeasibleStart;
    out.x = x;
    return out;
  }

  auto surrogates = anchored_at(problem.surrogates, x);
  std::vector<double> objs = {problem.objective_at(x)};
  bool engage_prox = config.prox_weight > 0. && !config.prox_adaptive;

  out.status = ScaStatus::IterationCap;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    SubproblemSpec spec;
    spec.surrogates = &surrogates;
    if (engage_prox) {
      spec.prox_weight = config.prox_weight;
      spec.prox_center = &x;
    }
    const ConicProgram prog = build_subproblem(problem, spec);
    const SolveResult res = solve(prog, config.solver);

    ScaIterate row;
    row.iteration = iter;
    row.solve_status = res.status;
    row.solve_seconds = res.solve_seconds;
    row.prox_engaged = engage_prox;

    if (!res.usable(config.solver.reduced_tol)) {
      out.trace.iterates.push_back(row);
      out.status = ScaStatus::SubproblemFailure;
      out.x = x;
      return out;
    }
    row.accepted_with_warning = res.status != SolveStatus::Optimal;

    const Eigen::VectorXd x_new = problem.polished(res.x.head(problem.num_vars));
    const double f_new = problem.objective_at(x_new);
    const double f_prev = objs.back();

    row.objective = f_new;
    row.max_violation = problem.max_violation(x_new);
    row.step_norm2 = (x_new - x).squaredNorm();
    row.step_inf = (x_new - x).lpNorm<Eigen::Infinity>();
    out.trace.iterates.push_back(row);
    if (f_new > f_prev + kMonotoneTol) out.trace.non_monotone = true;

    surrogates = anchored_at(surrogates, x_new);
    x = x_new;
    objs.push_back(f_new);

    if (window_converged(objs, config)) {
      out.status = ScaStatus::Converged;
      break;
    }
    if (config.prox_weight > 0. && config.prox_adaptive) {
      engage_prox = f_prev - f_new < kStrictDescentEps * std::max(1., std::abs(f_prev));
    }
  }
  out.x = x;
  return out;
}

ScaRunResult run_sca_proximal(const ScaProblem& problem, const Eigen::VectorXd& x0,
                              const ScaConfig& config) {
  return run_sca(problem, x0, config);
}

double default_prox_weight(const ScaProblem& problem, const Eigen::VectorXd& x0) {
  return 1e-4 * std::max(1., std::abs(problem.objective_at(problem.polished(x0))));
}

ScaRunResult find_feasible(const ScaProblem& problem, const Eigen::VectorXd& x0,
                           const ScaConfig& config) {
  ScaRunResult out;
  Eigen::VectorXd x = problem.polished(x0);
  if (problem.max_violation(x) <= config.feas_tol) {
    out.status = ScaStatus::Converged;
    out.x = x;
    ScaIterate row;
    row.objective = problem.objective_at(x);
    out.trace.iterates.push_back(row);
    return out;
  }

  const int num_slacks = config.per_constraint_slack ? count_relaxable(problem) : 1;
  auto surrogates = anchored_at(problem.surrogates, x);
  double penalty = config.relax_penalty;

  out.status = ScaStatus::FeasibilityNotReached;
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    SubproblemSpec spec;
    spec.surrogates = &surrogates;
    spec.num_slacks = num_slacks;
    spec.penalty = penalty;
    const ConicProgram prog = build_subproblem(problem, spec);
    const SolveResult res = solve(prog, config.solver);

    ScaIterate row;
    row.iteration = iter;
    row.solve_status = res.status;
    row.solve_seconds = res.solve_seconds;

    if (!res.usable(config.solver.reduced_tol)) {
      out.trace.iterates.push_back(row);
      out.status = ScaStatus::SubproblemFailure;
      out.x = x;
      return out;
    }
    row.accepted_with_warning = res.status != SolveStatus::Optimal;

    const double q =
        res.x.segment(problem.num_vars, num_slacks).lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd x_new = problem.polished(res.x.head(problem.num_vars));
    row.slack_q = q;
    row.objective = problem.objective_at(x_new);
    row.max_violation = problem.max_violation(x_new);
    row.step_norm2 = (x_new - x).squaredNorm();
    row.step_inf = (x_new - x).lpNorm<Eigen::Infinity>();
    out.trace.iterates.push_back(row);

    surrogates = anchored_at(surrogates, x_new);
    x = x_new;

    if (q <= config.feas_tol) {
      out.status = ScaStatus::Converged;
      break;
    }
    penalty = std::min(penalty * config.relax_growth, config.relax_penalty_cap);
  }
  out.x = x;
  return out;
}

SolveResult sca_step(const ScaProblem& problem, const Eigen::VectorXd& anchor_x,
                     const ScaConfig& config) {
  const Eigen::VectorXd x = problem.polished(anchor_x);
  auto surrogates = anchored_at(problem.surrogates, x);
  SubproblemSpec spec;
  spec.surrogates = &surrogates;
  return solve(build_subproblem(problem, spec), config.solver);
}

}  // namespace scopt
