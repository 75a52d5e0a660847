#include "scopt/multicarrier.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace scopt {

namespace {

constexpr double kTinyRate = 1e-12;

// Interference-plus-noise seen by link k on subcarrier n, before normalization.
double received_floor(const MulticarrierInstance& inst, const Eigen::MatrixXd& p, int k,
                      int n) {
  double v = inst.noise;
  for (int l = 0; l < inst.links; ++l) {
    if (l != k) v += inst.gains(k, l, n) * p(l, n);
  }
  return v;
}

Eigen::MatrixXd clamp_powers(const MulticarrierInstance& inst, const Eigen::MatrixXd& p) {
  return p.cwiseMax(0.).cwiseMin(inst.mask);
}

// Affine totals u = noise + sum_l G_kln p_ln and its interference-only part.
struct RatioRows {
  Eigen::VectorXd with_signal;  // coefficients over the p variables
  Eigen::VectorXd interference;
  double constant = 0.;
};

RatioRows ratio_rows(const MulticarrierInstance& inst, int k, int n) {
  const int K = inst.links, N = inst.subcarriers;
  RatioRows r;
  r.with_signal = Eigen::VectorXd::Zero(K * N);
  r.interference = Eigen::VectorXd::Zero(K * N);
  r.constant = inst.noise;
  for (int l = 0; l < K; ++l) {
    r.with_signal(l * N + n) = inst.gains(k, l, n);
    if (l != k) r.interference(l * N + n) = inst.gains(k, l, n);
  }
  return r;
}

AffineExpr expr_of(const Eigen::VectorXd& coeffs, double constant) {
  AffineExpr e;
  e.constant = constant;
  for (int j = 0; j < coeffs.size(); ++j) e.add(j, coeffs(j));
  return e;
}

/// Surrogate for the rate coupling u(p) t <= u(p) log(u(p)/v(p)): the convex
/// left side is kept through its first-order lower bound at the anchor while
/// the bilinear right side gets the hyperbolic upper bound with parameter
/// y = u(anchor)/t(anchor).
class EntropyBilinear : public Surrogate {
 public:
  EntropyBilinear(RatioRows rows, int t_index, Eigen::VectorXd anchor)
      : rows_(std::move(rows)), t_(t_index), anchor_(std::move(anchor)) {
    const int d = static_cast<int>(rows_.with_signal.size());
    const Eigen::VectorXd pa = anchor_.head(d);
    const double u = rows_.with_signal.dot(pa) + rows_.constant;
    const double v = rows_.interference.dot(pa) + rows_.constant;
    const double ta = std::max(anchor_(t_), kTinyRate);
    y_ = u / ta;
    // phi = u log(u/v) linearized at the anchor.
    const double logr = std::log(u / v);
    const Eigen::VectorXd grad =
        (logr + 1.) * rows_.with_signal - (u / v) * rows_.interference;
    lin_ = expr_of(grad, u * logr - grad.dot(pa));
  }

  std::unique_ptr<Surrogate> clone() const override {
    return std::make_unique<EntropyBilinear>(*this);
  }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<EntropyBilinear>(rows_, t_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    ConicBlock blk;
    blk.cone = Cone::RotatedSoc;
    blk.relaxable = relaxable;
    AffineExpr head = lin_;
    if (slack_index >= 0) head.add(slack_index, 1.);
    blk.rows.push_back(std::move(head));
    blk.rows.push_back(AffineExpr::of_constant(1.));
    blk.rows.push_back(AffineExpr::of_variable(t_, std::sqrt(y_)));
    AffineExpr urow = expr_of(rows_.with_signal, rows_.constant);
    urow *= 1. / std::sqrt(y_);
    blk.rows.push_back(std::move(urow));
    out.push_back(std::move(blk));
  }

  double value(const Eigen::VectorXd& x) const override {
    const int d = static_cast<int>(rows_.with_signal.size());
    const double u = rows_.with_signal.dot(x.head(d)) + rows_.constant;
    return 0.5 * y_ * x(t_) * x(t_) + u * u / (2. * y_) - lin_.eval(x);
  }
  double target(const Eigen::VectorXd& x) const override {
    const int d = static_cast<int>(rows_.with_signal.size());
    const double u = rows_.with_signal.dot(x.head(d)) + rows_.constant;
    const double v = rows_.interference.dot(x.head(d)) + rows_.constant;
    return u * x(t_) - u * std::log(u / v);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  RatioRows rows_;
  int t_;
  Eigen::VectorXd anchor_;
  double y_;
  AffineExpr lin_;
};

/// Quadratic objective surrogate: -WSR(p) as a difference of convex functions
/// with the subtracted part linearized at the anchor, leaving one convex
/// quadratic upper bound F(p) whose epigraph F(p) <= s is emitted.
class QpObjective : public Surrogate {
 public:
  QpObjective(MulticarrierInstance inst, Eigen::MatrixXd rho, int s_index,
              Eigen::VectorXd anchor)
      : inst_(std::move(inst)), rho_(std::move(rho)), s_(s_index),
        anchor_(std::move(anchor)) {
    build_quadratic();
  }

  std::unique_ptr<Surrogate> clone() const override {
    return std::make_unique<QpObjective>(*this);
  }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<QpObjective>(inst_, rho_, s_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    AffineExpr bound = AffineExpr::of_variable(s_, 1.);
    if (slack_index >= 0) bound.add(slack_index, 1.);
    for (ConicBlock& blk : quad_epigraph(fhat_, bound)) {
      blk.relaxable = relaxable;
      out.push_back(std::move(blk));
    }
  }

  double value(const Eigen::VectorXd& x) const override {
    const int d = inst_.links * inst_.subcarriers;
    return fhat_.value(Eigen::VectorXd(x.head(d))) - x(s_);
  }
  double target(const Eigen::VectorXd& x) const override {
    const int K = inst_.links, N = inst_.subcarriers;
    Eigen::MatrixXd p(K, N);
    for (int k = 0; k < K; ++k)
      for (int n = 0; n < N; ++n) p(k, n) = x(k * N + n);
    return -weighted_sum_rate(inst_, p) - x(s_);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  void build_quadratic() {
    const int K = inst_.links, N = inst_.subcarriers;
    const int d = K * N;
    Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(2 * d, d);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    double c = 0.;
    const Eigen::VectorXd pa = anchor_.head(d);

    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < N; ++n) {
        const int idx = k * N + n;
        const double w = inst_.weights(k);
        const double rho = rho_(k, n);
        const double wr = w * rho;

        // Normalized interference t(p) = sigma~ + sum_{l != k} G~ p_ln.
        Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
        for (int l = 0; l < K; ++l) {
          if (l != k) a(l * N + n) = inst_.normalized_gain(k, l, n);
        }
        const double c_t = inst_.normalized_noise(k, n);

        const double pt = pa(idx);
        const double tt = c_t + a.dot(pa);

        // Convex part w rho (p^2 + t(p)^2).
        factor(2 * idx, idx) = std::sqrt(wr);
        factor.row(2 * idx + 1) = std::sqrt(wr) * a.transpose();
        b += wr * c_t * a;
        c += wr * c_t * c_t;

        // Subtracted part g = w [rho (p^2 + t^2) + log(1 + p/t)], linearized
        // at (pt, tt) in the (p, t) plane and composed with t = t(p).
        const double g_val = w * (rho * (pt * pt + tt * tt) + std::log1p(pt / tt));
        const double gp = w * (2. * rho * pt + 1. / (pt + tt));
        const double gt = w * (2. * rho * tt + 1. / (pt + tt) - 1. / tt);
        c -= g_val;
        b(idx) -= gp / 2.;
        c += gp * pt;
        b -= (gt / 2.) * a;
        c -= gt * (c_t - tt);
      }
    }
    fhat_ = QuadraticForm::real(std::move(factor), std::move(b), c);
  }

  MulticarrierInstance inst_;
  Eigen::MatrixXd rho_;
  int s_;
  Eigen::VectorXd anchor_;
  QuadraticForm fhat_;
};

void add_power_blocks(const MulticarrierInstance& inst, ScaProblem& p) {
  const int K = inst.links, N = inst.subcarriers;
  ConicBlock box;
  box.cone = Cone::Nonneg;
  box.relaxable = false;
  for (int k = 0; k < K; ++k) {
    for (int n = 0; n < N; ++n) {
      box.rows.push_back(AffineExpr::of_variable(k * N + n, 1.));
      box.rows.push_back(AffineExpr::of_variable(k * N + n, -1., inst.mask(k, n)));
    }
  }
  for (int k = 0; k < K; ++k) {
    AffineExpr budget = AffineExpr::of_constant(inst.budget(k));
    for (int n = 0; n < N; ++n) budget.add(k * N + n, -1.);
    box.rows.push_back(std::move(budget));
  }
  p.convex_blocks.push_back(std::move(box));
}

Eigen::MatrixXd powers_from(const Eigen::VectorXd& x, int K, int N) {
  Eigen::MatrixXd p(K, N);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < N; ++n) p(k, n) = x(k * N + n);
  return p;
}

}  // namespace

MulticarrierInstance MulticarrierInstance::random(Rng& rng, int K, int N,
                                                  double budget_dbm, double noise_dbm,
                                                  double circuit_dbm,
                                                  bool shadowing_in_db) {
  MulticarrierInstance inst;
  inst.links = K;
  inst.subcarriers = N;
  inst.gains = gen_multicarrier_gains(rng, K, N, shadowing_in_db);
  inst.noise = from_dbm(noise_dbm);
  inst.weights = Eigen::VectorXd::Ones(K);
  inst.budget = Eigen::VectorXd::Constant(K, from_dbm(budget_dbm));
  inst.mask = Eigen::MatrixXd::Constant(K, N, from_dbm(budget_dbm));
  inst.circuit_power = Eigen::VectorXd::Constant(K, from_dbm(circuit_dbm));
  inst.validate();
  return inst;
}

void MulticarrierInstance::validate() const {
  if (links <= 0 || subcarriers <= 0) {
    throw std::invalid_argument("multicarrier: dimensions must be positive");
  }
  if (static_cast<int>(gains.per_subcarrier.size()) != subcarriers ||
      gains.per_subcarrier[0].rows() != links) {
    throw std::invalid_argument("multicarrier: gain dimensions");
  }
  for (int k = 0; k < links; ++k) {
    for (int n = 0; n < subcarriers; ++n) {
      if (!(gains(k, k, n) > 0.)) {
        throw std::invalid_argument("multicarrier: direct gains must be positive");
      }
    }
  }
  if (!(noise > 0.) || weights.size() != links || weights.minCoeff() <= 0. ||
      budget.size() != links || budget.minCoeff() <= 0. || mask.rows() != links ||
      mask.cols() != subcarriers || mask.minCoeff() <= 0. ||
      circuit_power.size() != links || circuit_power.minCoeff() <= 0.) {
    throw std::invalid_argument("multicarrier: parameters must be positive");
  }
}

Eigen::MatrixXd subcarrier_rates(const MulticarrierInstance& inst,
                                 const Eigen::MatrixXd& p) {
  Eigen::MatrixXd r(inst.links, inst.subcarriers);
  for (int k = 0; k < inst.links; ++k) {
    for (int n = 0; n < inst.subcarriers; ++n) {
      r(k, n) = std::log1p(inst.gains(k, k, n) * p(k, n) / received_floor(inst, p, k, n));
    }
  }
  return r;
}

Eigen::VectorXd link_rates(const MulticarrierInstance& inst, const Eigen::MatrixXd& p) {
  return subcarrier_rates(inst, p).rowwise().sum();
}

double weighted_sum_rate(const MulticarrierInstance& inst, const Eigen::MatrixXd& p) {
  return inst.weights.dot(link_rates(inst, p));
}

Eigen::VectorXd link_energy_efficiency(const MulticarrierInstance& inst,
                                       const Eigen::MatrixXd& p) {
  const Eigen::VectorXd rates = link_rates(inst, p);
  Eigen::VectorXd ee(inst.links);
  for (int k = 0; k < inst.links; ++k) {
    ee(k) = rates(k) / (p.row(k).sum() + inst.circuit_power(k));
  }
  return ee;
}

double lemma1_rho(double x0, double y0) {
  if (!(y0 > 0.) || x0 < 0.) {
    throw std::invalid_argument("lemma1_rho: needs x0 >= 0 and y0 > 0");
  }
  const double s = x0 + y0;
  return 1. / (s * s);
}

Eigen::MatrixXd rho_schedule(const MulticarrierInstance& inst, double shrink) {
  if (!(shrink > 0.)) throw std::invalid_argument("rho_schedule: shrink must be positive");
  Eigen::MatrixXd rho(inst.links, inst.subcarriers);
  for (int k = 0; k < inst.links; ++k) {
    for (int n = 0; n < inst.subcarriers; ++n) {
      rho(k, n) = shrink * lemma1_rho(0., inst.normalized_noise(k, n));
    }
  }
  return rho;
}

Eigen::MatrixXd MulticarrierProblem::powers(const Eigen::VectorXd& x) const {
  return powers_from(x, links, subcarriers);
}

GeomeanTower add_geomean_hypograph(std::vector<ConicBlock>& blocks,
                                   const std::vector<int>& leaves, int hypo_var,
                                   int first_free_var) {
  int pow2 = 1;
  while (pow2 < static_cast<int>(leaves.size())) pow2 *= 2;

  GeomeanTower tower;
  std::vector<int> level = leaves;
  while (static_cast<int>(level.size()) < pow2) level.push_back(hypo_var);
  int next_var = first_free_var;
  while (level.size() > 1) {
    std::vector<int> upper;
    for (size_t i = 0; i < level.size(); i += 2) {
      const int v = next_var++;
      tower.nodes.push_back({level[i], level[i + 1], v});
      ConicBlock blk;
      blk.cone = Cone::RotatedSoc;
      blk.relaxable = false;
      blk.rows.push_back(AffineExpr::of_variable(level[i], 1.));
      blk.rows.push_back(AffineExpr::of_variable(level[i + 1], 1.));
      blk.rows.push_back(AffineExpr::of_variable(v, std::sqrt(2.)));
      blocks.push_back(std::move(blk));
      upper.push_back(v);
    }
    level = std::move(upper);
  }
  tower.root = level[0];
  tower.vars_used = next_var - first_free_var;

  ConicBlock root;
  root.cone = Cone::Nonneg;
  root.relaxable = false;
  root.rows.push_back(AffineExpr::of_variable(tower.root, 1.).add(hypo_var, -1.));
  blocks.push_back(std::move(root));
  return tower;
}

MulticarrierProblem build_wsr_socp(const MulticarrierInstance& inst, bool equal_weights) {
  inst.validate();
  const int K = inst.links, N = inst.subcarriers;
  const int d = K * N;

  MulticarrierProblem out;
  out.links = K;
  out.subcarriers = N;
  ScaProblem& p = out.problem;

  if (!equal_weights) {
    // Epigraph path: maximize sum w_k t_kn with t below the per-subcarrier rate.
    p.num_vars = 2 * d;
    p.objective = Eigen::VectorXd::Zero(2 * d);
    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < N; ++n) p.objective(d + k * N + n) = -inst.weights(k);
    }
    add_power_blocks(inst, p);
    ConicBlock tnn;
    tnn.cone = Cone::Nonneg;
    tnn.relaxable = false;
    for (int j = 0; j < d; ++j) tnn.rows.push_back(AffineExpr::of_variable(d + j, 1.));
    p.convex_blocks.push_back(std::move(tnn));

    p.polish = [inst, K, N, d](const Eigen::VectorXd& x) {
      Eigen::VectorXd y = x;
      const Eigen::MatrixXd pw = clamp_powers(inst, powers_from(x, K, N));
      const Eigen::MatrixXd rates = subcarrier_rates(inst, pw);
      for (int k = 0; k < K; ++k) {
        for (int n = 0; n < N; ++n) {
          y(k * N + n) = pw(k, n);
          y(d + k * N + n) = rates(k, n);
        }
      }
      return y;
    };
    p.objective_value = [inst, K, N](const Eigen::VectorXd& x) {
      return -weighted_sum_rate(inst, clamp_powers(inst, powers_from(x, K, N)));
    };

    Eigen::VectorXd anchor = Eigen::VectorXd::Zero(2 * d);  // rebuilt by run_sca
    anchor.head(d).setConstant(1e-3);
    const Eigen::VectorXd a0 = p.polish(anchor);
    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < N; ++n) {
        p.surrogates.push_back(
            std::make_unique<EntropyBilinear>(ratio_rows(inst, k, n), d + k * N + n, a0));
      }
    }
    return out;
  }

  // Geometric-mean path: equal weights only.
  for (int k = 1; k < K; ++k) {
    if (inst.weights(k) != inst.weights(0)) {
      throw std::invalid_argument("build_wsr_socp: geometric-mean path needs equal weights");
    }
  }
  int pow2 = 1;
  while (pow2 < d) pow2 *= 2;
  const int var_gm = 2 * d;
  p.num_vars = 2 * d + 1 + (pow2 - 1);
  p.objective = Eigen::VectorXd::Zero(p.num_vars);
  p.objective(var_gm) = -1.;

  add_power_blocks(inst, p);
  {
    ConicBlock tges1;
    tges1.cone = Cone::Nonneg;
    tges1.relaxable = false;
    for (int j = 0; j < d; ++j) {
      tges1.rows.push_back(AffineExpr::of_variable(d + j, 1., -1.));  // t >= 1
    }
    tges1.rows.push_back(AffineExpr::of_variable(var_gm, 1.));
    p.convex_blocks.push_back(std::move(tges1));
  }

  std::vector<int> leaves;
  for (int j = 0; j < d; ++j) leaves.push_back(d + j);
  const GeomeanTower tower =
      add_geomean_hypograph(p.convex_blocks, leaves, var_gm, var_gm + 1);
  const std::vector<std::array<int, 3>> nodes = tower.nodes;

  p.polish = [inst, K, N, d, var_gm, nodes](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    const Eigen::MatrixXd pw = clamp_powers(inst, powers_from(x, K, N));
    double log_sum = 0.;
    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < N; ++n) {
        const double ratio =
            1. + inst.gains(k, k, n) * pw(k, n) / received_floor(inst, pw, k, n);
        y(k * N + n) = pw(k, n);
        y(d + k * N + n) = ratio;
        log_sum += std::log(ratio);
      }
    }
    y(var_gm) = std::exp(log_sum / d);
    for (const auto& node : nodes) {
      y(node[2]) = std::sqrt(y(node[0]) * y(node[1]));
    }
    return y;
  };
  p.objective_value = [inst, K, N](const Eigen::VectorXd& x) {
    return -weighted_sum_rate(inst, clamp_powers(inst, powers_from(x, K, N)));
  };

  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(p.num_vars);
  anchor.head(d).setConstant(1e-3);
  const Eigen::VectorXd a0 = p.polish(anchor);
  for (int k = 0; k < K; ++k) {
    for (int n = 0; n < N; ++n) {
      // Raw ratio constraint u/v >= t: both sides affine, t the lower limit.
      const RatioRows rows = ratio_rows(inst, k, n);
      const QuadraticForm h1 =
          QuadraticForm::real_affine(0.5 * rows.with_signal, rows.constant);
      const QuadraticForm h2 =
          QuadraticForm::real_affine(0.5 * rows.interference, rows.constant);
      p.surrogates.push_back(app1(h1, h2, d + k * N + n, a0));
    }
  }
  return out;
}

MulticarrierProblem build_wsr_qp(const MulticarrierInstance& inst, double rho_shrink) {
  inst.validate();
  const int K = inst.links, N = inst.subcarriers;
  const int d = K * N;

  MulticarrierProblem out;
  out.links = K;
  out.subcarriers = N;
  ScaProblem& p = out.problem;
  p.num_vars = d + 1;
  const int var_s = d;
  p.objective = Eigen::VectorXd::Zero(d + 1);
  p.objective(var_s) = 1.;
  add_power_blocks(inst, p);

  p.polish = [inst, K, N, var_s](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    const Eigen::MatrixXd pw = clamp_powers(inst, powers_from(x, K, N));
    for (int k = 0; k < K; ++k)
      for (int n = 0; n < N; ++n) y(k * N + n) = pw(k, n);
    y(var_s) = -weighted_sum_rate(inst, pw);
    return y;
  };
  p.objective_value = [inst, K, N](const Eigen::VectorXd& x) {
    return -weighted_sum_rate(inst, clamp_powers(inst, powers_from(x, K, N)));
  };

  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(d + 1);
  anchor.head(d).setConstant(1e-3);
  p.surrogates.push_back(std::make_unique<QpObjective>(
      inst, rho_schedule(inst, rho_shrink), var_s, p.polish(anchor)));
  p.surrogates.back()->relaxable = false;
  return out;
}

MulticarrierProblem build_maxmin_ee(const MulticarrierInstance& inst) {
  inst.validate();
  const int K = inst.links, N = inst.subcarriers;
  const int d = K * N;

  MulticarrierProblem out;
  out.links = K;
  out.subcarriers = N;
  ScaProblem& p = out.problem;
  p.num_vars = 2 * d + 1;
  const int var_ee = 2 * d;
  p.objective = Eigen::VectorXd::Zero(p.num_vars);
  p.objective(var_ee) = -1.;

  add_power_blocks(inst, p);
  {
    ConicBlock nn;
    nn.cone = Cone::Nonneg;
    nn.relaxable = false;
    for (int j = 0; j < d; ++j) nn.rows.push_back(AffineExpr::of_variable(d + j, 1.));
    nn.rows.push_back(AffineExpr::of_variable(var_ee, 1.));
    p.convex_blocks.push_back(std::move(nn));
  }

  p.polish = [inst, K, N, d, var_ee](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    const Eigen::MatrixXd pw = clamp_powers(inst, powers_from(x, K, N));
    const Eigen::MatrixXd rates = subcarrier_rates(inst, pw);
    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < N; ++n) {
        y(k * N + n) = pw(k, n);
        y(d + k * N + n) = rates(k, n);
      }
    }
    y(var_ee) = link_energy_efficiency(inst, pw).minCoeff();
    return y;
  };
  p.objective_value = [inst, K, N](const Eigen::VectorXd& x) {
    return -link_energy_efficiency(inst, clamp_powers(inst, powers_from(x, K, N)))
                .minCoeff();
  };

  Eigen::VectorXd anchor = Eigen::VectorXd::Zero(p.num_vars);
  anchor.head(d).setConstant(1e-3);
  const Eigen::VectorXd a0 = p.polish(anchor);

  for (int k = 0; k < K; ++k) {
    // sum_n t_kn / (sum_n p_kn + p_c) >= theta through the hyperbolic bound.
    Eigen::VectorXd bt = Eigen::VectorXd::Zero(2 * d);
    for (int n = 0; n < N; ++n) bt(d + k * N + n) = 0.5;
    Eigen::VectorXd bp = Eigen::VectorXd::Zero(d);
    for (int n = 0; n < N; ++n) bp(k * N + n) = 0.5;
    p.surrogates.push_back(app1(QuadraticForm::real_affine(bt, 0.),
                                QuadraticForm::real_affine(bp, inst.circuit_power(k)),
                                var_ee, a0));
    for (int n = 0; n < N; ++n) {
      p.surrogates.push_back(std::make_unique<EntropyBilinear>(ratio_rows(inst, k, n),
                                                               d + k * N + n, a0));
    }
  }
  return out;
}

Eigen::VectorXd uniform_power_start(const MulticarrierInstance& inst,
                                    const MulticarrierProblem& prob) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(prob.problem.num_vars);
  for (int k = 0; k < inst.links; ++k) {
    for (int n = 0; n < inst.subcarriers; ++n) {
      x(prob.p_of(k, n)) = std::min(inst.budget(k) / inst.subcarriers, inst.mask(k, n));
    }
  }
  return prob.problem.polished(x);
}

Eigen::VectorXd random_power_start(const MulticarrierInstance& inst,
                                   const MulticarrierProblem& prob, Rng& rng) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(prob.problem.num_vars);
  for (int k = 0; k < inst.links; ++k) {
    double total = 0.;
    for (int n = 0; n < inst.subcarriers; ++n) {
      const double draw = rng.uniform() * inst.mask(k, n);
      x(prob.p_of(k, n)) = draw;
      total += draw;
    }
    if (total > inst.budget(k)) {
      for (int n = 0; n < inst.subcarriers; ++n) {
        x(prob.p_of(k, n)) *= inst.budget(k) / total;
      }
    }
  }
  return prob.problem.polished(x);
}

}  // namespace scopt
