#include "scopt/secure_relay.hpp"

#include <cmath>
#include <stdexcept>

namespace scopt {

namespace {

Eigen::VectorXd embed(const Eigen::VectorXcd& w) {
  Eigen::VectorXd x(2 * w.size());
  x << w.real(), w.imag();
  return x;
}

// h1 + h2 as one stacked-factor form (constants add).
QuadraticForm stack(const QuadraticForm& a, const QuadraticForm& b, double constant) {
  const int n = a.dim();
  Eigen::MatrixXcd f(a.factor_rows() + b.factor_rows(), n);
  f << a.complex_factor(), b.complex_factor();
  return QuadraticForm::complex(f, Eigen::VectorXcd::Zero(n), constant);
}

}  // namespace

SecureRelayInstance SecureRelayInstance::random(Rng& rng, int K, int M,
                                                double source_power_db,
                                                double total_power_db, double noise) {
  SecureRelayInstance inst;
  inst.num_relays = K;
  inst.num_eavesdroppers = M;
  inst.source_channel = gen_rayleigh(rng, K);
  inst.dest_channel = gen_rayleigh(rng, K);
  inst.eve_channels.resize(K, M);
  for (int m = 0; m < M; ++m) inst.eve_channels.col(m) = gen_rayleigh(rng, K);
  inst.source_power = from_db(source_power_db);
  inst.total_power = from_db(total_power_db);
  inst.noise = noise;
  inst.per_relay_power.resize(K);
  for (int k = 1; k <= K; ++k) {
    inst.per_relay_power(k - 1) =
        (k % 2 == 1) ? inst.total_power / (2. * K) : 2. * inst.total_power / K;
  }
  inst.validate();
  return inst;
}

void SecureRelayInstance::validate() const {
  if (num_relays <= 0 || num_eavesdroppers <= 0) {
    throw std::invalid_argument("secure relay: dimensions must be positive");
  }
  if (source_channel.size() != num_relays || dest_channel.size() != num_relays ||
      eve_channels.rows() != num_relays || eve_channels.cols() != num_eavesdroppers) {
    throw std::invalid_argument("secure relay: channel dimensions");
  }
  if (!(source_power > 0.) || !(total_power > 0.) || !(noise > 0.) ||
      per_relay_power.size() != num_relays || per_relay_power.minCoeff() <= 0.) {
    throw std::invalid_argument("secure relay: powers must be positive");
  }
}

SecureRelayMatrices build_matrices(const SecureRelayInstance& inst) {
  inst.validate();
  const int K = inst.num_relays;
  const double gain = std::sqrt(inst.source_power) / std::sqrt(inst.noise);
  const Eigen::VectorXcd& f = inst.source_channel;
  const Eigen::VectorXcd& g = inst.dest_channel;

  SecureRelayMatrices out;

  // Signal forms are rank-1: the factor row of w' A w = |row w|^2 is available
  // exactly, no factorization of an assembled matrix.
  Eigen::MatrixXcd row(1, K);
  for (int k = 0; k < K; ++k) row(0, k) = gain * std::conj(g(k)) * f(k);
  out.dest_signal = QuadraticForm::complex(row, Eigen::VectorXcd::Zero(K), 0.);

  Eigen::MatrixXcd gdiag = Eigen::MatrixXcd::Zero(K, K);
  for (int k = 0; k < K; ++k) gdiag(k, k) = std::conj(g(k));
  out.dest_noise = QuadraticForm::complex(gdiag, Eigen::VectorXcd::Zero(K), 0.);

  for (int m = 0; m < inst.num_eavesdroppers; ++m) {
    const Eigen::VectorXcd h = inst.eve_channels.col(m);
    Eigen::MatrixXcd erow(1, K);
    for (int k = 0; k < K; ++k) erow(0, k) = gain * std::conj(h(k)) * f(k);
    out.eve_signal.push_back(QuadraticForm::complex(erow, Eigen::VectorXcd::Zero(K), 0.));
    Eigen::MatrixXcd hdiag = Eigen::MatrixXcd::Zero(K, K);
    for (int k = 0; k < K; ++k) hdiag(k, k) = std::conj(h(k));
    out.eve_noise.push_back(QuadraticForm::complex(hdiag, Eigen::VectorXcd::Zero(K), 0.));
  }

  // Relay transmit power: sqrt(P_s) D(f) stacked over sigma I.
  Eigen::MatrixXcd cfac = Eigen::MatrixXcd::Zero(2 * K, K);
  for (int k = 0; k < K; ++k) {
    cfac(k, k) = std::sqrt(inst.source_power) * f(k);
    cfac(K + k, k) = std::sqrt(inst.noise);
  }
  out.total_tx_power = QuadraticForm::complex(cfac, Eigen::VectorXcd::Zero(K), 0.);

  for (int k = 0; k < K; ++k) {
    Eigen::MatrixXcd pf = Eigen::MatrixXcd::Zero(2, K);
    pf(0, k) = std::sqrt(inst.source_power) * f(k);
    pf(1, k) = std::sqrt(inst.noise);
    out.per_relay_tx_power.push_back(
        QuadraticForm::complex(pf, Eigen::VectorXcd::Zero(K), 0.));
  }
  return out;
}

double dest_sinr(const SecureRelayInstance& inst, const Eigen::VectorXcd& w) {
  const double gain = inst.source_power / inst.noise;
  const std::complex<double> sig =
      inst.dest_channel.dot(inst.source_channel.cwiseProduct(w));
  const double rn = inst.dest_channel.conjugate().cwiseProduct(w).squaredNorm();
  return gain * std::norm(sig) / (rn + 1.);
}

double eve_sinr(const SecureRelayInstance& inst, const Eigen::VectorXcd& w, int m) {
  const double gain = inst.source_power / inst.noise;
  const Eigen::VectorXcd h = inst.eve_channels.col(m);
  const std::complex<double> sig = h.dot(inst.source_channel.cwiseProduct(w));
  const double rn = h.conjugate().cwiseProduct(w).squaredNorm();
  return gain * std::norm(sig) / (rn + 1.);
}

double secrecy_rate(const SecureRelayInstance& inst, const Eigen::VectorXcd& w) {
  double worst_eve = 0.;
  for (int m = 0; m < inst.num_eavesdroppers; ++m) {
    worst_eve = std::max(worst_eve, eve_sinr(inst, w, m));
  }
  return std::log1p(dest_sinr(inst, w)) - std::log1p(worst_eve);
}

Eigen::VectorXcd SecureRelayProblem::weights(const Eigen::VectorXd& x) const {
  const int K = num_relays;
  Eigen::VectorXcd w(K);
  w.real() = x.head(K);
  w.imag() = x.segment(K, K);
  return w;
}

SecureRelayProblem build_sca_problem(const SecureRelayInstance& inst, Rng& rng,
                                     double initial_power_fraction) {
  inst.validate();
  const int K = inst.num_relays;
  const int M = inst.num_eavesdroppers;
  const SecureRelayMatrices mats = build_matrices(inst);

  SecureRelayProblem out;
  out.num_relays = K;
  out.var_alpha = 2 * K;
  out.var_beta = 2 * K + 1;
  out.var_ratio = 2 * K + 2;
  out.var_z = 2 * K + 3;
  const int n = 2 * K + 4;

  ScaProblem& p = out.problem;
  p.num_vars = n;
  p.objective = Eigen::VectorXd::Zero(n);
  p.objective(out.var_ratio) = 1.;

  // Embedded numerators/denominators of the two SINR-style ratios.
  const QuadraticForm dest_num = stack(mats.dest_signal, mats.dest_noise, 1.).embedded();
  const QuadraticForm dest_den =
      QuadraticForm::complex(mats.dest_noise.complex_factor(),
                             Eigen::VectorXcd::Zero(K), 1.)
          .embedded();
  std::vector<QuadraticForm> eve_num, eve_den;
  for (int m = 0; m < M; ++m) {
    eve_num.push_back(stack(mats.eve_signal[m], mats.eve_noise[m], 1.).embedded());
    eve_den.push_back(QuadraticForm::complex(mats.eve_noise[m].complex_factor(),
                                             Eigen::VectorXcd::Zero(K), 1.)
                          .embedded());
  }

  // Power caps and the bound floors alpha, beta >= 1 (both ratios are >= 1 for
  // any w, so the floors cut nothing).
  for (auto& blk :
       quad_epigraph(mats.total_tx_power.embedded(),
                     AffineExpr::of_constant(inst.total_power))) {
    blk.relaxable = false;
    p.convex_blocks.push_back(std::move(blk));
  }
  for (int k = 0; k < K; ++k) {
    for (auto& blk : quad_epigraph(mats.per_relay_tx_power[k].embedded(),
                                   AffineExpr::of_constant(inst.per_relay_power(k)))) {
      blk.relaxable = false;
      p.convex_blocks.push_back(std::move(blk));
    }
  }
  {
    ConicBlock floors;
    floors.cone = Cone::Nonneg;
    floors.relaxable = false;
    floors.rows.push_back(AffineExpr::of_variable(out.var_alpha, 1., -1.));
    floors.rows.push_back(AffineExpr::of_variable(out.var_beta, 1., -1.));
    p.convex_blocks.push_back(std::move(floors));
  }

  // Exact bound refresh: read the attained ratios off the weights.
  const int var_alpha = out.var_alpha, var_beta = out.var_beta;
  const int var_ratio = out.var_ratio, var_z = out.var_z;
  auto polish = [inst, K, var_alpha, var_beta, var_ratio, var_z](
                    const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    Eigen::VectorXcd w(K);
    w.real() = x.head(K);
    w.imag() = x.segment(K, K);
    const double alpha = 1. + dest_sinr(inst, w);
    double beta = 1.;
    for (int m = 0; m < inst.num_eavesdroppers; ++m) {
      beta = std::max(beta, 1. + eve_sinr(inst, w, m));
    }
    y(var_alpha) = alpha;
    y(var_beta) = beta;
    y(var_ratio) = beta / alpha;
    y(var_z) = 1. / alpha;
    return y;
  };
  p.polish = polish;
  p.objective_value = [inst, K](const Eigen::VectorXd& x) {
    Eigen::VectorXcd w(K);
    w.real() = x.head(K);
    w.imag() = x.segment(K, K);
    return -secrecy_rate(inst, w);
  };

  // Initial point: random weights scaled well inside every power cap, bounds
  // filled with their attained values.
  Eigen::VectorXcd w0 = rng.cnormal_vector(K);
  double scale2 = initial_power_fraction * inst.total_power /
                  mats.total_tx_power.value(w0);
  for (int k = 0; k < K; ++k) {
    const double pk = mats.per_relay_tx_power[k].value(w0);
    if (pk > 0.) scale2 = std::min(scale2, 0.9 * inst.per_relay_power(k) / pk);
  }
  w0 *= std::sqrt(scale2);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  x0.head(2 * K) = embed(w0);
  out.x0 = polish(x0);

  // Surrogates anchored at the start point.
  Eigen::VectorXd beta_lin = Eigen::VectorXd::Zero(out.var_beta + 1);
  beta_lin(out.var_beta) = 0.5;
  Eigen::VectorXd alpha_lin = Eigen::VectorXd::Zero(out.var_alpha + 1);
  alpha_lin(out.var_alpha) = 0.5;
  p.surrogates.push_back(app3(QuadraticForm::real_affine(beta_lin, 0.),
                              QuadraticForm::real_affine(alpha_lin, 0.), out.var_ratio,
                              out.var_z, out.x0));
  p.surrogates.push_back(
      app4(dest_num, dest_den, BoundRef::variable(out.var_alpha), out.x0));
  for (int m = 0; m < M; ++m) {
    p.surrogates.push_back(app6(eve_num[m], eve_den[m], out.var_beta, out.x0));
  }
  return out;
}

}  // namespace scopt
