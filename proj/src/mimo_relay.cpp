#include "scopt/mimo_relay.hpp"

#include <cmath>
#include <stdexcept>

namespace scopt {

namespace {

// vec() is column-major: entry (r, c) of an N x N matrix lands at c*N + r.
std::vector<int> block_diagonal_support(int R, int NR) {
  std::vector<int> support;
  support.reserve(R * NR * NR);
  const int N = R * NR;
  for (int k = 0; k < R; ++k) {
    for (int c = k * NR; c < (k + 1) * NR; ++c) {
      for (int r = k * NR; r < (k + 1) * NR; ++r) {
        support.push_back(c * N + r);
      }
    }
  }
  return support;
}

Eigen::MatrixXcd restrict_columns(const Eigen::MatrixXcd& full,
                                  const std::vector<int>& support) {
  Eigen::MatrixXcd out(full.rows(), static_cast<int>(support.size()));
  for (size_t j = 0; j < support.size(); ++j) out.col(j) = full.col(support[j]);
  return out;
}

Eigen::MatrixXcd unpack_matrix(int N, const std::vector<int>& support,
                               const Eigen::VectorXd& x) {
  const int S = static_cast<int>(support.size());
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(N, N);
  for (int s = 0; s < S; ++s) {
    const int idx = support[s];
    X(idx % N, idx / N) = std::complex<double>(x(s), x(S + s));
  }
  return X;
}

}  // namespace

MimoRelayInstance MimoRelayInstance::random(Rng& rng, int R, int NR, int M,
                                            double source_power_db,
                                            double relay_budget_db) {
  MimoRelayInstance inst;
  inst.num_relays = R;
  inst.antennas_per_relay = NR;
  inst.num_pairs = M;
  const int N = R * NR;
  inst.src_channels.resize(N, M);
  inst.dst_channels.resize(N, M);
  for (int i = 0; i < M; ++i) {
    inst.src_channels.col(i) = gen_rayleigh(rng, N);
    inst.dst_channels.col(i) = gen_rayleigh(rng, N);
  }
  inst.source_power = from_db(source_power_db);
  inst.per_antenna_power =
      Eigen::VectorXd::Constant(N, from_db(relay_budget_db) / NR);
  inst.validate();
  return inst;
}

void MimoRelayInstance::validate() const {
  if (num_relays <= 0 || antennas_per_relay <= 0 || num_pairs <= 0) {
    throw std::invalid_argument("mimo relay: dimensions must be positive");
  }
  const int N = total_antennas();
  if (src_channels.rows() != N || src_channels.cols() != num_pairs ||
      dst_channels.rows() != N || dst_channels.cols() != num_pairs) {
    throw std::invalid_argument("mimo relay: channel dimensions");
  }
  if (!(source_power > 0.) || !(relay_noise > 0.) || !(dest_noise > 0.)) {
    throw std::invalid_argument("mimo relay: variances must be positive");
  }
  if (per_antenna_power.size() != N || per_antenna_power.minCoeff() <= 0.) {
    throw std::invalid_argument("mimo relay: antenna budgets must be positive");
  }
}

VectorizedRelay vectorize(const MimoRelayInstance& inst) {
  inst.validate();
  const int N = inst.total_antennas();
  const int M = inst.num_pairs;
  const int N2 = N * N;
  VectorizedRelay out;
  out.support = block_diagonal_support(inst.num_relays, inst.antennas_per_relay);
  const int S = static_cast<int>(out.support.size());

  // Row r(i,j) with r x = l_i^H X h_j for x = vec(X).
  auto cross_row = [&](int i, int j) {
    Eigen::RowVectorXcd row(N2);
    for (int c = 0; c < N; ++c) {
      for (int r = 0; r < N; ++r) {
        row(c * N + r) = std::conj(inst.dst_channels(r, i)) * inst.src_channels(c, j);
      }
    }
    return row;
  };
  // Rows of I_N (x) l_i^H, giving ||X^H l_i||^2.
  auto noise_rows = [&](int i) {
    Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(N, N2);
    for (int c = 0; c < N; ++c) {
      for (int r = 0; r < N; ++r) {
        rows(c, c * N + r) = std::conj(inst.dst_channels(r, i));
      }
    }
    return rows;
  };

  const double src_amp = std::sqrt(inst.source_power);
  for (int i = 0; i < M; ++i) {
    Eigen::MatrixXcd sig(1, N2);
    sig.row(0) = src_amp * cross_row(i, i);
    out.pair_signal.push_back(QuadraticForm::complex(
        restrict_columns(sig, out.support), Eigen::VectorXcd::Zero(S), 0.));

    Eigen::MatrixXcd rows(M - 1 + N, N2);
    int at = 0;
    for (int j = 0; j < M; ++j) {
      if (j == i) continue;
      rows.row(at++) = src_amp * cross_row(i, j);
    }
    rows.bottomRows(N) = std::sqrt(inst.relay_noise) * noise_rows(i);
    out.pair_interference.push_back(QuadraticForm::complex(
        restrict_columns(rows, out.support), Eigen::VectorXcd::Zero(S), 0.));
  }

  // Antenna power: conj(F_B) (x) e_n with B = F_B^H F_B,
  // F_B = [sqrt(P_s) H^H; sqrt(relay_noise) I].
  Eigen::MatrixXcd fb(M + N, N);
  fb.topRows(M) = src_amp * inst.src_channels.adjoint();
  fb.bottomRows(N) =
      std::sqrt(inst.relay_noise) * Eigen::MatrixXcd::Identity(N, N);
  for (int n = 0; n < N; ++n) {
    Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(M + N, N2);
    for (int r = 0; r < M + N; ++r) {
      for (int c = 0; c < N; ++c) {
        rows(r, c * N + n) = std::conj(fb(r, c));
      }
    }
    out.antenna_tx_power.push_back(QuadraticForm::complex(
        restrict_columns(rows, out.support), Eigen::VectorXcd::Zero(S), 0.));
  }
  return out;
}

double pair_sinr(const MimoRelayInstance& inst, const Eigen::MatrixXcd& X, int i) {
  const Eigen::VectorXcd li = inst.dst_channels.col(i);
  const Eigen::RowVectorXcd liX = li.adjoint() * X;
  double interference = 0.;
  for (int j = 0; j < inst.num_pairs; ++j) {
    if (j == i) continue;
    interference += inst.source_power * std::norm((liX * inst.src_channels.col(j))(0));
  }
  const double relay_noise = inst.relay_noise * (X.adjoint() * li).squaredNorm();
  const double signal = inst.source_power * std::norm((liX * inst.src_channels.col(i))(0));
  return signal / (interference + relay_noise + inst.dest_noise);
}

double antenna_power(const MimoRelayInstance& inst, const Eigen::MatrixXcd& X, int n) {
  const int N = inst.total_antennas();
  const Eigen::MatrixXcd B =
      inst.source_power * inst.src_channels * inst.src_channels.adjoint() +
      inst.relay_noise * Eigen::MatrixXcd::Identity(N, N);
  return (X.row(n) * B * X.row(n).adjoint())(0).real();
}

double min_sinr(const MimoRelayInstance& inst, const Eigen::MatrixXcd& X) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < inst.num_pairs; ++i) worst = std::min(worst, pair_sinr(inst, X, i));
  return worst;
}

Eigen::MatrixXcd MimoRelayProblem::processing_matrix(const MimoRelayInstance& inst,
                                                     const Eigen::VectorXd& x) const {
  return unpack_matrix(inst.total_antennas(), vec.support, x);
}

MimoRelayProblem build_sca_problem(const MimoRelayInstance& inst, Rng& rng,
                                   double power_margin) {
  inst.validate();
  const int N = inst.total_antennas();
  const int M = inst.num_pairs;

  MimoRelayProblem out;
  out.vec = vectorize(inst);
  const int S = static_cast<int>(out.vec.support.size());
  out.support_size = S;
  out.var_min_sinr = 2 * S;
  for (int i = 0; i < M; ++i) out.var_z.push_back(2 * S + 1 + i);
  const int n = 2 * S + 1 + M;

  ScaProblem& p = out.problem;
  p.num_vars = n;
  p.objective = Eigen::VectorXd::Zero(n);
  p.objective(out.var_min_sinr) = -1.;  // maximize the worst SINR

  std::vector<QuadraticForm> sig_emb, int_emb;
  for (int i = 0; i < M; ++i) {
    sig_emb.push_back(out.vec.pair_signal[i].embedded());
    int_emb.push_back(QuadraticForm::complex(out.vec.pair_interference[i].complex_factor(),
                                             Eigen::VectorXcd::Zero(S), inst.dest_noise)
                          .embedded());
  }

  // Interference-plus-noise epigraphs and antenna power caps.
  for (int i = 0; i < M; ++i) {
    for (auto& blk : quad_epigraph(int_emb[i], AffineExpr::of_variable(out.var_z[i], 1.))) {
      blk.relaxable = false;
      p.convex_blocks.push_back(std::move(blk));
    }
  }
  for (int nant = 0; nant < N; ++nant) {
    for (auto& blk : quad_epigraph(out.vec.antenna_tx_power[nant].embedded(),
                                   AffineExpr::of_constant(inst.per_antenna_power(nant)))) {
      blk.relaxable = false;
      p.convex_blocks.push_back(std::move(blk));
    }
  }
  {
    ConicBlock nn;
    nn.cone = Cone::Nonneg;
    nn.rows.push_back(AffineExpr::of_variable(out.var_min_sinr, 1.));
    p.convex_blocks.push_back(std::move(nn));
  }

  const int var_theta = out.var_min_sinr;
  const std::vector<int> var_z = out.var_z;
  auto polish = [inst, var_theta, var_z, support = out.vec.support](
                    const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    const Eigen::MatrixXcd X = unpack_matrix(inst.total_antennas(), support, x);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < inst.num_pairs; ++i) {
      const double sinr = pair_sinr(inst, X, i);
      worst = std::min(worst, sinr);
      const Eigen::VectorXcd li = inst.dst_channels.col(i);
      const Eigen::RowVectorXcd liX = li.adjoint() * X;
      double denom = inst.dest_noise + inst.relay_noise * (X.adjoint() * li).squaredNorm();
      for (int j = 0; j < inst.num_pairs; ++j) {
        if (j != i) {
          denom += inst.source_power * std::norm((liX * inst.src_channels.col(j))(0));
        }
      }
      y(var_z[i]) = denom;
    }
    y(var_theta) = worst;
    return y;
  };
  p.polish = polish;
  p.objective_value = [inst, support = out.vec.support](const Eigen::VectorXd& x) {
    return -min_sinr(inst, unpack_matrix(inst.total_antennas(), support, x));
  };

  // Start: random supported entries scaled to sit inside every antenna cap.
  Eigen::VectorXcd x0c = rng.cnormal_vector(S);
  double worst_ratio = 0.;
  for (int nant = 0; nant < N; ++nant) {
    worst_ratio = std::max(worst_ratio, out.vec.antenna_tx_power[nant].value(x0c) /
                                            inst.per_antenna_power(nant));
  }
  if (worst_ratio > 0.) x0c *= std::sqrt(power_margin / worst_ratio);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  x0.head(S) = x0c.real();
  x0.segment(S, S) = x0c.imag();
  out.x0 = polish(x0);

  for (int i = 0; i < M; ++i) {
    p.surrogates.push_back(app5(sig_emb[i], out.var_min_sinr, out.var_z[i], out.x0));
  }
  return out;
}

}  // namespace scopt
