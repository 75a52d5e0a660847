#include "scopt/cognitive_multicast.hpp"

#include <cmath>
#include <stdexcept>

namespace scopt {

namespace {

// Row with the user's channel placed in one group slot of the stacked vector.
Eigen::RowVectorXcd slot_row(const Eigen::RowVectorXcd& channel, int group, int groups) {
  Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(groups * channel.size());
  row.segment(group * channel.size(), channel.size()) = channel;
  return row;
}

}  // namespace

CognitiveInstance CognitiveInstance::random(Rng& rng, int N, int G, int users_per_group,
                                            int L, double qos_db, double cap_db) {
  CognitiveInstance inst;
  inst.num_antennas = N;
  inst.num_groups = G;
  const int M = G * users_per_group;
  inst.group_of_user.resize(M);
  inst.user_channels.resize(M, N);
  for (int i = 0; i < M; ++i) {
    inst.group_of_user[i] = i / users_per_group;
    inst.user_channels.row(i) = gen_rayleigh(rng, N).transpose();
  }
  inst.primary_channels.resize(L, N);
  for (int j = 0; j < L; ++j) inst.primary_channels.row(j) = gen_rayleigh(rng, N).transpose();
  inst.qos = Eigen::VectorXd::Constant(M, from_db(qos_db));
  inst.caps = Eigen::VectorXd::Constant(std::max(L, 0), from_db(cap_db));
  inst.noise = Eigen::VectorXd::Ones(M);
  inst.validate();
  return inst;
}

void CognitiveInstance::validate() const {
  if (num_antennas <= 0 || num_groups <= 0 || group_of_user.empty()) {
    throw std::invalid_argument("cognitive: dimensions must be positive");
  }
  const int M = num_users();
  if (user_channels.rows() != M || user_channels.cols() != num_antennas) {
    throw std::invalid_argument("cognitive: user channel dimensions");
  }
  if (primary_channels.cols() != num_antennas && primary_channels.rows() > 0) {
    throw std::invalid_argument("cognitive: primary channel dimensions");
  }
  if (qos.size() != M || qos.minCoeff() <= 0.) {
    throw std::invalid_argument("cognitive: QoS targets must be positive");
  }
  if (caps.size() != primary_channels.rows() || (caps.size() > 0 && caps.minCoeff() < 0.)) {
    throw std::invalid_argument("cognitive: cap dimensions");
  }
  if (noise.size() != M || noise.minCoeff() <= 0.) {
    throw std::invalid_argument("cognitive: noise must be positive");
  }
  for (int g : group_of_user) {
    if (g < 0 || g >= num_groups) throw std::invalid_argument("cognitive: bad group index");
  }
}

CognitiveBlocks build_block_matrices(const CognitiveInstance& inst) {
  inst.validate();
  const int G = inst.num_groups;
  const int N = inst.num_antennas;
  const int GN = G * N;
  CognitiveBlocks out;

  for (int i = 0; i < inst.num_users(); ++i) {
    const int g = inst.group_of_user[i];
    const Eigen::RowVectorXcd h = inst.user_channels.row(i);
    Eigen::MatrixXcd own(1, GN);
    own.row(0) = slot_row(h, g, G);
    out.own_signal.push_back(QuadraticForm::complex(own, Eigen::VectorXcd::Zero(GN), 0.));

    Eigen::MatrixXcd cross(G - 1, GN);
    int r = 0;
    for (int gp = 0; gp < G; ++gp) {
      if (gp == g) continue;
      cross.row(r++) = slot_row(h, gp, G);
    }
    out.cross_signal.push_back(
        QuadraticForm::complex(cross, Eigen::VectorXcd::Zero(GN), 0.));
  }

  for (int j = 0; j < inst.num_primary(); ++j) {
    const Eigen::RowVectorXcd l = inst.primary_channels.row(j);
    Eigen::MatrixXcd leak(G, GN);
    for (int g = 0; g < G; ++g) leak.row(g) = slot_row(l, g, G);
    out.primary_leak.push_back(QuadraticForm::complex(leak, Eigen::VectorXcd::Zero(GN), 0.));
  }
  return out;
}

double user_sinr(const CognitiveInstance& inst, const Eigen::VectorXcd& stacked, int i) {
  const int N = inst.num_antennas;
  const int g = inst.group_of_user[i];
  const Eigen::RowVectorXcd h = inst.user_channels.row(i);
  double own = 0., cross = 0.;
  for (int gp = 0; gp < inst.num_groups; ++gp) {
    const double p = std::norm((h * stacked.segment(gp * N, N))(0));
    if (gp == g)
      own = p;
    else
      cross += p;
  }
  return own / (cross + inst.noise(i));
}

double primary_interference(const CognitiveInstance& inst, const Eigen::VectorXcd& stacked,
                            int j) {
  const int N = inst.num_antennas;
  const Eigen::RowVectorXcd l = inst.primary_channels.row(j);
  double leak = 0.;
  for (int g = 0; g < inst.num_groups; ++g) {
    leak += std::norm((l * stacked.segment(g * N, N))(0));
  }
  return leak;
}

double total_power(const Eigen::VectorXcd& stacked) { return stacked.squaredNorm(); }

Eigen::VectorXcd CognitiveProblem::beamformer(const Eigen::VectorXd& x) const {
  Eigen::VectorXcd v(stacked);
  v.real() = x.head(stacked);
  v.imag() = x.segment(stacked, stacked);
  return v;
}

CognitiveProblem build_sca_problem(const CognitiveInstance& inst, Rng& rng) {
  inst.validate();
  const int GN = inst.stacked_dim();
  const CognitiveBlocks blocks = build_block_matrices(inst);

  CognitiveProblem out;
  out.stacked = GN;
  out.var_power = 2 * GN;
  const int n = 2 * GN + 1;

  ScaProblem& p = out.problem;
  p.num_vars = n;
  p.objective = Eigen::VectorXd::Zero(n);
  p.objective(out.var_power) = 1.;

  // ||x||^2 <= t, the lowered objective.
  {
    Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(GN, GN);
    QuadraticForm norm2 =
        QuadraticForm::complex(eye, Eigen::VectorXcd::Zero(GN), 0.).embedded();
    for (auto& blk : quad_epigraph(norm2, AffineExpr::of_variable(out.var_power, 1.))) {
      blk.relaxable = false;
      p.convex_blocks.push_back(std::move(blk));
    }
  }

  // Interference caps stay exact: scaling the beamformer down always satisfies
  // them, so the feasibility slack is reserved for the SINR constraints.
  for (int j = 0; j < inst.num_primary(); ++j) {
    for (auto& blk : quad_epigraph(blocks.primary_leak[j].embedded(),
                                   AffineExpr::of_constant(inst.caps(j)))) {
      blk.relaxable = false;
      p.convex_blocks.push_back(std::move(blk));
    }
  }

  const int var_power = out.var_power;
  p.polish = [GN, var_power](const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    y(var_power) = x.head(2 * GN).squaredNorm();
    return y;
  };
  p.objective_value = [GN](const Eigen::VectorXd& x) {
    return x.head(2 * GN).squaredNorm();
  };

  Eigen::VectorXcd x0c = rng.cnormal_vector(GN);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  x0.head(GN) = x0c.real();
  x0.segment(GN, GN) = x0c.imag();
  out.x0 = p.polish(x0);

  for (int i = 0; i < inst.num_users(); ++i) {
    const QuadraticForm num = blocks.own_signal[i].embedded();
    const QuadraticForm den =
        QuadraticForm::complex(blocks.cross_signal[i].complex_factor(),
                               Eigen::VectorXcd::Zero(GN), inst.noise(i))
            .embedded();
    p.surrogates.push_back(app4(num, den, BoundRef::fixed(inst.qos(i)), out.x0));
  }
  return out;
}

}  // namespace scopt
