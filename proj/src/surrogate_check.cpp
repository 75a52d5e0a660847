#include "scopt/surrogate_check.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace scopt {

namespace {

// Sample boxes keeping every generated form and limit strictly positive.
constexpr double kXLo = 0.1, kXHi = 2.0;
constexpr double kBoundLo = 0.3, kBoundHi = 2.5;

using Rng = std::mt19937_64;

double unif(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Affine form 2b'x + c with value >= 0.3 over the sample box.
QuadraticForm random_positive_affine(Rng& rng, int d) {
  Eigen::VectorXd b(d);
  for (int j = 0; j < d; ++j) b(j) = unif(rng, -0.5, 0.5);
  double min_val = 0.;
  for (int j = 0; j < d; ++j) min_val += 2. * b(j) * (b(j) > 0. ? kXLo : kXHi);
  return QuadraticForm::real_affine(b, 0.3 - min_val);
}

// ||F(x - x0)||^2 + c0 with c0 > 0, so the form is positive everywhere.
QuadraticForm random_positive_quadratic(Rng& rng, int d) {
  Eigen::MatrixXd f(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i, j) = unif(rng, -1., 1.);
  Eigen::VectorXd x0(d);
  for (int j = 0; j < d; ++j) x0(j) = unif(rng, kXLo, kXHi);
  const double c0 = unif(rng, 0.1, 1.);
  const Eigen::VectorXd fx0 = f * x0;
  return QuadraticForm::real(f, -f.transpose() * fx0, fx0.squaredNorm() + c0);
}

Eigen::VectorXd random_point(Rng& rng, int d, int total) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(total);
  for (int j = 0; j < d; ++j) x(j) = unif(rng, kXLo, kXHi);
  for (int j = d; j < total; ++j) x(j) = unif(rng, kBoundLo, kBoundHi);
  return x;
}

}  // namespace

SweepResult sweep_surrogate(int kind, const SweepOptions& opt) {
  if (kind < 1 || kind > 6) throw std::invalid_argument("sweep_surrogate: kind in 1..6");
  Rng rng(opt.seed + 7919 * static_cast<std::uint64_t>(kind));
  SweepResult worst;
  worst.kind = kind;

  for (int inst = 0; inst < opt.instances; ++inst) {
    const int d = 1 + static_cast<int>(rng() % 3);
    const bool affine_case = kind <= 3;
    const QuadraticForm h1 =
        affine_case ? random_positive_affine(rng, d) : random_positive_quadratic(rng, d);
    const QuadraticForm h2 =
        affine_case ? random_positive_affine(rng, d) : random_positive_quadratic(rng, d);

    // Layout: x in [0, d), ratio bound at d, slack (kinds 3 and 5) at d + 1.
    const int bound_idx = d;
    const int slack_idx = d + 1;
    const int total = d + 2;

    Eigen::VectorXd anchor = random_point(rng, d, total);
    std::unique_ptr<Surrogate> s;
    switch (kind) {
      case 1: s = app1(h1, h2, bound_idx, anchor); break;
      case 2: s = app2(h1, h2, bound_idx, anchor); break;
      case 3: {
        anchor(slack_idx) = 1. / h2.value(Eigen::VectorXd(anchor.head(d)));
        s = app3(h1, h2, bound_idx, slack_idx, anchor);
        break;
      }
      case 4: s = app4(h1, h2, BoundRef::variable(bound_idx), anchor); break;
      case 5: s = app5(h1, bound_idx, slack_idx, anchor); break;
      case 6: s = app6(h1, h2, bound_idx, anchor); break;
    }

    std::vector<Eigen::VectorXd> samples;
    samples.reserve(opt.samples);
    for (int k = 0; k < opt.samples; ++k) samples.push_back(random_point(rng, d, total));

    const ConditionReport rep = verify_conditions(*s, samples);
    worst.max_upper_violation = std::max(worst.max_upper_violation, rep.max_upper_violation);
    worst.max_anchor_gap = std::max(worst.max_anchor_gap, rep.anchor_gap);
    worst.max_gradient_mismatch =
        std::max(worst.max_gradient_mismatch, rep.max_gradient_mismatch);
  }
  return worst;
}

std::vector<SweepResult> sweep_all_surrogates(const SweepOptions& opt) {
  std::vector<SweepResult> out;
  for (int kind = 1; kind <= 6; ++kind) out.push_back(sweep_surrogate(kind, opt));
  return out;
}

}  // namespace scopt
