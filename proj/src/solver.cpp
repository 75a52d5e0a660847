#include "scopt/solver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace scopt {

namespace {

constexpr double kStepMin = 1e-13;
constexpr double kSigmaMin = 1e-8;
constexpr double kSigmaMax = 0.999;
constexpr double kSafeguard = 500.;

struct BlockMap {
  Cone cone = Cone::Nonneg;
  int dim = 0;
  bool equality = false;
  int start = 0;  // row offset within the equality or cone section
};

// Internal data in the standard form
//   min c'x  s.t.  A x = b,  G x + s = h,  s in (R+)^l x SOC(q1) x ...
// Rotated cones are rewritten as plain second-order cones with the orthogonal
// involution T = [[1,1],[1,-1]]/sqrt(2) (+ identity) applied to their rows.
struct InternalForm {
  int n = 0, p = 0, m = 0, l = 0;
  std::vector<int> soc_dims;
  Eigen::MatrixXd A, G;
  Eigen::VectorXd b, h, c;
  std::vector<BlockMap> map;
  // Equilibration scales: scaled = E * original * D.
  Eigen::VectorXd d_cols, e_eq, e_cone;
};

void rotate_rsoc_rows(Eigen::MatrixXd& rows, Eigen::VectorXd& rhs, int start) {
  const double inv_sqrt2 = 1. / std::sqrt(2.);
  const Eigen::VectorXd r0 = rows.row(start);
  const Eigen::VectorXd r1 = rows.row(start + 1);
  rows.row(start) = (r0 + r1) * inv_sqrt2;
  rows.row(start + 1) = (r0 - r1) * inv_sqrt2;
  const double h0 = rhs(start), h1 = rhs(start + 1);
  rhs(start) = (h0 + h1) * inv_sqrt2;
  rhs(start + 1) = (h0 - h1) * inv_sqrt2;
}

InternalForm build_internal(const ConicProgram& prog) {
  InternalForm f;
  f.n = prog.num_vars();
  f.c = prog.objective();

  int eq_rows = 0, lp_rows = 0, soc_rows = 0;
  for (const ConicBlock& blk : prog.blocks()) {
    switch (blk.cone) {
      case Cone::Zero: eq_rows += blk.dim(); break;
      case Cone::Nonneg: lp_rows += blk.dim(); break;
      case Cone::Soc:
      case Cone::RotatedSoc: soc_rows += blk.dim(); break;
    }
  }
  f.p = eq_rows;
  f.l = lp_rows;
  f.m = lp_rows + soc_rows;
  if (f.m == 0) throw std::invalid_argument("solve: program has no cone constraints");

  f.A.setZero(f.p, f.n);
  f.b.setZero(f.p);
  f.G.setZero(f.m, f.n);
  f.h.setZero(f.m);

  int eq_at = 0, lp_at = 0, soc_at = lp_rows;
  for (const ConicBlock& blk : prog.blocks()) {
    BlockMap bm;
    bm.cone = blk.cone;
    bm.dim = blk.dim();
    bm.equality = (blk.cone == Cone::Zero);
    int at;
    if (blk.cone == Cone::Zero) {
      at = eq_at;
      eq_at += blk.dim();
    } else if (blk.cone == Cone::Nonneg) {
      at = lp_at;
      lp_at += blk.dim();
    } else {
      at = soc_at;
      soc_at += blk.dim();
      f.soc_dims.push_back(blk.dim());
    }
    bm.start = at;
    f.map.push_back(bm);

    for (int i = 0; i < blk.dim(); ++i) {
      const AffineExpr& row = blk.rows[i];
      if (blk.cone == Cone::Zero) {
        for (const auto& [j, v] : row.terms) f.A(at + i, j) += v;
        f.b(at + i) = -row.constant;
      } else {
        // r(x) in K  <=>  s = h - Gx in K with G = -R, h = d.
        for (const auto& [j, v] : row.terms) f.G(at + i, j) -= v;
        f.h(at + i) = row.constant;
      }
    }
    if (blk.cone == Cone::RotatedSoc) rotate_rsoc_rows(f.G, f.h, at);
  }
  return f;
}

void equilibrate(InternalForm& f, int iters) {
  f.d_cols = Eigen::VectorXd::Ones(f.n);
  f.e_eq = Eigen::VectorXd::Ones(f.p);
  f.e_cone = Eigen::VectorXd::Ones(f.m);

  auto row_scale = [](double mx) { return mx > 0. ? 1. / std::sqrt(mx) : 1.; };

  for (int it = 0; it < iters; ++it) {
    for (int i = 0; i < f.p; ++i) {
      const double s = row_scale(f.A.row(i).cwiseAbs().maxCoeff());
      f.A.row(i) *= s;
      f.b(i) *= s;
      f.e_eq(i) *= s;
    }
    for (int i = 0; i < f.l; ++i) {
      const double s = row_scale(f.G.row(i).cwiseAbs().maxCoeff());
      f.G.row(i) *= s;
      f.h(i) *= s;
      f.e_cone(i) *= s;
    }
    // A second-order block keeps one scale for all of its rows.
    int at = f.l;
    for (int q : f.soc_dims) {
      const double s = row_scale(f.G.middleRows(at, q).cwiseAbs().maxCoeff());
      f.G.middleRows(at, q) *= s;
      f.h.segment(at, q) *= s;
      f.e_cone.segment(at, q) *= s;
      at += q;
    }
    for (int j = 0; j < f.n; ++j) {
      double mx = f.G.col(j).cwiseAbs().maxCoeff();
      if (f.p > 0) mx = std::max(mx, f.A.col(j).cwiseAbs().maxCoeff());
      const double s = row_scale(mx);
      f.G.col(j) *= s;
      if (f.p > 0) f.A.col(j) *= s;
      f.d_cols(j) *= s;
    }
  }
  f.c = f.c.cwiseProduct(f.d_cols);
}

struct SocScaling {
  int dim = 0;
  double eta2 = 1.;
  Eigen::VectorXd wbar;
};

struct Scalings {
  Eigen::VectorXd lp_v;  // w^2 for the LP cone
  std::vector<SocScaling> socs;
  bool identity = true;
};

struct Iterate {
  Eigen::VectorXd x, y, z, s;
  double tau = 1., kappa = 1.;
};

struct Stats {
  double gap = 0., mu = 0., pcost = 0., dcost = 0.;
  std::optional<double> relgap;
  double pres = 0., dres = 0., kapovert = 0.;
  std::optional<double> pinfres, dinfres;
};

class Ipm {
 public:
  Ipm(InternalForm f, const SolverSettings& st) : f_(std::move(f)), st_(st) {
    dim_ = f_.n + f_.p + f_.m;
    K_.setZero(dim_, dim_);
    if (f_.p > 0) {
      K_.block(f_.n, 0, f_.p, f_.n) = f_.A;
      K_.block(0, f_.n, f_.n, f_.p) = f_.A.transpose();
    }
    K_.block(f_.n + f_.p, 0, f_.m, f_.n) = f_.G;
    K_.block(0, f_.n + f_.p, f_.n, f_.m) = f_.G.transpose();
    degree_ = f_.l + static_cast<int>(f_.soc_dims.size());
    resx0_ = std::max(1., f_.c.norm());
    resy0_ = std::max(1., f_.b.norm());
    resz0_ = std::max(1., f_.h.norm());
  }

  SolveStatus run(Iterate& w, Stats& info, int& iters);

 private:
  void set_identity_scaling() {
    scal_.identity = true;
    scal_.lp_v = Eigen::VectorXd::Ones(f_.l);
    scal_.socs.clear();
    for (int q : f_.soc_dims) {
      SocScaling sc;
      sc.dim = q;
      sc.eta2 = 1.;
      sc.wbar = Eigen::VectorXd::Zero(q);
      sc.wbar(0) = 1.;
      scal_.socs.push_back(std::move(sc));
    }
  }

  bool update_scalings(const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                       Eigen::VectorXd& lambda) {
    scal_.identity = false;
    scal_.lp_v = s.head(f_.l).cwiseQuotient(z.head(f_.l));
    scal_.socs.clear();
    int at = f_.l;
    for (int q : f_.soc_dims) {
      const double sres = s(at) * s(at) - s.segment(at + 1, q - 1).squaredNorm();
      const double zres = z(at) * z(at) - z.segment(at + 1, q - 1).squaredNorm();
      if (sres <= 0. || zres <= 0.) return false;
      const double snorm = std::sqrt(sres), znorm = std::sqrt(zres);
      Eigen::VectorXd sbar = s.segment(at, q) / snorm;
      Eigen::VectorXd zbar = z.segment(at, q) / znorm;
      const double gamma = std::sqrt(0.5 * (1. + sbar.dot(zbar)));
      SocScaling sc;
      sc.dim = q;
      sc.eta2 = snorm / znorm;
      sc.wbar.resize(q);
      sc.wbar(0) = (0.5 / gamma) * (sbar(0) + zbar(0));
      sc.wbar.tail(q - 1) = (0.5 / gamma) * (sbar.tail(q - 1) - zbar.tail(q - 1));
      scal_.socs.push_back(std::move(sc));
      at += q;
    }
    scale(z, lambda);
    return true;
  }

  // lambda = W z
  void scale(const Eigen::VectorXd& z, Eigen::VectorXd& out) const {
    out.resize(f_.m);
    if (scal_.identity) {
      out = z;
      return;
    }
    out.head(f_.l) = scal_.lp_v.cwiseSqrt().cwiseProduct(z.head(f_.l));
    int at = f_.l;
    for (const SocScaling& sc : scal_.socs) {
      const double eta = std::sqrt(sc.eta2);
      const double a = sc.wbar(0);
      const auto q1 = sc.wbar.tail(sc.dim - 1);
      const double zeta = q1.dot(z.segment(at + 1, sc.dim - 1));
      out(at) = eta * (a * z(at) + zeta);
      out.segment(at + 1, sc.dim - 1) =
          eta * (z.segment(at + 1, sc.dim - 1) + (z(at) + zeta / (1. + a)) * q1);
      at += sc.dim;
    }
  }

  // y = W^2 x
  void apply_w2(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y.resize(f_.m);
    if (scal_.identity) {
      y = x;
      return;
    }
    y.head(f_.l) = scal_.lp_v.cwiseProduct(x.head(f_.l));
    int at = f_.l;
    for (const SocScaling& sc : scal_.socs) {
      const auto xk = x.segment(at, sc.dim);
      const double wx = sc.wbar.dot(xk);
      Eigen::VectorXd jx = xk;
      jx.tail(sc.dim - 1) *= -1.;
      y.segment(at, sc.dim) = sc.eta2 * (2. * wx * sc.wbar - jx);
      at += sc.dim;
    }
  }

  void assemble_kkt() {
    auto w2block = K_.block(f_.n + f_.p, f_.n + f_.p, f_.m, f_.m);
    w2block.setZero();
    if (scal_.identity) {
      w2block.diagonal().setConstant(-1.);
    } else {
      for (int i = 0; i < f_.l; ++i) w2block(i, i) = -scal_.lp_v(i);
      int at = f_.l;
      for (const SocScaling& sc : scal_.socs) {
        Eigen::MatrixXd w2 = 2. * sc.wbar * sc.wbar.transpose();
        w2(0, 0) -= 1.;
        for (int i = 1; i < sc.dim; ++i) w2(i, i) += 1.;
        w2block.block(at, at, sc.dim, sc.dim) = -sc.eta2 * w2;
        at += sc.dim;
      }
    }
  }

  bool factorize() {
    Eigen::MatrixXd kr = K_;
    kr.diagonal().head(f_.n).array() += st_.static_reg;
    kr.diagonal().tail(f_.p + f_.m).array() -= st_.static_reg;
    ldlt_.compute(kr);
    return ldlt_.info() == Eigen::Success;
  }

  // Residual of the unregularized system, used for iterative refinement.
  void kkt_residual(const Eigen::VectorXd& rhs, const Eigen::VectorXd& sol,
                    Eigen::VectorXd& res) const {
    const auto dx = sol.head(f_.n);
    const auto dy = sol.segment(f_.n, f_.p);
    const auto dz = sol.tail(f_.m);
    res = rhs;
    res.head(f_.n) -= f_.G.transpose() * dz;
    if (f_.p > 0) {
      res.head(f_.n) -= f_.A.transpose() * dy;
      res.segment(f_.n, f_.p) -= f_.A * dx;
    }
    Eigen::VectorXd w2dz;
    apply_w2(dz, w2dz);
    res.tail(f_.m) -= f_.G * dx - w2dz;
  }

  void solve_kkt(const Eigen::VectorXd& rhs, Eigen::VectorXd& dx, Eigen::VectorXd& dy,
                 Eigen::VectorXd& dz) const {
    Eigen::VectorXd sol = ldlt_.solve(rhs);
    Eigen::VectorXd res(dim_);
    const double thresh = 1e-14 * (1. + rhs.lpNorm<Eigen::Infinity>());
    for (int i = 0; i < st_.refine_steps; ++i) {
      kkt_residual(rhs, sol, res);
      if (res.lpNorm<Eigen::Infinity>() < thresh) break;
      sol += ldlt_.solve(res);
    }
    dx = sol.head(f_.n);
    dy = sol.segment(f_.n, f_.p);
    dz = sol.tail(f_.m);
  }

  void bring_to_cone(const Eigen::VectorXd& r, Eigen::VectorXd& s) const {
    double worst = -1.;
    for (int i = 0; i < f_.l; ++i) worst = std::max(worst, -r(i));
    int at = f_.l;
    for (int q : f_.soc_dims) {
      worst = std::max(worst, r.segment(at + 1, q - 1).norm() - r(at));
      at += q;
    }
    s = r;
    if (worst >= 0.) {
      const double shift = 1. + worst;
      s.head(f_.l).array() += shift;
      at = f_.l;
      for (int q : f_.soc_dims) {
        s(at) += shift;
        at += q;
      }
    }
  }

  // w = u o v, returns e'w
  double conic_product(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                       Eigen::VectorXd& w) const {
    w.resize(f_.m);
    w.head(f_.l) = u.head(f_.l).cwiseProduct(v.head(f_.l));
    double tr = w.head(f_.l).lpNorm<1>();
    int at = f_.l;
    for (int q : f_.soc_dims) {
      w(at) = u.segment(at, q).dot(v.segment(at, q));
      tr += std::abs(w(at));
      w.segment(at + 1, q - 1) =
          u(at) * v.segment(at + 1, q - 1) + v(at) * u.segment(at + 1, q - 1);
      at += q;
    }
    return tr;
  }

  // v = u \ w (inverse of the Jordan product by u)
  void conic_division(const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                      Eigen::VectorXd& v) const {
    v.resize(f_.m);
    v.head(f_.l) = w.head(f_.l).cwiseQuotient(u.head(f_.l));
    int at = f_.l;
    for (int q : f_.soc_dims) {
      const double u0 = u(at), w0 = w(at);
      const auto u1 = u.segment(at + 1, q - 1);
      const auto w1 = w.segment(at + 1, q - 1);
      const double rho = u0 * u0 - u1.squaredNorm();
      const double zeta = u1.dot(w1);
      v(at) = (u0 * w0 - zeta) / rho;
      v.segment(at + 1, q - 1) = ((zeta / u0 - w0) / rho) * u1 + w1 / u0;
      at += q;
    }
  }

  // Largest step to the cone boundary for lambda + alpha*ds, lambda + alpha*dz
  // (all in the scaled space), also bounded by tau/kappa positivity.
  double line_search(const Eigen::VectorXd& lambda, const Eigen::VectorXd& ds,
                     const Eigen::VectorXd& dz, double tau, double dtau, double kap,
                     double dkap) const {
    double alpha = 10.;
    if (f_.l > 0) {
      const double rhomin = ds.head(f_.l).cwiseQuotient(lambda.head(f_.l)).minCoeff();
      const double sigmin = dz.head(f_.l).cwiseQuotient(lambda.head(f_.l)).minCoeff();
      const double worst = std::min(rhomin, sigmin);
      alpha = worst < 0. ? 1. / (-worst) : 10.;
    }
    const double tstep = -tau / dtau;
    const double kstep = -kap / dkap;
    if (tstep > 0.) alpha = std::min(alpha, tstep);
    if (kstep > 0.) alpha = std::min(alpha, kstep);

    int at = f_.l;
    for (int q : f_.soc_dims) {
      const double lk2 =
          lambda(at) * lambda(at) - lambda.segment(at + 1, q - 1).squaredNorm();
      if (lk2 <= 0.) {
        at += q;
        continue;
      }
      const double lknorm = std::sqrt(lk2);
      Eigen::VectorXd lkbar = lambda.segment(at, q) / lknorm;
      const auto step_bound = [&](const Eigen::VectorXd& d) {
        const double lbar_d =
            lkbar(0) * d(at) - lkbar.tail(q - 1).dot(d.segment(at + 1, q - 1));
        const double factor = (lbar_d + d(at)) / (lkbar(0) + 1.);
        Eigen::VectorXd rho(q);
        rho(0) = lbar_d / lknorm;
        rho.tail(q - 1) =
            (d.segment(at + 1, q - 1) - factor * lkbar.tail(q - 1)) / lknorm;
        return rho.tail(q - 1).norm() - rho(0);
      };
      const double conic_step = std::max({0., step_bound(ds), step_bound(dz)});
      if (conic_step > 0.) alpha = std::min(alpha, 1. / conic_step);
      at += q;
    }
    return std::clamp(alpha, kStepMin, 1.);
  }

  void compute_residuals(const Iterate& w);
  void update_stats(const Iterate& w, Stats& info) const;
  enum class Verdict { Continue, Optimal, PrimalInfeasible, DualInfeasible };
  Verdict check_exit(const Stats& info, const Iterate& w, bool reduced) const;

  // Falls back to the best iterate seen and grades it: full-tolerance optimal,
  // reduced-tolerance (reported as MaxIterations with usable residuals),
  // infeasibility certificate, or a genuine numerical failure.
  SolveStatus finish_with_best(Iterate& w, Stats& info, const Iterate& best) {
    w = best;
    compute_residuals(w);
    update_stats(w, info);
    switch (check_exit(info, w, false)) {
      case Verdict::Optimal: return SolveStatus::Optimal;
      case Verdict::PrimalInfeasible: return SolveStatus::PrimalInfeasible;
      case Verdict::DualInfeasible: return SolveStatus::DualInfeasible;
      case Verdict::Continue: break;
    }
    switch (check_exit(info, w, true)) {
      case Verdict::Optimal: return SolveStatus::MaxIterations;
      case Verdict::PrimalInfeasible: return SolveStatus::PrimalInfeasible;
      case Verdict::DualInfeasible: return SolveStatus::DualInfeasible;
      case Verdict::Continue: break;
    }
    return SolveStatus::NumericalError;
  }

  InternalForm f_;
  SolverSettings st_;
  int dim_ = 0, degree_ = 0;
  Eigen::MatrixXd K_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  Scalings scal_;

  Eigen::VectorXd rx_, ry_, rz_;
  double rt_ = 0., hresx_ = 0., hresy_ = 0., hresz_ = 0.;
  double cx_ = 0., by_ = 0., hz_ = 0.;
  double nx_ = 0., ny_ = 0., nz_ = 0., ns_ = 0.;
  double resx0_ = 1., resy0_ = 1., resz0_ = 1.;
};

void Ipm::compute_residuals(const Iterate& w) {
  rx_ = -f_.G.transpose() * w.z;
  if (f_.p > 0) rx_ -= f_.A.transpose() * w.y;
  hresx_ = rx_.norm();
  rx_ -= w.tau * f_.c;

  if (f_.p > 0) {
    ry_ = f_.A * w.x;
    hresy_ = ry_.norm();
    ry_ -= w.tau * f_.b;
  } else {
    ry_.resize(0);
    hresy_ = 0.;
  }

  rz_ = w.s + f_.G * w.x;
  hresz_ = rz_.norm();
  rz_ -= w.tau * f_.h;

  cx_ = f_.c.dot(w.x);
  by_ = f_.p > 0 ? f_.b.dot(w.y) : 0.;
  hz_ = f_.h.dot(w.z);
  rt_ = w.kappa + cx_ + by_ + hz_;

  nx_ = w.x.norm();
  ny_ = w.y.norm();
  nz_ = w.z.norm();
  ns_ = w.s.norm();
}

void Ipm::update_stats(const Iterate& w, Stats& info) const {
  info.gap = w.s.dot(w.z);
  info.mu = (info.gap + w.kappa * w.tau) / (degree_ + 1);
  info.kapovert = w.kappa / w.tau;
  info.pcost = cx_ / w.tau;
  info.dcost = -(hz_ + by_) / w.tau;
  if (info.pcost < 0.)
    info.relgap = info.gap / (-info.pcost);
  else if (info.dcost > 0.)
    info.relgap = info.gap / info.dcost;
  else
    info.relgap.reset();

  const double nry = f_.p > 0 ? ry_.norm() / std::max(resy0_ + nx_, 1.) : 0.;
  const double nrz = rz_.norm() / std::max(resz0_ + nx_ + ns_, 1.);
  info.pres = std::max(nry, nrz) / w.tau;
  info.dres = rx_.norm() / std::max(resx0_ + ny_ + nz_, 1.) / w.tau;

  info.pinfres.reset();
  info.dinfres.reset();
  if ((hz_ + by_) / std::max(ny_ + nz_, 1.) < -st_.rel_gap_tol) {
    info.pinfres = hresx_ / std::max(ny_ + nz_, 1.);
  }
  if (cx_ / std::max(nx_, 1.) < -st_.rel_gap_tol) {
    info.dinfres =
        std::max(hresy_ / std::max(nx_, 1.), hresz_ / std::max(nx_ + ns_, 1.));
  }
}

Ipm::Verdict Ipm::check_exit(const Stats& info, const Iterate& w, bool reduced) const {
  const double feastol = reduced ? st_.reduced_tol : st_.feas_tol;
  const double abstol = reduced ? st_.reduced_tol : st_.gap_tol;
  const double reltol = reduced ? st_.reduced_tol : st_.rel_gap_tol;

  if ((-cx_ > 0. || -by_ - hz_ >= -abstol) && info.pres < feastol &&
      info.dres < feastol &&
      (info.gap < abstol || (info.relgap && *info.relgap < reltol))) {
    return Verdict::Optimal;
  }
  if (info.dinfres && *info.dinfres < feastol && w.tau < w.kappa) {
    return Verdict::DualInfeasible;
  }
  if (info.pinfres && *info.pinfres < feastol &&
      (w.tau < w.kappa || (w.tau < feastol && w.kappa < feastol))) {
    return Verdict::PrimalInfeasible;
  }
  return Verdict::Continue;
}

SolveStatus Ipm::run(Iterate& w, Stats& info, int& iters) {
  set_identity_scaling();
  assemble_kkt();
  if (!factorize()) return SolveStatus::NumericalError;

  // Initial point: least-squares primal/dual solves, then shift into the cone.
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim_);
  rhs.segment(f_.n, f_.p) = f_.b;
  rhs.tail(f_.m) = f_.h;
  Eigen::VectorXd dx1(f_.n), dy1(f_.p), dz1(f_.m);
  solve_kkt(rhs, dx1, dy1, dz1);
  w.x = dx1;
  bring_to_cone(-dz1, w.s);

  Eigen::VectorXd rhs2 = Eigen::VectorXd::Zero(dim_);
  rhs2.head(f_.n) = -f_.c;
  Eigen::VectorXd dx2(f_.n), dy2(f_.p), dz2(f_.m);
  solve_kkt(rhs2, dx2, dy2, dz2);
  w.y = dy2;
  bring_to_cone(dz2, w.z);
  w.tau = 1.;
  w.kappa = 1.;

  Eigen::VectorXd rhs1 = Eigen::VectorXd::Zero(dim_);
  rhs1.head(f_.n) = -f_.c;
  rhs1.segment(f_.n, f_.p) = f_.b;
  rhs1.tail(f_.m) = f_.h;

  Eigen::VectorXd lambda(f_.m), ds_by_w(f_.m), w_dz(f_.m), dsbar(f_.m), tmp(f_.m),
      ds_final(f_.m);

  Iterate best = w;
  Stats best_info;
  double best_merit = std::numeric_limits<double>::max();
  bool have_best = false;
  double pres_prev = std::numeric_limits<double>::max();

  for (iters = 0; iters <= st_.max_iters; ++iters) {
    compute_residuals(w);
    update_stats(w, info);

    if (st_.verbose) {
      std::printf("it %3d  pcost % .6e  gap %.2e  pres %.2e  dres %.2e  k/t %.2e\n",
                  iters, info.pcost, info.gap, info.pres, info.dres, info.kapovert);
    }

    const double merit = std::max({info.pres, info.dres,
                                   info.relgap.value_or(std::abs(info.gap))});
    if (!have_best || merit < best_merit) {
      best = w;
      best_info = info;
      best_merit = merit;
      have_best = true;
    }

    // Unreliable direction: back off to the best iterate seen.
    if (iters > 0 && (info.pres > kSafeguard * pres_prev || info.gap < 0.)) {
      w = best;
      info = best_info;
      switch (check_exit(info, w, true)) {
        case Verdict::Optimal: return SolveStatus::MaxIterations;
        case Verdict::PrimalInfeasible: return SolveStatus::PrimalInfeasible;
        case Verdict::DualInfeasible: return SolveStatus::DualInfeasible;
        case Verdict::Continue: return SolveStatus::NumericalError;
      }
    }
    pres_prev = info.pres;

    switch (check_exit(info, w, false)) {
      case Verdict::Optimal: return SolveStatus::Optimal;
      case Verdict::PrimalInfeasible: return SolveStatus::PrimalInfeasible;
      case Verdict::DualInfeasible: return SolveStatus::DualInfeasible;
      case Verdict::Continue: break;
    }

    if (std::isnan(info.pcost) || std::isnan(info.gap)) {
      w = best;
      info = best_info;
      return check_exit(info, w, true) == Verdict::Optimal ? SolveStatus::MaxIterations
                                                           : SolveStatus::NumericalError;
    }

    if (iters == st_.max_iters) {
      if (best_merit < std::max({info.pres, info.dres, std::abs(info.gap)})) {
        w = best;
        info = best_info;
      }
      return SolveStatus::MaxIterations;
    }

    if (!update_scalings(w.s, w.z, lambda)) {
      w = best;
      info = best_info;
      return check_exit(info, w, true) == Verdict::Optimal ? SolveStatus::MaxIterations
                                                           : SolveStatus::NumericalError;
    }
    assemble_kkt();
    if (!factorize()) {
      // One retry with a heavier shift keeps borderline factorizations alive.
      st_.static_reg *= 100.;
      if (!factorize()) return SolveStatus::NumericalError;
    }

    solve_kkt(rhs1, dx1, dy1, dz1);
    const double dtau_denom =
        w.kappa / w.tau - f_.c.dot(dx1) - (f_.p > 0 ? f_.b.dot(dy1) : 0.) - f_.h.dot(dz1);

    // Predictor. With dsbar = lambda o lambda, W(lambda \ dsbar) = W lambda = s.
    rhs2.head(f_.n) = rx_;
    rhs2.segment(f_.n, f_.p) = -ry_;
    rhs2.tail(f_.m) = -rz_ + w.s;
    solve_kkt(rhs2, dx2, dy2, dz2);

    const double dtau_aff =
        (rt_ - w.kappa + f_.c.dot(dx2) + (f_.p > 0 ? f_.b.dot(dy2) : 0.) + f_.h.dot(dz2)) /
        dtau_denom;
    dz2 += dtau_aff * dz1;
    scale(dz2, w_dz);
    ds_by_w = -w_dz - lambda;
    const double dkap_aff = -w.kappa - w.kappa / w.tau * dtau_aff;
    const double step_aff =
        line_search(lambda, ds_by_w, w_dz, w.tau, dtau_aff, w.kappa, dkap_aff);
    const double sigma =
        std::clamp(std::pow(1. - step_aff, 3), kSigmaMin, kSigmaMax);
    const double sigmamu = sigma * info.mu;

    // Corrector: dsbar = lambda o lambda + (W^-1 ds) o (W dz) - sigma*mu*e.
    conic_product(lambda, lambda, dsbar);
    conic_product(ds_by_w, w_dz, tmp);
    dsbar += tmp;
    dsbar.head(f_.l).array() -= sigmamu;
    {
      int at = f_.l;
      for (int q : f_.soc_dims) {
        dsbar(at) -= sigmamu;
        at += q;
      }
    }
    conic_division(lambda, dsbar, tmp);  // lambda \ dsbar
    scale(tmp, ds_by_w);                 // W(lambda \ dsbar)
    const double one_minus_sigma = 1. - sigma;
    rhs2.head(f_.n) = one_minus_sigma * rx_;
    rhs2.segment(f_.n, f_.p) = -one_minus_sigma * ry_;
    rhs2.tail(f_.m) = -one_minus_sigma * rz_ + ds_by_w;
    solve_kkt(rhs2, dx2, dy2, dz2);

    const double bkap = w.kappa * w.tau + dkap_aff * dtau_aff - sigmamu;
    const double dtau = (one_minus_sigma * rt_ - bkap / w.tau + f_.c.dot(dx2) +
                         (f_.p > 0 ? f_.b.dot(dy2) : 0.) + f_.h.dot(dz2)) /
                        dtau_denom;
    dx2 += dtau * dx1;
    if (f_.p > 0) dy2 += dtau * dy1;
    dz2 += dtau * dz1;
    scale(dz2, w_dz);
    ds_by_w = -(tmp + w_dz);  // tmp still holds lambda \ dsbar
    const double dkap = -(bkap + w.kappa * dtau) / w.tau;

    const double step =
        st_.step_scale * line_search(lambda, ds_by_w, w_dz, w.tau, dtau, w.kappa, dkap);
    scale(ds_by_w, ds_final);  // ds = W(W^-1 ds)

    if (step <= kStepMin) {
      w = best;
      info = best_info;
      return check_exit(info, w, true) == Verdict::Optimal ? SolveStatus::MaxIterations
                                                           : SolveStatus::NumericalError;
    }

    w.x += step * dx2;
    w.y += step * dy2;
    w.z += step * dz2;
    w.s += step * ds_final;
    w.kappa += step * dkap;
    w.tau += step * dtau;
  }
  return SolveStatus::MaxIterations;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::DualInfeasible: return "dual_infeasible";
    case SolveStatus::MaxIterations: return "max_iterations";
    case SolveStatus::NumericalError: return "numerical_error";
  }
  return "unknown";
}

bool SolveResult::usable(double tol) const {
  if (status == SolveStatus::Optimal) return true;
  return status == SolveStatus::MaxIterations &&
         std::max({primal_residual, dual_residual, rel_gap}) <= tol;
}

SolveResult solve(const ConicProgram& prog, const SolverSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  InternalForm f = build_internal(prog);
  equilibrate(f, settings.equilibrate_steps);

  Ipm ipm(f, settings);
  Iterate w;
  Stats info;
  int iters = 0;
  SolveStatus status = ipm.run(w, info, iters);

  SolveResult res;
  res.status = status;
  res.iterations = iters;
  res.primal_residual = info.pres;
  res.dual_residual = info.dres;
  res.duality_gap = info.gap;
  res.rel_gap = info.relgap.value_or(std::abs(info.gap));

  // Undo homogenization and equilibration.
  const double tau = (w.tau > 0. && std::isfinite(w.tau)) ? w.tau : 1.;
  const bool certificate = status == SolveStatus::PrimalInfeasible ||
                           status == SolveStatus::DualInfeasible;
  const double div = certificate ? 1. : tau;
  Eigen::VectorXd x = f.d_cols.cwiseProduct(w.x) / div;
  Eigen::VectorXd y = f.p > 0 ? Eigen::VectorXd(f.e_eq.cwiseProduct(w.y) / div)
                              : Eigen::VectorXd();
  Eigen::VectorXd z = f.e_cone.cwiseProduct(w.z) / div;
  Eigen::VectorXd s = w.s.cwiseQuotient(f.e_cone) / div;

  res.x = x;
  res.objective = prog.objective().dot(x);

  int total_rows = 0;
  for (const ConicBlock& b : prog.blocks()) total_rows += b.dim();
  res.dual.setZero(total_rows);
  res.slack.setZero(total_rows);
  int out_at = 0;
  const double inv_sqrt2 = 1. / std::sqrt(2.);
  for (size_t bi = 0; bi < prog.blocks().size(); ++bi) {
    const BlockMap& bm = f.map[bi];
    if (bm.equality) {
      res.dual.segment(out_at, bm.dim) = y.segment(bm.start, bm.dim);
    } else {
      Eigen::VectorXd zb = z.segment(bm.start, bm.dim);
      Eigen::VectorXd sb = s.segment(bm.start, bm.dim);
      if (bm.cone == Cone::RotatedSoc) {
        const auto unrotate = [&](Eigen::VectorXd& v) {
          const double v0 = v(0), v1 = v(1);
          v(0) = (v0 + v1) * inv_sqrt2;
          v(1) = (v0 - v1) * inv_sqrt2;
        };
        unrotate(zb);
        unrotate(sb);
      }
      res.dual.segment(out_at, bm.dim) = zb;
      res.slack.segment(out_at, bm.dim) = sb;
    }
    out_at += bm.dim;
  }

  res.solve_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace scopt
