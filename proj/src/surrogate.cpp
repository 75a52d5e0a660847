#include "scopt/surrogate.hpp"

#include <cmath>
#include <stdexcept>

namespace scopt {

namespace {

constexpr double kAnchorFloor = 1e-9;

void require_affine(const QuadraticForm& q, const char* who) {
  if (q.is_complex() || !q.is_affine()) {
    throw std::invalid_argument(std::string(who) + ": needs a real affine form");
  }
}

void require_quadratic(const QuadraticForm& q, const char* who) {
  if (q.is_complex()) {
    throw std::invalid_argument(std::string(who) + ": embed the complex form first");
  }
}

double eval_head(const QuadraticForm& q, const Eigen::VectorXd& x) {
  return q.value(Eigen::VectorXd(x.head(q.dim())));
}

// h(y) + grad(y)'(x - y) over the x-head of the program vector.
AffineExpr head_linearization(const QuadraticForm& q, const Eigen::VectorXd& full_anchor) {
  return linearization_of(q, full_anchor.head(q.dim()));
}

class App1 : public Surrogate {
 public:
  App1(QuadraticForm h1, QuadraticForm h2, int l_index, Eigen::VectorXd anchor)
      : h1_(std::move(h1)), h2_(std::move(h2)), l_(l_index), anchor_(std::move(anchor)) {
    const double ratio = eval_head(h2_, anchor_) / anchor_(l_);
    if (!(ratio > 0.)) throw std::domain_error("app1: anchor ratio h2/l must be positive");
    y_ = std::max(ratio, kAnchorFloor);
  }

  std::unique_ptr<Surrogate> clone() const override { return std::make_unique<App1>(*this); }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<App1>(h1_, h2_, l_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    ConicBlock blk;
    blk.cone = Cone::RotatedSoc;
    blk.relaxable = relaxable;
    AffineExpr head = affine_row_of(h1_);
    if (slack_index >= 0) head.add(slack_index, 1.);
    blk.rows.push_back(std::move(head));
    blk.rows.push_back(AffineExpr::of_constant(1.));
    blk.rows.push_back(AffineExpr::of_variable(l_, std::sqrt(y_)));
    AffineExpr h2row = affine_row_of(h2_);
    h2row *= 1. / std::sqrt(y_);
    blk.rows.push_back(std::move(h2row));
    out.push_back(std::move(blk));
  }

  double value(const Eigen::VectorXd& x) const override {
    const double h2 = eval_head(h2_, x);
    return 0.5 * y_ * x(l_) * x(l_) + h2 * h2 / (2. * y_) - eval_head(h1_, x);
  }
  double target(const Eigen::VectorXd& x) const override {
    return x(l_) * eval_head(h2_, x) - eval_head(h1_, x);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  QuadraticForm h1_, h2_;
  int l_;
  Eigen::VectorXd anchor_;
  double y_;
};

class App2 : public Surrogate {
 public:
  App2(QuadraticForm h1, QuadraticForm h2, int l_index, Eigen::VectorXd anchor)
      : h1_(std::move(h1)), h2_(std::move(h2)), l_(l_index), anchor_(std::move(anchor)) {
    // hbar = (l - h2(x))^2 / 4, linearized at the anchor.
    const int d = h2_.dim();
    const double h2a = eval_head(h2_, anchor_);
    const double la = anchor_(l_);
    const double diff = la - h2a;
    lin_ = AffineExpr::of_constant(0.25 * diff * diff);
    const Eigen::VectorXd gx = -0.5 * diff * 2. * h2_.linear();
    const double gl = 0.5 * diff;
    for (int j = 0; j < d; ++j) {
      lin_.add(j, gx(j));
      lin_.constant -= gx(j) * anchor_(j);
    }
    lin_.add(l_, gl);
    lin_.constant -= gl * la;
  }

  std::unique_ptr<Surrogate> clone() const override { return std::make_unique<App2>(*this); }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<App2>(h1_, h2_, l_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    ConicBlock blk;
    blk.cone = Cone::RotatedSoc;
    blk.relaxable = relaxable;
    AffineExpr head = affine_row_of(h1_);
    head += lin_;
    if (slack_index >= 0) head.add(slack_index, 1.);
    blk.rows.push_back(std::move(head));
    blk.rows.push_back(AffineExpr::of_constant(0.5));
    AffineExpr mid = affine_row_of(h2_);
    mid.add(l_, 1.);
    mid *= 0.5;
    blk.rows.push_back(std::move(mid));
    out.push_back(std::move(blk));
  }

  double value(const Eigen::VectorXd& x) const override {
    const double sum = x(l_) + eval_head(h2_, x);
    return 0.25 * sum * sum - lin_.eval(x) - eval_head(h1_, x);
  }
  double target(const Eigen::VectorXd& x) const override {
    return x(l_) * eval_head(h2_, x) - eval_head(h1_, x);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  QuadraticForm h1_, h2_;
  int l_;
  Eigen::VectorXd anchor_;
  AffineExpr lin_;
};

class App3 : public Surrogate {
 public:
  App3(QuadraticForm h1, QuadraticForm h2, int u_index, int z_index, Eigen::VectorXd anchor)
      : h1_(std::move(h1)), h2_(std::move(h2)), u_(u_index), z_(z_index),
        anchor_(std::move(anchor)) {
    const double h1a = eval_head(h1_, anchor_);
    const double h2a = eval_head(h2_, anchor_);
    if (!(h1a > 0.) || !(h2a > 0.)) {
      throw std::domain_error("app3: anchor needs h1 > 0 and h2 > 0");
    }
    y_ = std::max(1. / (h1a * h2a), kAnchorFloor);
  }

  std::unique_ptr<Surrogate> clone() const override { return std::make_unique<App3>(*this); }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<App3>(h1_, h2_, u_, z_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    ConicBlock blk;
    blk.cone = Cone::RotatedSoc;
    blk.relaxable = relaxable;
    AffineExpr head = AffineExpr::of_variable(u_, 1.);
    if (slack_index >= 0) head.add(slack_index, 1.);
    blk.rows.push_back(std::move(head));
    blk.rows.push_back(AffineExpr::of_constant(1.));
    AffineExpr h1row = affine_row_of(h1_);
    h1row *= std::sqrt(y_);
    blk.rows.push_back(std::move(h1row));
    blk.rows.push_back(AffineExpr::of_variable(z_, 1. / std::sqrt(y_)));
    out.push_back(std::move(blk));

    // 1 <= h2(x) z couples the slack to the inverted denominator.
    ConicBlock couple;
    couple.cone = Cone::RotatedSoc;
    couple.relaxable = relaxable;
    couple.rows.push_back(affine_row_of(h2_));
    couple.rows.push_back(AffineExpr::of_variable(z_, 1.));
    couple.rows.push_back(AffineExpr::of_constant(std::sqrt(2.)));
    out.push_back(std::move(couple));
  }

  double value(const Eigen::VectorXd& x) const override {
    const double h1 = eval_head(h1_, x);
    const double h2 = eval_head(h2_, x);
    return 0.5 * y_ * h1 * h1 + 1. / (2. * y_ * h2 * h2) - x(u_);
  }
  double target(const Eigen::VectorXd& x) const override {
    return eval_head(h1_, x) / eval_head(h2_, x) - x(u_);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  QuadraticForm h1_, h2_;
  int u_, z_;
  Eigen::VectorXd anchor_;
  double y_;
};

class App4 : public Surrogate {
 public:
  App4(QuadraticForm h1, QuadraticForm h2, BoundRef l, Eigen::VectorXd anchor)
      : h1_(std::move(h1)), h2_(std::move(h2)), l_(l), anchor_(std::move(anchor)) {
    const double la = l_.eval(anchor_);
    if (!(la > 0.)) throw std::domain_error("app4: anchor needs l > 0");
    // htilde = h1(x)/l, linearized at the anchor.
    const int d = h1_.dim();
    const Eigen::VectorXd xa = anchor_.head(d);
    const double h1a = h1_.value(xa);
    const Eigen::VectorXd gx = h1_.gradient(xa) / la;
    lin_ = AffineExpr::of_constant(h1a / la - gx.dot(xa));
    for (int j = 0; j < d; ++j) lin_.add(j, gx(j));
    if (l_.is_variable()) {
      const double gl = -h1a / (la * la);
      lin_.add(l_.index, gl);
      lin_.constant -= gl * la;
    }
  }

  std::unique_ptr<Surrogate> clone() const override { return std::make_unique<App4>(*this); }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<App4>(h1_, h2_, l_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    AffineExpr bound = lin_;
    if (slack_index >= 0) bound.add(slack_index, 1.);
    for (ConicBlock& blk : quad_epigraph(h2_, bound)) {
      blk.relaxable = relaxable;
      out.push_back(std::move(blk));
    }
  }

  double value(const Eigen::VectorXd& x) const override {
    return eval_head(h2_, x) - lin_.eval(x);
  }
  double target(const Eigen::VectorXd& x) const override {
    return eval_head(h2_, x) - eval_head(h1_, x) / l_.eval(x);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  QuadraticForm h1_, h2_;
  BoundRef l_;
  Eigen::VectorXd anchor_;
  AffineExpr lin_;
};

class App5 : public Surrogate {
 public:
  App5(QuadraticForm h1, int l_index, int z_index, Eigen::VectorXd anchor)
      : h1_(std::move(h1)), l_(l_index), z_(z_index), anchor_(std::move(anchor)) {
    // hbar = (l - z)^2 + 4 h1(x), linearized at the anchor.
    const int d = h1_.dim();
    const Eigen::VectorXd xa = anchor_.head(d);
    const double la = anchor_(l_), za = anchor_(z_);
    const double diff = la - za;
    const Eigen::VectorXd gx = 4. * h1_.gradient(xa);
    lin_ = AffineExpr::of_constant(diff * diff + 4. * h1_.value(xa) - gx.dot(xa));
    for (int j = 0; j < d; ++j) lin_.add(j, gx(j));
    lin_.add(l_, 2. * diff);
    lin_.constant -= 2. * diff * la;
    lin_.add(z_, -2. * diff);
    lin_.constant += 2. * diff * za;
  }

  std::unique_ptr<Surrogate> clone() const override { return std::make_unique<App5>(*this); }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<App5>(h1_, l_, z_, x);
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
    blk.rows.push_back(AffineExpr::of_constant(0.5));
    blk.rows.push_back(AffineExpr::of_variable(l_, 1.).add(z_, 1.));
    out.push_back(std::move(blk));
  }

  double value(const Eigen::VectorXd& x) const override {
    const double sum = x(l_) + x(z_);
    return sum * sum - lin_.eval(x);
  }
  double target(const Eigen::VectorXd& x) const override {
    return 4. * x(l_) * x(z_) - 4. * eval_head(h1_, x);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  QuadraticForm h1_;
  int l_, z_;
  Eigen::VectorXd anchor_;
  AffineExpr lin_;
};

class App6 : public Surrogate {
 public:
  App6(QuadraticForm h1, QuadraticForm h2, int u_index, Eigen::VectorXd anchor)
      : h1_(std::move(h1)), h2_(std::move(h2)), u_(u_index), anchor_(std::move(anchor)),
        sos_(h1_.sos_form()) {
    if (!(anchor_(u_) > 0.)) throw std::domain_error("app6: anchor needs u > 0");
    lin_ = head_linearization(h2_, anchor_);
  }

  std::unique_ptr<Surrogate> clone() const override { return std::make_unique<App6>(*this); }
  std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const override {
    auto s = std::make_unique<App6>(h1_, h2_, u_, x);
    s->relaxable = relaxable;
    return s;
  }

  void emit(std::vector<ConicBlock>& out, int slack_index) const override {
    // h1(x) <= u (lin + slack), a rotated cone in (u, lin, sos rows of h1).
    ConicBlock blk;
    blk.cone = Cone::RotatedSoc;
    blk.relaxable = relaxable;
    blk.rows.push_back(AffineExpr::of_variable(u_, 1.));
    AffineExpr mid = lin_;
    if (slack_index >= 0) mid.add(slack_index, 1.);
    mid *= 0.5;
    blk.rows.push_back(std::move(mid));
    for (AffineExpr& row : factor_rows_of(sos_)) blk.rows.push_back(std::move(row));
    blk.rows.push_back(AffineExpr::of_constant(std::sqrt(sos_.constant)));
    out.push_back(std::move(blk));
  }

  double value(const Eigen::VectorXd& x) const override {
    return eval_head(h1_, x) / x(u_) - lin_.eval(x);
  }
  double target(const Eigen::VectorXd& x) const override {
    return eval_head(h1_, x) / x(u_) - eval_head(h2_, x);
  }
  const Eigen::VectorXd& anchor() const override { return anchor_; }

 private:
  QuadraticForm h1_, h2_;
  int u_;
  Eigen::VectorXd anchor_;
  QuadraticForm::SosForm sos_;
  AffineExpr lin_;
};

}  // namespace

std::unique_ptr<Surrogate> app1(const QuadraticForm& h1, const QuadraticForm& h2,
                                int l_index, const Eigen::VectorXd& anchor) {
  require_affine(h1, "app1 h1");
  require_affine(h2, "app1 h2");
  return std::make_unique<App1>(h1, h2, l_index, anchor);
}

std::unique_ptr<Surrogate> app2(const QuadraticForm& h1, const QuadraticForm& h2,
                                int l_index, const Eigen::VectorXd& anchor) {
  require_affine(h1, "app2 h1");
  require_affine(h2, "app2 h2");
  return std::make_unique<App2>(h1, h2, l_index, anchor);
}

std::unique_ptr<Surrogate> app3(const QuadraticForm& h1, const QuadraticForm& h2,
                                int u_index, int z_index, const Eigen::VectorXd& anchor) {
  require_affine(h1, "app3 h1");
  require_affine(h2, "app3 h2");
  return std::make_unique<App3>(h1, h2, u_index, z_index, anchor);
}

std::unique_ptr<Surrogate> app4(const QuadraticForm& h1, const QuadraticForm& h2,
                                BoundRef l, const Eigen::VectorXd& anchor) {
  require_quadratic(h1, "app4 h1");
  require_quadratic(h2, "app4 h2");
  return std::make_unique<App4>(h1, h2, l, anchor);
}

std::unique_ptr<Surrogate> app5(const QuadraticForm& h1, int l_index, int z_index,
                                const Eigen::VectorXd& anchor) {
  require_quadratic(h1, "app5 h1");
  return std::make_unique<App5>(h1, l_index, z_index, anchor);
}

std::unique_ptr<Surrogate> app6(const QuadraticForm& h1, const QuadraticForm& h2,
                                int u_index, const Eigen::VectorXd& anchor) {
  require_quadratic(h1, "app6 h1");
  require_quadratic(h2, "app6 h2");
  return std::make_unique<App6>(h1, h2, u_index, anchor);
}

ConditionReport verify_conditions(const Surrogate& s,
                                  const std::function<double(const Eigen::VectorXd&)>& f,
                                  const std::vector<Eigen::VectorXd>& samples) {
  ConditionReport report;
  for (const Eigen::VectorXd& x : samples) {
    report.max_upper_violation = std::max(report.max_upper_violation, f(x) - s.value(x));
  }
  const Eigen::VectorXd& y = s.anchor();
  report.anchor_gap = std::abs(f(y) - s.value(y));

  Eigen::VectorXd xp = y, xm = y;
  for (int j = 0; j < y.size(); ++j) {
    const double h = 1e-5 * std::max(1., std::abs(y(j)));
    xp(j) = y(j) + h;
    xm(j) = y(j) - h;
    const double df = (f(xp) - f(xm)) / (2. * h);
    const double dF = (s.value(xp) - s.value(xm)) / (2. * h);
    report.max_gradient_mismatch =
        std::max(report.max_gradient_mismatch, std::abs(df - dF));
    xp(j) = y(j);
    xm(j) = y(j);
  }
  return report;
}

ConditionReport verify_conditions(const Surrogate& s,
                                  const std::vector<Eigen::VectorXd>& samples) {
  return verify_conditions(
      s, [&s](const Eigen::VectorXd& x) { return s.target(x); }, samples);
}

}  // namespace scopt
