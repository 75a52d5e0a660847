#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "scopt/conic_program.hpp"
#include "scopt/quadratic_form.hpp"

namespace scopt {

/// Lower/upper limit of a ratio constraint: a program variable or a constant.
struct BoundRef {
  int index = -1;
  double constant = 0.;

  static BoundRef variable(int i) { return {i, 0.}; }
  static BoundRef fixed(double c) { return {-1, c}; }
  bool is_variable() const { return index >= 0; }
  double eval(const Eigen::VectorXd& x) const {
    return is_variable() ? x(index) : constant;
  }
};

/// Convex upper estimate F(x; y) of a nonconvex f(x), cone-representable for
/// any valid anchor y, tight and gradient-matched at y. Instances are
/// immutable once anchored; reanchored() builds a fresh surrogate at the new
/// point (the update map g).
class Surrogate {
 public:
  virtual ~Surrogate() = default;

  virtual std::unique_ptr<Surrogate> clone() const = 0;
  virtual std::unique_ptr<Surrogate> reanchored(const Eigen::VectorXd& x) const = 0;

  /// Appends the cone blocks of F(x; anchor) <= 0. With slack_index >= 0 the
  /// blocks encode the relaxed constraint F(x; anchor) <= x[slack_index].
  virtual void emit(std::vector<ConicBlock>& out, int slack_index = -1) const = 0;

  virtual double value(const Eigen::VectorXd& x) const = 0;   // F(x; anchor)
  virtual double target(const Eigen::VectorXd& x) const = 0;  // f(x)
  virtual const Eigen::VectorXd& anchor() const = 0;

  bool relaxable = true;
};

/// The six upper-bound constructors for l <= h1(x)/h2(x) <= u with l, h1, h2
/// positive. Affine/quadratic requirements on h1, h2 are checked at build
/// time; all forms are real-domain (embed complex forms first) and act on
/// x.head(h.dim()). Anchors are full-length iterate vectors.
///
/// app1: affine h1, h2; variable l.  F = (y/2) l^2 + h2(x)^2/(2y) - h1(x),
///       y = h2/l at the anchor. One rotated second-order block.
std::unique_ptr<Surrogate> app1(const QuadraticForm& h1, const QuadraticForm& h2,
                                int l_index, const Eigen::VectorXd& anchor);
/// app2: affine h1, h2; variable l. Difference-of-squares split of l*h2 with
///       the concave part linearized at the anchor.
std::unique_ptr<Surrogate> app2(const QuadraticForm& h1, const QuadraticForm& h2,
                                int l_index, const Eigen::VectorXd& anchor);
/// app3: affine h1, h2; variable u, auxiliary slack z coupled by h2(x) z >= 1.
///       F = (y/2) h1(x)^2 + h2(x)^-2/(2y) - u, y = 1/(h1 h2) at the anchor.
std::unique_ptr<Surrogate> app3(const QuadraticForm& h1, const QuadraticForm& h2,
                                int u_index, int z_index, const Eigen::VectorXd& anchor);
/// app4: convex quadratic h1, h2; lower limit l (variable or constant).
///       h1(x)/l is jointly convex and linearized at the anchor.
std::unique_ptr<Surrogate> app4(const QuadraticForm& h1, const QuadraticForm& h2,
                                BoundRef l, const Eigen::VectorXd& anchor);
/// app5: convex quadratic h1; variable l and slack z (caller pairs with
///       h2(x) <= z). Bounds l z <= h1(x) through the identity
///       4 l z = (l+z)^2 - (l-z)^2 with the concave part linearized.
std::unique_ptr<Surrogate> app5(const QuadraticForm& h1, int l_index, int z_index,
                                const Eigen::VectorXd& anchor);
/// app6: convex quadratic h1, h2; variable u. h2 linearized at the anchor,
///       h1(x)/u <= affine kept exactly as one rotated second-order block.
std::unique_ptr<Surrogate> app6(const QuadraticForm& h1, const QuadraticForm& h2,
                                int u_index, const Eigen::VectorXd& anchor);

struct ConditionReport {
  double max_upper_violation = 0.;    // max over samples of f - F, clamped at 0
  double anchor_gap = 0.;             // |f(y) - F(y; y)|
  double max_gradient_mismatch = 0.;  // ||grad f(y) - grad F(y; y)||_inf
};

/// Numerical check of the three validity conditions: upper bound over the
/// samples, tightness at the anchor, and gradient match at the anchor by
/// central finite differences (relative step 1e-5). Samples must lie in the
/// domain (positivity of the forms involved).
ConditionReport verify_conditions(const Surrogate& s,
                                  const std::function<double(const Eigen::VectorXd&)>& f,
                                  const std::vector<Eigen::VectorXd>& samples);
ConditionReport verify_conditions(const Surrogate& s,
                                  const std::vector<Eigen::VectorXd>& samples);

}  // namespace scopt
