#pragma once

#include <Eigen/Dense>
#include <vector>

#include "scopt/quadratic_form.hpp"

namespace scopt {

enum class Cone { Zero, Nonneg, Soc, RotatedSoc };

/// One affine row over the program variables: value = sum coeff*x[idx] + constant.
struct AffineExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.;

  static AffineExpr of_constant(double c);
  static AffineExpr of_variable(int index, double coeff = 1., double c = 0.);

  AffineExpr& add(int index, double coeff);
  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator*=(double s);
  double eval(const Eigen::VectorXd& x) const;
  int max_index() const;
};

/// Block of affine rows r(x) constrained to a cone:
///   Zero        r(x) = 0
///   Nonneg      r(x) >= 0 componentwise
///   Soc         r0 >= ||r_1:||
///   RotatedSoc  2 r0 r1 >= ||r_2:||^2, r0 >= 0, r1 >= 0
struct ConicBlock {
  Cone cone = Cone::Nonneg;
  std::vector<AffineExpr> rows;
  bool relaxable = true;  // eligible for the feasibility slack in relaxed solves

  int dim() const { return static_cast<int>(rows.size()); }
};

/// 0 when r(x) is in the cone, otherwise a norm-scale distance measure.
/// Rotated cones are measured through their orthogonal second-order rewrite so
/// every cone reports on the same scale.
double block_violation(const ConicBlock& block, const Eigen::VectorXd& x);

/// Linear objective over cone-constrained affine blocks: minimize c'x.
class ConicProgram {
 public:
  explicit ConicProgram(int num_vars);

  int num_vars() const { return num_vars_; }
  const Eigen::VectorXd& objective() const { return c_; }
  void set_objective(const Eigen::VectorXd& c);
  void add_objective_term(int index, double coeff);

  void add_block(ConicBlock block);
  const std::vector<ConicBlock>& blocks() const { return blocks_; }

  double max_violation(const Eigen::VectorXd& x) const;

 private:
  void check_block(const ConicBlock& block) const;

  int num_vars_;
  Eigen::VectorXd c_;
  std::vector<ConicBlock> blocks_;
};

/// Affine row helpers for quadratic forms (real domain, variables occupying
/// program columns [offset, offset + quad.dim())).
AffineExpr affine_row_of(const QuadraticForm& affine, int offset = 0);
std::vector<AffineExpr> factor_rows_of(const QuadraticForm& quad, int offset = 0);
std::vector<AffineExpr> factor_rows_of(const QuadraticForm::SosForm& sos, int offset = 0);
/// First-order model of quad at the anchor: h(y) + grad(y)'(x - y).
AffineExpr linearization_of(const QuadraticForm& quad, const Eigen::VectorXd& anchor,
                            int offset = 0);

/// Blocks encoding h(x) <= bound for a real-domain convex quadratic h whose
/// variables occupy columns [offset, offset + h.dim()). A quadratic h yields
/// one rotated second-order block; an affine h degenerates to one nonneg row.
/// Feasible at (x, bound value) exactly when h(x) <= bound(x).
std::vector<ConicBlock> quad_epigraph(const QuadraticForm& quad, const AffineExpr& bound,
                                      int offset = 0);

}  // namespace scopt
