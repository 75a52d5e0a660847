#pragma once

#include <Eigen/Dense>
#include <complex>

namespace scopt {

/// Convex quadratic function stored through its PSD factor:
///
///   real domain:     h(x) = ||F x||^2 + 2 b'x + c,        x in R^n
///   complex domain:  h(x) = ||F x||^2 + 2 Re(b^H x) + c,  x in C^n
///
/// The Gram matrix A = F^H F is positive semidefinite by construction and is
/// never assembled; application code supplies the factor rows directly (e.g.
/// a rank-1 form keeps a single row). Affine functions are the k = 0 case.
class QuadraticForm {
 public:
  enum class Domain { Real, Complex };

  /// Empty zero form; placeholder until assigned.
  QuadraticForm() = default;

  static QuadraticForm real(Eigen::MatrixXd factor, Eigen::VectorXd linear,
                            double constant);
  static QuadraticForm real_affine(Eigen::VectorXd linear, double constant);
  static QuadraticForm complex(Eigen::MatrixXcd factor, Eigen::VectorXcd linear,
                               double constant);
  static QuadraticForm complex_affine(Eigen::VectorXcd linear, double constant);

  Domain domain() const { return domain_; }
  bool is_complex() const { return domain_ == Domain::Complex; }
  bool is_affine() const { return factor_rows() == 0; }
  int dim() const;
  int factor_rows() const;
  double constant() const { return c_; }

  const Eigen::MatrixXd& factor() const;
  const Eigen::VectorXd& linear() const;
  const Eigen::MatrixXcd& complex_factor() const;
  const Eigen::VectorXcd& complex_linear() const;

  double value(const Eigen::VectorXd& x) const;
  double value(const Eigen::VectorXcd& x) const;

  /// Real-domain gradient 2(Ax + b).
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// Conjugate gradient Ax + b of a complex-domain form.
  Eigen::VectorXcd conjugate_gradient(const Eigen::VectorXcd& x) const;

  /// Real embedding of a complex form under the stacking rho(x) = [Re x; Im x].
  /// Values agree: h(x) = h_embedded(rho(x)) for all x.
  QuadraticForm embedded() const;

  /// Sum-of-squares completion h(x) = ||F x + g||^2 + c0 with c0 >= 0.
  /// Exists exactly when h is bounded below by a nonnegative value over R^n,
  /// which holds for every positive form used here. Throws std::domain_error
  /// when the linear term is not representable or the residual constant is
  /// negative beyond round-off.
  struct SosForm {
    Eigen::MatrixXd rows;    // F
    Eigen::VectorXd offset;  // g
    double constant;         // c0, clamped at 0 when within round-off
  };
  SosForm sos_form() const;

 private:
  Domain domain_ = Domain::Real;
  Eigen::MatrixXd f_re_;
  Eigen::VectorXd b_re_;
  Eigen::MatrixXcd f_cx_;
  Eigen::VectorXcd b_cx_;
  double c_ = 0.;
};

/// Real embedding of a complex-domain form, variable layout [Re x; Im x].
QuadraticForm embed_complex(const QuadraticForm& quad);

}  // namespace scopt
