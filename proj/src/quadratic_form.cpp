#include "scopt/quadratic_form.hpp"

#include <stdexcept>

namespace scopt {

QuadraticForm QuadraticForm::real(Eigen::MatrixXd factor, Eigen::VectorXd linear,
                                  double constant) {
  if (factor.size() > 0 && factor.cols() != linear.size()) {
    throw std::invalid_argument("QuadraticForm: factor/linear dimension mismatch");
  }
  QuadraticForm q;
  q.domain_ = Domain::Real;
  q.f_re_ = std::move(factor);
  q.b_re_ = std::move(linear);
  q.c_ = constant;
  return q;
}

QuadraticForm QuadraticForm::real_affine(Eigen::VectorXd linear, double constant) {
  return real(Eigen::MatrixXd(0, linear.size()), std::move(linear), constant);
}

QuadraticForm QuadraticForm::complex(Eigen::MatrixXcd factor, Eigen::VectorXcd linear,
                                     double constant) {
  if (factor.size() > 0 && factor.cols() != linear.size()) {
    throw std::invalid_argument("QuadraticForm: factor/linear dimension mismatch");
  }
  QuadraticForm q;
  q.domain_ = Domain::Complex;
  q.f_cx_ = std::move(factor);
  q.b_cx_ = std::move(linear);
  q.c_ = constant;
  return q;
}

QuadraticForm QuadraticForm::complex_affine(Eigen::VectorXcd linear, double constant) {
  return complex(Eigen::MatrixXcd(0, linear.size()), std::move(linear), constant);
}

int QuadraticForm::dim() const {
  return is_complex() ? static_cast<int>(b_cx_.size()) : static_cast<int>(b_re_.size());
}

int QuadraticForm::factor_rows() const {
  return is_complex() ? static_cast<int>(f_cx_.rows()) : static_cast<int>(f_re_.rows());
}

const Eigen::MatrixXd& QuadraticForm::factor() const {
  if (is_complex()) throw std::logic_error("real factor of a complex form");
  return f_re_;
}

const Eigen::VectorXd& QuadraticForm::linear() const {
  if (is_complex()) throw std::logic_error("real linear term of a complex form");
  return b_re_;
}

const Eigen::MatrixXcd& QuadraticForm::complex_factor() const {
  if (!is_complex()) throw std::logic_error("complex factor of a real form");
  return f_cx_;
}

const Eigen::VectorXcd& QuadraticForm::complex_linear() const {
  if (!is_complex()) throw std::logic_error("complex linear term of a real form");
  return b_cx_;
}

double QuadraticForm::value(const Eigen::VectorXd& x) const {
  if (is_complex()) throw std::logic_error("real evaluation of a complex form");
  double v = 2. * b_re_.dot(x) + c_;
  if (f_re_.rows() > 0) v += (f_re_ * x).squaredNorm();
  return v;
}

double QuadraticForm::value(const Eigen::VectorXcd& x) const {
  if (!is_complex()) throw std::logic_error("complex evaluation of a real form");
  double v = 2. * b_cx_.dot(x).real() + c_;
  if (f_cx_.rows() > 0) v += (f_cx_ * x).squaredNorm();
  return v;
}

Eigen::VectorXd QuadraticForm::gradient(const Eigen::VectorXd& x) const {
  if (is_complex()) throw std::logic_error("real gradient of a complex form");
  Eigen::VectorXd g = b_re_;
  if (f_re_.rows() > 0) g += f_re_.transpose() * (f_re_ * x);
  return 2. * g;
}

Eigen::VectorXcd QuadraticForm::conjugate_gradient(const Eigen::VectorXcd& x) const {
  if (!is_complex()) throw std::logic_error("conjugate gradient of a real form");
  Eigen::VectorXcd g = b_cx_;
  if (f_cx_.rows() > 0) g += f_cx_.adjoint() * (f_cx_ * x);
  return g;
}

QuadraticForm QuadraticForm::embedded() const {
  if (!is_complex()) throw std::logic_error("embedding a real form");
  const int n = dim();
  const int k = factor_rows();
  Eigen::MatrixXd f(2 * k, 2 * n);
  if (k > 0) {
    f.topLeftCorner(k, n) = f_cx_.real();
    f.topRightCorner(k, n) = -f_cx_.imag();
    f.bottomLeftCorner(k, n) = f_cx_.imag();
    f.bottomRightCorner(k, n) = f_cx_.real();
  }
  Eigen::VectorXd b(2 * n);
  b << b_cx_.real(), b_cx_.imag();
  return real(std::move(f), std::move(b), c_);
}

QuadraticForm::SosForm QuadraticForm::sos_form() const {
  if (is_complex()) throw std::logic_error("sos_form of a complex form");
  SosForm s;
  s.rows = f_re_;
  s.offset = Eigen::VectorXd::Zero(f_re_.rows());
  s.constant = c_;
  if (b_re_.lpNorm<Eigen::Infinity>() > 0.) {
    if (f_re_.rows() == 0) {
      throw std::domain_error("sos_form: affine form with nonzero slope is unbounded below");
    }
    // ||Fx + g||^2 expands the cross term to 2 (F'g)'x, so F'g = b must hold.
    Eigen::VectorXd g = f_re_.transpose()
                            .colPivHouseholderQr()
                            .solve(b_re_);
    const double resid = (f_re_.transpose() * g - b_re_).lpNorm<Eigen::Infinity>();
    const double scale = 1. + b_re_.lpNorm<Eigen::Infinity>();
    if (resid > 1e-9 * scale) {
      throw std::domain_error("sos_form: linear term outside the factor row space");
    }
    s.offset = g;
    s.constant = c_ - g.squaredNorm();
  }
  if (s.constant < 0.) {
    if (s.constant < -1e-9 * (1. + std::abs(c_))) {
      throw std::domain_error("sos_form: form is negative at its minimizer");
    }
    s.constant = 0.;
  }
  return s;
}

QuadraticForm embed_complex(const QuadraticForm& quad) { return quad.embedded(); }

}  // namespace scopt
