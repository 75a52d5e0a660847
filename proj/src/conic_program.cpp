#include "scopt/conic_program.hpp"

#include <cmath>
#include <stdexcept>

namespace scopt {

AffineExpr AffineExpr::of_constant(double c) {
  AffineExpr e;
  e.constant = c;
  return e;
}

AffineExpr AffineExpr::of_variable(int index, double coeff, double c) {
  AffineExpr e;
  e.terms.emplace_back(index, coeff);
  e.constant = c;
  return e;
}

AffineExpr& AffineExpr::add(int index, double coeff) {
  if (coeff != 0.) terms.emplace_back(index, coeff);
  return *this;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  constant += other.constant;
  return *this;
}

AffineExpr& AffineExpr::operator*=(double s) {
  for (auto& [i, v] : terms) v *= s;
  constant *= s;
  return *this;
}

double AffineExpr::eval(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& [i, coeff] : terms) v += coeff * x(i);
  return v;
}

int AffineExpr::max_index() const {
  int m = -1;
  for (const auto& [i, coeff] : terms) m = std::max(m, i);
  return m;
}

namespace {

double soc_violation(const Eigen::VectorXd& r) {
  return std::max(0., r.tail(r.size() - 1).norm() - r(0));
}

}  // namespace

double block_violation(const ConicBlock& block, const Eigen::VectorXd& x) {
  Eigen::VectorXd r(block.dim());
  for (int i = 0; i < block.dim(); ++i) r(i) = block.rows[i].eval(x);
  switch (block.cone) {
    case Cone::Zero:
      return r.lpNorm<Eigen::Infinity>();
    case Cone::Nonneg:
      return std::max(0., -r.minCoeff());
    case Cone::Soc:
      return soc_violation(r);
    case Cone::RotatedSoc: {
      Eigen::VectorXd q = r;
      const double inv_sqrt2 = 1. / std::sqrt(2.);
      q(0) = (r(0) + r(1)) * inv_sqrt2;
      q(1) = (r(0) - r(1)) * inv_sqrt2;
      return soc_violation(q);
    }
  }
  return 0.;
}

ConicProgram::ConicProgram(int num_vars) : num_vars_(num_vars) {
  if (num_vars <= 0) throw std::invalid_argument("ConicProgram: num_vars must be positive");
  c_ = Eigen::VectorXd::Zero(num_vars);
}

void ConicProgram::set_objective(const Eigen::VectorXd& c) {
  if (c.size() != num_vars_) throw std::invalid_argument("objective dimension mismatch");
  c_ = c;
}

void ConicProgram::add_objective_term(int index, double coeff) {
  if (index < 0 || index >= num_vars_) throw std::invalid_argument("objective index out of range");
  c_(index) += coeff;
}

void ConicProgram::check_block(const ConicBlock& block) const {
  if (block.rows.empty()) throw std::invalid_argument("empty conic block");
  if (block.cone == Cone::Soc && block.dim() < 2) {
    throw std::invalid_argument("second-order block needs dimension >= 2");
  }
  if (block.cone == Cone::RotatedSoc && block.dim() < 3) {
    throw std::invalid_argument("rotated second-order block needs dimension >= 3");
  }
  for (const AffineExpr& row : block.rows) {
    if (row.max_index() >= num_vars_) {
      throw std::invalid_argument("block row references an unknown variable");
    }
  }
}

void ConicProgram::add_block(ConicBlock block) {
  check_block(block);
  blocks_.push_back(std::move(block));
}

double ConicProgram::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.;
  for (const ConicBlock& b : blocks_) worst = std::max(worst, block_violation(b, x));
  return worst;
}

AffineExpr affine_row_of(const QuadraticForm& affine, int offset) {
  if (affine.is_complex()) throw std::invalid_argument("affine_row_of: complex form");
  if (!affine.is_affine()) throw std::invalid_argument("affine_row_of: form has a quadratic part");
  AffineExpr e;
  e.constant = affine.constant();
  const Eigen::VectorXd& b = affine.linear();
  for (int j = 0; j < b.size(); ++j) e.add(offset + j, 2. * b(j));
  return e;
}

std::vector<AffineExpr> factor_rows_of(const QuadraticForm& quad, int offset) {
  if (quad.is_complex()) throw std::invalid_argument("factor_rows_of: complex form");
  std::vector<AffineExpr> rows;
  const Eigen::MatrixXd& f = quad.factor();
  rows.reserve(f.rows());
  for (int i = 0; i < f.rows(); ++i) {
    AffineExpr e;
    for (int j = 0; j < f.cols(); ++j) e.add(offset + j, f(i, j));
    rows.push_back(std::move(e));
  }
  return rows;
}

std::vector<AffineExpr> factor_rows_of(const QuadraticForm::SosForm& sos, int offset) {
  std::vector<AffineExpr> rows;
  rows.reserve(sos.rows.rows());
  for (int i = 0; i < sos.rows.rows(); ++i) {
    AffineExpr e;
    for (int j = 0; j < sos.rows.cols(); ++j) e.add(offset + j, sos.rows(i, j));
    e.constant = sos.offset(i);
    rows.push_back(std::move(e));
  }
  return rows;
}

AffineExpr linearization_of(const QuadraticForm& quad, const Eigen::VectorXd& anchor,
                            int offset) {
  if (quad.is_complex()) throw std::invalid_argument("linearization_of: complex form");
  if (anchor.size() != quad.dim()) throw std::invalid_argument("linearization anchor dimension");
  const Eigen::VectorXd g = quad.gradient(anchor);
  AffineExpr e;
  e.constant = quad.value(anchor) - g.dot(anchor);
  for (int j = 0; j < g.size(); ++j) e.add(offset + j, g(j));
  return e;
}

std::vector<ConicBlock> quad_epigraph(const QuadraticForm& quad, const AffineExpr& bound,
                                      int offset) {
  if (quad.is_complex()) throw std::invalid_argument("quad_epigraph: embed the form first");
  std::vector<ConicBlock> out;

  // bound - 2b'x - c, the slack left for the squared part.
  AffineExpr head = bound;
  const Eigen::VectorXd& b = quad.linear();
  for (int j = 0; j < b.size(); ++j) head.add(offset + j, -2. * b(j));
  head.constant -= quad.constant();

  if (quad.is_affine()) {
    ConicBlock blk;
    blk.cone = Cone::Nonneg;
    blk.rows.push_back(std::move(head));
    out.push_back(std::move(blk));
    return out;
  }

  ConicBlock blk;
  blk.cone = Cone::RotatedSoc;
  blk.rows.push_back(std::move(head));
  blk.rows.push_back(AffineExpr::of_constant(0.5));
  for (AffineExpr& row : factor_rows_of(quad, offset)) blk.rows.push_back(std::move(row));
  out.push_back(std::move(blk));
  return out;
}

}  // namespace scopt
