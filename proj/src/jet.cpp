#include "acm/jet.hpp"

#include <cmath>

#include "acm/error.hpp"

namespace acm {

namespace {

// Symmetric outer-product accumulation; (i,j) and (j,i) get bit-identical values.
void add_sym_outer(Eigen::MatrixXd& h, double s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto n = a.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = s * (a[i] * b[j] + a[j] * b[i]);
      h(i, j) += v;
      if (j != i) h(j, i) += v;
    }
  }
}

void add_sym_square(Eigen::MatrixXd& h, double s, const Eigen::VectorXd& a) {
  const auto n = a.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = s * (a[i] * a[j]);
      h(i, j) += v;
      if (j != i) h(j, i) += v;
    }
  }
}

}  // namespace

Jet Jet::constant(double c, int dim) {
  return {c, Eigen::VectorXd::Zero(dim), Eigen::MatrixXd::Zero(dim, dim)};
}

Jet Jet::variable(int index, double x, int dim) {
  Jet j = constant(x, dim);
  j.grad_[index] = 1.0;
  return j;
}

Jet operator+(const Jet& a, const Jet& b) {
  return {a.value_ + b.value_, a.grad_ + b.grad_, a.hess_ + b.hess_};
}

Jet operator-(const Jet& a, const Jet& b) {
  return {a.value_ - b.value_, a.grad_ - b.grad_, a.hess_ - b.hess_};
}

Jet operator-(const Jet& a) { return {-a.value_, -a.grad_, -a.hess_}; }

Jet operator*(const Jet& a, const Jet& b) {
  Eigen::MatrixXd h = a.value_ * b.hess_ + b.value_ * a.hess_;
  add_sym_outer(h, 1.0, a.grad_, b.grad_);
  return {a.value_ * b.value_, a.value_ * b.grad_ + b.value_ * a.grad_, std::move(h)};
}

Jet operator/(const Jet& a, const Jet& b) {
  if (b.value_ == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / b.value_;
  return a * b.compose(inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet Jet::compose(double f, double df, double d2f) const {
  Eigen::MatrixXd h = df * hess_;
  add_sym_square(h, d2f, grad_);
  return {f, df * grad_, std::move(h)};
}

Eigen::MatrixXd DualMatrix::value() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).value();
  }
  return m;
}

Eigen::MatrixXd DualMatrix::partial(int k) const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).d(k);
  }
  return m;
}

DualMatrix DualMatrix::inverse() const {
  if (rows_ != cols_) throw Error("inverse of a non-square matrix");
  const Eigen::MatrixXd v = value();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(v);
  if (!lu.isInvertible()) throw SingularMetricError("matrix is not invertible");
  const Eigen::MatrixXd inv = lu.inverse();
  const int dim = rows_ > 0 ? (*this)(0, 0).dim() : 0;
  std::vector<Eigen::MatrixXd> d(dim);
  for (int k = 0; k < dim; ++k) d[k] = -inv * partial(k) * inv;
  DualMatrix out(rows_, cols_, dim);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      Eigen::VectorXd g(dim);
      for (int k = 0; k < dim; ++k) g[k] = d[k](i, j);
      out(i, j) = Dual(inv(i, j), std::move(g));
    }
  }
  return out;
}

DualMatrix operator*(const DualMatrix& a, const DualMatrix& b) {
  if (a.cols_ != b.rows_) throw Error("matrix shape mismatch");
  const int dim = a.rows_ > 0 && a.cols_ > 0 ? a(0, 0).dim() : 0;
  DualMatrix out(a.rows_, b.cols_, dim);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      Dual acc = Dual::constant(0.0, dim);
      for (int k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  }
  return out;
}

Jet pow(const Jet& u, int k) {
  if (k == 0) return Jet::constant(1.0, u.dim());
  const double x = u.value();
  if (k < 0 && x == 0.0) throw DomainError("negative power of zero");
  const double f = std::pow(x, k);
  const double df = k * std::pow(x, k - 1);
  const double d2f = (k == 1) ? 0.0 : static_cast<double>(k) * (k - 1) * std::pow(x, k - 2);
  return u.compose(f, df, d2f);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose(s, c, -s);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.value()), c = std::cos(u.value());
  return u.compose(c, -s, -c);
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.value());
  return u.compose(e, e, e);
}

Jet log(const Jet& u) {
  const double x = u.value();
  if (!(x > 0.0)) throw DomainError("ln of non-positive value");
  return u.compose(std::log(x), 1.0 / x, -1.0 / (x * x));
}

Jet sqrt(const Jet& u) {
  const double x = u.value();
  if (x < 0.0) throw DomainError("sqrt of negative value");
  if (x == 0.0) throw DomainError("sqrt is not differentiable at zero");
  const double r = std::sqrt(x);
  return u.compose(r, 0.5 / r, -0.25 / (r * x));
}

}  // namespace acm
