#ifndef ACM_JET_HPP
#define ACM_JET_HPP

#include <vector>

#include <Eigen/Dense>

namespace acm {

/// First-order jet of a scalar: value and coordinate gradient at a point.
///
/// Derived quantities (ω, ψ, Christoffel symbols of the internal connection)
/// are carried as Duals so that one further frame derivative can be taken
/// without a third-order expansion of the inputs.
class Dual {
 public:
  Dual() = default;
  Dual(double value, Eigen::VectorXd grad) : value_(value), grad_(std::move(grad)) {}

  static Dual constant(double c, int dim) { return {c, Eigen::VectorXd::Zero(dim)}; }

  double value() const { return value_; }
  const Eigen::VectorXd& grad() const { return grad_; }
  double d(int i) const { return grad_[i]; }
  int dim() const { return static_cast<int>(grad_.size()); }

  Dual& operator+=(const Dual& o) {
    value_ += o.value_;
    grad_ += o.grad_;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value_ -= o.value_;
    grad_ -= o.grad_;
    return *this;
  }
  Dual& operator*=(double s) {
    value_ *= s;
    grad_ *= s;
    return *this;
  }

 private:
  double value_ = 0.0;
  Eigen::VectorXd grad_;
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator-(const Dual& a) { return {-a.value(), -a.grad()}; }
inline Dual operator*(Dual a, double s) { return a *= s; }
inline Dual operator*(double s, Dual a) { return a *= s; }
inline Dual operator*(const Dual& a, const Dual& b) {
  return {a.value() * b.value(), a.value() * b.grad() + b.value() * a.grad()};
}

/// Second-order jet: value, gradient and (exactly symmetric) Hessian.
class Jet {
 public:
  Jet() = default;
  Jet(double value, Eigen::VectorXd grad, Eigen::MatrixXd hess)
      : value_(value), grad_(std::move(grad)), hess_(std::move(hess)) {}

  static Jet constant(double c, int dim);
  static Jet variable(int index, double x, int dim);

  double value() const { return value_; }
  const Eigen::VectorXd& grad() const { return grad_; }
  const Eigen::MatrixXd& hess() const { return hess_; }
  int dim() const { return static_cast<int>(grad_.size()); }

  /// ∂_i of this jet, one order lower.
  Dual d(int i) const { return {grad_[i], hess_.row(i).transpose()}; }
  Dual to_dual() const { return {value_, grad_}; }

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

  /// Composition with a scalar function given f(u), f'(u), f''(u).
  Jet compose(double f, double df, double d2f) const;

 private:
  double value_ = 0.0;
  Eigen::VectorXd grad_;
  Eigen::MatrixXd hess_;
};

/// Dense matrix of Duals; value() and partial(k) give the matrix and ∂_k of it.
class DualMatrix {
 public:
  DualMatrix() = default;
  DualMatrix(int rows, int cols, int dim)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), Dual::constant(0.0, dim)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Dual& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Dual& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }

  Eigen::MatrixXd value() const;
  Eigen::MatrixXd partial(int k) const;

  /// Throws SingularMetricError when the value is not invertible.
  DualMatrix inverse() const;

  friend DualMatrix operator*(const DualMatrix& a, const DualMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Dual> data_;
};

Jet pow(const Jet& u, int k);
Jet sin(const Jet& u);
Jet cos(const Jet& u);
Jet exp(const Jet& u);
Jet log(const Jet& u);
Jet sqrt(const Jet& u);

}  // namespace acm

#endif  // ACM_JET_HPP
