#ifndef ACM_EXPR_HPP
#define ACM_EXPR_HPP

#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acm/jet.hpp"

namespace acm {

/// Ordered, shared list of chart coordinate names.
class Coordinates {
 public:
  Coordinates() : names_(std::make_shared<const std::vector<std::string>>()) {}
  explicit Coordinates(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_->size()); }
  const std::string& operator[](int i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }
  /// -1 when absent.
  int index_of(std::string_view name) const;

  friend bool operator==(const Coordinates& a, const Coordinates& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> x) : x_(std::move(x)) {}
  Point(std::initializer_list<double> x) : x_(x) {}

  int dim() const { return static_cast<int>(x_.size()); }
  double operator[](int i) const { return x_[i]; }
  double& operator[](int i) { return x_[i]; }
  std::span<const double> coords() const { return x_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> x_;
};

namespace expr {

enum class Op { constant, variable, neg, add, sub, mul, div, pow, sin, cos, exp, ln, sqrt };

struct Node {
  Op op = Op::constant;
  double value = 0.0;  // constant
  int index = -1;      // variable
  int exponent = 0;    // pow
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

}  // namespace expr

/// Arithmetic expression over the coordinates of a chart.
///
/// Immutable; copies share the tree, and evaluation is re-entrant.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(std::shared_ptr<const expr::Node> root, Coordinates coords)
      : root_(std::move(root)), coords_(std::move(coords)) {}

  static ScalarField constant(double c, const Coordinates& coords);
  static ScalarField variable(int index, const Coordinates& coords);

  const expr::Node& root() const { return *root_; }
  const Coordinates& coordinates() const { return coords_; }
  int dim() const { return coords_.size(); }

  /// True for a literal constant node.
  bool is_constant() const { return root_->op == expr::Op::constant; }
  bool is_zero() const { return is_constant() && root_->value == 0.0; }

  /// Indices of referenced coordinates, ascending.
  std::vector<int> free_variables() const;

  /// Re-parseable text form.
  std::string to_string() const;

  double evaluate(const Point& p) const;
  Jet evaluate_jet(const Point& p) const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);

 private:
  std::shared_ptr<const expr::Node> root_;
  Coordinates coords_;
};

ScalarField parse(std::string_view text, const Coordinates& coords);

inline Jet evaluate_jet(const ScalarField& f, const Point& p) { return f.evaluate_jet(p); }

}  // namespace acm

#endif  // ACM_EXPR_HPP
