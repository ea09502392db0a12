#include "acm/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "acm/error.hpp"

namespace acm {

using expr::Node;
using expr::Op;
using NodePtr = std::shared_ptr<const Node>;

Coordinates::Coordinates(std::vector<std::string> names)
    : names_(std::make_shared<const std::vector<std::string>>(std::move(names))) {}

int Coordinates::index_of(std::string_view name) const {
  for (int i = 0; i < size(); ++i) {
    if ((*names_)[i] == name) return i;
  }
  return -1;
}

namespace {

NodePtr make_constant(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::constant;
  n->value = c;
  return n;
}

NodePtr make_variable(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::variable;
  n->index = index;
  return n;
}

NodePtr make_unary(Op op, NodePtr child) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(child);
  return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_pow(NodePtr base, int exponent) {
  auto n = std::make_shared<Node>();
  n->op = Op::pow;
  n->lhs = std::move(base);
  n->exponent = exponent;
  return n;
}

struct FunctionName {
  std::string_view name;
  Op op;
};

constexpr FunctionName kFunctions[] = {
    {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp}, {"ln", Op::ln}, {"sqrt", Op::sqrt},
};

// Recursive-descent parser. Precedence, tightest first: ^ (right-assoc,
// integer constant exponent), unary minus, * /, + -.
class Parser {
 public:
  Parser(std::string_view text, const Coordinates& coords) : text_(text), coords_(coords) {}

  NodePtr parse() {
    NodePtr root = parse_sum();
    skip_space();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                   text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Op::add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(Op::sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Op::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(Op::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(Op::neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    NodePtr exponent = parse_unary();
    return make_pow(std::move(base), integer_exponent(*exponent, at));
  }

  int integer_exponent(const Node& e, std::size_t at) const {
    ScalarField f(std::shared_ptr<const Node>(std::shared_ptr<const Node>{}, &e), coords_);
    if (!f.free_variables().empty()) throw ParseError("exponent must be an integer constant", at);
    double v = 0.0;
    try {
      v = f.evaluate(Point(std::vector<double>(coords_.size(), 0.0)));
    } catch (const DomainError&) {
      throw ParseError("exponent must be an integer constant", at);
    }
    if (v != std::floor(v) || std::abs(v) > 1024) throw ParseError("exponent must be an integer constant", at);
    return static_cast<int>(v);
  }

  NodePtr parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_sum();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      const std::size_t s = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t count = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      count += digits();
    }
    if (count == 0) throw ParseError("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) pos_ = save;
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ParseError("malformed number", start);
    return make_constant(value);
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    const std::size_t after = pos_;
    for (const auto& fn : kFunctions) {
      if (fn.name == name && accept('(')) {
        NodePtr arg = parse_sum();
        if (!accept(')')) throw ParseError("expected ')'", pos_);
        return make_unary(fn.op, std::move(arg));
      }
    }
    pos_ = after;
    const int index = coords_.index_of(name);
    if (index < 0) throw UnknownIdentifierError(std::string(name), start);
    return make_variable(index);
  }

  std::string_view text_;
  const Coordinates& coords_;
  std::size_t pos_ = 0;
};

double eval_value(const Node& n, const Point& p) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return p[n.index];
    case Op::neg: return -eval_value(*n.lhs, p);
    case Op::add: return eval_value(*n.lhs, p) + eval_value(*n.rhs, p);
    case Op::sub: return eval_value(*n.lhs, p) - eval_value(*n.rhs, p);
    case Op::mul: return eval_value(*n.lhs, p) * eval_value(*n.rhs, p);
    case Op::div: {
      const double num = eval_value(*n.lhs, p);
      const double den = eval_value(*n.rhs, p);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Op::pow: {
      const double b = eval_value(*n.lhs, p);
      if (n.exponent < 0 && b == 0.0) throw DomainError("negative power of zero");
      return n.exponent == 0 ? 1.0 : std::pow(b, n.exponent);
    }
    case Op::sin: return std::sin(eval_value(*n.lhs, p));
    case Op::cos: return std::cos(eval_value(*n.lhs, p));
    case Op::exp: return std::exp(eval_value(*n.lhs, p));
    case Op::ln: {
      const double x = eval_value(*n.lhs, p);
      if (!(x > 0.0)) throw DomainError("ln of non-positive value");
      return std::log(x);
    }
    case Op::sqrt: {
      const double x = eval_value(*n.lhs, p);
      if (x < 0.0) throw DomainError("sqrt of negative value");
      return std::sqrt(x);
    }
  }
  return 0.0;
}

Jet eval_jet(const Node& n, const Point& p) {
  const int dim = p.dim();
  switch (n.op) {
    case Op::constant: return Jet::constant(n.value, dim);
    case Op::variable: return Jet::variable(n.index, p[n.index], dim);
    case Op::neg: return -eval_jet(*n.lhs, p);
    case Op::add: return eval_jet(*n.lhs, p) + eval_jet(*n.rhs, p);
    case Op::sub: return eval_jet(*n.lhs, p) - eval_jet(*n.rhs, p);
    case Op::mul: return eval_jet(*n.lhs, p) * eval_jet(*n.rhs, p);
    case Op::div: return eval_jet(*n.lhs, p) / eval_jet(*n.rhs, p);
    case Op::pow: return pow(eval_jet(*n.lhs, p), n.exponent);
    case Op::sin: return sin(eval_jet(*n.lhs, p));
    case Op::cos: return cos(eval_jet(*n.lhs, p));
    case Op::exp: return exp(eval_jet(*n.lhs, p));
    case Op::ln: return log(eval_jet(*n.lhs, p));
    case Op::sqrt: return sqrt(eval_jet(*n.lhs, p));
  }
  return Jet::constant(0.0, dim);
}

void collect_variables(const Node& n, std::set<int>& out) {
  if (n.op == Op::variable) out.insert(n.index);
  if (n.lhs) collect_variables(*n.lhs, out);
  if (n.rhs) collect_variables(*n.rhs, out);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print(const Node& n, const Coordinates& coords) {
  switch (n.op) {
    case Op::constant: {
      const std::string s = format_number(n.value);
      return n.value < 0.0 || std::signbit(n.value) ? "(" + s + ")" : s;
    }
    case Op::variable: return coords[n.index];
    case Op::neg: return "(-" + print(*n.lhs, coords) + ")";
    case Op::add: return "(" + print(*n.lhs, coords) + " + " + print(*n.rhs, coords) + ")";
    case Op::sub: return "(" + print(*n.lhs, coords) + " - " + print(*n.rhs, coords) + ")";
    case Op::mul: return "(" + print(*n.lhs, coords) + " * " + print(*n.rhs, coords) + ")";
    case Op::div: return "(" + print(*n.lhs, coords) + " / " + print(*n.rhs, coords) + ")";
    case Op::pow: return "(" + print(*n.lhs, coords) + "^(" + std::to_string(n.exponent) + "))";
    case Op::sin: return "sin(" + print(*n.lhs, coords) + ")";
    case Op::cos: return "cos(" + print(*n.lhs, coords) + ")";
    case Op::exp: return "exp(" + print(*n.lhs, coords) + ")";
    case Op::ln: return "ln(" + print(*n.lhs, coords) + ")";
    case Op::sqrt: return "sqrt(" + print(*n.lhs, coords) + ")";
  }
  return {};
}

void require_same_chart(const ScalarField& a, const ScalarField& b) {
  if (!(a.coordinates() == b.coordinates())) throw Error("scalar fields over different coordinate lists");
}

}  // namespace

ScalarField ScalarField::constant(double c, const Coordinates& coords) { return {make_constant(c), coords}; }

ScalarField ScalarField::variable(int index, const Coordinates& coords) {
  return {make_variable(index), coords};
}

std::vector<int> ScalarField::free_variables() const {
  std::set<int> vars;
  collect_variables(*root_, vars);
  return {vars.begin(), vars.end()};
}

std::string ScalarField::to_string() const { return print(*root_, coords_); }

double ScalarField::evaluate(const Point& p) const { return eval_value(*root_, p); }

Jet ScalarField::evaluate_jet(const Point& p) const { return eval_jet(*root_, p); }

// Composition folds literal constants so that assembled fields (products of
// frame-metric and endomorphism entries) do not grow trees of zeros.
ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_chart(a, b);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.root().value + b.root().value, a.coords_);
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return {make_binary(Op::add, a.root_, b.root_), a.coords_};
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_chart(a, b);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.root().value - b.root().value, a.coords_);
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  return {make_binary(Op::sub, a.root_, b.root_), a.coords_};
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_chart(a, b);
  if (a.is_constant() && b.is_constant()) return ScalarField::constant(a.root().value * b.root().value, a.coords_);
  if (a.is_zero() || b.is_zero()) return ScalarField::constant(0.0, a.coords_);
  if (a.is_constant() && a.root().value == 1.0) return b;
  if (b.is_constant() && b.root().value == 1.0) return a;
  return {make_binary(Op::mul, a.root_, b.root_), a.coords_};
}

ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  require_same_chart(a, b);
  if (b.is_zero()) throw DomainError("division by literal zero");
  if (a.is_zero()) return a;
  if (b.is_constant() && b.root().value == 1.0) return a;
  return {make_binary(Op::div, a.root_, b.root_), a.coords_};
}

ScalarField operator-(const ScalarField& a) {
  if (a.is_constant()) return ScalarField::constant(-a.root().value, a.coords_);
  return {make_unary(Op::neg, a.root_), a.coords_};
}

ScalarField parse(std::string_view text, const Coordinates& coords) {
  Parser parser(text, coords);
  return {parser.parse(), coords};
}

}  // namespace acm
