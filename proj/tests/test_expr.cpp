#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "acm/error.hpp"
#include "acm/expr.hpp"
#include "support.hpp"

namespace {

using acm::Jet;
using acm::Point;
using acm::test::xyzuv;

double fd_partial(const acm::ScalarField& f, Point p, int i, double h = 1e-4) {
  Point a = p, b = p;
  a[i] += h;
  b[i] -= h;
  return (f.evaluate(a) - f.evaluate(b)) / (2 * h);
}

double fd_second(const acm::ScalarField& f, const Point& p, int i, int j, double h = 1e-4) {
  auto at = [&](double si, double sj) {
    Point q = p;
    q[i] += si * h;
    q[j] += sj * h;
    return f.evaluate(q);
  };
  return (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
}

TEST(Parse, ZeroLiteral) {
  const auto f = acm::parse("0", xyzuv());
  EXPECT_TRUE(f.is_zero());
  EXPECT_EQ(f.root().op, acm::expr::Op::constant);
}

TEST(Parse, SingleVariable) {
  const auto f = acm::parse("y", xyzuv());
  EXPECT_EQ(f.root().op, acm::expr::Op::variable);
  EXPECT_EQ(f.root().index, 1);
  EXPECT_EQ(f.free_variables(), std::vector<int>{1});
}

TEST(Parse, ConformalFactorAtOrigin) {
  const auto f = acm::parse("1/(1+x^2+y^2)^2", xyzuv());
  EXPECT_EQ(f.evaluate(Point{0, 0, 0, 0, 0}), 1.0);
  EXPECT_EQ(f.free_variables(), (std::vector<int>{0, 1}));
}

TEST(Parse, Precedence) {
  const auto c = xyzuv();
  const Point p{2, 3, 0, 0, 0};
  EXPECT_EQ(acm::parse("-x^2", c).evaluate(p), -4.0);
  EXPECT_EQ(acm::parse("2^3^2", c).evaluate(p), 512.0);
  EXPECT_EQ(acm::parse("x-y-1", c).evaluate(p), -2.0);
  EXPECT_EQ(acm::parse("x/y*3", c).evaluate(p), 2.0);
  EXPECT_EQ(acm::parse("1+x*y", c).evaluate(p), 7.0);
  EXPECT_EQ(acm::parse("--x", c).evaluate(p), 2.0);
  EXPECT_EQ(acm::parse("x^-1", c).evaluate(p), 0.5);
  EXPECT_EQ(acm::parse(" ( x + y ) * 2 ", c).evaluate(p), 10.0);
}

TEST(Parse, NumberForms) {
  const auto c = xyzuv();
  const Point p{0, 0, 0, 0, 0};
  EXPECT_EQ(acm::parse(".5", c).evaluate(p), 0.5);
  EXPECT_EQ(acm::parse("2.", c).evaluate(p), 2.0);
  EXPECT_EQ(acm::parse("1e-3", c).evaluate(p), 1e-3);
  EXPECT_EQ(acm::parse("2.5E+2", c).evaluate(p), 250.0);
}

TEST(Parse, Functions) {
  const auto c = xyzuv();
  const Point p{0.3, 2, 0, 0, 0};
  EXPECT_DOUBLE_EQ(acm::parse("sin(x)^2 + cos(x)^2", c).evaluate(p), 1.0);
  EXPECT_DOUBLE_EQ(acm::parse("ln(exp(x))", c).evaluate(p), 0.3);
  EXPECT_DOUBLE_EQ(acm::parse("sqrt(y)*sqrt(y)", c).evaluate(p), 2.0);
}

TEST(ParseErrors, UnknownIdentifierNamesToken) {
  try {
    acm::parse("x + w*2", xyzuv());
    FAIL() << "expected UnknownIdentifierError";
  } catch (const acm::UnknownIdentifierError& e) {
    EXPECT_EQ(e.token(), "w");
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(ParseErrors, FunctionNameWithoutCallIsUnknown) {
  EXPECT_THROW(acm::parse("sin + 1", xyzuv()), acm::UnknownIdentifierError);
}

TEST(ParseErrors, SyntaxErrorOffsets) {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      acm::parse(text, xyzuv());
    } catch (const acm::UnknownIdentifierError&) {
      return 1000;
    } catch (const acm::ParseError& e) {
      return e.offset();
    }
    return 999;
  };
  EXPECT_EQ(offset_of("x +"), 3u);
  EXPECT_EQ(offset_of("(x + y"), 6u);
  EXPECT_EQ(offset_of("x $ y"), 2u);
  EXPECT_EQ(offset_of("x^y"), 2u);
  EXPECT_EQ(offset_of("x^0.5"), 2u);
  EXPECT_EQ(offset_of("x^2000"), 2u);
  EXPECT_EQ(offset_of("x y"), 2u);
  EXPECT_EQ(offset_of(""), 0u);
  EXPECT_EQ(offset_of("sin(x"), 5u);
  EXPECT_EQ(offset_of("."), 0u);
}

TEST(Evaluate, DomainErrors) {
  const auto c = xyzuv();
  const Point origin{0, 0, 0, 0, 0};
  EXPECT_THROW(acm::parse("1/x", c).evaluate(origin), acm::DomainError);
  EXPECT_THROW(acm::parse("1/x", c).evaluate_jet(origin), acm::DomainError);
  EXPECT_THROW(acm::parse("ln(x)", c).evaluate_jet(origin), acm::DomainError);
  EXPECT_THROW(acm::parse("sqrt(x-1)", c).evaluate_jet(origin), acm::DomainError);
  EXPECT_THROW(acm::parse("x^-2", c).evaluate_jet(origin), acm::DomainError);
}

TEST(Jet, BilinearMonomial) {
  const Jet j = acm::parse("x*y", xyzuv()).evaluate_jet(Point{2, 3, 0, 0, 0});
  EXPECT_EQ(j.value(), 6.0);
  Eigen::VectorXd g(5);
  g << 3, 2, 0, 0, 0;
  EXPECT_EQ(j.grad(), g);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(5, 5);
  h(0, 1) = h(1, 0) = 1.0;
  EXPECT_EQ(j.hess(), h);
}

TEST(Jet, Constant) {
  const Jet j = acm::parse("1", xyzuv()).evaluate_jet(Point{0.4, -2, 1, 3, 7});
  EXPECT_EQ(j.value(), 1.0);
  EXPECT_EQ(j.grad(), Eigen::VectorXd::Zero(5));
  EXPECT_EQ(j.hess(), Eigen::MatrixXd::Zero(5, 5));
}

TEST(Jet, ConformalFactorMatchesFiniteDifferences) {
  const auto f = acm::parse("1/(1+x^2+y^2)^2", xyzuv());
  const Point origin{0, 0, 0, 0, 0};
  const Jet j = f.evaluate_jet(origin);
  EXPECT_EQ(j.value(), 1.0);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(j.grad()[i], 0.0, 1e-6);
    EXPECT_NEAR(j.grad()[i], fd_partial(f, origin, i), 1e-6);
    for (int k = 0; k < 5; ++k) {
      const double expected = (i == k && i < 2) ? -4.0 : 0.0;
      EXPECT_NEAR(j.hess()(i, k), expected, 1e-12);
      EXPECT_NEAR(j.hess()(i, k), fd_second(f, origin, i, k), 1e-6);
    }
  }
}

TEST(Jet, QuadraticPolynomialsAreExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    // q = c + b·x + xᵀAx with A symmetric, written out term by term
    double c = u(rng);
    Eigen::VectorXd b(5);
    Eigen::MatrixXd A(5, 5);
    for (int i = 0; i < 5; ++i) b[i] = std::round(8 * u(rng)) / 8;
    for (int i = 0; i < 5; ++i) {
      for (int k = i; k < 5; ++k) A(i, k) = A(k, i) = std::round(8 * u(rng)) / 8;
    }
    static const char* v[] = {"x", "y", "z", "u", "v"};
    std::string text = std::to_string(c);
    for (int i = 0; i < 5; ++i) text += " + " + std::to_string(b[i]) + "*" + v[i];
    for (int i = 0; i < 5; ++i) {
      for (int k = 0; k < 5; ++k) text += " + " + std::to_string(A(i, k)) + "*" + v[i] + "*" + v[k];
    }
    const Point p{std::round(8 * u(rng)) / 8, std::round(8 * u(rng)) / 8, std::round(8 * u(rng)) / 8,
                  std::round(8 * u(rng)) / 8, std::round(8 * u(rng)) / 8};
    Eigen::VectorXd x(5);
    for (int i = 0; i < 5; ++i) x[i] = p[i];
    const Jet j = acm::parse(text, xyzuv()).evaluate_jet(p);
    EXPECT_EQ(j.grad(), b + 2 * A * x);
    EXPECT_EQ(j.hess(), 2 * A);
  }
}

TEST(Jet, HessianExactlySymmetric) {
  const auto f = acm::parse("sin(x*y)*exp(z-u)/(2+cos(v*x)) + sqrt(1+y^2)*ln(2+x^2)", xyzuv());
  const Jet j = f.evaluate_jet(Point{0.3, -0.7, 0.2, 0.9, -0.4});
  EXPECT_EQ(j.hess(), j.hess().transpose());
}

TEST(Jet, TranscendentalMatchesFiniteDifferences) {
  const auto f = acm::parse("sin(x*y)*exp(z-u)/(2+cos(v*x)) + sqrt(1+y^2)*ln(2+x^2)", xyzuv());
  const Point p{0.3, -0.7, 0.2, 0.9, -0.4};
  const Jet j = f.evaluate_jet(p);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(j.grad()[i], fd_partial(f, p, i), 1e-7);
    for (int k = 0; k < 5; ++k) EXPECT_NEAR(j.hess()(i, k), fd_second(f, p, i, k), 1e-6);
  }
}

// Property: random polynomials of degree <= 4 against central differences.
TEST(JetProperty, RandomPolynomialsMatchFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 100; ++t) {
    const auto f = acm::parse(acm::test::random_polynomial(rng, 4, 8), xyzuv());
    const Point p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const Jet j = f.evaluate_jet(p);
    for (int i = 0; i < 5; ++i) {
      EXPECT_LT(std::abs(j.grad()[i] - fd_partial(f, p, i)), 1e-6 * (1 + std::abs(j.grad()[i])));
      for (int k = 0; k < 5; ++k) {
        EXPECT_LT(std::abs(j.hess()(i, k) - fd_second(f, p, i, k)), 1e-6 * (1 + std::abs(j.hess()(i, k))));
      }
    }
  }
}

// Property: print → parse evaluates identically (value and jet).
TEST(ParseProperty, PrintReparseRoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  const std::vector<std::string> samples{
      "1/(1+x^2+y^2)^2", "-x^2", "2^-3*y", "sin(x)*cos(y) - exp(-z)", "-(-(x))", "x^-2*(y-3)", "ln(2+u)/sqrt(3+v)",
      "-1.5e-3*x*y*z*u*v", "0.1 - -0.2 + x"};
  std::vector<std::string> texts = samples;
  for (int t = 0; t < 20; ++t) texts.push_back(acm::test::random_polynomial(rng, 4, 6));
  for (const auto& text : texts) {
    const auto f = acm::parse(text, xyzuv());
    const auto g = acm::parse(f.to_string(), xyzuv());
    EXPECT_EQ(g.to_string(), f.to_string()) << text;
    for (int k = 0; k < 5; ++k) {
      const Point p{u(rng) + 0.1, u(rng) + 0.1, u(rng), u(rng), u(rng)};
      const Jet a = f.evaluate_jet(p);
      const Jet b = g.evaluate_jet(p);
      EXPECT_EQ(a.value(), b.value()) << text;
      EXPECT_EQ(a.grad(), b.grad()) << text;
      EXPECT_EQ(a.hess(), b.hess()) << text;
    }
  }
}

TEST(JetProperty, Deterministic) {
  const auto f = acm::parse("sin(x*y)*exp(z-u)/(2+cos(v*x))", xyzuv());
  const Point p{0.3, -0.7, 0.2, 0.9, -0.4};
  const Jet a = f.evaluate_jet(p);
  const Jet b = f.evaluate_jet(p);
  EXPECT_EQ(a.value(), b.value());
  EXPECT_EQ(a.grad(), b.grad());
  EXPECT_EQ(a.hess(), b.hess());
}

TEST(Compose, FoldsConstants) {
  const auto c = xyzuv();
  const auto x = acm::ScalarField::variable(0, c);
  const auto zero = acm::ScalarField::constant(0.0, c);
  const auto one = acm::ScalarField::constant(1.0, c);
  EXPECT_TRUE((x * zero).is_zero());
  EXPECT_EQ((x * one).to_string(), "x");
  EXPECT_EQ((zero + x).to_string(), "x");
  EXPECT_EQ((one + one).root().value, 2.0);
  EXPECT_THROW(x / zero, acm::DomainError);
  const acm::Coordinates other({"a", "b", "c"});
  EXPECT_THROW(x + acm::ScalarField::variable(0, other), acm::Error);
}

}  // namespace
