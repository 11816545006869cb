#include <gtest/gtest.h>

#include <cmath>

#include "offdiag/fieldkit/expr.hpp"
#include "offdiag/fieldkit/grid.hpp"
#include "offdiag/fieldkit/lexer.hpp"
#include "offdiag/fieldkit/ode.hpp"
#include "offdiag/fieldkit/poisson.hpp"
#include "offdiag/fieldkit/quadrature.hpp"

using namespace offdiag;

namespace {
Expr st(const char* s) { return parse_expression(s, VarSet::spacetime()); }
}  // namespace

TEST(Expr, Precedence) {
  EXPECT_DOUBLE_EQ(st("2 + 3*4^2").eval(0, 0, 0), 50.0);
  EXPECT_DOUBLE_EQ(st("-2^2").eval(0, 0, 0), -4.0);
  EXPECT_DOUBLE_EQ(st("2^3^2").eval(0, 0, 0), 512.0);
  EXPECT_DOUBLE_EQ(st("8/4/2").eval(0, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(st("x1 - x2 - t").eval(1, 2, 3), -4.0);
}

TEST(Expr, Functions) {
  EXPECT_NEAR(st("exp(1) + ln(2) + sin(0.5) + cos(0.5) + sqrt(2) + abs(-3)").eval(0, 0, 0),
              std::exp(1.0) + std::log(2.0) + std::sin(0.5) + std::cos(0.5) + std::sqrt(2.0) + 3.0, 1e-15);
}

TEST(Expr, ParseErrorOffset) {
  try {
    st("exp(x1 +");
    FAIL() << "expected a syntax error";
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.offset(), 8u);
  }
  EXPECT_THROW(st("x1 $ 2"), SyntaxError);
  EXPECT_THROW(st("foo(x1)"), SyntaxError);
  EXPECT_THROW(st("zeta + 1"), SyntaxError);
}

TEST(Expr, Constants) {
  ConstantTable c{{"Lambda", 2.5}};
  Expr e = parse_expression("Lambda*x1", VarSet::spacetime(), &c);
  EXPECT_DOUBLE_EQ(e.eval(2, 0, 0), 5.0);
  EXPECT_FALSE(e.depends_on(Var::T));
  EXPECT_TRUE(e.depends_on(Var::X1));
}

TEST(Expr, StrRoundTrip) {
  Expr e = st("-(x1 + 2)^3/(1 + t^2) + sin(x2*t) - 0.125");
  Expr back = st(e.str().c_str());
  for (double x : {-0.7, 0.1, 1.3}) EXPECT_DOUBLE_EQ(e.eval(x, 0.4, x + 1), back.eval(x, 0.4, x + 1));
}

TEST(Jet, MixedPartialsAgainstClosedForm) {
  // f = exp(x1 x2) sin(t)
  Expr f = st("exp(x1*x2)*sin(t)");
  const double a = 0.3, b = -0.7, t = 1.1;
  Jet j = evaluate_jet(f, {a, b, t}, 3);
  const double e = std::exp(a * b);
  EXPECT_NEAR(j.partial(1, 1, 0), (1 + a * b) * e * std::sin(t), 1e-13);
  EXPECT_NEAR(j.partial(2, 0, 0), b * b * e * std::sin(t), 1e-13);
  EXPECT_NEAR(j.partial(1, 1, 1), (1 + a * b) * e * std::cos(t), 1e-13);
  EXPECT_NEAR(j.partial(0, 0, 3), -e * std::cos(t), 1e-13);
}

TEST(Jet, PowAndDomain) {
  Jet x = Jet::variable(kX1, 2.0, 4);
  Jet y = pow(x, 2.5);
  EXPECT_NEAR(y.partial(3, 0, 0), 2.5 * 1.5 * 0.5 * std::pow(2.0, -0.5), 1e-13);
  EXPECT_THROW(log(Jet::variable(kX1, -1.0, 2)), DomainError);
  EXPECT_THROW(sqrt(Jet::variable(kX1, -1.0, 1)), DomainError);
}

TEST(Jet, AgreesWithFiniteDifferences) {
  const char* exprs[] = {"sin(x1)*exp(-t*x2)", "ln(2 + x1^2)/(1 + t^2)", "sqrt(3 + x1*x2*t)*cos(x2)",
                         "(x1 + t)^3 - 2*x2^4"};
  const double h = 1e-4;
  for (const char* s : exprs) {
    Expr e = st(s);
    std::array<double, 3> p{0.31, -0.42, 0.57};
    Jet j = evaluate_jet(e, p, 2);
    for (int d = 0; d < 3; ++d) {
      auto q = p, r = p;
      q[d] += h;
      r[d] -= h;
      double fd = (e.eval(q[0], q[1], q[2]) - e.eval(r[0], r[1], r[2])) / (2 * h);
      EXPECT_NEAR(j.d(d), fd, 1e-6) << s;
    }
  }
}

TEST(Grid, Validation) {
  EXPECT_THROW(Grid3({0, 1, 3}, {0, 1, 5}, {0, 1, 5}), GridError);
  Grid3 g({0, 1, 5}, {0, 2, 4}, {0, 1, 6});
  EXPECT_EQ(g.size(), 120u);
  EXPECT_DOUBLE_EQ(g.point(4, 3, 5)[1], 2.0);
}

TEST(Quadrature, CumulativeSine) {
  Grid3 g({0, 1, 4}, {0, 1, 4}, {0, 2, 101});
  Field3 f(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 101; ++k) f.at(i, j, k) = std::cos(g.t.node(k));
  Field3 F = cumulative_time_integral(f, g, 0.0);
  EXPECT_NEAR(F.at(1, 2, 100), std::sin(2.0), 1e-8);
  EXPECT_NEAR(integrate_gl([](double x) { return std::exp(x); }, 0, 1, 4), std::exp(1.0) - 1, 1e-14);
}

TEST(Ode, ExponentialDecay) {
  OdeResult r = integrate_ivp([](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = -y[0]; },
                              {1.0}, linspace(0, 5, 11), {"y"});
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r.traj.state.back()[0], std::exp(-5.0), 1e-9);
}

TEST(Ode, BlowUpDetected) {
  // y' = y^2 from y(0) = 1 is singular at s = 1
  OdeResult r = integrate_ivp([](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0] * y[0]; },
                              {1.0}, linspace(0, 2, 21), {"y"});
  EXPECT_FALSE(r.ok());
  EXPECT_NEAR(r.stop_s, 1.0, 1e-3);
}

TEST(Poisson, EigenfunctionSecondOrder) {
  const double pi = std::acos(-1.0);
  auto rhs = [pi](double x, double y) { return -2 * pi * pi * std::sin(pi * x) * std::sin(pi * y); };
  auto zero = [](double, double) { return 0.0; };
  double err[2];
  int ns[2] = {17, 33};
  for (int k = 0; k < 2; ++k) {
    Rect d{0, 1, 0, 1, ns[k], ns[k]};
    PoissonResult r = solve_poisson_2d(rhs, d, zero);
    double e = 0;
    for (int i = 0; i < d.n1; ++i)
      for (int j = 0; j < d.n2; ++j)
        e = std::max(e, std::fabs(r.at(d, i, j) - std::sin(pi * d.x1(i)) * std::sin(pi * d.x2(j))));
    err[k] = e;
  }
  EXPECT_NEAR(std::log2(err[0] / err[1]), 2.0, 0.1);
}

TEST(Lexer, ScenarioMode) {
  auto t = tokenize("a = \"x\" # c\n[1, 2]", LexOptions{true, true, true});
  ASSERT_EQ(t.size(), 10u);
  EXPECT_EQ(t[2].kind, TokKind::String);
  EXPECT_EQ(t[3].kind, TokKind::Newline);
  EXPECT_EQ(t[4].line, 2);
}
