#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "nlivp/errors.hpp"
#include "nlivp/expr.hpp"
#include "support.hpp"

using namespace nlivp;

namespace {

const ParamMap kParams{{"a", 0.1}};

double eval(const std::string& src, double t = 0, double x = 0, double y = 0,
            const ParamMap& params = kParams) {
    return eval_scalar(parse_scalar(src, params), t, x, y, params);
}

double eval_on(const std::string& src, const GridFunction& x, const GridFunction& y) {
    return eval_functional(parse_functional(src, kParams), x, y, kParams);
}

// Random expression text over t, x, y, a with every operator and function.
std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    static const char* atoms[] = {"t", "x", "y", "a", "2", "0.5", "3.25", "1e-2"};
    switch (pick(rng)) {
        case 0:
        case 1:
        case 2:
            return atoms[std::uniform_int_distribution<int>(0, 7)(rng)];
        case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
        case 4: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
        case 5: return random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1);
        case 6: return "-" + random_expr(rng, depth - 1);
        case 7: return "sin(" + random_expr(rng, depth - 1) + ")";
        case 8: return "max(" + random_expr(rng, depth - 1) + ", " + random_expr(rng, depth - 1) + ")";
        default: return "(" + random_expr(rng, depth - 1) + ")^2";
    }
}

}  // namespace

TEST(Scalar, ExampleRightHandSide) { EXPECT_DOUBLE_EQ(eval("0.25*sin(x) + a*y + t", 0, 0, 1), 0.1); }

TEST(Scalar, CosineAtOrigin) { EXPECT_EQ(eval("cos(a*x + 0.25*y)"), 1.0); }

TEST(Scalar, Precedence) {
    EXPECT_EQ(eval("2+3*4"), 14.0);
    EXPECT_EQ(eval("(2+3)*4"), 20.0);
    EXPECT_EQ(eval("2^3^2"), 512.0);
    EXPECT_EQ(eval("-2^2"), -4.0);
    EXPECT_EQ(eval("8/4/2"), 1.0);
    EXPECT_EQ(eval("1-2-3"), -4.0);
    EXPECT_EQ(eval("2*-3"), -6.0);
}

TEST(Scalar, Functions) {
    EXPECT_EQ(eval("abs(-3)"), 3.0);
    EXPECT_EQ(eval("sqrt(16)"), 4.0);
    EXPECT_EQ(eval("min(2, -1)"), -1.0);
    EXPECT_EQ(eval("max(2, -1)"), 2.0);
    EXPECT_DOUBLE_EQ(eval("exp(1)"), std::exp(1.0));
    EXPECT_DOUBLE_EQ(eval("x^2 + y", 0, 3, 1), 10.0);
}

TEST(Scalar, RemovableSingularity) {
    EXPECT_EQ(eval("x*sin(y/x)", 0, 0, 0.7), 0.0);
    EXPECT_EQ(eval("sin(y/x)*x", 0, 0, 0.7), 0.0);
    EXPECT_EQ(eval("0.25*x*sin(y/x)", 0, 0, 0.7), 0.0);
    EXPECT_EQ(eval("a*y*cos(x/y)", 0, 2, 0), 0.0);
    EXPECT_DOUBLE_EQ(eval("x*sin(y/x)", 0, 2, 1), 2 * std::sin(0.5));
}

TEST(Scalar, EvaluationErrors) {
    EXPECT_THROW(eval("sin(y/x)", 0, 0, 1), DivisionByZero);
    EXPECT_THROW(eval("1/x"), DivisionByZero);
    EXPECT_THROW(eval("x^(-1)"), DivisionByZero);
    EXPECT_THROW(eval("sqrt(-1)"), DomainError);
    EXPECT_THROW(eval("(-8)^0.5"), DomainError);
    EXPECT_THROW(eval("y*sin(y/x)", 0, 0, 1), DivisionByZero);
}

TEST(Scalar, ParamsBindAtEvaluation) {
    const ScalarExpr e = parse_scalar("a*x", kParams);
    EXPECT_DOUBLE_EQ(eval_scalar(e, 0, 2, 0, ParamMap{{"a", 0.3}}), 0.6);
    EXPECT_THROW(eval_scalar(e, 0, 2, 0, ParamMap{}), EvalError);
}

TEST(Scalar, SyntaxErrorsCarryOffset) {
    try {
        parse_scalar("1 + * 2", kParams);
        FAIL() << "expected SyntaxError";
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.offset(), 4U);
        EXPECT_FALSE(e.expected().empty());
    }
    EXPECT_THROW(parse_scalar("", kParams), SyntaxError);
    EXPECT_THROW(parse_scalar("(1 + 2", kParams), SyntaxError);
    EXPECT_THROW(parse_scalar("1 2", kParams), SyntaxError);
    EXPECT_THROW(parse_scalar("sin()", kParams), SyntaxError);
    EXPECT_THROW(parse_scalar("min(1)", kParams), SyntaxError);
    EXPECT_THROW(parse_scalar("2 $ 3", kParams), SyntaxError);
}

TEST(Scalar, UnknownIdentifier) {
    try {
        parse_scalar("x + b", kParams);
        FAIL() << "expected UnknownIdentifier";
    } catch (const UnknownIdentifier& e) {
        EXPECT_EQ(e.name(), "b");
    }
    EXPECT_THROW(parse_scalar("foo(x)", kParams), UnknownIdentifier);
}

TEST(Scalar, CustomVariables) {
    const std::vector<std::string> vars{"r1", "r2"};
    const ScalarExpr e = parse_scalar("0.5*r1 + r2^2", {}, vars);
    const double v[] = {2.0, 3.0};
    EXPECT_EQ(e.eval(v, {}), 10.0);
    EXPECT_THROW(parse_scalar("t", {}, vars), UnknownIdentifier);
}

TEST(Scalar, PrintParseRoundTrip) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::string src = random_expr(rng, 4);
        const ScalarExpr e = parse_scalar(src, kParams);
        const std::string printed = expr::to_string(e.root());
        const ScalarExpr again = parse_scalar(printed, kParams);
        ASSERT_TRUE(expr::structurally_equal(e.root(), again.root())) << src << " -> " << printed;
        const double t = nlivp::testing::uniform(rng, 0, 1);
        const double x = nlivp::testing::uniform(rng, -2, 2);
        const double y = nlivp::testing::uniform(rng, -2, 2);
        const double v1 = eval_scalar(e, t, x, y, kParams);
        const double v2 = eval_scalar(again, t, x, y, kParams);
        EXPECT_TRUE(v1 == v2 || (std::isnan(v1) && std::isnan(v2))) << src;
    }
}

TEST(Functional, ExampleConditionsOnZero) {
    const GridFunction zero = GridFunction::constant(8, 0.0);
    EXPECT_EQ(eval_on("0.125*sin(x(0.25)+y(0.25))", zero, zero), 0.0);
    EXPECT_EQ(eval_on("0.125*cos(x(0.25)+y(0.25))", zero, zero), 0.125);
}

TEST(Functional, IntegralOfIdentity) {
    const GridFunction id = GridFunction::sample(16, [](double t) { return t; });
    EXPECT_NEAR(eval_on("int(x)", id, id), 0.5, 1e-14);
}

TEST(Functional, IntegralOfSquareAgainstAntiderivative) {
    const GridFunction x = GridFunction::constant(1024, 0.0);
    const GridFunction y = GridFunction::sample(1024, [](double t) { return t * t; });
    EXPECT_NEAR(eval_on("int(y)", x, y), 1.0 / 3.0, 1e-5);
}

TEST(Functional, SupNormAndPointEvaluation) {
    const GridFunction c = GridFunction::constant(4, -3.0);
    EXPECT_EQ(eval_on("supnorm(x)", c, c), 3.0);
    const GridFunction id = GridFunction::sample(4, [](double t) { return t; });
    EXPECT_EQ(eval_on("x(0.25)", id, id), 0.25);
    EXPECT_EQ(eval_on("y(1)", id, id), 1.0);
    // Between nodes the value is interpolated linearly.
    const GridFunction sq = GridFunction::sample(4, [](double t) { return t * t; });
    EXPECT_DOUBLE_EQ(eval_on("x(0.125)", sq, sq), 0.5 * (0.0 + 0.0625));
}

TEST(Functional, ParseErrors) {
    EXPECT_THROW(parse_functional("x(1.5)", kParams), AbscissaOutOfRange);
    EXPECT_THROW(parse_functional("x(-0.1)", kParams), AbscissaOutOfRange);
    EXPECT_THROW(parse_functional("t + x(0)", kParams), FreeTimeVariable);
    EXPECT_THROW(parse_functional("x", kParams), SyntaxError);
    EXPECT_THROW(parse_functional("int(x + 1)", kParams), SyntaxError);
    EXPECT_THROW(parse_functional("z(0.5)", kParams), UnknownIdentifier);
}

TEST(Functional, GridMismatch) {
    const FunctionalExpr e = parse_functional("x(0.5) + y(0.5)", kParams);
    EXPECT_THROW(eval_functional(e, GridFunction::constant(4, 0), GridFunction::constant(8, 0), kParams),
                 GridMismatch);
}
