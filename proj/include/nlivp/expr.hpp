#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlivp/space.hpp"

namespace nlivp {

/// Named parameters bound at evaluation time (the `a` of the examples).
using ParamMap = std::map<std::string, double, std::less<>>;

namespace expr {

enum class NodeKind {
    Number,
    Param,
    Variable,
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Call,
    PointEval,  // x(c) / y(c)
    Integral,   // int(x) / int(y)
    SupNorm,    // supnorm(x) / supnorm(y)
};

enum class Function { Sin, Cos, Exp, Abs, Sqrt, Min, Max };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind = NodeKind::Number;
    double value = 0.0;   // Number literal; PointEval abscissa
    std::string name;     // Param or Variable name
    std::size_t index = 0;  // Variable slot; 0 = x, 1 = y for functional atoms
    Function function = Function::Sin;
    std::vector<NodePtr> children;
};

bool structurally_equal(const Node& a, const Node& b);

/// Fully parenthesised rendering that parses back to the same tree.
std::string to_string(const Node& node);

const char* function_name(Function f) noexcept;

}  // namespace expr

/// Expression in a fixed list of real variables, e.g. f(t, x, y).
class ScalarExpr {
public:
    ScalarExpr(expr::NodePtr root, std::vector<std::string> variables, std::string source);

    const expr::Node& root() const noexcept { return *root_; }
    const std::vector<std::string>& variables() const noexcept { return variables_; }
    const std::string& source() const noexcept { return source_; }

    /// `vars` follows the order of variables(). Throws EvalError.
    double eval(std::span<const double> vars, const ParamMap& params) const;

private:
    expr::NodePtr root_;
    std::vector<std::string> variables_;
    std::string source_;
};

/// Functional of a pair of grid functions, e.g. alpha[x, y].
class FunctionalExpr {
public:
    FunctionalExpr(expr::NodePtr root, std::string source);

    const expr::Node& root() const noexcept { return *root_; }
    const std::string& source() const noexcept { return source_; }

private:
    expr::NodePtr root_;
    std::string source_;
};

inline const std::vector<std::string>& default_scalar_variables() {
    static const std::vector<std::string> vars{"t", "x", "y"};
    return vars;
}

/// Grammar (standard precedence, `^` right associative and binding tighter
/// than unary minus):
///   expr   := term (("+"|"-") term)*
///   term   := factor (("*"|"/") factor)*
///   factor := "-" factor | power
///   power  := atom ("^" factor)?
///   atom   := number | name | name "(" expr ("," expr)* ")" | "(" expr ")"
///
/// Identifiers resolve to variables, then keys of `params`, then functions
/// (sin cos exp abs sqrt min max). Throws SyntaxError or UnknownIdentifier.
ScalarExpr parse_scalar(std::string_view src, const ParamMap& params,
                        const std::vector<std::string>& variables = default_scalar_variables());

/// Same grammar without free variables; atoms x(c), y(c) with a literal
/// constant c in [0, 1], int(x), int(y), supnorm(x), supnorm(y).
/// Throws SyntaxError, UnknownIdentifier, AbscissaOutOfRange, FreeTimeVariable.
FunctionalExpr parse_functional(std::string_view src, const ParamMap& params);

/// f(t, x, y). Products u*sin(v/w) and u*cos(v/w) (either factor order)
/// evaluate to 0 when w = 0 and u = 0, the continuous extension forced by
/// |u sin(.)| <= |u|. Throws DivisionByZero, DomainError, EvalError.
double eval_scalar(const ScalarExpr& e, double t, double x, double y, const ParamMap& params);

/// Point atoms interpolate linearly, int() is the trapezoid rule over the
/// whole grid, supnorm() the max of |values| over nodes. Throws GridMismatch.
double eval_functional(const FunctionalExpr& e, const GridFunction& x, const GridFunction& y,
                       const ParamMap& params);

}  // namespace nlivp
