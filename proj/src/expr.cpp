#include "nlivp/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <optional>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp {

namespace expr {

const char* function_name(Function f) noexcept {
    switch (f) {
        case Function::Sin: return "sin";
        case Function::Cos: return "cos";
        case Function::Exp: return "exp";
        case Function::Abs: return "abs";
        case Function::Sqrt: return "sqrt";
        case Function::Min: return "min";
        case Function::Max: return "max";
    }
    return "?";
}

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
    switch (a.kind) {
        case NodeKind::Number:
        case NodeKind::PointEval:
            if (a.value != b.value || a.index != b.index) return false;
            break;
        case NodeKind::Param:
        case NodeKind::Variable:
            if (a.name != b.name || a.index != b.index) return false;
            break;
        case NodeKind::Call:
            if (a.function != b.function) return false;
            break;
        case NodeKind::Integral:
        case NodeKind::SupNorm:
            if (a.index != b.index) return false;
            break;
        default:
            break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

std::string to_string(const Node& node) {
    const auto child = [&](std::size_t i) { return to_string(*node.children[i]); };
    const auto binary = [&](const char* op) {
        return fmt::format("({} {} {})", child(0), op, child(1));
    };
    const char* component = node.index == 0 ? "x" : "y";
    switch (node.kind) {
        case NodeKind::Number: return fmt::format("{:.17g}", node.value);
        case NodeKind::Param:
        case NodeKind::Variable: return node.name;
        case NodeKind::Negate: return fmt::format("(-{})", child(0));
        case NodeKind::Add: return binary("+");
        case NodeKind::Sub: return binary("-");
        case NodeKind::Mul: return binary("*");
        case NodeKind::Div: return binary("/");
        case NodeKind::Pow: return binary("^");
        case NodeKind::Call: {
            std::string out = std::string(function_name(node.function)) + "(";
            for (std::size_t i = 0; i < node.children.size(); ++i) {
                out += (i ? ", " : "") + child(i);
            }
            return out + ")";
        }
        case NodeKind::PointEval: return fmt::format("{}({:.17g})", component, node.value);
        case NodeKind::Integral: return fmt::format("int({})", component);
        case NodeKind::SupNorm: return fmt::format("supnorm({})", component);
    }
    return "?";
}

namespace {

std::optional<Function> lookup_function(std::string_view name) {
    static constexpr std::pair<std::string_view, Function> table[] = {
        {"sin", Function::Sin}, {"cos", Function::Cos}, {"exp", Function::Exp},
        {"abs", Function::Abs}, {"sqrt", Function::Sqrt}, {"min", Function::Min},
        {"max", Function::Max},
    };
    for (const auto& [n, f] : table) {
        if (n == name) return f;
    }
    return std::nullopt;
}

std::size_t arity(Function f) {
    return (f == Function::Min || f == Function::Max) ? 2 : 1;
}

enum class TokenKind { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokenKind kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

const char* describe(TokenKind k) {
    switch (k) {
        case TokenKind::Number: return "number";
        case TokenKind::Name: return "identifier";
        case TokenKind::Plus: return "'+'";
        case TokenKind::Minus: return "'-'";
        case TokenKind::Star: return "'*'";
        case TokenKind::Slash: return "'/'";
        case TokenKind::Caret: return "'^'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Comma: return "','";
        case TokenKind::End: return "end of input";
    }
    return "?";
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && src[i] == '.') {
                ++i;
                while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            }
            if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
                    i = j;
                    while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
                }
            }
            const std::string_view text = src.substr(start, i - start);
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                throw SyntaxError(fmt::format("malformed number '{}' at offset {}", text, start),
                                  start, {"number"});
            }
            tokens.push_back({TokenKind::Number, start, text, value});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                ++i;
            }
            tokens.push_back({TokenKind::Name, start, src.substr(start, i - start)});
            continue;
        }
        TokenKind kind;
        switch (c) {
            case '+': kind = TokenKind::Plus; break;
            case '-': kind = TokenKind::Minus; break;
            case '*': kind = TokenKind::Star; break;
            case '/': kind = TokenKind::Slash; break;
            case '^': kind = TokenKind::Caret; break;
            case '(': kind = TokenKind::LParen; break;
            case ')': kind = TokenKind::RParen; break;
            case ',': kind = TokenKind::Comma; break;
            default:
                throw SyntaxError(fmt::format("unexpected character '{}' at offset {}", c, start),
                                  start, {"number", "identifier", "operator", "'('", "')'"});
        }
        tokens.push_back({kind, start, src.substr(start, 1)});
        ++i;
    }
    tokens.push_back({TokenKind::End, src.size(), {}});
    return tokens;
}

NodePtr make(Node node) {
    return std::make_shared<const Node>(std::move(node));
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
    Node n;
    n.kind = kind;
    n.children = {std::move(lhs), std::move(rhs)};
    return make(std::move(n));
}

bool is_constant(const Node& node) {
    if (node.kind == NodeKind::Number) return true;
    if (node.kind == NodeKind::Param || node.kind == NodeKind::Variable ||
        node.kind == NodeKind::PointEval || node.kind == NodeKind::Integral ||
        node.kind == NodeKind::SupNorm) {
        return false;
    }
    return std::all_of(node.children.begin(), node.children.end(),
                       [](const NodePtr& c) { return is_constant(*c); });
}

enum class Mode { Scalar, Functional };

class Parser {
public:
    Parser(std::string_view src, Mode mode, const ParamMap& params,
           const std::vector<std::string>& variables)
        : tokens_(tokenize(src)), mode_(mode), params_(params), variables_(variables) {}

    NodePtr parse() {
        if (peek().kind == TokenKind::End) {
            fail("empty expression", {"number", "identifier", "'('", "'-'"});
        }
        NodePtr root = expression();
        if (peek().kind != TokenKind::End) {
            fail(fmt::format("unexpected {} '{}'", describe(peek().kind), peek().text),
                 {"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        }
        return root;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    bool accept(TokenKind kind) {
        if (peek().kind != kind) return false;
        ++pos_;
        return true;
    }

    void expect(TokenKind kind) {
        if (!accept(kind)) {
            fail(fmt::format("expected {} but found {}", describe(kind), describe(peek().kind)),
                 {describe(kind)});
        }
    }

    [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
        const std::size_t offset = peek().offset;
        throw SyntaxError(fmt::format("{} at offset {}", what, offset), offset,
                          std::move(expected));
    }

    NodePtr expression() {
        NodePtr lhs = term();
        while (true) {
            if (accept(TokenKind::Plus)) {
                lhs = make_binary(NodeKind::Add, lhs, term());
            } else if (accept(TokenKind::Minus)) {
                lhs = make_binary(NodeKind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (true) {
            if (accept(TokenKind::Star)) {
                lhs = make_binary(NodeKind::Mul, lhs, factor());
            } else if (accept(TokenKind::Slash)) {
                lhs = make_binary(NodeKind::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor() {
        if (accept(TokenKind::Minus)) {
            Node n;
            n.kind = NodeKind::Negate;
            n.children = {factor()};
            return make(std::move(n));
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept(TokenKind::Caret)) {
            return make_binary(NodeKind::Pow, base, factor());
        }
        return base;
    }

    NodePtr atom() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::Number: {
                advance();
                Node n;
                n.kind = NodeKind::Number;
                n.value = tok.number;
                return make(std::move(n));
            }
            case TokenKind::LParen: {
                advance();
                NodePtr inner = expression();
                expect(TokenKind::RParen);
                return inner;
            }
            case TokenKind::Name: return named();
            default:
                fail(fmt::format("unexpected {}", describe(tok.kind)),
                     {"number", "identifier", "'('", "'-'"});
        }
    }

    NodePtr named() {
        const Token tok = advance();
        const std::string name(tok.text);
        const bool call = peek().kind == TokenKind::LParen;

        if (mode_ == Mode::Functional) {
            if (name == "t") {
                throw FreeTimeVariable(
                    fmt::format("functional may not reference t (offset {})", tok.offset));
            }
            if (name == "x" || name == "y") {
                if (!call) {
                    fail(fmt::format("'{}' must be evaluated at a point, e.g. {}(0.25)", name, name),
                         {"'('"});
                }
                return point_eval(name == "x" ? 0 : 1, tok.offset);
            }
            if (name == "int" || name == "supnorm") {
                if (!call) fail(fmt::format("'{}' needs an argument", name), {"'('"});
                return norm_atom(name == "int" ? NodeKind::Integral : NodeKind::SupNorm);
            }
        } else {
            const auto it = std::find(variables_.begin(), variables_.end(), name);
            if (it != variables_.end()) {
                if (call) {
                    fail(fmt::format("variable '{}' cannot be called", name),
                         {"operator", "end of input"});
                }
                Node n;
                n.kind = NodeKind::Variable;
                n.name = name;
                n.index = static_cast<std::size_t>(it - variables_.begin());
                return make(std::move(n));
            }
        }

        if (params_.count(name) != 0U && !call) {
            Node n;
            n.kind = NodeKind::Param;
            n.name = name;
            return make(std::move(n));
        }
        if (const auto fn = lookup_function(name)) {
            if (!call) fail(fmt::format("function '{}' needs arguments", name), {"'('"});
            return function_call(*fn, name);
        }
        throw UnknownIdentifier(name, tok.offset);
    }

    NodePtr function_call(Function fn, const std::string& name) {
        expect(TokenKind::LParen);
        Node n;
        n.kind = NodeKind::Call;
        n.function = fn;
        n.children.push_back(expression());
        while (accept(TokenKind::Comma)) {
            n.children.push_back(expression());
        }
        if (n.children.size() != arity(fn)) {
            fail(fmt::format("'{}' takes {} argument(s), got {}", name, arity(fn),
                             n.children.size()),
                 {"')'"});
        }
        expect(TokenKind::RParen);
        return make(std::move(n));
    }

    NodePtr point_eval(std::size_t component, std::size_t offset) {
        expect(TokenKind::LParen);
        const std::size_t arg_offset = peek().offset;
        const NodePtr arg = expression();
        expect(TokenKind::RParen);
        if (!is_constant(*arg)) {
            throw SyntaxError(
                fmt::format("evaluation point at offset {} must be a numeric constant", arg_offset),
                arg_offset, {"number"});
        }
        const ScalarExpr constant(arg, {}, "");
        const double c = constant.eval({}, ParamMap{});
        if (!(c >= 0.0 && c <= 1.0)) {
            throw AbscissaOutOfRange(fmt::format("{}({}) at offset {}: abscissa outside [0, 1]",
                                                 component == 0 ? "x" : "y", c, offset));
        }
        Node n;
        n.kind = NodeKind::PointEval;
        n.index = component;
        n.value = c;
        return make(std::move(n));
    }

    NodePtr norm_atom(NodeKind kind) {
        expect(TokenKind::LParen);
        const Token& arg = peek();
        if (arg.kind != TokenKind::Name || (arg.text != "x" && arg.text != "y")) {
            fail("expected x or y", {"'x'", "'y'"});
        }
        advance();
        expect(TokenKind::RParen);
        Node n;
        n.kind = kind;
        n.index = arg.text == "x" ? 0 : 1;
        return make(std::move(n));
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    Mode mode_;
    const ParamMap& params_;
    const std::vector<std::string>& variables_;
};

// --- evaluation ---------------------------------------------------------------

struct Context {
    std::span<const double> vars;
    const GridFunction* x = nullptr;
    const GridFunction* y = nullptr;
    const ParamMap& params;
};

double evaluate(const Node& node, const Context& ctx);

double trapezoid(const GridFunction& g) {
    const auto v = g.values();
    double sum = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i];
    return sum * g.step();
}

// For sin(v/w) or cos(v/w): the value of w, when the pattern matches.
const Node* oscillating_quotient(const Node& node) {
    if (node.kind != NodeKind::Call) return nullptr;
    if (node.function != Function::Sin && node.function != Function::Cos) return nullptr;
    const Node& arg = *node.children[0];
    return arg.kind == NodeKind::Div ? &arg : nullptr;
}

double evaluate_product(const Node& node, const Context& ctx) {
    const Node& lhs = *node.children[0];
    const Node& rhs = *node.children[1];
    for (const auto& [factor, osc] : {std::pair{&lhs, &rhs}, std::pair{&rhs, &lhs}}) {
        const Node* quotient = oscillating_quotient(*osc);
        if (quotient == nullptr) continue;
        const double u = evaluate(*factor, ctx);
        const double w = evaluate(*quotient->children[1], ctx);
        if (w == 0.0) {
            if (u == 0.0) return 0.0;
            throw DivisionByZero("division by zero inside " + to_string(*osc));
        }
        return u * evaluate(*osc, ctx);
    }
    return evaluate(lhs, ctx) * evaluate(rhs, ctx);
}

double evaluate_call(const Node& node, const Context& ctx) {
    const double a = evaluate(*node.children[0], ctx);
    switch (node.function) {
        case Function::Sin: return std::sin(a);
        case Function::Cos: return std::cos(a);
        case Function::Exp: return std::exp(a);
        case Function::Abs: return std::abs(a);
        case Function::Sqrt:
            if (a < 0.0) throw DomainError(fmt::format("sqrt of negative value {}", a));
            return std::sqrt(a);
        case Function::Min: return std::min(a, evaluate(*node.children[1], ctx));
        case Function::Max: return std::max(a, evaluate(*node.children[1], ctx));
    }
    return 0.0;
}

const GridFunction& component(const Node& node, const Context& ctx) {
    const GridFunction* g = node.index == 0 ? ctx.x : ctx.y;
    if (g == nullptr) throw EvalError("functional atom evaluated without grid functions");
    return *g;
}

double evaluate(const Node& node, const Context& ctx) {
    switch (node.kind) {
        case NodeKind::Number: return node.value;
        case NodeKind::Param: {
            const auto it = ctx.params.find(node.name);
            if (it == ctx.params.end()) throw EvalError("unbound parameter '" + node.name + "'");
            return it->second;
        }
        case NodeKind::Variable:
            if (node.index >= ctx.vars.size()) {
                throw EvalError("no value supplied for variable '" + node.name + "'");
            }
            return ctx.vars[node.index];
        case NodeKind::Negate: return -evaluate(*node.children[0], ctx);
        case NodeKind::Add:
            return evaluate(*node.children[0], ctx) + evaluate(*node.children[1], ctx);
        case NodeKind::Sub:
            return evaluate(*node.children[0], ctx) - evaluate(*node.children[1], ctx);
        case NodeKind::Mul: return evaluate_product(node, ctx);
        case NodeKind::Div: {
            const double num = evaluate(*node.children[0], ctx);
            const double den = evaluate(*node.children[1], ctx);
            if (den == 0.0) throw DivisionByZero("division by zero in " + to_string(node));
            return num / den;
        }
        case NodeKind::Pow: {
            const double base = evaluate(*node.children[0], ctx);
            const double exponent = evaluate(*node.children[1], ctx);
            if (base == 0.0 && exponent < 0.0) {
                throw DivisionByZero("zero raised to a negative power in " + to_string(node));
            }
            const double out = std::pow(base, exponent);
            if (std::isnan(out)) {
                throw DomainError(fmt::format("{}^{} is not real", base, exponent));
            }
            return out;
        }
        case NodeKind::Call: return evaluate_call(node, ctx);
        case NodeKind::PointEval: return component(node, ctx).at(node.value);
        case NodeKind::Integral: return trapezoid(component(node, ctx));
        case NodeKind::SupNorm: return sup_norm(component(node, ctx));
    }
    return 0.0;
}

}  // namespace
}  // namespace expr

ScalarExpr::ScalarExpr(expr::NodePtr root, std::vector<std::string> variables, std::string source)
    : root_(std::move(root)), variables_(std::move(variables)), source_(std::move(source)) {}

double ScalarExpr::eval(std::span<const double> vars, const ParamMap& params) const {
    return expr::evaluate(*root_, expr::Context{vars, nullptr, nullptr, params});
}

FunctionalExpr::FunctionalExpr(expr::NodePtr root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

ScalarExpr parse_scalar(std::string_view src, const ParamMap& params,
                        const std::vector<std::string>& variables) {
    expr::Parser parser(src, expr::Mode::Scalar, params, variables);
    return ScalarExpr(parser.parse(), variables, std::string(src));
}

FunctionalExpr parse_functional(std::string_view src, const ParamMap& params) {
    static const std::vector<std::string> none;
    expr::Parser parser(src, expr::Mode::Functional, params, none);
    return FunctionalExpr(parser.parse(), std::string(src));
}

double eval_scalar(const ScalarExpr& e, double t, double x, double y, const ParamMap& params) {
    const double vars[3] = {t, x, y};
    return e.eval(vars, params);
}

double eval_functional(const FunctionalExpr& e, const GridFunction& x, const GridFunction& y,
                       const ParamMap& params) {
    require_same_grid(x, y);
    return expr::evaluate(e.root(), expr::Context{{}, &x, &y, params});
}

}  // namespace nlivp
