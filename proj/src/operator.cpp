#include "nlivp/operator.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp {

GridFunction cumulative_integral(const GridFunction& g) {
    const auto v = g.values();
    const double half_h = 0.5 * g.step();
    std::vector<double> out(v.size());
    out[0] = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) {
        out[i] = out[i - 1] + half_h * (v[i - 1] + v[i]);
    }
    return GridFunction(std::move(out));
}

namespace {

GridFunction sample_rhs(const ScalarExpr& f, const GridFunction& x, const GridFunction& y,
                        const ParamMap& params) {
    std::vector<double> values(x.n_intervals() + 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = eval_scalar(f, x.node(i), x[i], y[i], params);
        if (!std::isfinite(values[i])) {
            throw EvalError(fmt::format("'{}' is not finite at t = {}", f.source(), x.node(i)));
        }
    }
    return GridFunction(std::move(values));
}

GridFunction shifted(const GridFunction& g, double offset) {
    std::vector<double> values(g.values().begin(), g.values().end());
    for (double& v : values) v += offset;
    return GridFunction(std::move(values));
}

void require_problem_grid(const SystemState& u, const ProblemSpec& p) {
    require_same_grid(u);
    if (u.n_intervals() != p.n_intervals) {
        throw GridMismatch(fmt::format("state on N = {}, problem on N = {}", u.n_intervals(),
                                       p.n_intervals));
    }
}

// Second-order derivative stencils on the uniform grid.
std::vector<double> derivative(const GridFunction& g) {
    const auto v = g.values();
    const std::size_t n = g.n_intervals();
    const double inv_2h = 0.5 / g.step();
    std::vector<double> d(n + 1);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) * inv_2h;
    for (std::size_t i = 1; i < n; ++i) {
        d[i] = (v[i + 1] - v[i - 1]) * inv_2h;
    }
    d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) * inv_2h;
    return d;
}

}  // namespace

SystemState apply_T(const SystemState& u, const ProblemSpec& p) {
    require_problem_grid(u, p);
    const GridFunction& x = u.first.func;
    const GridFunction& y = u.second.func;

    GridFunction x_next = shifted(cumulative_integral(sample_rhs(p.f1, x, y, p.params)),
                                  u.first.scalar);
    GridFunction y_next = shifted(cumulative_integral(sample_rhs(p.f2, x, y, p.params)),
                                  u.second.scalar);
    const double a_next = eval_functional(p.alpha, x, y, p.params);
    const double b_next = eval_functional(p.beta, x, y, p.params);
    if (!std::isfinite(a_next) || !std::isfinite(b_next)) {
        throw EvalError("nonlocal functional is not finite");
    }
    return {{std::move(x_next), a_next}, {std::move(y_next), b_next}};
}

double Residuals::max() const noexcept {
    return std::max({ode1, ode2, nl1, nl2});
}

Residuals residual(const SystemState& u, const ProblemSpec& p) {
    require_problem_grid(u, p);
    const GridFunction& x = u.first.func;
    const GridFunction& y = u.second.func;
    const std::vector<double> dx = derivative(x);
    const std::vector<double> dy = derivative(y);

    Residuals r;
    for (std::size_t i = 0; i < dx.size(); ++i) {
        const double t = x.node(i);
        r.ode1 = std::max(r.ode1, std::abs(dx[i] - eval_scalar(p.f1, t, x[i], y[i], p.params)));
        r.ode2 = std::max(r.ode2, std::abs(dy[i] - eval_scalar(p.f2, t, x[i], y[i], p.params)));
    }
    r.nl1 = std::abs(x[0] - eval_functional(p.alpha, x, y, p.params));
    r.nl2 = std::abs(y[0] - eval_functional(p.beta, x, y, p.params));
    return r;
}

}  // namespace nlivp
