#include "nlivp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp::oracle {

Trajectory integrate_ivp(const ProblemSpec& p, double a, double b) {
    const std::size_t n = p.n_intervals;
    const double h = 1.0 / static_cast<double>(n);
    std::vector<double> xs(n + 1);
    std::vector<double> ys(n + 1);
    xs[0] = a;
    ys[0] = b;

    const auto rhs = [&](double t, double x, double y) {
        return std::array<double, 2>{eval_scalar(p.f1, t, x, y, p.params),
                                     eval_scalar(p.f2, t, x, y, p.params)};
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * h;
        const double x = xs[i];
        const double y = ys[i];
        const auto k1 = rhs(t, x, y);
        const auto k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1[0], y + 0.5 * h * k1[1]);
        const auto k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2[0], y + 0.5 * h * k2[1]);
        const auto k4 = rhs(t + h, x + h * k3[0], y + h * k3[1]);
        xs[i + 1] = x + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        ys[i + 1] = y + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        if (!std::isfinite(xs[i + 1]) || !std::isfinite(ys[i + 1])) {
            throw NonFiniteState(fmt::format("trajectory from ({}, {}) blows up near t = {}", a, b,
                                             t + h));
        }
    }
    return {GridFunction(std::move(xs)), GridFunction(std::move(ys))};
}

namespace {

struct Evaluation {
    std::array<double, 2> z;
    std::array<double, 2> f;
    Trajectory path;

    double merit() const { return 0.5 * (f[0] * f[0] + f[1] * f[1]); }
    double sup() const { return std::max(std::abs(f[0]), std::abs(f[1])); }
};

Evaluation evaluate(const ProblemSpec& p, std::array<double, 2> z) {
    Trajectory path = integrate_ivp(p, z[0], z[1]);
    const double alpha = eval_functional(p.alpha, path.x, path.y, p.params);
    const double beta = eval_functional(p.beta, path.x, path.y, p.params);
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw NonFiniteState("nonlocal functional is not finite on the trajectory");
    }
    return {z, {alpha - z[0], beta - z[1]}, std::move(path)};
}

std::optional<Evaluation> try_evaluate(const ProblemSpec& p, std::array<double, 2> z) {
    try {
        return evaluate(p, z);
    } catch (const NonFiniteState&) {
    } catch (const EvalError&) {
    } catch (const InvalidGridFunction&) {
    }
    return std::nullopt;
}

struct NewtonOutcome {
    std::optional<Evaluation> solution;
    std::size_t steps = 0;
};

NewtonOutcome newton(const ProblemSpec& p, std::array<double, 2> start, const ShootOptions& options) {
    NewtonOutcome out;
    std::optional<Evaluation> current = try_evaluate(p, start);
    if (!current) return out;

    for (std::size_t step = 0; step <= options.max_newton_steps; ++step) {
        if (current->sup() <= options.tol) {
            out.solution = std::move(current);
            return out;
        }
        if (step == options.max_newton_steps) break;
        out.steps = step + 1;

        // Forward-difference Jacobian, one column per unknown.
        double jac[2][2];
        for (std::size_t j = 0; j < 2; ++j) {
            std::array<double, 2> shifted = current->z;
            const double dz = 1e-6 * (1.0 + std::abs(shifted[j]));
            shifted[j] += dz;
            const auto probe = try_evaluate(p, shifted);
            if (!probe) return out;
            const double actual = shifted[j] - current->z[j];
            for (std::size_t i = 0; i < 2; ++i) {
                jac[i][j] = (probe->f[i] - current->f[i]) / actual;
            }
        }
        const double det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if (!(std::abs(det) > 1e-14) || !std::isfinite(det)) return out;
        const std::array<double, 2> delta{
            (-current->f[0] * jac[1][1] + current->f[1] * jac[0][1]) / det,
            (-current->f[1] * jac[0][0] + current->f[0] * jac[1][0]) / det,
        };

        // Armijo backtracking on 0.5 |F|^2; the Newton direction has slope -2 * merit.
        const double merit = current->merit();
        double lambda = 1.0;
        std::optional<Evaluation> accepted;
        while (lambda >= 1e-10) {
            const std::array<double, 2> trial{current->z[0] + lambda * delta[0],
                                              current->z[1] + lambda * delta[1]};
            auto candidate = try_evaluate(p, trial);
            if (candidate && candidate->merit() <= (1.0 - 2e-4 * lambda) * merit) {
                accepted = std::move(candidate);
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) return out;
        current = std::move(accepted);
    }
    return out;
}

ShootResult to_result(Evaluation e, std::size_t steps, std::size_t starts) {
    return {e.z[0], e.z[1], std::move(e.path.x), std::move(e.path.y), e.f, steps, starts};
}

}  // namespace

ShootResult solve_nonlocal(const ProblemSpec& p, std::array<double, 2> start,
                           const ShootOptions& options) {
    if (!(options.tol > 0.0)) {
        throw InvalidArgument("oracle tolerance must be positive");
    }
    std::size_t starts = 1;
    NewtonOutcome first = newton(p, start, options);
    if (first.solution) {
        return to_result(std::move(*first.solution), first.steps, starts);
    }

    const DistanceVector span = options.radii.value_or(DistanceVector{10.0, 10.0});
    std::optional<ShootResult> best;
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const std::array<double, 2> z{span[0] * (-1.0 + 0.5 * i), span[1] * (-1.0 + 0.5 * j)};
            ++starts;
            NewtonOutcome attempt = newton(p, z, options);
            if (!attempt.solution) continue;
            if (!best || attempt.solution->sup() <
                             std::max(std::abs(best->mismatch[0]), std::abs(best->mismatch[1]))) {
                best = to_result(std::move(*attempt.solution), attempt.steps, 0);
            }
        }
    }
    if (!best) {
        throw NoRoot(fmt::format("no root of the nonlocal conditions from {} starts", starts));
    }
    best->starts_tried = starts;
    return std::move(*best);
}

}  // namespace nlivp::oracle
