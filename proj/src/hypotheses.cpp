#include "nlivp/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "nlivp/errors.hpp"
#include "nlivp/operator.hpp"

namespace nlivp {

NonnegMatrix build_M_theta(const CouplingConstants& k, ThetaWeight w) {
    validate(k);
    const double theta = w.value();
    const double inv = 1.0 / theta;
    return NonnegMatrix{{std::max(inv, k.a1 + theta * k.A1), k.b1 + theta * k.B1},
                        {k.a2 + theta * k.A2, std::max(inv, k.b2 + theta * k.B2)}};
}

NonnegMatrix build_M_theta(const LipschitzSpec& l, ThetaWeight w) {
    return build_M_theta(l.k, w);
}

NonnegMatrix build_M_theta(const GrowthSpec& g, ThetaWeight w) {
    return build_M_theta(g.k, w);
}

ThetaSearch find_theta(const CouplingConstants& k, double boundary_band) {
    const auto rho_at_log = [&](double log_theta) {
        return spectral_radius(build_M_theta(k, ThetaWeight(std::exp(log_theta))));
    };
    const double lo = std::log(kThetaMin);
    const double hi = std::log(kThetaMax);
    const double spacing = (hi - lo) / static_cast<double>(kThetaGridPoints - 1);

    std::size_t best = 0;
    double best_rho = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kThetaGridPoints; ++i) {
        const double r = rho_at_log(lo + spacing * static_cast<double>(i));
        if (r < best_rho) {
            best_rho = r;
            best = i;
        }
    }
    double best_log = lo + spacing * static_cast<double>(best);

    // Golden section on the bracketing grid cells.
    double left = std::max(lo, best_log - spacing);
    double right = std::min(hi, best_log + spacing);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = right - inv_phi * (right - left);
    double d = left + inv_phi * (right - left);
    double fc = rho_at_log(c);
    double fd = rho_at_log(d);
    for (int iter = 0; iter < 200 && right - left > 1e-13; ++iter) {
        if (fc <= fd) {
            right = d;
            d = c;
            fd = fc;
            c = right - inv_phi * (right - left);
            fc = rho_at_log(c);
        } else {
            left = c;
            c = d;
            fc = fd;
            d = left + inv_phi * (right - left);
            fd = rho_at_log(d);
        }
    }
    for (const auto& [x, fx] : {std::pair{c, fc}, std::pair{d, fd}}) {
        if (fx < best_rho) {
            best_rho = fx;
            best_log = x;
        }
    }

    ThetaSearch out;
    out.theta = std::exp(best_log);
    out.rho = spectral_radius(build_M_theta(k, ThetaWeight(out.theta)));
    out.convergent = out.rho < 1.0 - boundary_band;
    return out;
}

ThetaSearch find_theta(const LipschitzSpec& l, double boundary_band) {
    return find_theta(l.k, boundary_band);
}

ThetaSearch find_theta(const GrowthSpec& g, double boundary_band) {
    return find_theta(g.k, boundary_band);
}

bool row_sum_sufficient_check(const NonnegMatrix& m) {
    if (m.size() != 2) {
        throw DimensionError(fmt::format("row-sum check expects a 2x2 matrix, got {}x{}", m.size(),
                                         m.size()));
    }
    return m(0, 0) + m(0, 1) < 1.0 && m(1, 0) + m(1, 1) < 1.0;
}

DistanceVector schauder_radii(const GrowthSpec& g, ThetaWeight w, double boundary_band) {
    validate(g);
    const NonnegMatrix m = build_M_theta(g, w);
    const double rho = spectral_radius(m);
    if (!(rho < 1.0 - boundary_band)) {
        throw NotConvergentError(
            fmt::format("M_theta at theta = {} has rho = {:.12g}; no invariant ball", w.value(), rho));
    }
    const auto inverse = invert(Matrix::identity(2) - m.matrix());
    if (!inverse) {
        throw NotConvergentError("I - M_theta is singular");
    }
    const double c0 = g.c1 + w.value() * g.C1;
    const double C0 = g.c2 + w.value() * g.C2;
    const double rhs[2] = {c0, C0};
    const std::vector<double> r = multiply(*inverse, rhs);
    return {std::max(r[0], 0.0), std::max(r[1], 0.0)};
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double random_sign(std::mt19937_64& rng) {
    return (rng() & 1U) ? 1.0 : -1.0;
}

GridFunction scaled_function(const GridFunction& g, double s) {
    std::vector<double> values(g.values().begin(), g.values().end());
    for (double& v : values) v *= s;
    return GridFunction(std::move(values));
}

// Random continuous shape with unit sup norm on the grid.
GridFunction random_shape(std::mt19937_64& rng, std::size_t n_intervals) {
    if (uniform(rng, 0.0, 1.0) < 0.25) {
        return GridFunction::constant(n_intervals, random_sign(rng));
    }
    const int degree = static_cast<int>(rng() % 6) + 1;
    std::vector<double> amp(degree + 1);
    std::vector<double> phase(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        amp[k] = uniform(rng, -1.0, 1.0);
        phase[k] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    }
    GridFunction g = GridFunction::sample(n_intervals, [&](double t) {
        double s = 0.0;
        for (int k = 0; k <= degree; ++k) {
            s += amp[k] * std::cos(static_cast<double>(k) * std::numbers::pi * t + phase[k]);
        }
        return s;
    });
    const double norm = sup_norm(g);
    if (norm == 0.0) return GridFunction::constant(n_intervals, 1.0);
    return scaled_function(g, 1.0 / norm);
}

AugmentedState random_in_ball(std::mt19937_64& rng, std::size_t n, double radius, double theta) {
    const double target = uniform(rng, 0.0, 1.0) < 0.5 ? radius : radius * uniform(rng, 0.0, 1.0);
    const double roll = uniform(rng, 0.0, 1.0);
    const double split = roll < 0.1 ? 0.0 : (roll < 0.2 ? 1.0 : uniform(rng, 0.0, 1.0));
    const GridFunction shape = random_shape(rng, n);
    return {scaled_function(shape, split * target), random_sign(rng) * (1.0 - split) * target / theta};
}

}  // namespace

BallCheck ball_invariance_check(const ProblemSpec& p, DistanceVector radii, std::size_t samples,
                                std::uint64_t seed) {
    if (!std::isfinite(radii[0]) || !std::isfinite(radii[1]) || radii[0] < 0.0 || radii[1] < 0.0) {
        throw InvalidArgument("ball radii must be finite and nonnegative");
    }
    std::mt19937_64 rng(seed);
    BallCheck out;
    const double theta = p.theta.value();
    for (std::size_t s = 0; s < samples; ++s) {
        const SystemState u{random_in_ball(rng, p.n_intervals, radii[0], theta),
                            random_in_ball(rng, p.n_intervals, radii[1], theta)};
        const DistanceVector norms = weighted_norms(apply_T(u, p), p.theta);
        ++out.samples;
        bool inside = true;
        for (std::size_t i = 0; i < 2; ++i) {
            const double slack = 1e-9 * std::max(1.0, radii[i]);
            if (radii[i] > 0.0) {
                out.worst_ratio[i] = std::max(out.worst_ratio[i], norms[i] / radii[i]);
            }
            if (norms[i] > radii[i] + slack) inside = false;
        }
        if (!inside) {
            out.holds = false;
            out.counterexample = u;
            return out;
        }
    }
    return out;
}

namespace {

bool references_variable(const expr::Node& node, std::size_t index) {
    if (node.kind == expr::NodeKind::Variable && node.index == index) return true;
    return std::any_of(node.children.begin(), node.children.end(),
                       [&](const expr::NodePtr& c) { return references_variable(*c, index); });
}

// Composite Simpson over s in [0, 1]; exact shortcut when omega ignores t.
double integrate_in_time(const ScalarExpr& omega, const ParamMap& params, DistanceVector rho) {
    if (!references_variable(omega.root(), 0)) {
        const double vars[3] = {0.0, rho[0], rho[1]};
        return omega.eval(vars, params);
    }
    constexpr std::size_t n = 256;
    const double h = 1.0 / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double vars[3] = {static_cast<double>(i) * h, rho[0], rho[1]};
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * omega.eval(vars, params);
    }
    return sum * h / 3.0;
}

double eval_norm_omega(const ScalarExpr& omega, const ParamMap& params, DistanceVector rho) {
    return omega.eval(rho, params);
}

}  // namespace

DistanceVector phi(const CaratheodoryGrowthSpec& cg, const ParamMap& params, DistanceVector rho) {
    return {integrate_in_time(cg.omega1, params, rho) + eval_norm_omega(cg.omega3, params, rho),
            integrate_in_time(cg.omega2, params, rho) + eval_norm_omega(cg.omega4, params, rho)};
}

AprioriBound apriori_bound(const CaratheodoryGrowthSpec& cg, const ParamMap& params,
                           DistanceVector cap, std::size_t grid) {
    if (!(cap[0] > 0.0) || !(cap[1] > 0.0)) {
        throw InvalidArgument("a-priori cap must be componentwise positive");
    }
    constexpr std::size_t kMaxIterations = 100000;
    AprioriBound out;
    DistanceVector rho{0.0, 0.0};
    bool settled = false;
    for (std::size_t k = 0; k < kMaxIterations; ++k) {
        const DistanceVector next = phi(cg, params, rho);
        out.iterations = k + 1;
        if (!std::isfinite(next[0]) || !std::isfinite(next[1]) || next[0] > cap[0] ||
            next[1] > cap[1]) {
            throw NoBoundFound(fmt::format("Phi iterates left the cap ({:.6g}, {:.6g}) at step {}",
                                           cap[0], cap[1], k + 1));
        }
        const double change = std::max(std::abs(next[0] - rho[0]), std::abs(next[1] - rho[1]));
        rho = next;
        if (change <= 1e-13 * (1.0 + std::max(rho[0], rho[1]))) {
            settled = true;
            break;
        }
    }
    if (!settled) {
        throw NoBoundFound("Phi iterates did not settle");
    }

    const DistanceVector limit = rho;
    for (std::size_t i = 1; i <= grid; ++i) {
        for (std::size_t j = 1; j <= grid; ++j) {
            const DistanceVector point{cap[0] * static_cast<double>(i) / static_cast<double>(grid),
                                       cap[1] * static_cast<double>(j) / static_cast<double>(grid)};
            const DistanceVector image = phi(cg, params, point);
            const bool feasible = point[0] <= image[0] + 1e-12 * (1.0 + image[0]) &&
                                  point[1] <= image[1] + 1e-12 * (1.0 + image[1]);
            const bool bounded = point[0] <= limit[0] + 1e-9 * (1.0 + limit[0]) &&
                                 point[1] <= limit[1] + 1e-9 * (1.0 + limit[1]);
            if (feasible && !bounded) {
                out.sweep_violation = point;
                return out;
            }
        }
    }
    out.R0 = limit;
    out.scalar_bounds = DistanceVector{eval_norm_omega(cg.omega3, params, limit),
                                       eval_norm_omega(cg.omega4, params, limit)};
    return out;
}

bool omega_monotone_sampled(const CaratheodoryGrowthSpec& cg, const ParamMap& params,
                            DistanceVector cap, std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        const double t = uniform(rng, 0.0, 1.0);
        const DistanceVector lo{uniform(rng, 0.0, cap[0]), uniform(rng, 0.0, cap[1])};
        const DistanceVector hi{uniform(rng, lo[0], cap[0]), uniform(rng, lo[1], cap[1])};
        const double lo_t[3] = {t, lo[0], lo[1]};
        const double hi_t[3] = {t, hi[0], hi[1]};
        const auto below = [](double a, double b) { return a <= b + 1e-12 * (1.0 + std::abs(b)); };
        if (!below(cg.omega1.eval(lo_t, params), cg.omega1.eval(hi_t, params)) ||
            !below(cg.omega2.eval(lo_t, params), cg.omega2.eval(hi_t, params)) ||
            !below(cg.omega3.eval(lo, params), cg.omega3.eval(hi, params)) ||
            !below(cg.omega4.eval(lo, params), cg.omega4.eval(hi, params))) {
            return false;
        }
    }
    return true;
}

namespace {

struct ScalarSample {
    double t, x, y, xb, yb;
};

double log_uniform_magnitude(std::mt19937_64& rng, double lo_exp, double hi_exp) {
    return std::pow(10.0, uniform(rng, lo_exp, hi_exp));
}

// Cycles through four strategies: uniform in the box, near pairs,
// near-zero points with relative perturbations, single-coordinate moves.
ScalarSample draw_scalar(std::mt19937_64& rng, std::size_t index, double box) {
    ScalarSample s{uniform(rng, 0.0, 1.0), uniform(rng, -box, box), uniform(rng, -box, box), 0, 0};
    switch (index % 4) {
        case 0:
            s.xb = uniform(rng, -box, box);
            s.yb = uniform(rng, -box, box);
            break;
        case 1: {
            const double dx = random_sign(rng) * log_uniform_magnitude(rng, -8.0, 0.0);
            const double dy = random_sign(rng) * log_uniform_magnitude(rng, -8.0, 0.0);
            const double roll = uniform(rng, 0.0, 1.0);
            s.xb = s.x + (roll < 0.25 ? 0.0 : dx);
            s.yb = s.y + (roll >= 0.25 && roll < 0.5 ? 0.0 : dy);
            break;
        }
        case 2: {
            s.x = random_sign(rng) * log_uniform_magnitude(rng, -10.0, 0.0);
            s.y = uniform(rng, 0.0, 1.0) < 0.5 ? random_sign(rng) * log_uniform_magnitude(rng, -10.0, 0.0)
                                               : uniform(rng, -box, box);
            const double rel = random_sign(rng) * log_uniform_magnitude(rng, -6.0, -1.0);
            if (uniform(rng, 0.0, 1.0) < 0.5) {
                s.xb = s.x * (1.0 + rel);
                s.yb = s.y;
            } else {
                s.xb = s.x;
                s.yb = s.y * (1.0 + rel);
            }
            if (uniform(rng, 0.0, 1.0) < 0.5) {
                std::swap(s.x, s.y);
                std::swap(s.xb, s.yb);
            }
            break;
        }
        default:
            if (uniform(rng, 0.0, 1.0) < 0.5) {
                s.xb = uniform(rng, -box, box);
                s.yb = s.y;
            } else {
                s.xb = s.x;
                s.yb = uniform(rng, -box, box);
            }
            break;
    }
    return s;
}

bool exceeds(double lhs, double rhs, double scale) {
    return lhs > rhs + 1e-12 * (1.0 + std::abs(rhs) + scale);
}

std::optional<Counterexample> check_scalar(const ProblemSpec& p, ConstantKind kind,
                                           const ScalarSample& s) {
    const CouplingConstants& k = kind == ConstantKind::Lipschitz ? p.lipschitz->k : p.growth->k;
    struct Row {
        const ScalarExpr& f;
        double a, b, c;
        const char* name;
    };
    const Row rows[2] = {
        {p.f1, k.a1, k.b1, kind == ConstantKind::Growth ? p.growth->c1 : 0.0, "f1"},
        {p.f2, k.a2, k.b2, kind == ConstantKind::Growth ? p.growth->c2 : 0.0, "f2"},
    };
    for (const Row& row : rows) {
        try {
            const double v = eval_scalar(row.f, s.t, s.x, s.y, p.params);
            if (kind == ConstantKind::Growth) {
                const double rhs = row.a * std::abs(s.x) + row.b * std::abs(s.y) + row.c;
                if (exceeds(std::abs(v), rhs, std::abs(v))) {
                    return Counterexample{std::string(row.name) + " growth",
                                          fmt::format("t={:.17g} x={:.17g} y={:.17g}", s.t, s.x, s.y),
                                          std::abs(v), rhs};
                }
            } else {
                const double vb = eval_scalar(row.f, s.t, s.xb, s.yb, p.params);
                const double rhs = row.a * std::abs(s.x - s.xb) + row.b * std::abs(s.y - s.yb);
                const double lhs = std::abs(v - vb);
                if (exceeds(lhs, rhs, std::max(std::abs(v), std::abs(vb)))) {
                    return Counterexample{
                        std::string(row.name) + " lipschitz",
                        fmt::format("t={:.17g} x={:.17g} y={:.17g} x'={:.17g} y'={:.17g}", s.t, s.x,
                                    s.y, s.xb, s.yb),
                        lhs, rhs};
                }
            }
        } catch (const EvalError&) {
            // Outside the expression's domain: not a sample of the inequality.
        }
    }
    return std::nullopt;
}

double sup_distance(const GridFunction& a, const GridFunction& b) {
    double out = 0.0;
    for (std::size_t i = 0; i <= a.n_intervals(); ++i) {
        out = std::max(out, std::abs(a[i] - b[i]));
    }
    return out;
}

GridFunction perturbed(std::mt19937_64& rng, const GridFunction& g, double box) {
    const double size = box * log_uniform_magnitude(rng, -8.0, 0.0);
    const GridFunction shape = random_shape(rng, g.n_intervals());
    std::vector<double> values(g.values().begin(), g.values().end());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += size * shape[i];
    return GridFunction(std::move(values));
}

std::optional<Counterexample> check_functional(const ProblemSpec& p, ConstantKind kind,
                                               std::mt19937_64& rng, double box) {
    const std::size_t n = p.n_intervals;
    const double amplitude_x = box * uniform(rng, 0.0, 1.0);
    const double amplitude_y = box * uniform(rng, 0.0, 1.0);
    const GridFunction x = scaled_function(random_shape(rng, n), amplitude_x);
    const GridFunction y = scaled_function(random_shape(rng, n), amplitude_y);
    const CouplingConstants& k = kind == ConstantKind::Lipschitz ? p.lipschitz->k : p.growth->k;

    struct Row {
        const FunctionalExpr& f;
        double A, B, C;
        const char* name;
    };
    const Row rows[2] = {
        {p.alpha, k.A1, k.B1, kind == ConstantKind::Growth ? p.growth->C1 : 0.0, "alpha"},
        {p.beta, k.A2, k.B2, kind == ConstantKind::Growth ? p.growth->C2 : 0.0, "beta"},
    };

    if (kind == ConstantKind::Growth) {
        for (const Row& row : rows) {
            try {
                const double v = std::abs(eval_functional(row.f, x, y, p.params));
                const double rhs = row.A * sup_norm(x) + row.B * sup_norm(y) + row.C;
                if (exceeds(v, rhs, v)) {
                    return Counterexample{std::string(row.name) + " growth",
                                          fmt::format("|x|_C={:.17g} |y|_C={:.17g}", sup_norm(x),
                                                      sup_norm(y)),
                                          v, rhs};
                }
            } catch (const EvalError&) {
            }
        }
        return std::nullopt;
    }

    const bool near = uniform(rng, 0.0, 1.0) < 0.5;
    const GridFunction xb = near ? perturbed(rng, x, box)
                                 : scaled_function(random_shape(rng, n), box * uniform(rng, 0.0, 1.0));
    const GridFunction yb = near ? perturbed(rng, y, box)
                                 : scaled_function(random_shape(rng, n), box * uniform(rng, 0.0, 1.0));
    for (const Row& row : rows) {
        try {
            const double v = eval_functional(row.f, x, y, p.params);
            const double vb = eval_functional(row.f, xb, yb, p.params);
            const double dx = sup_distance(x, xb);
            const double dy = sup_distance(y, yb);
            const double rhs = row.A * dx + row.B * dy;
            if (exceeds(std::abs(v - vb), rhs, std::max(std::abs(v), std::abs(vb)))) {
                return Counterexample{std::string(row.name) + " lipschitz",
                                      fmt::format("|x-x'|_C={:.17g} |y-y'|_C={:.17g}", dx, dy),
                                      std::abs(v - vb), rhs};
            }
        } catch (const EvalError&) {
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<Counterexample> falsify_constants(const ProblemSpec& p, ConstantKind kind,
                                                const FalsifyOptions& options) {
    if (kind == ConstantKind::Lipschitz && !p.lipschitz) {
        throw InvalidArgument("no Lipschitz constants declared");
    }
    if (kind == ConstantKind::Growth && !p.growth) {
        throw InvalidArgument("no growth constants declared");
    }
    std::mt19937_64 rng(options.seed);
    for (std::size_t i = 0; i < options.samples; ++i) {
        if (auto c = check_scalar(p, kind, draw_scalar(rng, i, options.box))) return c;
    }
    const std::size_t functional_samples = std::max<std::size_t>(options.samples / 10, 100);
    for (std::size_t i = 0; i < functional_samples; ++i) {
        if (auto c = check_functional(p, kind, rng, options.box)) return c;
    }
    return std::nullopt;
}

}  // namespace nlivp
