#include "nlivp/solver.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nlivp/errors.hpp"
#include "nlivp/hypotheses.hpp"

namespace nlivp {

const char* to_string(SolveStatus s) noexcept {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::Diverged: return "diverged";
    }
    return "unknown";
}

namespace {

DistanceVector times(const Matrix& m, const DistanceVector& v) {
    const std::vector<double> out = multiply(m, v);
    return {out[0], out[1]};
}

bool within(const DistanceVector& v, double tol) {
    return v[0] <= tol && v[1] <= tol;
}

}  // namespace

DistanceVector matrix_power_apply(const NonnegMatrix& m, std::size_t k, DistanceVector v) {
    for (std::size_t i = 0; i < k; ++i) {
        v = times(m.matrix(), v);
        if (v[0] == 0.0 && v[1] == 0.0) break;
    }
    return v;
}

SolveResult perov_solve(const ProblemSpec& p, const SystemState& u0, double tol,
                        std::size_t max_iter) {
    if (!p.lipschitz) {
        throw NotContractive("Perov iteration needs declared Lipschitz constants");
    }
    const NonnegMatrix m = build_M_theta(*p.lipschitz, p.theta);
    const ConvergenceReport report = check_convergent_to_zero(m);
    if (report.verdict != Verdict::Convergent) {
        throw NotContractive(fmt::format("M_theta = {} at theta = {} is {} (rho = {:.12g})",
                                         to_string(m.matrix()), p.theta.value(),
                                         to_string(report.verdict), report.spectral_radius));
    }
    const Matrix resolvent = *invert(Matrix::identity(2) - m.matrix());
    const Matrix m_resolvent = m.matrix() * resolvent;

    SolveResult result;
    SystemState current = u0;
    DistanceVector first_step{0.0, 0.0};
    DistanceVector last_step{0.0, 0.0};
    for (std::size_t k = 0; k < max_iter; ++k) {
        SystemState next = apply_T(current, p);
        const DistanceVector step = vector_distance(current, next, p.theta);
        result.step_history.push_back(step);
        if (k == 0) first_step = step;
        last_step = step;
        current = std::move(next);
        result.iterations = k + 1;
        if (within(times(resolvent, step), tol)) {
            result.converged = true;
            break;
        }
    }
    result.status = result.converged ? SolveStatus::Converged : SolveStatus::MaxIterations;

    PerovCertificate cert{m, result.iterations, {}, {}, p.theta.value()};
    cert.apriori_bound = matrix_power_apply(m, result.iterations, times(resolvent, first_step));
    cert.aposteriori_bound = times(m_resolvent, last_step);
    result.certificate = std::move(cert);
    result.residuals = residual(current, p);
    result.state = std::move(current);
    return result;
}

SolveResult picard_solve(const ProblemSpec& p, const SystemState& u0, double tol,
                         std::size_t max_iter) {
    SolveResult result;
    if (p.growth) {
        try {
            result.ball_radii = schauder_radii(*p.growth, p.theta);
        } catch (const NotConvergentError&) {
        }
    }
    const auto inside_ball = [&](const SystemState& u) {
        const DistanceVector norms = weighted_norms(u, p.theta);
        const DistanceVector& r = *result.ball_radii;
        return norms[0] <= r[0] + 1e-9 * std::max(1.0, r[0]) &&
               norms[1] <= r[1] + 1e-9 * std::max(1.0, r[1]);
    };
    if (result.ball_radii) result.stayed_in_ball = inside_ball(u0);

    SystemState current = u0;
    result.status = SolveStatus::MaxIterations;
    for (std::size_t k = 0; k < max_iter; ++k) {
        std::optional<SystemState> next;
        try {
            next = apply_T(current, p);
        } catch (const InvalidGridFunction&) {
            result.status = SolveStatus::Diverged;
            break;
        }
        const DistanceVector norms = weighted_norms(*next, p.theta);
        if (!(norms[0] <= kDivergenceNorm && norms[1] <= kDivergenceNorm)) {
            result.status = SolveStatus::Diverged;
            break;
        }
        const DistanceVector step = vector_distance(current, *next, p.theta);
        result.step_history.push_back(step);
        if (result.ball_radii && !inside_ball(*next)) result.stayed_in_ball = false;
        current = std::move(*next);
        result.iterations = k + 1;
        if (within(step, tol)) {
            result.status = SolveStatus::Converged;
            result.converged = true;
            break;
        }
    }
    result.residuals = residual(current, p);
    result.state = std::move(current);
    return result;
}

bool certificate_check(const SolveResult& r, const SystemState& oracle_state, ThetaWeight w,
                       double allowance) {
    if (!r.certificate) return false;
    const DistanceVector d = vector_distance(r.state, oracle_state, w);
    return d[0] <= r.certificate->aposteriori_bound[0] + allowance &&
           d[1] <= r.certificate->aposteriori_bound[1] + allowance;
}

}  // namespace nlivp
