#pragma once

#include "nlivp/problem.hpp"
#include "nlivp/space.hpp"

namespace nlivp {

/// out(t_i) = sum_{j<i} h/2 (g_j + g_{j+1}), out(0) = 0.
GridFunction cumulative_integral(const GridFunction& g);

/// T(u) = ((a + int_0^t f1(s, x, y) ds, alpha[x, y]),
///         (b + int_0^t f2(s, x, y) ds, beta[x, y])).
/// Throws GridMismatch if u is not on the problem grid, EvalError from the
/// expressions.
SystemState apply_T(const SystemState& u, const ProblemSpec& p);

/// Defects of a candidate solution against the differential equations and
/// the nonlocal conditions.
struct Residuals {
    double ode1 = 0.0;
    double ode2 = 0.0;
    double nl1 = 0.0;
    double nl2 = 0.0;

    double max() const noexcept;
};

/// Derivatives by second-order central differences inside, second-order
/// one-sided stencils at both ends; the ODE defects are maxima over all
/// nodes. The scalar parts of `u` are ignored.
Residuals residual(const SystemState& u, const ProblemSpec& p);

}  // namespace nlivp
