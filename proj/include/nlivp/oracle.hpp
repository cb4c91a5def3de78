#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>

#include "nlivp/problem.hpp"
#include "nlivp/space.hpp"

// Reference solver that shares no code path with the fixed-point operator:
// classical RK4 from trial initial values plus Newton on the nonlocal
// conditions.
namespace nlivp::oracle {

struct Trajectory {
    GridFunction x;
    GridFunction y;
};

/// RK4 on the problem grid from (x(0), y(0)) = (a, b). Throws NonFiniteState.
Trajectory integrate_ivp(const ProblemSpec& p, double a, double b);

struct ShootResult {
    double a = 0.0;
    double b = 0.0;
    GridFunction x;
    GridFunction y;
    /// (alpha[x, y] - a, beta[x, y] - b)
    std::array<double, 2> mismatch{0.0, 0.0};
    std::size_t newton_steps = 0;
    std::size_t starts_tried = 0;

    SystemState state() const { return {{x, a}, {y, b}}; }
};

struct ShootOptions {
    double tol = 1e-10;
    std::size_t max_newton_steps = 50;
    /// Bounds the 5x5 multi-start grid to [-R1, R1] x [-R2, R2]; [-10, 10]^2 otherwise.
    std::optional<DistanceVector> radii;
};

/// Damped Newton (forward-difference Jacobian, Armijo backtracking) on
/// F(a, b) = (alpha[x, y] - a, beta[x, y] - b). Falls back to a 5x5 grid of
/// starts when `start` fails and keeps the success with the smallest |F|.
/// Throws NoRoot when every start fails.
ShootResult solve_nonlocal(const ProblemSpec& p, std::array<double, 2> start,
                           const ShootOptions& options = {});

}  // namespace nlivp::oracle
