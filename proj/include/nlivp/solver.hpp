#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nlivp/matrix.hpp"
#include "nlivp/operator.hpp"
#include "nlivp/problem.hpp"
#include "nlivp/space.hpp"

namespace nlivp {

/// Componentwise error certificate for the returned iterate u_k = T^k(u0):
///   d(u_k, u*) <= M^k (I - M)^{-1} d(u0, T u0)        (apriori_bound)
///   d(u_k, u*) <= M (I - M)^{-1} d(u_{k-1}, u_k)       (aposteriori_bound)
/// Both hold for the fixed point of the discrete operator.
struct PerovCertificate {
    NonnegMatrix matrix;
    std::size_t iterations = 0;
    DistanceVector apriori_bound{0.0, 0.0};
    DistanceVector aposteriori_bound{0.0, 0.0};
    double theta = 0.0;
};

enum class SolveStatus { Converged, MaxIterations, Diverged };

const char* to_string(SolveStatus s) noexcept;

struct SolveResult {
    SystemState state;
    std::optional<PerovCertificate> certificate;
    Residuals residuals;
    std::size_t iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::MaxIterations;
    /// d(u_k, u_{k+1}) for every step taken.
    std::vector<DistanceVector> step_history;
    /// Picard only: radii of the invariant ball when growth constants are
    /// declared and M_theta is convergent, and whether every iterate stayed inside.
    std::optional<DistanceVector> ball_radii;
    std::optional<bool> stayed_in_ball;
};

inline constexpr double kDivergenceNorm = 1e12;

/// Iterates u_{k+1} = T(u_k) until (I - M)^{-1} d(u_k, u_{k+1}) <= tol
/// componentwise, M = M_theta from the declared Lipschitz constants at
/// p.theta. Throws NotContractive when no Lipschitz constants are declared
/// or M_theta is not convergent to zero. Hitting max_iter is reported
/// through `converged` / `status`, not thrown.
SolveResult perov_solve(const ProblemSpec& p, const SystemState& u0, double tol,
                        std::size_t max_iter);

/// Plain successive approximation, stopping when d(u_k, u_{k+1}) <= tol
/// componentwise. No certificate; status Diverged once a weighted norm
/// exceeds 1e12 (the last finite iterate is returned).
SolveResult picard_solve(const ProblemSpec& p, const SystemState& u0, double tol,
                         std::size_t max_iter);

inline constexpr double kDefaultDiscretizationAllowance = 1e-5;

/// d(r.state, oracle_state) <= aposteriori_bound + allowance, componentwise.
/// False when `r` carries no certificate.
bool certificate_check(const SolveResult& r, const SystemState& oracle_state, ThetaWeight w,
                       double allowance = kDefaultDiscretizationAllowance);

/// M^k v for a 2x2 matrix.
DistanceVector matrix_power_apply(const NonnegMatrix& m, std::size_t k, DistanceVector v);

}  // namespace nlivp
