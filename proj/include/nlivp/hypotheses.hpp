#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "nlivp/matrix.hpp"
#include "nlivp/problem.hpp"
#include "nlivp/space.hpp"

namespace nlivp {

/// m11 = max{1/theta, a1 + theta A1}, m12 = b1 + theta B1,
/// m21 = a2 + theta A2,               m22 = max{1/theta, b2 + theta B2}.
NonnegMatrix build_M_theta(const CouplingConstants& k, ThetaWeight w);
NonnegMatrix build_M_theta(const LipschitzSpec& l, ThetaWeight w);
NonnegMatrix build_M_theta(const GrowthSpec& g, ThetaWeight w);

struct ThetaSearch {
    double theta = 1.0;
    double rho = 0.0;
    bool convergent = false;
};

inline constexpr double kThetaMin = 1e-3;
inline constexpr double kThetaMax = 1e3;
inline constexpr std::size_t kThetaGridPoints = 200;

/// Minimises rho(M_theta) over theta in [1e-3, 1e3]: 200 log-spaced points,
/// then golden-section refinement (in log theta) around the best one.
ThetaSearch find_theta(const CouplingConstants& k, double boundary_band = kDefaultBoundaryBand);
ThetaSearch find_theta(const LipschitzSpec& l, double boundary_band = kDefaultBoundaryBand);
ThetaSearch find_theta(const GrowthSpec& g, double boundary_band = kDefaultBoundaryBand);

/// Every row sum below 1: sufficient, not necessary, for rho < 1.
/// Throws DimensionError unless M is 2x2.
bool row_sum_sufficient_check(const NonnegMatrix& m);

/// (R1, R2) = (I - M_theta)^{-1} (c1 + theta C1, c2 + theta C2), the radii
/// of a ball mapped into itself by T. Throws NotConvergentError if
/// rho(M_theta) >= 1 - boundary_band.
DistanceVector schauder_radii(const GrowthSpec& g, ThetaWeight w,
                              double boundary_band = kDefaultBoundaryBand);

struct BallCheck {
    bool holds = true;
    std::size_t samples = 0;
    /// Largest observed |T(u)_i| / R_i over the samples.
    DistanceVector worst_ratio{0.0, 0.0};
    std::optional<SystemState> counterexample;
};

/// Samples states with weighted norms <= R (random trigonometric
/// polynomials and constants, half of them on the sphere) and checks that
/// T maps each into the ball, with 1e-9 relative slack.
BallCheck ball_invariance_check(const ProblemSpec& p, DistanceVector radii, std::size_t samples,
                                std::uint64_t seed = 1);

struct AprioriBound {
    /// Limit of Phi^k(0); empty when the region sweep found a solution of
    /// rho <= Phi(rho) outside [0, R0].
    std::optional<DistanceVector> R0;
    /// Bounds on |a|, |b|: (omega3(R0), omega4(R0)).
    std::optional<DistanceVector> scalar_bounds;
    /// The bound is checked on [0, cap] only; a global statement is out of reach.
    bool certified_region_only = true;
    std::size_t iterations = 0;
    std::optional<DistanceVector> sweep_violation;
};

/// Phi(rho) = (int_0^1 omega1(s, rho) ds + omega3(rho), int_0^1 omega2(s, rho) ds + omega4(rho)).
DistanceVector phi(const CaratheodoryGrowthSpec& cg, const ParamMap& params, DistanceVector rho);

/// Iterates Phi from 0 and sweeps a grid x grid lattice on (0, cap]^2 for
/// points with rho <= Phi(rho) outside the limit. Throws NoBoundFound if
/// the iterates leave the cap or fail to settle.
AprioriBound apriori_bound(const CaratheodoryGrowthSpec& cg, const ParamMap& params,
                           DistanceVector cap, std::size_t grid = 64);

/// Sampled monotonicity of omega1..omega4 in (r1, r2) on [0, cap]. A true
/// result is evidence, not proof.
bool omega_monotone_sampled(const CaratheodoryGrowthSpec& cg, const ParamMap& params,
                            DistanceVector cap, std::size_t samples = 2000,
                            std::uint64_t seed = 1);

enum class ConstantKind { Lipschitz, Growth };

struct Counterexample {
    std::string inequality;  // e.g. "f1 lipschitz"
    std::string point;       // human-readable sample location
    double lhs = 0.0;
    double rhs = 0.0;
};

struct FalsifyOptions {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    double box = 100.0;  // sample (t, x, y, x', y') with |x|, |y| <= box
};

/// Random search for a violation of the declared constants. Scalar
/// inequalities get `samples` draws; functional inequalities get
/// max(samples / 10, 100) grid-function draws. An empty result is not a proof.
std::optional<Counterexample> falsify_constants(const ProblemSpec& p, ConstantKind kind,
                                                const FalsifyOptions& options = {});

}  // namespace nlivp
