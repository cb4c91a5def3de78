#pragma once

#include <cstddef>
#include <optional>

#include "nlivp/expr.hpp"
#include "nlivp/space.hpp"

namespace nlivp {

/// Linear coefficients shared by the Lipschitz and growth conditions:
///   |f1| terms a1 |x| + b1 |y|,  |f2| terms a2 |x| + b2 |y|,
///   |alpha| terms A1 |x|_C + B1 |y|_C,  |beta| terms A2 |x|_C + B2 |y|_C.
struct CouplingConstants {
    double a1 = 0.0, b1 = 0.0, a2 = 0.0, b2 = 0.0;
    double A1 = 0.0, B1 = 0.0, A2 = 0.0, B2 = 0.0;
};

/// |f1(t,x,y) - f1(t,x',y')| <= a1|x-x'| + b1|y-y'| (same for f2), and
/// |alpha[x,y] - alpha[x',y']| <= A1|x-x'|_C + B1|y-y'|_C (same for beta).
struct LipschitzSpec {
    CouplingConstants k;
};

/// |f1| <= a1|x| + b1|y| + c1, |alpha| <= A1|x|_C + B1|y|_C + C1, and the
/// same for f2, beta with index 2.
struct GrowthSpec {
    CouplingConstants k;
    double c1 = 0.0, c2 = 0.0;
    double C1 = 0.0, C2 = 0.0;
};

/// Bounds |f_i(t,x,y)| <= omega_i(t,|x|,|y|), |alpha| <= omega3(|x|_C,|y|_C),
/// |beta| <= omega4(|x|_C,|y|_C). omega1, omega2 are in (t, r1, r2);
/// omega3, omega4 in (r1, r2). All nondecreasing in r1, r2.
struct CaratheodoryGrowthSpec {
    ScalarExpr omega1;
    ScalarExpr omega2;
    ScalarExpr omega3;
    ScalarExpr omega4;
};

/// Throws InvalidArgument if any constant is negative or not finite.
void validate(const CouplingConstants& k);
void validate(const GrowthSpec& g);

const std::vector<std::string>& omega_time_variables();   // t, r1, r2
const std::vector<std::string>& omega_norm_variables();   // r1, r2

enum class SolverKind { Perov, Picard };

const char* to_string(SolverKind k) noexcept;

/// x' = f1(t,x,y), y' = f2(t,x,y) on [0,1], x(0) = alpha[x,y], y(0) = beta[x,y].
struct ProblemSpec {
    ScalarExpr f1;
    ScalarExpr f2;
    FunctionalExpr alpha;
    FunctionalExpr beta;
    ParamMap params;
    std::size_t n_intervals = 1024;
    ThetaWeight theta{2.0};
    double tolerance = 1e-8;
    std::size_t max_iter = 1000;
    SolverKind solver = SolverKind::Perov;
    std::optional<LipschitzSpec> lipschitz;
    std::optional<GrowthSpec> growth;
    std::optional<CaratheodoryGrowthSpec> caratheodory;

    /// Throws InvalidArgument if N is not a positive multiple of 4 or the
    /// tolerance is not positive.
    void validate() const;
};

}  // namespace nlivp
