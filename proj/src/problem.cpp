#include "nlivp/problem.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp {

namespace {

void require_nonnegative(const char* name, double v) {
    if (!std::isfinite(v) || v < 0.0) {
        throw InvalidArgument(fmt::format("constant {} = {} must be finite and nonnegative", name, v));
    }
}

}  // namespace

void validate(const CouplingConstants& k) {
    require_nonnegative("a1", k.a1);
    require_nonnegative("b1", k.b1);
    require_nonnegative("a2", k.a2);
    require_nonnegative("b2", k.b2);
    require_nonnegative("A1", k.A1);
    require_nonnegative("B1", k.B1);
    require_nonnegative("A2", k.A2);
    require_nonnegative("B2", k.B2);
}

void validate(const GrowthSpec& g) {
    validate(g.k);
    require_nonnegative("c1", g.c1);
    require_nonnegative("c2", g.c2);
    require_nonnegative("C1", g.C1);
    require_nonnegative("C2", g.C2);
}

const std::vector<std::string>& omega_time_variables() {
    static const std::vector<std::string> vars{"t", "r1", "r2"};
    return vars;
}

const std::vector<std::string>& omega_norm_variables() {
    static const std::vector<std::string> vars{"r1", "r2"};
    return vars;
}

const char* to_string(SolverKind k) noexcept {
    return k == SolverKind::Perov ? "perov" : "picard";
}

void ProblemSpec::validate() const {
    if (n_intervals < GridFunction::kMinIntervals || n_intervals % 4 != 0) {
        throw InvalidArgument(
            fmt::format("grid size N = {} must be a positive multiple of 4", n_intervals));
    }
    if (!(tolerance > 0.0)) {
        throw InvalidArgument(fmt::format("tolerance must be positive, got {}", tolerance));
    }
    if (max_iter == 0) {
        throw InvalidArgument("max_iter must be at least 1");
    }
    if (lipschitz) nlivp::validate(lipschitz->k);
    if (growth) nlivp::validate(*growth);
}

}  // namespace nlivp
