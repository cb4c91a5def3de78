#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "nlivp/config.hpp"
#include "nlivp/expr.hpp"
#include "nlivp/matrix.hpp"
#include "nlivp/problem.hpp"

namespace nlivp::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline NonnegMatrix random_nonneg(std::mt19937_64& rng, std::size_t n, double hi) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = uniform(rng, 0.0, hi);
    }
    return NonnegMatrix(m);
}

inline ProblemSpec make_spec(const std::string& f1, const std::string& f2, const std::string& alpha,
                             const std::string& beta, const ParamMap& params = {},
                             std::size_t n = 64) {
    ProblemSpec p{
        .f1 = parse_scalar(f1, params),
        .f2 = parse_scalar(f2, params),
        .alpha = parse_functional(alpha, params),
        .beta = parse_functional(beta, params),
        .params = params,
        .lipschitz = std::nullopt,
        .growth = std::nullopt,
        .caratheodory = std::nullopt,
    };
    p.n_intervals = n;
    return p;
}

/// Built-in example with param a and grid N.
inline ProblemConfig example(const std::string& name, double a, std::size_t n = 1024,
                             const ExampleForcing& forcing = {}) {
    Overrides o;
    o.params["a"] = a;
    o.grid = n;
    return builtin_example(name, forcing, o);
}

}  // namespace nlivp::testing
