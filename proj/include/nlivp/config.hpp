#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "nlivp/problem.hpp"

namespace nlivp {

/// Command-line overrides applied on top of a config document.
struct Overrides {
    ParamMap params;
    std::optional<std::size_t> grid;
    std::optional<double> tolerance;
    std::optional<double> theta;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> max_iter;
};

struct CaratheodoryRegion {
    DistanceVector cap{10.0, 10.0};
    std::size_t grid = 64;
};

/// A parsed problem file: the problem itself plus run settings that are
/// not part of the mathematics.
struct ProblemConfig {
    std::string name;
    ProblemSpec spec;
    bool theta_explicit = false;
    std::uint64_t seed = 1;
    CaratheodoryRegion caratheodory_region;
};

/// YAML document with keys
///   name, expressions {f1, f2, alpha, beta}, params {name: number},
///   grid, theta, tolerance, max_iter, solver (perov|picard), seed,
///   lipschitz {a1 b1 a2 b2 A1 B1 A2 B2}  (or a list of those 8),
///   growth {a1 b1 c1 a2 b2 c2 A1 B1 C1 A2 B2 C2}  (or a list of those 12),
///   caratheodory {omega1, omega2, omega3, omega4, cap: [r1, r2], grid}.
/// Constants are numbers or constant expressions over params (e.g. abs(a)).
/// Unknown keys are rejected. Throws ConfigError with line and column.
ProblemConfig parse_config(std::string_view yaml, const Overrides& overrides = {});
ProblemConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});

/// Forcing terms for the built-in examples; defaults g(t) = t, h(t) = 1.
struct ExampleForcing {
    std::string g = "t";
    std::string h = "1";
};

/// YAML text of a built-in example: "ex1" (Lipschitz, Perov), "ex2"
/// (growth constants reusing the ex1 matrix, Picard) or "ex2-strict" (growth
/// constants with the functional bound moved into C). `a` and `grid` fix the
/// constants that depend on them. Throws ConfigError for unknown names.
std::string example_config_yaml(std::string_view name, const ExampleForcing& forcing, double a,
                                std::size_t grid);

/// Materialises a built-in example with overrides applied (param `a`
/// defaults to 0.1).
ProblemConfig builtin_example(std::string_view name, const ExampleForcing& forcing,
                              const Overrides& overrides = {});

}  // namespace nlivp
