#include "nlivp/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "nlivp/errors.hpp"

namespace nlivp {

namespace {

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& message) {
    const YAML::Mark mark = node.Mark();
    throw ConfigError(message, mark.line, mark.column);
}

void reject_unknown_keys(const YAML::Node& map, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!map.IsMap()) fail_at(map, where + " must be a mapping");
    for (const auto& entry : map) {
        const std::string key = entry.first.as<std::string>();
        if (allowed.count(key) == 0U) {
            fail_at(entry.first, fmt::format("unknown key '{}' in {}", key, where));
        }
    }
}

std::string scalar_text(const YAML::Node& node, const std::string& what) {
    if (!node.IsScalar()) fail_at(node, what + " must be a scalar");
    return node.Scalar();
}

double number(const YAML::Node& node, const std::string& what) {
    const std::string text = scalar_text(node, what);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    fail_at(node, fmt::format("{} must be a finite number, got '{}'", what, text));
}

std::uint64_t count(const YAML::Node& node, const std::string& what) {
    const double v = number(node, what);
    if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
        fail_at(node, fmt::format("{} must be a nonnegative integer", what));
    }
    return static_cast<std::uint64_t>(v);
}

// A number or a constant expression over the parameters.
double constant(const YAML::Node& node, const std::string& what, const ParamMap& params) {
    const std::string text = scalar_text(node, what);
    double value = 0.0;
    try {
        std::size_t used = 0;
        value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
    } catch (const std::exception&) {
        try {
            static const std::vector<std::string> no_variables;
            value = parse_scalar(text, params, no_variables).eval({}, params);
        } catch (const Error& e) {
            fail_at(node, fmt::format("{}: {}", what, e.what()));
        }
    }
    if (!std::isfinite(value) || value < 0.0) {
        fail_at(node, fmt::format("{} = {} must be finite and nonnegative", what, value));
    }
    return value;
}

template <std::size_t N>
std::array<double, N> constant_block(const YAML::Node& node, const std::array<const char*, N>& keys,
                                     const std::string& section, const ParamMap& params) {
    std::array<double, N> out{};
    if (node.IsSequence()) {
        if (node.size() != N) {
            fail_at(node, fmt::format("{} needs exactly {} values", section, N));
        }
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = constant(node[i], section + "." + keys[i], params);
        }
        return out;
    }
    reject_unknown_keys(node, std::set<std::string>(keys.begin(), keys.end()), section);
    for (std::size_t i = 0; i < N; ++i) {
        const YAML::Node v = node[keys[i]];
        if (!v) fail_at(node, fmt::format("{} is missing '{}'", section, keys[i]));
        out[i] = constant(v, section + "." + keys[i], params);
    }
    return out;
}

const std::set<std::string>& reserved_names() {
    static const std::set<std::string> names{"t",   "x",   "y",    "r1",  "r2",      "int",
                                             "supnorm", "sin", "cos", "exp", "abs", "sqrt",
                                             "min", "max"};
    return names;
}

template <typename Parse>
auto parse_expression(const YAML::Node& node, const std::string& what, Parse&& parse) {
    const std::string text = scalar_text(node, what);
    try {
        return parse(text);
    } catch (const SyntaxError& e) {
        const YAML::Mark mark = node.Mark();
        throw ConfigError(fmt::format("{}: {}", what, e.what()), mark.line, mark.column);
    } catch (const Error& e) {
        fail_at(node, fmt::format("{}: {}", what, e.what()));
    }
}

YAML::Node load_document(std::string_view yaml) {
    try {
        return YAML::Load(std::string(yaml));
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, e.mark.line, e.mark.column);
    }
}

}  // namespace

ProblemConfig parse_config(std::string_view yaml, const Overrides& overrides) {
    const YAML::Node root = load_document(yaml);
    if (!root || !root.IsMap()) {
        throw ConfigError("config must be a YAML mapping");
    }
    reject_unknown_keys(root,
                        {"name", "expressions", "params", "grid", "theta", "tolerance", "max_iter",
                         "solver", "seed", "lipschitz", "growth", "caratheodory"},
                        "config");

    ParamMap params;
    if (const YAML::Node p = root["params"]) {
        if (!p.IsMap()) fail_at(p, "params must be a mapping");
        for (const auto& entry : p) {
            const std::string name = entry.first.as<std::string>();
            if (reserved_names().count(name) != 0U) {
                fail_at(entry.first, fmt::format("parameter name '{}' is reserved", name));
            }
            params[name] = number(entry.second, "params." + name);
        }
    }
    for (const auto& [name, value] : overrides.params) {
        if (params.count(name) == 0U) {
            throw ConfigError(fmt::format("--param {}: no such parameter in the config", name));
        }
        params[name] = value;
    }

    const YAML::Node exprs = root["expressions"];
    if (!exprs) throw ConfigError("config is missing 'expressions'");
    reject_unknown_keys(exprs, {"f1", "f2", "alpha", "beta"}, "expressions");
    const auto required = [&](const char* key) {
        const YAML::Node n = exprs[key];
        if (!n) fail_at(exprs, fmt::format("expressions is missing '{}'", key));
        return n;
    };
    const auto scalar = [&](const std::string& text) { return parse_scalar(text, params); };
    const auto functional = [&](const std::string& text) { return parse_functional(text, params); };

    ProblemSpec spec{
        .f1 = parse_expression(required("f1"), "expressions.f1", scalar),
        .f2 = parse_expression(required("f2"), "expressions.f2", scalar),
        .alpha = parse_expression(required("alpha"), "expressions.alpha", functional),
        .beta = parse_expression(required("beta"), "expressions.beta", functional),
        .params = params,
        .lipschitz = std::nullopt,
        .growth = std::nullopt,
        .caratheodory = std::nullopt,
    };

    ProblemConfig config{.name = "problem", .spec = std::move(spec), .caratheodory_region = {}};
    ProblemSpec& s = config.spec;
    if (const YAML::Node n = root["name"]) config.name = scalar_text(n, "name");
    if (const YAML::Node n = root["grid"]) s.n_intervals = count(n, "grid");
    if (const YAML::Node n = root["theta"]) {
        const double theta = number(n, "theta");
        if (!(theta > 0.0)) fail_at(n, "theta must be positive");
        s.theta = ThetaWeight(theta);
        config.theta_explicit = true;
    }
    if (const YAML::Node n = root["tolerance"]) s.tolerance = number(n, "tolerance");
    if (const YAML::Node n = root["max_iter"]) s.max_iter = count(n, "max_iter");
    if (const YAML::Node n = root["seed"]) config.seed = count(n, "seed");
    if (const YAML::Node n = root["solver"]) {
        const std::string kind = scalar_text(n, "solver");
        if (kind == "perov") {
            s.solver = SolverKind::Perov;
        } else if (kind == "picard") {
            s.solver = SolverKind::Picard;
        } else {
            fail_at(n, fmt::format("solver must be 'perov' or 'picard', got '{}'", kind));
        }
    }

    if (const YAML::Node n = root["lipschitz"]) {
        const auto v = constant_block<8>(n, {"a1", "b1", "a2", "b2", "A1", "B1", "A2", "B2"},
                                         "lipschitz", params);
        s.lipschitz = LipschitzSpec{{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]}};
    }
    if (const YAML::Node n = root["growth"]) {
        const auto v = constant_block<12>(
            n, {"a1", "b1", "c1", "a2", "b2", "c2", "A1", "B1", "C1", "A2", "B2", "C2"}, "growth",
            params);
        GrowthSpec g;
        g.k = {v[0], v[1], v[3], v[4], v[6], v[7], v[9], v[10]};
        g.c1 = v[2];
        g.c2 = v[5];
        g.C1 = v[8];
        g.C2 = v[11];
        s.growth = g;
    }
    if (const YAML::Node n = root["caratheodory"]) {
        reject_unknown_keys(n, {"omega1", "omega2", "omega3", "omega4", "cap", "grid"},
                            "caratheodory");
        const auto omega = [&](const char* key, const std::vector<std::string>& vars) {
            const YAML::Node e = n[key];
            if (!e) fail_at(n, fmt::format("caratheodory is missing '{}'", key));
            return parse_expression(e, std::string("caratheodory.") + key,
                                    [&](const std::string& text) {
                                        return parse_scalar(text, params, vars);
                                    });
        };
        s.caratheodory = CaratheodoryGrowthSpec{omega("omega1", omega_time_variables()),
                                                omega("omega2", omega_time_variables()),
                                                omega("omega3", omega_norm_variables()),
                                                omega("omega4", omega_norm_variables())};
        if (const YAML::Node cap = n["cap"]) {
            if (!cap.IsSequence() || cap.size() != 2) fail_at(cap, "caratheodory.cap needs 2 values");
            config.caratheodory_region.cap = {number(cap[0], "cap[0]"), number(cap[1], "cap[1]")};
            if (!(config.caratheodory_region.cap[0] > 0.0 && config.caratheodory_region.cap[1] > 0.0)) {
                fail_at(cap, "caratheodory.cap must be positive");
            }
        }
        if (const YAML::Node g = n["grid"]) config.caratheodory_region.grid = count(g, "caratheodory.grid");
    }

    if (overrides.grid) s.n_intervals = *overrides.grid;
    if (overrides.tolerance) s.tolerance = *overrides.tolerance;
    if (overrides.max_iter) s.max_iter = *overrides.max_iter;
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.theta) {
        try {
            s.theta = ThetaWeight(*overrides.theta);
        } catch (const Error& e) {
            throw ConfigError(fmt::format("--theta: {}", e.what()));
        }
        config.theta_explicit = true;
    }
    try {
        s.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return config;
}

ProblemConfig load_config(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), overrides);
}

namespace {

double sup_abs_on_grid(const std::string& forcing, double a, std::size_t grid) {
    const ParamMap params{{"a", a}};
    const ScalarExpr e = parse_scalar(forcing, params);
    double out = 0.0;
    for (std::size_t i = 0; i <= grid; ++i) {
        out = std::max(out, std::abs(eval_scalar(e, GridFunction::node(i, grid), 0.0, 0.0, params)));
    }
    return out;
}

}  // namespace

std::string example_config_yaml(std::string_view name, const ExampleForcing& forcing, double a,
                                std::size_t grid) {
    const std::string common = fmt::format(
        "params:\n  a: {:.17g}\ngrid: {}\ntheta: 2\ntolerance: 1.0e-8\nmax_iter: 1000\nseed: 1\n", a,
        grid);
    const std::string functionals =
        "  alpha: \"0.125*sin(x(0.25) + y(0.25))\"\n"
        "  beta: \"0.125*cos(x(0.25) + y(0.25))\"\n";

    if (name == "ex1") {
        return fmt::format(
            "name: ex1\n"
            "solver: perov\n"
            "expressions:\n"
            "  f1: \"0.25*sin(x) + a*y + ({})\"\n"
            "  f2: \"cos(a*x + 0.25*y) + ({})\"\n"
            "{}{}"
            "lipschitz:\n"
            "  a1: 0.25\n  b1: abs(a)\n  a2: abs(a)\n  b2: 0.25\n"
            "  A1: 0.125\n  B1: 0.125\n  A2: 0.125\n  B2: 0.125\n",
            forcing.g, forcing.h, functionals, common);
    }
    if (name == "ex2" || name == "ex2-strict") {
        double c1 = 0.0;
        double c2 = 0.0;
        try {
            c1 = sup_abs_on_grid(forcing.g, a, grid);
            c2 = sup_abs_on_grid(forcing.h, a, grid);
        } catch (const Error& e) {
            throw ConfigError(fmt::format("forcing term: {}", e.what()));
        }
        const bool strict = name == "ex2-strict";
        return fmt::format(
            "name: {}\n"
            "solver: picard\n"
            "expressions:\n"
            "  f1: \"0.25*x*sin(y/x) + a*y*sin(x/y) + ({})\"\n"
            "  f2: \"a*x*sin(y/x) + 0.25*y*sin(x/y) + ({})\"\n"
            "{}{}"
            "growth:\n"
            "  a1: 0.25\n  b1: abs(a)\n  c1: {:.17g}\n"
            "  a2: abs(a)\n  b2: 0.25\n  c2: {:.17g}\n"
            "  A1: {}\n  B1: {}\n  C1: {}\n"
            "  A2: {}\n  B2: {}\n  C2: {}\n"
            "caratheodory:\n"
            "  omega1: \"0.25*r1 + abs(a)*r2 + abs({})\"\n"
            "  omega2: \"abs(a)*r1 + 0.25*r2 + abs({})\"\n"
            "  omega3: \"0.125\"\n"
            "  omega4: \"0.125\"\n"
            "  cap: [100, 100]\n"
            "  grid: 64\n",
            name, forcing.g, forcing.h, functionals, common, c1, c2, strict ? "0" : "0.125",
            strict ? "0" : "0.125", strict ? "0.125" : "0", strict ? "0" : "0.125",
            strict ? "0" : "0.125", strict ? "0.125" : "0", forcing.g, forcing.h);
    }
    throw ConfigError(fmt::format("unknown example '{}' (expected ex1, ex2 or ex2-strict)", name));
}

ProblemConfig builtin_example(std::string_view name, const ExampleForcing& forcing,
                              const Overrides& overrides) {
    const auto it = overrides.params.find("a");
    const double a = it != overrides.params.end() ? it->second : 0.1;
    const std::size_t grid = overrides.grid.value_or(1024);
    if (grid < GridFunction::kMinIntervals) {
        throw ConfigError(fmt::format("grid size N = {} is too small", grid));
    }
    return parse_config(example_config_yaml(name, forcing, a, grid), overrides);
}

}  // namespace nlivp
