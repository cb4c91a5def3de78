#include "nlivp/cli.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "nlivp/errors.hpp"
#include "nlivp/hypotheses.hpp"
#include "nlivp/oracle.hpp"
#include "nlivp/report.hpp"
#include "nlivp/solver.hpp"

namespace nlivp::cli {

namespace {

// M_theta at the configured weight and, when that one fails, at the best
// weight the search found.
struct ThetaChoice {
    NonnegMatrix configured_matrix;
    ConvergenceReport configured_report;
    ThetaSearch search;
    ThetaWeight selected;
    NonnegMatrix selected_matrix;
    ConvergenceReport selected_report;

    bool convergent() const { return selected_report.verdict == Verdict::Convergent; }
};

ThetaChoice choose_theta(const CouplingConstants& k, ThetaWeight configured) {
    NonnegMatrix m = build_M_theta(k, configured);
    const ConvergenceReport r = check_convergent_to_zero(m);
    const ThetaSearch search = find_theta(k);
    if (r.verdict != Verdict::Convergent && search.convergent) {
        const ThetaWeight w(search.theta);
        NonnegMatrix ms = build_M_theta(k, w);
        const ConvergenceReport rs = check_convergent_to_zero(ms);
        return {m, r, search, w, std::move(ms), rs};
    }
    return {m, r, search, configured, m, r};
}

std::string constants_text(const CouplingConstants& k) {
    return fmt::format("a1={} b1={} a2={} b2={} A1={} B1={} A2={} B2={}", format_number(k.a1),
                       format_number(k.b1), format_number(k.a2), format_number(k.b2),
                       format_number(k.A1), format_number(k.B1), format_number(k.A2),
                       format_number(k.B2));
}

void write_convergence(ReportWriter& w, const NonnegMatrix& m, const ConvergenceReport& r,
                       std::string_view label = "M_theta") {
    w.field(label, format_matrix(m));
    w.field("spectral_radius", r.spectral_radius);
    w.field("verdict", std::string_view(to_string(r.verdict)));
    w.field("criterion.powers_to_zero", r.by_power_iteration);
    w.field("criterion.neumann_series", r.by_neumann);
    w.field("criterion.spectral_radius", r.by_eigenvalues);
    w.field("criterion.inverse_positive", r.by_inverse_positivity);
    if (m.size() == 2) w.field("row_sum_sufficient", row_sum_sufficient_check(m));
}

void write_theta_choice(ReportWriter& w, const ThetaChoice& c) {
    if (c.search.convergent) {
        w.field("theta_search", fmt::format("best θ = {}, ρ = {}", format_number(c.search.theta),
                                            format_number(c.search.rho)));
    } else {
        w.field("theta_search",
                fmt::format("no θ achieves ρ<1 (smallest ρ = {} at θ = {})",
                            format_number(c.search.rho), format_number(c.search.theta)));
    }
}

void write_falsification(ReportWriter& w, const std::optional<Counterexample>& c,
                         std::size_t samples) {
    if (!c) {
        w.field("falsification", fmt::format("no violation in {} samples", samples));
        return;
    }
    w.field("falsification", fmt::format("violated: {} at {} ({} > {})", c->inequality, c->point,
                                         format_number(c->lhs), format_number(c->rhs)));
}

void write_problem(ReportWriter& w, const ProblemConfig& c) {
    const ProblemSpec& s = c.spec;
    w.section("problem");
    w.field("name", c.name);
    w.field("solver", std::string_view(to_string(s.solver)));
    w.field("f1", s.f1.source());
    w.field("f2", s.f2.source());
    w.field("alpha", s.alpha.source());
    w.field("beta", s.beta.source());
    for (const auto& [name, value] : s.params) w.field("param." + name, value);
    w.field("grid", std::to_string(s.n_intervals));
    w.field("theta", fmt::format("{} ({})", format_number(s.theta.value()),
                                 c.theta_explicit ? "configured" : "default"));
    w.field("tolerance", s.tolerance);
    w.field("max_iter", std::to_string(s.max_iter));
    w.field("seed", std::to_string(c.seed));
}

ProblemSpec with_theta(const ProblemSpec& p, ThetaWeight w) {
    ProblemSpec out = p;
    out.theta = w;
    return out;
}

constexpr std::size_t kBallSamples = 200;

struct CheckOutcome {
    bool holds = false;
};

CheckOutcome run_check(const ProblemConfig& c, ReportWriter& w) {
    const ProblemSpec& s = c.spec;
    write_problem(w, c);
    const FalsifyOptions falsify{.samples = 10000, .seed = c.seed, .box = 100.0};

    bool lipschitz_ok = false;
    if (s.lipschitz) {
        w.section("lipschitz");
        w.field("constants", constants_text(s.lipschitz->k));
        const ThetaChoice choice = choose_theta(s.lipschitz->k, s.theta);
        write_convergence(w, choice.configured_matrix, choice.configured_report);
        write_theta_choice(w, choice);
        if (choice.configured_report.verdict != Verdict::Convergent && choice.convergent()) {
            w.field("theta_selected", choice.selected.value());
            w.field("spectral_radius_selected", choice.selected_report.spectral_radius);
        }
        const auto counterexample = falsify_constants(s, ConstantKind::Lipschitz, falsify);
        write_falsification(w, counterexample, falsify.samples);
        lipschitz_ok = choice.convergent() && !counterexample;
    }

    bool growth_ok = false;
    if (s.growth) {
        w.section("growth");
        w.field("constants", fmt::format("{} c1={} c2={} C1={} C2={}", constants_text(s.growth->k),
                                         format_number(s.growth->c1), format_number(s.growth->c2),
                                         format_number(s.growth->C1), format_number(s.growth->C2)));
        const ThetaChoice choice = choose_theta(s.growth->k, s.theta);
        write_convergence(w, choice.configured_matrix, choice.configured_report);
        write_theta_choice(w, choice);
        bool ball_ok = false;
        if (choice.convergent()) {
            if (choice.configured_report.verdict != Verdict::Convergent) {
                w.field("theta_selected", choice.selected.value());
            }
            const DistanceVector radii = schauder_radii(*s.growth, choice.selected);
            w.field("schauder_radii", format_vector(radii));
            const BallCheck ball =
                ball_invariance_check(with_theta(s, choice.selected), radii, kBallSamples, c.seed);
            w.field("ball_invariance",
                    fmt::format("{} in {} samples (worst |T u|/R = {})",
                                ball.holds ? "holds" : "violated", ball.samples,
                                format_vector(ball.worst_ratio)));
            ball_ok = ball.holds;
        } else {
            w.field("schauder_radii", std::string_view("none (M_theta is not convergent to zero)"));
        }
        const auto counterexample = falsify_constants(s, ConstantKind::Growth, falsify);
        write_falsification(w, counterexample, falsify.samples);
        growth_ok = ball_ok && !counterexample;
    }

    bool caratheodory_ok = false;
    if (s.caratheodory) {
        w.section("caratheodory");
        const CaratheodoryGrowthSpec& cg = *s.caratheodory;
        w.field("omega1", cg.omega1.source());
        w.field("omega2", cg.omega2.source());
        w.field("omega3", cg.omega3.source());
        w.field("omega4", cg.omega4.source());
        const DistanceVector cap = c.caratheodory_region.cap;
        w.field("region", fmt::format("[0, {}] x [0, {}]", format_number(cap[0]),
                                      format_number(cap[1])));
        const bool monotone = omega_monotone_sampled(cg, s.params, cap, 2000, c.seed);
        w.field("omega_monotone_sampled", monotone);
        try {
            const AprioriBound bound = apriori_bound(cg, s.params, cap, c.caratheodory_region.grid);
            if (bound.R0) {
                w.field("a_priori_bound", format_vector(*bound.R0));
                if (bound.scalar_bounds) w.field("scalar_bounds", format_vector(*bound.scalar_bounds));
                w.field("certified_region_only", bound.certified_region_only);
            } else {
                w.field("a_priori_bound",
                        fmt::format("none (rho <= Phi(rho) also holds at {})",
                                    format_vector(bound.sweep_violation.value_or(DistanceVector{}))));
            }
            caratheodory_ok = monotone && bound.R0.has_value();
        } catch (const NoBoundFound& e) {
            w.field("a_priori_bound", fmt::format("none ({})", e.what()));
        }
    }

    w.section("verdict");
    CheckOutcome out;
    if (s.solver == SolverKind::Perov) {
        out.holds = lipschitz_ok;
        if (!s.lipschitz) w.field("note", std::string_view("perov needs lipschitz constants"));
        w.field("hypotheses", std::string_view(out.holds ? "hold" : "fail"));
        if (out.holds) {
            w.field("conclusion",
                    std::string_view("unique solution; successive approximations converge"));
        }
    } else {
        out.holds = growth_ok || caratheodory_ok;
        if (!s.growth && !s.caratheodory) {
            w.field("note", std::string_view("picard needs growth or caratheodory bounds"));
        }
        w.field("hypotheses", std::string_view(out.holds ? "hold" : "fail"));
        if (out.holds) {
            w.field("conclusion", std::string_view("a solution exists; no uniqueness certificate"));
        }
    }
    return out;
}

struct SolveRun {
    int exit = kExitOk;
    ProblemSpec spec;
    std::optional<SolveResult> result;
};

SolveRun run_solve(const ProblemConfig& c, ReportWriter& w, std::ostream& err) {
    SolveRun run{kExitOk, c.spec, std::nullopt};
    ProblemSpec& s = run.spec;
    const SystemState u0 = SystemState::zero(s.n_intervals);

    w.section("solve");
    w.field("name", c.name);
    w.field("solver", std::string_view(to_string(s.solver)));
    w.field("grid", std::to_string(s.n_intervals));
    w.field("tolerance", s.tolerance);
    w.field("max_iter", std::to_string(s.max_iter));

    try {
        if (s.solver == SolverKind::Perov) {
            if (!s.lipschitz) {
                err << "perov solver needs lipschitz constants\n";
                run.exit = kExitHypothesesFail;
                return run;
            }
            const ThetaChoice choice = choose_theta(s.lipschitz->k, s.theta);
            if (!choice.convergent()) {
                err << "M_theta is not convergent to zero for any theta; refusing to run perov\n";
                run.exit = kExitHypothesesFail;
                return run;
            }
            s.theta = choice.selected;
            run.result = perov_solve(s, u0, s.tolerance, s.max_iter);
        } else {
            if (s.growth) {
                const ThetaChoice choice = choose_theta(s.growth->k, s.theta);
                if (choice.convergent()) {
                    s.theta = choice.selected;
                } else {
                    err << "warning: growth matrix is not convergent to zero; no invariant ball\n";
                }
            } else if (!s.caratheodory) {
                err << "warning: no growth or caratheodory bounds declared\n";
            }
            run.result = picard_solve(s, u0, s.tolerance, s.max_iter);
        }
    } catch (const NotContractive& e) {
        err << e.what() << '\n';
        run.exit = kExitHypothesesFail;
        return run;
    } catch (const EvalError& e) {
        err << "evaluation failed: " << e.what() << '\n';
        run.exit = kExitNotConverged;
        return run;
    }

    const SolveResult& r = *run.result;
    w.field("theta", s.theta.value());
    w.field("status", std::string_view(to_string(r.status)));
    w.field("iterations", std::to_string(r.iterations));
    if (!r.step_history.empty()) w.field("last_step", format_vector(r.step_history.back()));
    w.field("residual.ode1", r.residuals.ode1);
    w.field("residual.ode2", r.residuals.ode2);
    w.field("residual.nl1", r.residuals.nl1);
    w.field("residual.nl2", r.residuals.nl2);

    w.section("certificate");
    if (r.certificate) {
        const PerovCertificate& cert = *r.certificate;
        w.field("M_theta", format_matrix(cert.matrix));
        w.field("theta", cert.theta);
        w.field("k", std::to_string(cert.iterations));
        w.field("apriori_bound", format_vector(cert.apriori_bound));
        w.field("aposteriori_bound", format_vector(cert.aposteriori_bound));
    } else {
        w.field("certificate", std::string_view("no uniqueness certificate (existence only)"));
        if (r.ball_radii) {
            w.field("ball_radii", format_vector(*r.ball_radii));
            w.field("stayed_in_ball", r.stayed_in_ball.value_or(false));
        }
    }
    if (!r.converged) run.exit = kExitNotConverged;
    return run;
}

std::optional<DistanceVector> invariant_radii(const ProblemSpec& s) {
    if (!s.growth) return std::nullopt;
    const ThetaChoice choice = choose_theta(s.growth->k, s.theta);
    if (!choice.convergent()) return std::nullopt;
    return schauder_radii(*s.growth, choice.selected);
}

struct OracleRun {
    int exit = kExitOk;
    std::optional<oracle::ShootResult> result;
};

OracleRun run_oracle(const ProblemConfig& c, ReportWriter& w, std::ostream& err) {
    OracleRun run;
    const ProblemSpec& s = c.spec;
    const std::optional<DistanceVector> radii = invariant_radii(s);
    oracle::ShootOptions options;
    options.radii = radii;

    w.section("oracle");
    w.field("method", std::string_view("RK4 shooting, damped Newton on the nonlocal conditions"));
    try {
        run.result = oracle::solve_nonlocal(s, {0.0, 0.0}, options);
    } catch (const NoRoot& e) {
        err << e.what() << '\n';
        w.field("status", std::string_view("no root"));
        run.exit = kExitNotConverged;
        return run;
    }
    const oracle::ShootResult& r = *run.result;
    w.field("status", std::string_view("converged"));
    w.field("a", r.a);
    w.field("b", r.b);
    w.field("mismatch", format_vector(r.mismatch));
    w.field("newton_steps", std::to_string(r.newton_steps));
    w.field("starts_tried", std::to_string(r.starts_tried));
    const Residuals res = residual(r.state(), s);
    w.field("residual.ode1", res.ode1);
    w.field("residual.ode2", res.ode2);
    w.field("residual.nl1", res.nl1);
    w.field("residual.nl2", res.nl2);
    if (radii) {
        const ThetaChoice choice = choose_theta(s.growth->k, s.theta);
        const DistanceVector norms = weighted_norms(r.state(), choice.selected);
        w.field("ball_radii", format_vector(*radii));
        w.field("inside_ball", norms[0] <= (*radii)[0] * (1.0 + 1e-9) &&
                                   norms[1] <= (*radii)[1] * (1.0 + 1e-9));
    }
    return run;
}

void prepare(const OutDir& dir) {
    if (dir) std::filesystem::create_directories(*dir);
}

void write_comparison(ReportWriter& w, const SolveRun& solve, const oracle::ShootResult& o) {
    const SolveResult& r = *solve.result;
    const GridFunction& xs = r.state.first.func;
    const GridFunction& ys = r.state.second.func;
    w.section("comparison");
    w.line(fmt::format("{:>6}  {:>16}  {:>16}  {:>9}  {:>16}  {:>16}  {:>9}", "t", "x solver",
                       "x oracle", "|dx|", "y solver", "y oracle", "|dy|"));
    const std::size_t n = xs.n_intervals();
    for (std::size_t q = 0; q <= 4; ++q) {
        const std::size_t i = q * n / 4;
        w.line(fmt::format("{:>6.3f}  {:>16.12f}  {:>16.12f}  {:>9.2e}  {:>16.12f}  {:>16.12f}  {:>9.2e}",
                           xs.node(i), xs[i], o.x[i], std::abs(xs[i] - o.x[i]), ys[i], o.y[i],
                           std::abs(ys[i] - o.y[i])));
    }
    const DistanceVector d = vector_distance(r.state, o.state(), solve.spec.theta);
    w.field("distance", format_vector(d));
    if (r.certificate) {
        const bool ok = certificate_check(r, o.state(), solve.spec.theta);
        w.field("certificate_check",
                fmt::format("{} (distance <= aposteriori_bound + {})", ok ? "pass" : "FAIL",
                            format_number(kDefaultDiscretizationAllowance)));
    } else {
        w.field("uniqueness", std::string_view("not certified; the oracle root is one solution"));
    }
}

// Translates library exceptions into the exit-code contract.
template <typename F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

}  // namespace

int cmd_check(const ProblemConfig& config, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        ReportWriter w;
        const CheckOutcome outcome = run_check(config, w);
        out << w.text();
        return outcome.holds ? kExitOk : kExitHypothesesFail;
    });
}

int cmd_solve(const ProblemConfig& config, const OutDir& out_dir, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        ReportWriter w;
        const SolveRun run = run_solve(config, w, err);
        out << w.text();
        if (run.result && out_dir) {
            prepare(out_dir);
            write_solution_csv(*out_dir / "solution.csv", run.result->state.first.func,
                               run.result->state.second.func);
            w.save(*out_dir / "report.txt");
        }
        return run.exit;
    });
}

int cmd_oracle(const ProblemConfig& config, const OutDir& out_dir, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&] {
        ReportWriter w;
        const OracleRun run = run_oracle(config, w, err);
        out << w.text();
        if (out_dir) {
            prepare(out_dir);
            if (run.result) write_solution_csv(*out_dir / "oracle.csv", run.result->x, run.result->y);
            w.save(*out_dir / "oracle_report.txt");
        }
        return run.exit;
    });
}

int cmd_matrix(const std::filesystem::path& path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::ifstream in(path);
        if (!in) throw ConfigError(fmt::format("cannot read matrix file '{}'", path.string()));
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(fmt::format("matrix file is not valid JSON: {}", e.what()));
        }
        if (!doc.is_array() || doc.empty()) {
            throw ConfigError("matrix file must hold a non-empty array of rows");
        }
        std::vector<std::vector<double>> rows;
        for (const auto& row : doc) {
            if (!row.is_array()) throw ConfigError("every row of the matrix must be an array");
            std::vector<double> values;
            for (const auto& v : row) {
                if (!v.is_number()) throw ConfigError("matrix entries must be numbers");
                values.push_back(v.get<double>());
            }
            rows.push_back(std::move(values));
        }
        NonnegMatrix m = [&] {
            try {
                return NonnegMatrix(Matrix::from_rows(rows));
            } catch (const Error& e) {
                throw ConfigError(e.what());
            }
        }();

        ReportWriter w;
        w.section("matrix");
        w.field("size", std::to_string(m.size()));
        const ConvergenceReport r = check_convergent_to_zero(m);
        write_convergence(w, m, r, "entries");
        if (m.size() != 2) w.field("row_sum_sufficient", m.matrix().max_row_sum() < 1.0);
        if (r.verdict == Verdict::Convergent) {
            const Matrix inv = neumann_inverse(m);
            std::string text = "[";
            for (std::size_t i = 0; i < inv.size(); ++i) {
                text += i == 0 ? "[" : ", [";
                for (std::size_t j = 0; j < inv.size(); ++j) {
                    if (j > 0) text += ", ";
                    text += format_number(inv(i, j));
                }
                text += "]";
            }
            w.field("neumann_inverse", text + "]");
        }
        out << w.text();
        return r.verdict == Verdict::Convergent ? kExitOk : kExitHypothesesFail;
    });
}

int cmd_example(std::string_view name, const ExampleForcing& forcing, const Overrides& overrides,
                const OutDir& out_dir, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProblemConfig config = builtin_example(name, forcing, overrides);
        prepare(out_dir);

        ReportWriter check;
        const CheckOutcome outcome = run_check(config, check);
        out << check.text();
        if (out_dir) check.save(*out_dir / "check_report.txt");
        if (!outcome.holds) return kExitHypothesesFail;

        ReportWriter solve;
        const SolveRun solved = run_solve(config, solve, err);
        out << '\n' << solve.text();
        ReportWriter orc;
        const OracleRun shot = run_oracle(config, orc, err);
        out << '\n' << orc.text();
        if (out_dir) {
            if (solved.result) {
                write_solution_csv(*out_dir / "solution.csv", solved.result->state.first.func,
                                   solved.result->state.second.func);
            }
            solve.save(*out_dir / "report.txt");
            if (shot.result) write_solution_csv(*out_dir / "oracle.csv", shot.result->x, shot.result->y);
            orc.save(*out_dir / "oracle_report.txt");
        }
        if (solved.exit != kExitOk) return solved.exit;
        if (shot.exit != kExitOk) return shot.exit;

        ReportWriter table;
        write_comparison(table, solved, *shot.result);
        out << '\n' << table.text();
        return kExitOk;
    });
}

namespace {

struct CommonFlags {
    std::vector<std::string> params;
    std::size_t grid = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    double theta = 0.0;
    std::size_t max_iter = 0;
    CLI::Option* grid_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* theta_opt = nullptr;
    CLI::Option* max_iter_opt = nullptr;

    void attach(CLI::App* app) {
        app->add_option("--param", params, "Override a parameter, k=v (repeatable)");
        grid_opt = app->add_option("--grid", grid, "Grid intervals N (multiple of 4)");
        tol_opt = app->add_option("--tol", tol, "Solver tolerance");
        seed_opt = app->add_option("--seed", seed, "Seed for the sampling checks");
        theta_opt = app->add_option("--theta", theta, "Weight of the scalar part");
        max_iter_opt = app->add_option("--max-iter", max_iter, "Iteration limit");
    }

    Overrides overrides() const {
        Overrides o;
        for (const std::string& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ConfigError(fmt::format("--param expects k=v, got '{}'", kv));
            }
            const std::string key = kv.substr(0, eq);
            const std::string text = kv.substr(eq + 1);
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(text, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != text.size() || !std::isfinite(value)) {
                throw ConfigError(fmt::format("--param {}: '{}' is not a number", key, text));
            }
            o.params[key] = value;
        }
        if (*grid_opt) o.grid = grid;
        if (*tol_opt) o.tolerance = tol;
        if (*seed_opt) o.seed = seed;
        if (*theta_opt) o.theta = theta;
        if (*max_iter_opt) o.max_iter = max_iter;
        return o;
    }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fixed-point solver for ODE systems with nonlocal initial conditions", "nlivp"};
    app.require_subcommand(1);

    // One flag set per subcommand: CLI11 tracks "was given" per option.
    CommonFlags check_flags;
    CommonFlags solve_flags;
    CommonFlags oracle_flags;
    CommonFlags example_flags;
    std::string config_path;
    std::string out_dir;
    std::string example_name;
    ExampleForcing forcing;

    CLI::App* check = app.add_subcommand("check", "Verify the hypotheses declared in a config");
    check->add_option("config", config_path, "Problem file (YAML)")->required();
    check_flags.attach(check);

    CLI::App* solve = app.add_subcommand("solve", "Run the selected fixed-point solver");
    solve->add_option("config", config_path, "Problem file (YAML)")->required();
    solve->add_option("--out", out_dir, "Directory for solution.csv and report.txt");
    solve_flags.attach(solve);

    CLI::App* orc = app.add_subcommand("oracle", "Solve by shooting, independently of the solver");
    orc->add_option("config", config_path, "Problem file (YAML)")->required();
    orc->add_option("--out", out_dir, "Directory for oracle.csv and oracle_report.txt");
    oracle_flags.attach(orc);

    std::string matrix_path;
    CLI::App* matrix = app.add_subcommand("matrix", "Analyse a nonnegative matrix (JSON rows)");
    matrix->add_option("file", matrix_path, "JSON array of rows")->required();

    CLI::App* example = app.add_subcommand("example", "Run a built-in example end to end");
    example->set_help_flag("--help", "Print this help message and exit");
    example->add_option("name", example_name, "ex1, ex2 or ex2-strict")->required();
    example->add_option("--g", forcing.g, "Forcing term g(t) of the first equation");
    example->add_option("--h", forcing.h, "Forcing term h(t) of the second equation");
    example->add_option("--out", out_dir, "Directory for all reports and CSV files");
    example_flags.attach(example);

    std::vector<std::string> argv_storage{"nlivp"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (std::string& s : argv_storage) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    const OutDir dir = out_dir.empty() ? OutDir{} : OutDir{out_dir};
    if (*matrix) return cmd_matrix(matrix_path, out, err);
    return guarded(err, [&] {
        if (*example) {
            return cmd_example(example_name, forcing, example_flags.overrides(), dir, out, err);
        }
        const CommonFlags& flags = *check ? check_flags : *solve ? solve_flags : oracle_flags;
        const ProblemConfig config = load_config(config_path, flags.overrides());
        if (*check) return cmd_check(config, out, err);
        if (*solve) return cmd_solve(config, dir, out, err);
        return cmd_oracle(config, dir, out, err);
    });
}

}  // namespace nlivp::cli
