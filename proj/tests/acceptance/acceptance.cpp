// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "nlivp/cli.hpp"
#include "nlivp/errors.hpp"
#include "nlivp/hypotheses.hpp"
#include "nlivp/operator.hpp"
#include "nlivp/oracle.hpp"
#include "nlivp/solver.hpp"
#include "support.hpp"

using namespace nlivp;
using nlivp::testing::example;
using nlivp::testing::make_spec;
using nlivp::testing::random_nonneg;
using nlivp::testing::uniform;

namespace {

// Pinned tolerances.
constexpr double kEigenTol = 1e-12;
constexpr double kThresholdSeconds = 1.0;
constexpr double kPerovSeconds = 5.0;
constexpr double kEquivalenceSeconds = 10.0;
constexpr std::size_t kPerovMaxIterations = 200;
constexpr double kAllowance = 1e-5;
constexpr double kResidualTol = 1e-4;
constexpr double kBoundaryExclusion = 1e-6;
constexpr double kNeumannTol = 1e-8;
constexpr double kInversePositivityTol = 1e-12;
constexpr double kRadiiTol = 1e-10;
constexpr double kPicardOracleTol = 1e-6;
constexpr double kContractionSlack = 1e-12;
constexpr double kRatioLow = 3.0;
constexpr double kRatioHigh = 5.0;
constexpr double kRk4Reduction = 12.0;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd out(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m(i, j);
    }
    return out;
}

CouplingConstants example_constants(double a) {
    return {0.25, std::abs(a), std::abs(a), 0.25, 0.125, 0.125, 0.125, 0.125};
}

SystemState random_state(std::mt19937_64& rng, std::size_t n) {
    const auto fn = [&] {
        const double c0 = uniform(rng, -2, 2), c1 = uniform(rng, -2, 2);
        const double k = uniform(rng, 0, 12), phase = uniform(rng, 0, 6.3);
        return GridFunction::sample(n, [=](double t) { return c0 + c1 * std::sin(k * t + phase); });
    };
    GridFunction x = fn();
    GridFunction y = fn();
    return {{std::move(x), uniform(rng, -2, 2)}, {std::move(y), uniform(rng, -2, 2)}};
}

Check threshold() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const ThetaWeight w(2.0);
    for (double a : {0.0, 0.1, 0.24}) {
        const NonnegMatrix m = build_M_theta(example_constants(a), w);
        c.require(check_convergent_to_zero(m).verdict == Verdict::Convergent,
                  fmt::format("|a|={} not Convergent", a));
    }
    for (double a : {0.25 + 1e-6, 0.3, 1.0}) {
        const NonnegMatrix m = build_M_theta(example_constants(a), w);
        c.require(check_convergent_to_zero(m).verdict == Verdict::NotConvergent,
                  fmt::format("|a|={} not NotConvergent", a));
    }
    double worst = 0.0;
    for (double a : {0.0, 0.1, 0.24, 0.25 + 1e-6, 0.3, 1.0}) {
        const NonnegMatrix m = build_M_theta(example_constants(a), w);
        Eigen::VectorXd ev = to_eigen(m.matrix()).selfadjointView<Eigen::Lower>().eigenvalues();
        std::sort(ev.data(), ev.data() + ev.size());
        worst = std::max({worst, std::abs(ev(0) - (0.25 - a)), std::abs(ev(1) - (0.75 + a)),
                          std::abs(spectral_radius(m) - (0.75 + a))});
    }
    c.require(worst <= kEigenTol, fmt::format("eigenvalue error {:.3g}", worst));
    const double t = seconds_since(start);
    c.require(t < kThresholdSeconds, fmt::format("took {:.3f} s", t));
    if (c.ok) c.detail = fmt::format("max eigenvalue error {:.2g}", worst);
    return c;
}

Check perov_certificate() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    const ProblemSpec p = example("ex1", 0.1, 1024).spec;
    const SolveResult r = perov_solve(p, SystemState::zero(p.n_intervals), 1e-8, 1000);
    const oracle::ShootResult o = oracle::solve_nonlocal(p, {0.0, 0.0});
    const double t = seconds_since(start);
    c.require(r.converged, "perov did not converge");
    c.require(r.iterations < kPerovMaxIterations, fmt::format("{} iterations", r.iterations));
    const DistanceVector d = vector_distance(r.state, o.state(), p.theta);
    const DistanceVector bound = r.certificate->aposteriori_bound;
    c.require(d[0] <= bound[0] + kAllowance && d[1] <= bound[1] + kAllowance,
              fmt::format("distance ({:.3g}, {:.3g}) exceeds bound", d[0], d[1]));
    const Residuals res = residual(r.state, p);
    c.require(res.max() <= kResidualTol, fmt::format("residual {:.3g}", res.max()));
    c.require(t < kPerovSeconds, fmt::format("took {:.3f} s", t));
    if (c.ok) {
        c.detail = fmt::format("{} iterations, distance ({:.2g}, {:.2g}), bound ({:.2g}, {:.2g}), residual {:.2g}",
                               r.iterations, d[0], d[1], bound[0], bound[1], res.max());
    }
    return c;
}

Check equivalence() {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t tested = 0, excluded = 0, disagreements = 0, convergent = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 2)(rng));
        const NonnegMatrix m = random_nonneg(rng, n, 2.0);
        const double rho = to_eigen(m.matrix()).eigenvalues().cwiseAbs().maxCoeff();
        if (std::abs(rho - 1.0) <= kBoundaryExclusion) {
            ++excluded;
            continue;
        }
        ++tested;
        try {
            const ConvergenceReport r = check_convergent_to_zero(m);
            const bool all = r.by_power_iteration && r.by_neumann && r.by_eigenvalues && r.by_inverse_positivity;
            const bool none = !r.by_power_iteration && !r.by_neumann && !r.by_eigenvalues &&
                              !r.by_inverse_positivity;
            const bool expected = rho < 1.0;
            if (!(all || none) || all != expected) ++disagreements;
            if (all) ++convergent;
        } catch (const DisagreementOutsideBoundary&) {
            ++disagreements;
        }
    }
    const double t = seconds_since(start);
    c.require(disagreements == 0, fmt::format("{} disagreements", disagreements));
    c.require(t < kEquivalenceSeconds, fmt::format("took {:.3f} s", t));
    if (c.ok) {
        c.detail = fmt::format("{} matrices, {} convergent, {} near rho=1 skipped, 0 disagreements", tested,
                               convergent, excluded);
    }
    return c;
}

Check neumann() {
    Check c;
    std::mt19937_64 rng(77);
    double worst = 0.0, most_negative = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + static_cast<std::size_t>(i % 3);
        const NonnegMatrix raw = random_nonneg(rng, n, 1.0);
        const double target = uniform(rng, 0.0, 0.9);
        const double rho = spectral_radius(raw);
        const NonnegMatrix m(rho > 0 ? (target / rho) * raw.matrix() : raw.matrix());
        const Matrix inv = neumann_inverse(m);
        const Eigen::MatrixXd expected =
            (Eigen::MatrixXd::Identity(n, n) - to_eigen(m.matrix())).fullPivLu().inverse();
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t col = 0; col < n; ++col) {
                worst = std::max(worst, std::abs(inv(r, col) - expected(r, col)));
                most_negative = std::min(most_negative, inv(r, col));
            }
        }
    }
    c.require(worst <= kNeumannTol, fmt::format("max entry error {:.3g}", worst));
    c.require(most_negative >= -kInversePositivityTol, fmt::format("entry {:.3g} < 0", most_negative));
    if (c.ok) c.detail = fmt::format("200 matrices, max entry error {:.2g}", worst);
    return c;
}

Check schauder() {
    Check c;
    const ProblemConfig cfg = example("ex2", 0.1, 1024);
    const ProblemSpec& p = cfg.spec;
    const GrowthSpec& g = *p.growth;
    const DistanceVector radii = schauder_radii(g, p.theta);
    const NonnegMatrix m = build_M_theta(g, p.theta);
    const double th = p.theta.value();
    const double lhs0 = radii[0] - m(0, 0) * radii[0] - m(0, 1) * radii[1];
    const double lhs1 = radii[1] - m(1, 0) * radii[0] - m(1, 1) * radii[1];
    const double sys_err = std::max(std::abs(lhs0 - (g.c1 + th * g.C1)), std::abs(lhs1 - (g.c2 + th * g.C2)));
    c.require(sys_err <= kRadiiTol, fmt::format("radii residual {:.3g}", sys_err));

    const BallCheck ball = ball_invariance_check(p, radii, 200, cfg.seed);
    c.require(ball.holds, "ball invariance violated");

    const SolveResult r = picard_solve(p, SystemState::zero(p.n_intervals), p.tolerance, p.max_iter);
    c.require(r.converged, "picard did not converge");
    c.require(r.residuals.max() <= kResidualTol, fmt::format("residual {:.3g}", r.residuals.max()));

    oracle::ShootOptions options;
    options.radii = radii;
    const oracle::ShootResult o = oracle::solve_nonlocal(p, {0.0, 0.0}, options);
    const DistanceVector norms = weighted_norms(o.state(), p.theta);
    c.require(norms[0] <= radii[0] && norms[1] <= radii[1], "oracle root outside the ball");
    const DistanceVector d = vector_distance(r.state, o.state(), p.theta);
    c.require(d[0] <= kPicardOracleTol && d[1] <= kPicardOracleTol,
              fmt::format("picard vs oracle ({:.3g}, {:.3g})", d[0], d[1]));

    ProblemSpec claimed = p;
    claimed.lipschitz = LipschitzSpec{example_constants(0.1)};
    const auto counterexample =
        falsify_constants(claimed, ConstantKind::Lipschitz, {.samples = 100000, .seed = cfg.seed, .box = 100});
    c.require(counterexample.has_value(), "no Lipschitz counterexample found");
    if (c.ok) {
        c.detail = fmt::format("R = ({:.6g}, {:.6g}), picard {} it, picard-oracle ({:.2g}, {:.2g}), {}",
                               radii[0], radii[1], r.iterations, d[0], d[1], counterexample->inequality);
    }
    return c;
}

Check contraction() {
    Check c;
    const ProblemSpec p = example("ex1", 0.1, 1024).spec;
    const NonnegMatrix m = build_M_theta(*p.lipschitz, p.theta);
    std::mt19937_64 rng(99);
    double worst = -1e300;
    for (int i = 0; i < 200; ++i) {
        const SystemState u = random_state(rng, p.n_intervals);
        const SystemState v = random_state(rng, p.n_intervals);
        const DistanceVector d = vector_distance(u, v, p.theta);
        const DistanceVector dt = vector_distance(apply_T(u, p), apply_T(v, p), p.theta);
        for (std::size_t k = 0; k < 2; ++k) {
            const double bound = m(k, 0) * d[0] + m(k, 1) * d[1];
            worst = std::max(worst, dt[k] - bound);
        }
    }
    c.require(worst <= kContractionSlack, fmt::format("excess {:.3g}", worst));
    if (c.ok) c.detail = fmt::format("200 pairs, max of d(Tu,Tv) - M d(u,v) = {:.3g}", worst);
    return c;
}

Check grid_convergence() {
    Check c;
    std::vector<SystemState> states;
    for (std::size_t n : {256U, 512U, 1024U}) {
        const ProblemSpec p = example("ex1", 0.1, n).spec;
        const SolveResult r = perov_solve(p, SystemState::zero(n), 1e-13, 1000);
        c.require(r.converged, fmt::format("N={} did not converge", n));
        states.push_back(r.state);
    }
    const auto diff = [](const SystemState& coarse, const SystemState& fine) {
        const std::size_t n = coarse.n_intervals();
        double d = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            d = std::max({d, std::abs(coarse.first.func[i] - fine.first.func[2 * i]),
                          std::abs(coarse.second.func[i] - fine.second.func[2 * i])});
        }
        return d;
    };
    const double d1 = diff(states[0], states[1]);
    const double d2 = diff(states[1], states[2]);
    const double ratio = d1 / d2;
    c.require(ratio >= kRatioLow && ratio <= kRatioHigh, fmt::format("trapezoid ratio {:.3f}", ratio));

    double previous = 0.0, worst_reduction = 1e300;
    for (std::size_t n : {16U, 32U, 64U, 128U}) {
        const oracle::Trajectory tr = oracle::integrate_ivp(make_spec("y", "-x", "0", "0", {}, n), 1.0, 0.0);
        const double err = std::hypot(tr.x[n] - std::cos(1.0), tr.y[n] + std::sin(1.0));
        if (previous > 0.0) worst_reduction = std::min(worst_reduction, previous / err);
        previous = err;
    }
    c.require(worst_reduction >= kRk4Reduction, fmt::format("RK4 reduction {:.2f}", worst_reduction));
    if (c.ok) {
        c.detail = fmt::format("trapezoid ratio {:.3f} ({:.3g}/{:.3g}), RK4 reduction >= {:.2f}", ratio, d1,
                               d2, worst_reduction);
    }
    return c;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Check cli_contract() {
    Check c;
    struct Case {
        std::vector<std::string> args;
        int expected;
        const char* golden;
    };
    const Case cases[] = {
        {{"example", "ex1", "--param", "a=0.1"}, 0, "example_ex1_a0.1.txt"},
        {{"example", "ex1", "--param", "a=0.3"}, 2, "example_ex1_a0.3.txt"},
        {{"example", "ex2", "--param", "a=0.1"}, 0, "example_ex2_a0.1.txt"},
    };
    const std::filesystem::path tmp = std::filesystem::temp_directory_path() / "nlivp_acceptance";
    for (const Case& k : cases) {
        std::vector<std::string> outputs;
        for (int run = 0; run < 2; ++run) {
            const std::filesystem::path dir = tmp / fmt::format("run{}", run);
            std::filesystem::remove_all(dir);
            std::vector<std::string> args = k.args;
            args.insert(args.end(), {"--seed", "1", "--out", dir.string()});
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            c.require(code == k.expected, fmt::format("{} {}: exit {}", k.args[1], k.args[3], code));
            std::string files;
            for (const char* f : {"check_report.txt", "solution.csv", "report.txt", "oracle.csv", "oracle_report.txt"}) {
                if (std::filesystem::exists(dir / f)) files += slurp(dir / f);
            }
            if (std::filesystem::exists(dir / "solution.csv")) {
                c.require(slurp(dir / "solution.csv").rfind("t,x,y\n", 0) == 0, "CSV header");
            }
            outputs.push_back(out.str() + files);
            if (run == 0) {
                const std::string golden = slurp(std::filesystem::path(NLIVP_GOLDEN_DIR) / k.golden);
                c.require(!golden.empty() && golden == out.str(), fmt::format("golden {} differs", k.golden));
            }
        }
        c.require(outputs[0] == outputs[1], fmt::format("{} {}: runs differ", k.args[1], k.args[3]));
    }
    if (c.ok) c.detail = "3 golden reports match, exit codes 0/2/0, repeated runs bit-identical";
    return c;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Check()> run;
    };
    const Criterion criteria[] = {
        {"convergence threshold of the coupled example", threshold},
        {"Perov certificate against the shooting oracle", perov_certificate},
        {"equivalent convergence criteria on random matrices", equivalence},
        {"Neumann series against direct inversion", neumann},
        {"invariant-ball pipeline on the non-Lipschitz example", schauder},
        {"discrete contraction of T", contraction},
        {"grid convergence of trapezoid and RK4", grid_convergence},
        {"CLI contract: golden reports, exit codes, determinism", cli_contract},
    };
    int failures = 0;
    int index = 0;
    for (const Criterion& k : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Check c;
        try {
            c = k.run();
        } catch (const std::exception& e) {
            c.ok = false;
            c.detail = std::string("exception: ") + e.what();
        }
        const double t = seconds_since(start);
        std::printf("%s %d. %s [%.2f s] %s\n", c.ok ? "PASS" : "FAIL", index, k.name, t, c.detail.c_str());
        if (!c.ok) ++failures;
    }
    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures;
}
