#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nlivp/cli.hpp"

namespace fs = std::filesystem;
using nlivp::cli::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Set NLIVP_UPDATE_GOLDEN=1 to rewrite the expected files.
void expect_golden(const std::string& name, const std::string& actual) {
    const fs::path path = fs::path(NLIVP_GOLDEN_DIR) / name;
    if (std::getenv("NLIVP_UPDATE_GOLDEN") != nullptr) {
        std::ofstream(path, std::ios::binary) << actual;
        return;
    }
    ASSERT_TRUE(fs::exists(path)) << path;
    EXPECT_EQ(slurp(path), actual) << "golden mismatch for " << name;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nlivp_test_" + name);
    fs::remove_all(p);
    return p;
}

const std::string kConfigs = NLIVP_CONFIG_DIR;

}  // namespace

TEST(Golden, FirstExampleSmallCoupling) {
    const Outcome o = invoke({"example", "ex1", "--param", "a=0.1"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("spectral_radius: 0.85\n"), std::string::npos);
    EXPECT_NE(o.out.find("certificate_check: pass"), std::string::npos);
    expect_golden("example_ex1_a0.1.txt", o.out);
}

TEST(Golden, FirstExampleLargeCoupling) {
    const Outcome o = invoke({"example", "ex1", "--param", "a=0.3"});
    EXPECT_EQ(o.code, 2) << o.err;
    EXPECT_NE(o.out.find("no θ achieves ρ<1"), std::string::npos);
    EXPECT_EQ(o.out.find("== solve =="), std::string::npos);
    expect_golden("example_ex1_a0.3.txt", o.out);
}

TEST(Golden, SecondExample) {
    const Outcome o = invoke({"example", "ex2", "--param", "a=0.1"});
    EXPECT_EQ(o.code, 0) << o.err;
    EXPECT_NE(o.out.find("no uniqueness certificate"), std::string::npos);
    expect_golden("example_ex2_a0.1.txt", o.out);
}

TEST(Cli, RepeatedRunsAreBitIdentical) {
    const fs::path d1 = scratch("run1"), d2 = scratch("run2");
    const Outcome a = invoke({"example", "ex2", "--out", d1.string(), "--seed", "3"});
    const Outcome b = invoke({"example", "ex2", "--out", d2.string(), "--seed", "3"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    for (const char* f : {"check_report.txt", "solution.csv", "report.txt", "oracle.csv", "oracle_report.txt"}) {
        ASSERT_TRUE(fs::exists(d1 / f)) << f;
        EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
    }
}

TEST(Cli, CsvSchema) {
    const fs::path dir = scratch("csv");
    ASSERT_EQ(invoke({"solve", kConfigs + "/ex1.yaml", "--grid", "64", "--out", dir.string()}).code, 0);
    std::ifstream in(dir / "solution.csv");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,x,y");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        std::stringstream s(line);
        std::string cell;
        int cells = 0;
        while (std::getline(s, cell, ',')) {
            ++cells;
            std::size_t used = 0;
            std::stod(cell, &used);
            EXPECT_EQ(used, cell.size());
        }
        EXPECT_EQ(cells, 3);
    }
    EXPECT_EQ(rows, 65U);
    const std::string report = slurp(dir / "report.txt");
    EXPECT_NE(report.find("aposteriori_bound:"), std::string::npos);
    EXPECT_NE(report.find("k: "), std::string::npos);
}

TEST(Cli, SolveSecondExampleNotesMissingCertificate) {
    const Outcome o = invoke({"solve", kConfigs + "/ex2.yaml", "--grid", "256"});
    EXPECT_EQ(o.code, 0);
    EXPECT_NE(o.out.find("no uniqueness certificate"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(invoke({"check", kConfigs + "/ex1.yaml", "--grid", "64"}).code, 0);
    EXPECT_EQ(invoke({"check", kConfigs + "/ex1.yaml", "--grid", "64", "--param", "a=0.3"}).code, 2);
    EXPECT_EQ(invoke({"check", kConfigs + "/missing.yaml"}).code, 1);
    EXPECT_EQ(invoke({"check", kConfigs + "/ex1.yaml", "--param", "a"}).code, 1);
    EXPECT_EQ(invoke({"check", kConfigs + "/ex1.yaml", "--param", "a=zero"}).code, 1);
    EXPECT_EQ(invoke({"check", kConfigs + "/ex1.yaml", "--grid", "6"}).code, 1);
    EXPECT_EQ(invoke({"solve", kConfigs + "/ex1.yaml", "--tol", "1e-30", "--max-iter", "5"}).code, 3);
    EXPECT_EQ(invoke({"oracle", kConfigs + "/ex1.yaml", "--grid", "64"}).code, 0);
    EXPECT_EQ(invoke({"matrix", kConfigs + "/example_matrix.json"}).code, 0);
    EXPECT_EQ(invoke({"example", "nope"}).code, 1);
    EXPECT_EQ(invoke({}).code, 1);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Cli, MatrixReports) {
    const fs::path dir = scratch("matrix");
    fs::create_directories(dir);
    std::ofstream(dir / "one.json") << "[[1]]";
    std::ofstream(dir / "tri.json") << "[[0.9, 0.2], [0, 0.5]]";
    std::ofstream(dir / "neg.json") << "[[0.9, -0.2], [0, 0.5]]";
    std::ofstream(dir / "ragged.json") << "[[0.9, 0.2], [0]]";
    const Outcome one = invoke({"matrix", (dir / "one.json").string()});
    EXPECT_EQ(one.code, 2);
    EXPECT_NE(one.out.find("verdict: Boundary"), std::string::npos);
    const Outcome tri = invoke({"matrix", (dir / "tri.json").string()});
    EXPECT_EQ(tri.code, 0);
    EXPECT_NE(tri.out.find("verdict: Convergent"), std::string::npos);
    EXPECT_NE(tri.out.find("row_sum_sufficient: no"), std::string::npos);
    EXPECT_NE(tri.out.find("neumann_inverse: [[10, 4], [0, 2]]"), std::string::npos);
    EXPECT_EQ(invoke({"matrix", (dir / "neg.json").string()}).code, 1);
    EXPECT_EQ(invoke({"matrix", (dir / "ragged.json").string()}).code, 1);
}

TEST(Cli, ConfigErrorsMentionPosition) {
    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.yaml") << "expressions:\n  f1: \"x\"\n  f2: \"y\"\n  alpha: \"0\"\n  beta: \"0\"\nlipschitz: [1, 1, 1, -1, 0, 0, 0, 0]\n";
    const Outcome o = invoke({"check", (dir / "bad.yaml").string()});
    EXPECT_EQ(o.code, 1);
    EXPECT_NE(o.err.find("line 6"), std::string::npos) << o.err;
}
