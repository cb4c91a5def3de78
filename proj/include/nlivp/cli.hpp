#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlivp/config.hpp"

namespace nlivp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitHypothesesFail = 2;
inline constexpr int kExitNotConverged = 3;

using OutDir = std::optional<std::filesystem::path>;

int cmd_check(const ProblemConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const ProblemConfig& config, const OutDir& out_dir, std::ostream& out,
              std::ostream& err);
int cmd_oracle(const ProblemConfig& config, const OutDir& out_dir, std::ostream& out,
               std::ostream& err);
/// Exit 0 when the matrix is convergent to zero, 2 otherwise, 1 on a
/// malformed file.
int cmd_matrix(const std::filesystem::path& path, std::ostream& out, std::ostream& err);
/// check, then solve and oracle, then a side-by-side table. Stops with 2
/// when the hypotheses fail.
int cmd_example(std::string_view name, const ExampleForcing& forcing, const Overrides& overrides,
                const OutDir& out_dir, std::ostream& out, std::ostream& err);

/// Full command line without the program name, e.g. {"check", "ex1.yaml"}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nlivp::cli
