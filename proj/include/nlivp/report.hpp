#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "nlivp/matrix.hpp"
#include "nlivp/space.hpp"

namespace nlivp {

/// "t,x,y" header, then one row per grid node with 17 significant digits.
void write_solution_csv(std::ostream& out, const GridFunction& x, const GridFunction& y);
/// Throws Error when the file cannot be written.
void write_solution_csv(const std::filesystem::path& path, const GridFunction& x,
                        const GridFunction& y);

/// Plain-text report: "== section ==" headers followed by "key: value" lines.
class ReportWriter {
public:
    void section(std::string_view title);
    void field(std::string_view key, std::string_view value);
    void field(std::string_view key, double value);
    void field(std::string_view key, bool value);
    void line(std::string_view text);

    const std::string& text() const noexcept { return text_; }
    /// Throws Error when the file cannot be written.
    void save(const std::filesystem::path& path) const;

private:
    std::string text_;
};

std::string format_number(double v);
std::string format_vector(const DistanceVector& v);
std::string format_matrix(const NonnegMatrix& m);

}  // namespace nlivp
