#include "nlivp/report.hpp"

#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp {

void write_solution_csv(std::ostream& out, const GridFunction& x, const GridFunction& y) {
    require_same_grid(x, y);
    out << "t,x,y\n";
    for (std::size_t i = 0; i <= x.n_intervals(); ++i) {
        out << fmt::format("{:.17g},{:.17g},{:.17g}\n", x.node(i), x[i], y[i]);
    }
}

void write_solution_csv(const std::filesystem::path& path, const GridFunction& x,
                        const GridFunction& y) {
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    write_solution_csv(out, x, y);
}

void ReportWriter::section(std::string_view title) {
    if (!text_.empty()) text_ += '\n';
    text_ += fmt::format("== {} ==\n", title);
}

void ReportWriter::field(std::string_view key, std::string_view value) {
    text_ += fmt::format("{}: {}\n", key, value);
}

void ReportWriter::field(std::string_view key, double value) { field(key, format_number(value)); }

void ReportWriter::field(std::string_view key, bool value) {
    field(key, std::string_view(value ? "yes" : "no"));
}

void ReportWriter::line(std::string_view text) {
    text_ += text;
    text_ += '\n';
}

void ReportWriter::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    out << text_;
}

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

std::string format_vector(const DistanceVector& v) {
    return fmt::format("({}, {})", format_number(v[0]), format_number(v[1]));
}

std::string format_matrix(const NonnegMatrix& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += i == 0 ? "[" : ", [";
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (j > 0) out += ", ";
            out += format_number(m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

}  // namespace nlivp
