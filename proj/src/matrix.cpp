#include "nlivp/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp {

Matrix::Matrix(std::size_t n, double fill) : n_(n), data_(n * n, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw DimensionError("matrix rows must have length " + std::to_string(n_));
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw DimensionError("matrix must have at least one row");
    }
    Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) {
            throw DimensionError(fmt::format("row {} has {} entries, expected {}", i,
                                             rows[i].size(), rows.size()));
        }
        std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + i * m.n_);
    }
    return m;
}

double Matrix::max_abs_entry() const noexcept {
    double out = 0.0;
    for (double v : data_) {
        out = std::max(out, std::abs(v));
    }
    return out;
}

double Matrix::max_row_sum() const noexcept {
    double out = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            s += std::abs((*this)(i, j));
        }
        out = std::max(out, s);
    }
    return out;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    const std::size_t n = lhs.size();
    if (rhs.size() != n) {
        throw DimensionError("matrix product dimension mismatch");
    }
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double l = lhs(i, k);
            if (l == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += l * rhs(k, j);
            }
        }
    }
    return out;
}

Matrix operator+(const Matrix& lhs, const Matrix& rhs) {
    if (rhs.size() != lhs.size()) {
        throw DimensionError("matrix sum dimension mismatch");
    }
    Matrix out = lhs;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        for (std::size_t j = 0; j < lhs.size(); ++j) {
            out(i, j) += rhs(i, j);
        }
    }
    return out;
}

Matrix operator-(const Matrix& lhs, const Matrix& rhs) {
    return lhs + (-1.0) * rhs;
}

Matrix operator*(double s, const Matrix& m) {
    Matrix out = m;
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            out(i, j) *= s;
        }
    }
    return out;
}

std::vector<double> multiply(const Matrix& m, std::span<const double> v) {
    if (v.size() != m.size()) {
        throw DimensionError("matrix-vector dimension mismatch");
    }
    std::vector<double> out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            out[i] += m(i, j) * v[j];
        }
    }
    return out;
}

std::optional<Matrix> invert(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix a = m;
    Matrix inv = Matrix::identity(n);
    const double scale = std::max(m.max_abs_entry(), std::numeric_limits<double>::min());
    const double singular_below = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (!(std::abs(a(pivot, col)) > singular_below)) {
            return std::nullopt;
        }
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(pivot, j), a(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const double p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a(r, col);
            if (factor == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= factor * a(col, j);
                inv(r, j) -= factor * inv(col, j);
            }
        }
    }
    if (!inv.all_finite()) {
        return std::nullopt;
    }
    return inv;
}

std::string to_string(const Matrix& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < m.size(); ++j) {
            out += fmt::format("{}{:.12g}", j ? ", " : "", m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

NonnegMatrix::NonnegMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.size() == 0) {
        throw DimensionError("matrix dimension must be at least 1");
    }
    for (std::size_t i = 0; i < m_.size(); ++i) {
        for (std::size_t j = 0; j < m_.size(); ++j) {
            const double v = m_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw NegativeEntryError(
                    fmt::format("entry ({}, {}) = {} is not a finite nonnegative number", i, j, v));
            }
        }
    }
}

NonnegMatrix::NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : NonnegMatrix(Matrix(rows)) {}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::Convergent: return "Convergent";
        case Verdict::NotConvergent: return "NotConvergent";
        case Verdict::Boundary: return "Boundary";
    }
    return "Unknown";
}

namespace {

constexpr int kPowerIterationCap = 10000;
// M^(2^j) for j up to this many squarings.
constexpr int kSquaringCap = 62;
constexpr double kPowerVanishes = 1e-12;

double spectral_radius_2x2(const Matrix& m) {
    const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
    const double half_gap = 0.5 * (m(0, 0) - m(1, 1));
    // Discriminant is nonnegative for nonnegative entries: both eigenvalues real.
    return half_trace + std::sqrt(half_gap * half_gap + m(0, 1) * m(1, 0));
}

// Perron root of an irreducible nonnegative block. B + sI is primitive, so the
// power iteration converges, and for every positive v
//   min_i (Bv)_i / v_i <= rho(B) <= max_i (Bv)_i / v_i.
double perron_root_irreducible(const Matrix& b) {
    const std::size_t n = b.size();
    if (n == 1) return b(0, 0);
    const double shift = std::max(b.max_abs_entry(), std::numeric_limits<double>::min());

    std::vector<double> v(n, 1.0 / static_cast<double>(n));
    double lo = 0.0;
    double hi = b.max_row_sum();
    for (int step = 0; step < kPowerIterationCap; ++step) {
        const std::vector<double> bv = multiply(b, v);
        double step_lo = std::numeric_limits<double>::infinity();
        double step_hi = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double ratio = bv[i] / v[i];
            step_lo = std::min(step_lo, ratio);
            step_hi = std::max(step_hi, ratio);
        }
        lo = std::max(lo, step_lo);
        hi = std::min(hi, step_hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;

        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = bv[i] + shift * v[i];
            norm += v[i];
        }
        for (double& x : v) x /= norm;
    }
    return 0.5 * (lo + hi);
}

// Spectral radius of a nonnegative matrix equals the largest Perron root over
// its strongly connected components (Frobenius normal form).
double spectral_radius_by_components(const Matrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) > 0.0) reach[i][j] = true;
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reach[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[k][j]) reach[i][j] = true;
            }
        }
    }

    std::vector<bool> assigned(n, false);
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        std::vector<std::size_t> component;
        for (std::size_t j = i; j < n; ++j) {
            if (!assigned[j] && reach[i][j] && reach[j][i]) {
                component.push_back(j);
                assigned[j] = true;
            }
        }
        Matrix block(component.size());
        for (std::size_t r = 0; r < component.size(); ++r) {
            for (std::size_t c = 0; c < component.size(); ++c) {
                block(r, c) = m(component[r], component[c]);
            }
        }
        rho = std::max(rho, perron_root_irreducible(block));
    }
    return rho;
}

bool criterion_powers(const Matrix& m) {
    Matrix power = m;
    for (int j = 0; j <= kSquaringCap; ++j) {
        const double largest = power.max_abs_entry();
        if (!std::isfinite(largest)) return false;
        if (largest < kPowerVanishes) return true;
        power = power * power;
    }
    return false;
}

// Doubling partial sums: S_{2K} = S_K + M^K S_K.
std::optional<Matrix> neumann_doubling(const Matrix& m, double relative_tol, std::size_t min_terms) {
    const std::size_t n = m.size();
    Matrix sum = Matrix::identity(n);
    Matrix power = m;  // M^terms
    std::size_t terms = 1;
    for (int j = 0; j <= kSquaringCap; ++j) {
        const Matrix increment = power * sum;
        const double inc = increment.max_abs_entry();
        if (!std::isfinite(inc)) return std::nullopt;
        if (terms >= min_terms && inc <= relative_tol * sum.max_abs_entry()) {
            return sum;
        }
        sum = sum + increment;
        power = power * power;
        terms *= 2;
        if (!sum.all_finite()) return std::nullopt;
    }
    return std::nullopt;
}

bool criterion_neumann(const Matrix& m, const std::optional<Matrix>& direct) {
    if (!direct) return false;
    const auto series = neumann_doubling(m, 1e-15, 1);
    if (!series) return false;
    const double scale = std::max(1.0, direct->max_abs_entry());
    return (*series - *direct).max_abs_entry() <= 1e-6 * scale;
}

bool criterion_inverse_positive(const std::optional<Matrix>& direct) {
    if (!direct) return false;
    const double floor = -1e-9 * std::max(1.0, direct->max_abs_entry());
    for (double v : direct->data()) {
        if (v < floor) return false;
    }
    return true;
}

}  // namespace

double spectral_radius(const NonnegMatrix& m) {
    const Matrix& a = m.matrix();
    switch (a.size()) {
        case 1: return a(0, 0);
        case 2: return spectral_radius_2x2(a);
        default: return spectral_radius_by_components(a);
    }
}

ConvergenceReport check_convergent_to_zero(const NonnegMatrix& m, double boundary_band) {
    const Matrix& a = m.matrix();
    ConvergenceReport report;
    report.spectral_radius = spectral_radius(m);

    const std::optional<Matrix> direct = invert(Matrix::identity(a.size()) - a);
    report.by_power_iteration = criterion_powers(a);
    report.by_neumann = criterion_neumann(a, direct);
    report.by_eigenvalues = report.spectral_radius < 1.0;
    report.by_inverse_positivity = criterion_inverse_positive(direct);

    if (report.spectral_radius < 1.0 - boundary_band) {
        report.verdict = Verdict::Convergent;
    } else if (report.spectral_radius > 1.0 + boundary_band) {
        report.verdict = Verdict::NotConvergent;
    } else {
        report.verdict = Verdict::Boundary;
        return report;
    }

    const bool expected = report.verdict == Verdict::Convergent;
    if (report.by_power_iteration != expected || report.by_neumann != expected ||
        report.by_eigenvalues != expected || report.by_inverse_positivity != expected) {
        throw DisagreementOutsideBoundary(fmt::format(
            "criteria disagree for {} (rho = {:.17g}): powers={} neumann={} eigen={} inverse={}",
            to_string(a), report.spectral_radius, report.by_power_iteration, report.by_neumann,
            report.by_eigenvalues, report.by_inverse_positivity));
    }
    return report;
}

Matrix neumann_inverse(const NonnegMatrix& m, double tol) {
    const double rho = spectral_radius(m);
    if (!(rho < 1.0)) {
        throw NotConvergentError(fmt::format("Neumann series diverges: rho = {:.17g}", rho));
    }
    // Tail after K terms: rho^(K+1) / (1 - rho), scaled by the largest row sum.
    std::size_t needed = 0;
    if (rho > 0.0) {
        const double scale = std::max(1.0, m.matrix().max_row_sum());
        const double k = std::log(tol * (1.0 - rho) / scale) / std::log(rho) - 1.0;
        needed = k > 0.0 ? static_cast<std::size_t>(std::min(std::ceil(k), 4.0e18)) : 0;
    }
    auto sum = neumann_doubling(m.matrix(), tol, needed + 1);
    if (!sum) {
        throw NotConvergentError("Neumann partial sums failed to settle");
    }
    return *sum;
}

double perturbation_margin(const NonnegMatrix& a, const NonnegMatrix& b, double tol) {
    if (a.size() != b.size()) {
        throw DimensionError("perturbation_margin: A and B differ in dimension");
    }
    const double rho_a = spectral_radius(a);
    if (!(rho_a < 1.0)) {
        throw NotConvergentError(fmt::format("A is not convergent to zero: rho = {:.17g}", rho_a));
    }
    if (b.is_zero()) {
        return std::numeric_limits<double>::infinity();
    }
    const auto convergent_at = [&](double eps) {
        return spectral_radius(NonnegMatrix(a.matrix() + eps * b.matrix())) < 1.0;
    };
    if (convergent_at(kMarginCap)) {
        return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    double hi = kMarginCap;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (convergent_at(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace nlivp
