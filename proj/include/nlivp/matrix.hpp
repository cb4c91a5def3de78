#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlivp {

/// Dense square matrix, row-major. Small by construction (n is 2 on the
/// solver's hot path, a handful elsewhere).
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    /// Throws DimensionError unless `rows` is square and nonempty.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }

    double max_abs_entry() const noexcept;
    double max_row_sum() const noexcept;
    bool all_finite() const noexcept;

    std::span<const double> data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator+(const Matrix& lhs, const Matrix& rhs);
Matrix operator-(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double s, const Matrix& m);

std::vector<double> multiply(const Matrix& m, std::span<const double> v);

/// Gauss-Jordan inversion with partial pivoting; nullopt when numerically singular.
std::optional<Matrix> invert(const Matrix& m);

std::string to_string(const Matrix& m);

/// Square matrix with nonnegative finite entries.
class NonnegMatrix {
public:
    /// Throws NegativeEntryError on a negative or non-finite entry,
    /// DimensionError on an empty matrix.
    explicit NonnegMatrix(Matrix m);
    NonnegMatrix(std::initializer_list<std::initializer_list<double>> rows);

    const Matrix& matrix() const noexcept { return m_; }
    std::size_t size() const noexcept { return m_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    bool is_zero() const noexcept { return m_.max_abs_entry() == 0.0; }

private:
    Matrix m_;
};

inline constexpr double kDefaultBoundaryBand = 1e-9;

enum class Verdict { Convergent, NotConvergent, Boundary };

const char* to_string(Verdict v) noexcept;

/// Joint outcome of the four equivalent characterisations of a matrix
/// convergent to zero.
struct ConvergenceReport {
    double spectral_radius = 0.0;
    bool by_power_iteration = false;     // M^k -> 0
    bool by_neumann = false;             // I + M + M^2 + ... converges to (I-M)^{-1}
    bool by_eigenvalues = false;         // rho(M) < 1
    bool by_inverse_positivity = false;  // (I-M)^{-1} exists and is entrywise >= 0
    Verdict verdict = Verdict::Boundary;
};

/// Largest eigenvalue modulus. Closed form for n <= 2; for larger n the
/// matrix is split into irreducible diagonal blocks and each block is
/// handled by shifted power iteration with Collatz-Wielandt bracketing.
double spectral_radius(const NonnegMatrix& m);

/// Evaluates each criterion independently. Throws
/// DisagreementOutsideBoundary if they disagree while |rho - 1| exceeds
/// `boundary_band`.
ConvergenceReport check_convergent_to_zero(const NonnegMatrix& m,
                                           double boundary_band = kDefaultBoundaryBand);

/// Partial sum of I + M + M^2 + ... long enough that the geometric tail is
/// below `tol`. Throws NotConvergentError if rho(M) >= 1.
Matrix neumann_inverse(const NonnegMatrix& m, double tol = 1e-12);

/// sup{eps >= 0 : rho(A + eps B) < 1} by bisection on [0, 1e6] to width
/// `tol`. Returns +infinity (unbounded) when B = 0 or the cap is reached.
/// Throws NotConvergentError if rho(A) >= 1, DimensionError on size mismatch.
double perturbation_margin(const NonnegMatrix& a, const NonnegMatrix& b, double tol = 1e-10);

inline constexpr double kMarginCap = 1e6;

}  // namespace nlivp
