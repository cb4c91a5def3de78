#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace nlivp {

/// Samples of a continuous function on the uniform grid t_i = i/N, i = 0..N.
class GridFunction {
public:
    static constexpr std::size_t kMinIntervals = 4;

    /// Throws InvalidGridFunction if fewer than kMinIntervals + 1 values are
    /// given or any value is not finite.
    explicit GridFunction(std::vector<double> values);
    /// Zero function on the coarsest admissible grid.
    GridFunction() : values_(kMinIntervals + 1, 0.0) {}

    static GridFunction constant(std::size_t n_intervals, double value);

    template <typename F>
    static GridFunction sample(std::size_t n_intervals, F&& f) {
        std::vector<double> values(n_intervals + 1);
        for (std::size_t i = 0; i <= n_intervals; ++i) {
            values[i] = f(node(i, n_intervals));
        }
        return GridFunction(std::move(values));
    }

    static double node(std::size_t i, std::size_t n_intervals) noexcept {
        return static_cast<double>(i) / static_cast<double>(n_intervals);
    }

    std::size_t n_intervals() const noexcept { return values_.size() - 1; }
    double step() const noexcept { return 1.0 / static_cast<double>(n_intervals()); }
    double node(std::size_t i) const noexcept { return node(i, n_intervals()); }

    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Linear interpolation between neighbouring nodes; exact at nodes.
    double at(double t) const;

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::vector<double> values_;
};

double sup_norm(const GridFunction& x);

/// Positive weight of the scalar part in |(x, a)| = |x|_C + theta |a|.
class ThetaWeight {
public:
    /// Throws InvalidArgument unless theta > 0 and finite.
    explicit ThetaWeight(double theta);
    double value() const noexcept { return theta_; }

private:
    double theta_;
};

/// A pair (x, a) in C[0,1] x R.
struct AugmentedState {
    GridFunction func;
    double scalar = 0.0;

    friend bool operator==(const AugmentedState&, const AugmentedState&) = default;
};

/// u = ((x, a), (y, b)). Both components live on the same grid.
struct SystemState {
    AugmentedState first;
    AugmentedState second;

    std::size_t n_intervals() const noexcept { return first.func.n_intervals(); }

    static SystemState zero(std::size_t n_intervals);

    friend bool operator==(const SystemState&, const SystemState&) = default;
};

/// Componentwise values of the vector-valued metric.
using DistanceVector = std::array<double, 2>;

double weighted_norm(const AugmentedState& xa, ThetaWeight w);

/// (|x_a|, |y_b|) for u = (x_a, y_b).
DistanceVector weighted_norms(const SystemState& u, ThetaWeight w);

/// Componentwise weighted norms of u - v. Throws GridMismatch.
DistanceVector vector_distance(const SystemState& u, const SystemState& v, ThetaWeight w);

AugmentedState scaled(const AugmentedState& xa, double s);
SystemState scaled(const SystemState& u, double s);

/// Throws GridMismatch if the two components of `u` are on different grids.
void require_same_grid(const SystemState& u);
void require_same_grid(const GridFunction& x, const GridFunction& y);

}  // namespace nlivp
