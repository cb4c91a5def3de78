#include "nlivp/space.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "nlivp/errors.hpp"

namespace nlivp {

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < kMinIntervals + 1) {
        throw InvalidGridFunction(fmt::format("grid function needs at least {} nodes, got {}",
                                              kMinIntervals + 1, values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidGridFunction(fmt::format("non-finite value at node {}", i));
        }
    }
}

GridFunction GridFunction::constant(std::size_t n_intervals, double value) {
    return GridFunction(std::vector<double>(n_intervals + 1, value));
}

double GridFunction::at(double t) const {
    const std::size_t n = n_intervals();
    const double position = std::clamp(t, 0.0, 1.0) * static_cast<double>(n);
    const auto left = std::min(static_cast<std::size_t>(position), n - 1);
    const double frac = position - static_cast<double>(left);
    if (frac == 0.0) return values_[left];
    return values_[left] + frac * (values_[left + 1] - values_[left]);
}

double sup_norm(const GridFunction& x) {
    double out = 0.0;
    for (double v : x.values()) {
        out = std::max(out, std::abs(v));
    }
    return out;
}

ThetaWeight::ThetaWeight(double theta) : theta_(theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw InvalidArgument(fmt::format("theta must be positive and finite, got {}", theta));
    }
}

SystemState SystemState::zero(std::size_t n_intervals) {
    return {{GridFunction::constant(n_intervals, 0.0), 0.0},
            {GridFunction::constant(n_intervals, 0.0), 0.0}};
}

double weighted_norm(const AugmentedState& xa, ThetaWeight w) {
    return sup_norm(xa.func) + w.value() * std::abs(xa.scalar);
}

DistanceVector weighted_norms(const SystemState& u, ThetaWeight w) {
    return {weighted_norm(u.first, w), weighted_norm(u.second, w)};
}

void require_same_grid(const GridFunction& x, const GridFunction& y) {
    if (x.n_intervals() != y.n_intervals()) {
        throw GridMismatch(fmt::format("grid functions on N = {} and N = {}", x.n_intervals(),
                                       y.n_intervals()));
    }
}

void require_same_grid(const SystemState& u) {
    require_same_grid(u.first.func, u.second.func);
}

namespace {

double distance(const AugmentedState& p, const AugmentedState& q, ThetaWeight w) {
    require_same_grid(p.func, q.func);
    double sup = 0.0;
    const auto pv = p.func.values();
    const auto qv = q.func.values();
    for (std::size_t i = 0; i < pv.size(); ++i) {
        sup = std::max(sup, std::abs(pv[i] - qv[i]));
    }
    return sup + w.value() * std::abs(p.scalar - q.scalar);
}

}  // namespace

DistanceVector vector_distance(const SystemState& u, const SystemState& v, ThetaWeight w) {
    return {distance(u.first, v.first, w), distance(u.second, v.second, w)};
}

AugmentedState scaled(const AugmentedState& xa, double s) {
    std::vector<double> values(xa.func.values().begin(), xa.func.values().end());
    for (double& v : values) v *= s;
    return {GridFunction(std::move(values)), s * xa.scalar};
}

SystemState scaled(const SystemState& u, double s) {
    return {scaled(u.first, s), scaled(u.second, s)};
}

}  // namespace nlivp
