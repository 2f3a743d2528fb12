#include "orlimink/sphere_quadrature.hpp"

#include "orlimink/cone.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace orlimink {

double sphere_measure(int dim) {
    if (dim < 1) throw InvalidArgument("sphere_measure: dim must be >= 1");
    const double half = 0.5 * dim;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

std::string to_string(GridRule rule) {
    switch (rule) {
        case GridRule::equal_angle_2d: return "equal_angle_2d";
        case GridRule::fibonacci_3d: return "fibonacci_3d";
        case GridRule::monte_carlo: return "monte_carlo";
        case GridRule::custom: return "custom";
    }
    return "custom";
}

GridRule parse_grid_rule(std::string_view name) {
    if (name == "equal_angle_2d") return GridRule::equal_angle_2d;
    if (name == "fibonacci_3d") return GridRule::fibonacci_3d;
    if (name == "monte_carlo") return GridRule::monte_carlo;
    if (name == "custom") return GridRule::custom;
    throw InvalidArgument("unknown grid rule '" + std::string(name) + "'");
}

SphericalGrid::SphericalGrid(int dim, std::vector<Vec> nodes, std::vector<double> weights,
                             GridRule rule, std::optional<std::uint64_t> seed)
    : dim_(dim), rule_(rule), seed_(seed), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (dim_ < 2) throw InvalidArgument("grid: dim must be >= 2");
    if (nodes_.empty()) throw InvalidArgument("grid: no nodes");
    if (nodes_.size() != weights_.size()) throw InvalidArgument("grid: nodes/weights length mismatch");
    for (size_t k = 0; k < nodes_.size(); ++k) {
        if (nodes_[k].size() != dim_) throw InvalidArgument("grid: node dimension mismatch");
        if (std::abs(nodes_[k].norm() - 1.0) > 1e-12)
            throw InvalidArgument("grid: node " + std::to_string(k) + " is not a unit vector");
        if (!(weights_[k] > 0.0) || !std::isfinite(weights_[k]))
            throw InvalidArgument("grid: weight " + std::to_string(k) + " is not positive");
    }
    const SpanCheck span = positive_span(nodes_);
    if (!span.spans) throw HemisphereError("grid: nodes lie in a closed hemisphere", span.witness);
}

double SphericalGrid::total_weight() const {
    return weighted_sum(weights_, std::vector<double>(weights_.size(), 1.0), Summation::sequential);
}

SphericalGrid build_grid(int dim, GridRule rule, int resolution, std::optional<std::uint64_t> seed) {
    if (dim < 2) throw InvalidArgument("build_grid: dim must be >= 2");
    if (resolution < 4) throw InvalidArgument("build_grid: resolution must be >= 4");

    const double total = sphere_measure(dim);
    const auto count = static_cast<size_t>(resolution);
    std::vector<Vec> nodes;
    nodes.reserve(count);

    switch (rule) {
        case GridRule::equal_angle_2d: {
            if (dim != 2) throw InvalidArgument("equal_angle_2d requires dim = 2");
            for (size_t k = 0; k < count; ++k) {
                const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / resolution;
                Vec u(2);
                u << std::cos(a), std::sin(a);
                nodes.push_back(std::move(u));
            }
            break;
        }
        case GridRule::fibonacci_3d: {
            if (dim != 3) throw InvalidArgument("fibonacci_3d requires dim = 3");
            const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
            for (size_t k = 0; k < count; ++k) {
                const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / resolution;
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double a = golden * static_cast<double>(k);
                Vec u(3);
                u << r * std::cos(a), r * std::sin(a), z;
                nodes.push_back(u / u.norm());
            }
            break;
        }
        case GridRule::monte_carlo: {
            if (!seed) throw InvalidArgument("monte_carlo rule requires a seed");
            std::mt19937_64 rng(*seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            while (nodes.size() < count) {
                Vec u(dim);
                for (int i = 0; i < dim; ++i) u[i] = gauss(rng);
                const double n = u.norm();
                if (n < 1e-12) continue;
                nodes.push_back(u / n);
            }
            break;
        }
        case GridRule::custom:
            throw InvalidArgument("build_grid: 'custom' grids are constructed directly");
    }

    std::vector<double> weights(count, total / resolution);
    return SphericalGrid(dim, std::move(nodes), std::move(weights), rule,
                         rule == GridRule::monte_carlo ? seed : std::nullopt);
}

namespace {

double pairwise(std::span<const double> w, std::span<const double> f) {
    if (w.size() <= 32) {
        double s = 0.0;
        for (size_t k = 0; k < w.size(); ++k) s += w[k] * f[k];
        return s;
    }
    const size_t half = w.size() / 2;
    return pairwise(w.first(half), f.first(half)) + pairwise(w.subspan(half), f.subspan(half));
}

}  // namespace

double weighted_sum(std::span<const double> w, std::span<const double> f, Summation order) {
    if (w.size() != f.size()) throw InvalidArgument("weighted_sum: length mismatch");
    if (order == Summation::pairwise) return pairwise(w, f);
    double s = 0.0;
    for (size_t k = 0; k < w.size(); ++k) s += w[k] * f[k];
    return s;
}

double integrate(const SphericalGrid& grid, std::span<const double> f, Summation order) {
    if (f.size() != grid.size())
        throw InvalidArgument("integrate: expected " + std::to_string(grid.size()) + " values, got " +
                              std::to_string(f.size()));
    for (size_t k = 0; k < f.size(); ++k)
        if (!std::isfinite(f[k])) throw InvalidArgument("integrate: non-finite value at node " + std::to_string(k));
    return weighted_sum(grid.weights(), f, order);
}

}  // namespace orlimink
