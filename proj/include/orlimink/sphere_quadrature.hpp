#pragma once

#include "orlimink/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orlimink {

enum class GridRule { equal_angle_2d, fibonacci_3d, monte_carlo, custom };

std::string to_string(GridRule rule);
GridRule parse_grid_rule(std::string_view name);

enum class Summation { sequential, pairwise };

/// Quadrature rule on S^{dim-1}: unit nodes with positive weights.
/// Immutable once built; safe to share across threads.
class SphericalGrid {
public:
    /// Validates every invariant: unit nodes, positive weights, nodes not in
    /// a closed hemisphere. Throws InvalidArgument / HemisphereError.
    SphericalGrid(int dim, std::vector<Vec> nodes, std::vector<double> weights,
                  GridRule rule = GridRule::custom, std::optional<std::uint64_t> seed = {});

    int dim() const { return dim_; }
    GridRule rule() const { return rule_; }
    int resolution() const { return static_cast<int>(nodes_.size()); }
    std::optional<std::uint64_t> seed() const { return seed_; }
    size_t size() const { return nodes_.size(); }

    const std::vector<Vec>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const Vec& node(size_t k) const { return nodes_[k]; }
    double weight(size_t k) const { return weights_[k]; }

    double total_weight() const;

private:
    int dim_;
    GridRule rule_;
    std::optional<std::uint64_t> seed_;
    std::vector<Vec> nodes_;
    std::vector<double> weights_;
};

/// Built-in rules, all with uniform weights |S^{dim-1}| / resolution:
///   equal_angle_2d: angles 2 pi k / resolution (dim 2 only)
///   fibonacci_3d:   golden-angle spiral, z_k = 1 - (2k+1)/resolution (dim 3 only)
///   monte_carlo:    uniform directions from a seeded mt19937_64 stream (any dim >= 2)
SphericalGrid build_grid(int dim, GridRule rule, int resolution,
                         std::optional<std::uint64_t> seed = std::nullopt);

/// Sum_k w_k f_k. Throws on length mismatch or a non-finite value.
double integrate(const SphericalGrid& grid, std::span<const double> f,
                 Summation order = Summation::sequential);

/// Deterministic sum used across the library; pairwise keeps the error O(log n).
double weighted_sum(std::span<const double> w, std::span<const double> f, Summation order);

}  // namespace orlimink
