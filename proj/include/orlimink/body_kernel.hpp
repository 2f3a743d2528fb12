#pragma once

#include "orlimink/core.hpp"
#include "orlimink/polytope_geometry.hpp"
#include "orlimink/sphere_quadrature.hpp"

#include <span>
#include <vector>

namespace orlimink {

/// Relative gap below which two candidate radii count as a tie. Ties resolve
/// to the smallest facet index.
inline constexpr double kTieRelTol = 1e-12;

/// K = { x : normals[i] . x <= offsets[i] } with the origin in its interior.
///
/// Construction validates: unit normals (renormalized when within 1e-9 of
/// unit length), strictly positive offsets, and normals not contained in a
/// closed hemisphere (HemisphereError otherwise). Redundant halfspaces are
/// allowed; see wulff_shape and prune for removing them.
class HalfspacePolytope {
public:
    HalfspacePolytope(int dim, std::vector<Vec> normals, std::vector<double> offsets);

    int dim() const { return dim_; }
    size_t size() const { return normals_.size(); }
    const std::vector<Vec>& normals() const { return normals_; }
    const std::vector<double>& offsets() const { return offsets_; }
    const Vec& normal(size_t i) const { return normals_[i]; }
    double offset(size_t i) const { return offsets_[i]; }

    /// Same normals, new offsets (validated positive).
    HalfspacePolytope with_offsets(std::vector<double> offsets) const;

private:
    struct Trusted {};
    HalfspacePolytope(Trusted, int dim, std::vector<Vec> normals, std::vector<double> offsets)
        : dim_(dim), normals_(std::move(normals)), offsets_(std::move(offsets)) {}

    int dim_;
    std::vector<Vec> normals_;
    std::vector<double> offsets_;
};

/// <rho> = conv{ rho(u) u } given by samples on a direction set.
class RadialSampleBody {
public:
    RadialSampleBody(int dim, std::vector<Vec> directions, std::vector<double> radii);

    int dim() const { return dim_; }
    size_t size() const { return directions_.size(); }
    const std::vector<Vec>& directions() const { return directions_; }
    const std::vector<double>& radii() const { return radii_; }

private:
    int dim_;
    std::vector<Vec> directions_;
    std::vector<double> radii_;
};

struct RadialHit {
    double radius = 0.0;
    size_t facet = 0;  ///< facet holding rho(u) u; smallest index among ties
};

/// rho_P(u) = min over {i : u . v_i > 0} of h_i / (u . v_i).
RadialHit radial_function(const HalfspacePolytope& P, const Vec& u);

/// Exact support function for dim 2 and 3 (maximum over enumerated vertices).
double support_function(const HalfspacePolytope& P, const Vec& u);

/// Any dim: 1 / rho_{P*}(u) with P* the sampled polar on `grid`. Exact path for dim 2 and 3.
double support_function(const HalfspacePolytope& P, const Vec& u, const SphericalGrid& grid);

/// Vertices and facets of P (dim 2 or 3).
PolytopeGeometry geometry(const HalfspacePolytope& P);

/// Exact polar for dim 2 and 3: one halfspace x . y <= 1 per vertex x of P.
HalfspacePolytope polar(const HalfspacePolytope& P);

/// Polar in any dimension. dim 2/3: exact. Otherwise the sampled Wulff shape
/// with normals = grid nodes and offsets = 1 / rho_P(node), pruned on `grid`.
HalfspacePolytope polar(const HalfspacePolytope& P, const SphericalGrid& grid);

/// [f] = intersection of { x : x . u <= f(u) }. With prune, halfspaces that do
/// not support a facet of positive measure are dropped (dim 2 and 3 only;
/// in higher dimensions every halfspace is kept).
HalfspacePolytope wulff_shape(int dim, std::vector<Vec> directions, std::vector<double> values, bool prune = true);

/// <rho> in halfspace form from the exact point hull of { rho(u) u } (dim 2 and 3).
HalfspacePolytope convex_hull_of_radial(const RadialSampleBody& body);

/// Any dim: the sampled polar of the Wulff shape [1/rho], pruned on `grid`.
HalfspacePolytope convex_hull_of_radial(const RadialSampleBody& body, const SphericalGrid& grid);

/// Facet index hit by each grid node (ties to the smallest index).
std::vector<size_t> radial_gauss_assignment(const HalfspacePolytope& P, const SphericalGrid& grid);

/// rho_P at every grid node.
std::vector<double> radial_samples(const HalfspacePolytope& P, const SphericalGrid& grid);

/// Offsets scaled by lambda > 0.
HalfspacePolytope dilate(const HalfspacePolytope& P, double lambda);

/// max over grid nodes of |rho_P - rho_Q|.
double radial_distance(const HalfspacePolytope& P, const HalfspacePolytope& Q, const SphericalGrid& grid);

struct PruneResult {
    HalfspacePolytope body;
    std::vector<size_t> kept;  ///< original index of each surviving halfspace
};

/// Keeps exactly the halfspaces selected by some node of `grid`.
PruneResult prune(const HalfspacePolytope& P, const SphericalGrid& grid);

/// Built-in grid with four times the resolution of `working` (same rule and seed).
SphericalGrid pruning_grid(const SphericalGrid& working);

/// Indices of halfspaces supporting a facet of positive measure (dim 2 and 3).
std::vector<size_t> nonredundant_facets(const HalfspacePolytope& P);

}  // namespace orlimink
