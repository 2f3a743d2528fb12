#pragma once

// Exact (floating-point) convex geometry in the plane and in space:
// halfspace intersection by successive clipping, and convex hulls of points.

#include "orlimink/core.hpp"

#include <span>
#include <vector>

namespace orlimink {

/// One facet of a clipped polytope. Vertices are counter-clockwise seen from
/// outside (in 2D: the two endpoints of the edge, in counter-clockwise order).
struct PolytopeFace {
    size_t halfspace = 0;          ///< index into the input halfspace list
    std::vector<size_t> vertices;  ///< indices into PolytopeGeometry::vertices
    double measure = 0.0;          ///< edge length (2D) or facet area (3D)
};

/// Vertex/face description of {x : normals[i] . x <= offsets[i]}.
struct PolytopeGeometry {
    int dim = 0;
    std::vector<Vec> vertices;
    std::vector<PolytopeFace> faces;  ///< only halfspaces supporting a facet of positive measure

    /// Sum over faces of offset * measure / dim.
    double volume(std::span<const double> offsets) const;
};

/// Vertex enumeration of a bounded halfspace intersection containing the
/// origin in its interior, for dim 2 or 3. Starts from a bounding box derived
/// from cone certificates of the coordinate directions and clips it by each
/// halfspace in index order. Throws InvalidBody on an unbounded or empty result.
PolytopeGeometry halfspace_intersection(int dim, std::span<const Vec> normals, std::span<const double> offsets);

/// A supporting hyperplane of a point hull: normal . x <= offset.
struct HullFacet {
    Vec normal;  ///< unit outer normal
    double offset = 0.0;
    std::vector<size_t> points;  ///< input indices of the hull vertices on this facet
};

/// Convex hull of points in dim 2 (monotone chain) or 3 (incremental), with
/// coplanar triangles merged into single facets. Throws InvalidBody when the
/// points are not full-dimensional.
std::vector<HullFacet> point_hull(int dim, std::span<const Vec> points);

}  // namespace orlimink
