#include "orlimink/body_kernel.hpp"

#include "orlimink/cone.hpp"
#include "orlimink/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlimink {

namespace {

void check_directions(int dim, std::vector<Vec>& dirs, const char* what) {
    if (dim < 2) throw InvalidArgument(std::string(what) + ": dim must be >= 2");
    if (dirs.size() < static_cast<size_t>(dim) + 1)
        throw InvalidArgument(std::string(what) + ": need at least dim + 1 directions");
    for (size_t i = 0; i < dirs.size(); ++i) {
        if (dirs[i].size() != dim) throw InvalidArgument(std::string(what) + ": direction dimension mismatch");
        const double n = dirs[i].norm();
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9)
            throw InvalidArgument(std::string(what) + ": direction " + std::to_string(i) + " is not a unit vector");
        // Leave already-normalized input untouched so serialization round-trips exactly.
        if (std::abs(n - 1.0) > 4e-16) dirs[i] /= n;
    }
    const SpanCheck span = positive_span(dirs);
    if (!span.spans)
        throw HemisphereError(std::string(what) + ": directions lie in a closed hemisphere", span.witness);
}

void check_positive(const std::vector<double>& v, const char* what) {
    for (size_t i = 0; i < v.size(); ++i)
        if (!(v[i] > 0.0) || !std::isfinite(v[i]))
            throw InvalidBody(std::string(what) + ": value " + std::to_string(i) + " must be positive and finite");
}

void require_exact_dim(int dim, const char* what) {
    if (dim != 2 && dim != 3)
        throw InvalidArgument(std::string(what) + ": exact path needs dim 2 or 3 (pass a grid)");
}

HalfspacePolytope from_facets(int dim, const std::vector<HullFacet>& facets) {
    std::vector<Vec> normals;
    std::vector<double> offsets;
    for (const HullFacet& f : facets) {
        if (!(f.offset > 0.0)) throw InvalidBody("origin is not interior to the hull");
        normals.push_back(f.normal);
        offsets.push_back(f.offset);
    }
    return HalfspacePolytope(dim, std::move(normals), std::move(offsets));
}

}  // namespace

HalfspacePolytope::HalfspacePolytope(int dim, std::vector<Vec> normals, std::vector<double> offsets)
    : dim_(dim), normals_(std::move(normals)), offsets_(std::move(offsets)) {
    if (normals_.size() != offsets_.size()) throw InvalidArgument("polytope: normals/offsets length mismatch");
    check_positive(offsets_, "polytope offsets");
    check_directions(dim_, normals_, "polytope normals");
}

HalfspacePolytope HalfspacePolytope::with_offsets(std::vector<double> offsets) const {
    if (offsets.size() != offsets_.size()) throw InvalidArgument("polytope: offsets length mismatch");
    check_positive(offsets, "polytope offsets");
    return HalfspacePolytope(Trusted{}, dim_, normals_, std::move(offsets));
}

RadialSampleBody::RadialSampleBody(int dim, std::vector<Vec> directions, std::vector<double> radii)
    : dim_(dim), directions_(std::move(directions)), radii_(std::move(radii)) {
    if (directions_.size() != radii_.size()) throw InvalidArgument("radial body: directions/radii length mismatch");
    check_positive(radii_, "radial body radii");
    check_directions(dim_, directions_, "radial body directions");
}

RadialHit radial_function(const HalfspacePolytope& P, const Vec& u) {
    if (u.size() != P.dim()) throw InvalidArgument("radial_function: dimension mismatch");
    const size_t m = P.size();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < m; ++i) {
        const double c = u.dot(P.normal(i));
        if (c > 0.0) best = std::min(best, P.offset(i) / c);
    }
    RadialHit hit{best, 0};
    const double cut = best * (1.0 + kTieRelTol);
    for (size_t i = 0; i < m; ++i) {
        const double c = u.dot(P.normal(i));
        if (c > 0.0 && P.offset(i) / c <= cut) {
            hit.facet = i;
            break;
        }
    }
    return hit;
}

PolytopeGeometry geometry(const HalfspacePolytope& P) {
    require_exact_dim(P.dim(), "geometry");
    return halfspace_intersection(P.dim(), P.normals(), P.offsets());
}

double support_function(const HalfspacePolytope& P, const Vec& u) {
    require_exact_dim(P.dim(), "support_function");
    if (u.size() != P.dim()) throw InvalidArgument("support_function: dimension mismatch");
    const PolytopeGeometry g = geometry(P);
    double h = -std::numeric_limits<double>::infinity();
    for (const Vec& x : g.vertices) h = std::max(h, u.dot(x));
    return h;
}

double support_function(const HalfspacePolytope& P, const Vec& u, const SphericalGrid& grid) {
    if (P.dim() == 2 || P.dim() == 3) return support_function(P, u);
    return 1.0 / radial_function(polar(P, grid), u).radius;
}

HalfspacePolytope polar(const HalfspacePolytope& P) {
    require_exact_dim(P.dim(), "polar");
    const PolytopeGeometry g = geometry(P);
    std::vector<Vec> normals;
    std::vector<double> offsets;
    for (const Vec& x : g.vertices) {
        const double r = x.norm();
        normals.push_back(x / r);
        offsets.push_back(1.0 / r);
    }
    return HalfspacePolytope(P.dim(), std::move(normals), std::move(offsets));
}

HalfspacePolytope polar(const HalfspacePolytope& P, const SphericalGrid& grid) {
    if (grid.dim() != P.dim()) throw InvalidArgument("polar: grid dimension mismatch");
    if (P.dim() == 2 || P.dim() == 3) return polar(P);
    const std::vector<double> rho = radial_samples(P, grid);
    std::vector<double> offsets(rho.size());
    for (size_t k = 0; k < rho.size(); ++k) offsets[k] = 1.0 / rho[k];
    return prune(HalfspacePolytope(P.dim(), grid.nodes(), std::move(offsets)), grid).body;
}

HalfspacePolytope wulff_shape(int dim, std::vector<Vec> directions, std::vector<double> values, bool prune_body) {
    HalfspacePolytope P(dim, std::move(directions), std::move(values));
    if (!prune_body || (dim != 2 && dim != 3)) return P;
    const std::vector<size_t> keep = nonredundant_facets(P);
    std::vector<Vec> normals;
    std::vector<double> offsets;
    for (size_t i : keep) {
        normals.push_back(P.normal(i));
        offsets.push_back(P.offset(i));
    }
    return HalfspacePolytope(dim, std::move(normals), std::move(offsets));
}

HalfspacePolytope convex_hull_of_radial(const RadialSampleBody& body) {
    require_exact_dim(body.dim(), "convex_hull_of_radial");
    std::vector<Vec> points;
    points.reserve(body.size());
    for (size_t i = 0; i < body.size(); ++i) points.push_back(body.radii()[i] * body.directions()[i]);
    return from_facets(body.dim(), point_hull(body.dim(), points));
}

HalfspacePolytope convex_hull_of_radial(const RadialSampleBody& body, const SphericalGrid& grid) {
    if (body.dim() == 2 || body.dim() == 3) return convex_hull_of_radial(body);
    std::vector<double> inv(body.size());
    for (size_t i = 0; i < body.size(); ++i) inv[i] = 1.0 / body.radii()[i];
    return polar(wulff_shape(body.dim(), body.directions(), std::move(inv), false), grid);
}

std::vector<double> radial_samples(const HalfspacePolytope& P, const SphericalGrid& grid) {
    if (grid.dim() != P.dim()) throw InvalidArgument("radial_samples: grid dimension mismatch");
    std::vector<double> rho(grid.size());
    parallel_for(grid.size(), [&](size_t b, size_t e) {
        for (size_t k = b; k < e; ++k) rho[k] = radial_function(P, grid.node(k)).radius;
    });
    return rho;
}

std::vector<size_t> radial_gauss_assignment(const HalfspacePolytope& P, const SphericalGrid& grid) {
    if (grid.dim() != P.dim()) throw InvalidArgument("radial_gauss_assignment: grid dimension mismatch");
    std::vector<size_t> out(grid.size());
    parallel_for(grid.size(), [&](size_t b, size_t e) {
        for (size_t k = b; k < e; ++k) out[k] = radial_function(P, grid.node(k)).facet;
    });
    return out;
}

HalfspacePolytope dilate(const HalfspacePolytope& P, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("dilate: lambda must be positive");
    std::vector<double> offsets = P.offsets();
    for (double& h : offsets) h *= lambda;
    return P.with_offsets(std::move(offsets));
}

double radial_distance(const HalfspacePolytope& P, const HalfspacePolytope& Q, const SphericalGrid& grid) {
    if (P.dim() != Q.dim()) throw InvalidArgument("radial_distance: dimension mismatch");
    const std::vector<double> a = radial_samples(P, grid), b = radial_samples(Q, grid);
    double d = 0.0;
    for (size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

PruneResult prune(const HalfspacePolytope& P, const SphericalGrid& grid) {
    const std::vector<size_t> assigned = radial_gauss_assignment(P, grid);
    std::vector<char> used(P.size(), 0);
    for (size_t j : assigned) used[j] = 1;
    std::vector<size_t> kept;
    std::vector<Vec> normals;
    std::vector<double> offsets;
    for (size_t i = 0; i < P.size(); ++i) {
        if (!used[i]) continue;
        kept.push_back(i);
        normals.push_back(P.normal(i));
        offsets.push_back(P.offset(i));
    }
    return {HalfspacePolytope(P.dim(), std::move(normals), std::move(offsets)), std::move(kept)};
}

SphericalGrid pruning_grid(const SphericalGrid& working) {
    if (working.rule() == GridRule::custom) throw InvalidArgument("pruning_grid: custom grids have no refinement");
    return build_grid(working.dim(), working.rule(), 4 * working.resolution(), working.seed());
}

std::vector<size_t> nonredundant_facets(const HalfspacePolytope& P) {
    const PolytopeGeometry g = geometry(P);
    std::vector<size_t> out;
    for (const PolytopeFace& f : g.faces) out.push_back(f.halfspace);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace orlimink
