#pragma once

// Shared fixtures and brute-force oracles for the test suites. Nothing here
// calls into the production geometry beyond the HalfspacePolytope type.

#include "orlimink/body_kernel.hpp"
#include "orlimink/cone.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace orlimink::testing {

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v << x, y, z;
    return v;
}

/// [-a, a]^dim as a halfspace polytope, normals ordered e1, e2, ..., -e1, -e2, ...
inline HalfspacePolytope cube(int dim, double a = 1.0) {
    std::vector<Vec> n;
    for (int s : {1, -1})
        for (int k = 0; k < dim; ++k) n.push_back(s * Vec::Unit(dim, k));
    return HalfspacePolytope(dim, n, std::vector<double>(n.size(), a));
}

/// Square [-1,1]^2 with normals e1, e2, -e1, -e2.
inline HalfspacePolytope square() { return cube(2); }

inline Vec random_unit(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = g(rng);
    return v / v.norm();
}

/// Random polytope with `facets` halfspaces, offsets in [0.5, 1.5].
inline HalfspacePolytope random_polytope(std::mt19937_64& rng, int dim, int facets) {
    std::uniform_real_distribution<double> off(0.5, 1.5);
    for (;;) {
        std::vector<Vec> n;
        std::vector<double> h;
        for (int i = 0; i < facets; ++i) {
            n.push_back(random_unit(rng, dim));
            h.push_back(off(rng));
        }
        if (!positive_span(n).spans) continue;
        return HalfspacePolytope(dim, n, h);
    }
}

/// Brute force rho: min over all facets facing u.
inline double brute_radial(const HalfspacePolytope& P, const Vec& u) {
    double best = INFINITY;
    for (size_t i = 0; i < P.size(); ++i) {
        const double c = u.dot(P.normal(i));
        if (c > 0) best = std::min(best, P.offset(i) / c);
    }
    return best;
}

/// Vertex enumeration by intersecting every dim-subset of halfspaces (dim 2 or 3)
/// and keeping feasible points. O(m^(dim+1)); test sizes only.
inline std::vector<Vec> brute_vertices(const HalfspacePolytope& P, double tol = 1e-9) {
    const int d = P.dim();
    const size_t m = P.size();
    std::vector<Vec> out;
    auto feasible = [&](const Vec& x) {
        for (size_t i = 0; i < m; ++i)
            if (P.normal(i).dot(x) > P.offset(i) + tol) return false;
        return true;
    };
    auto consider = [&](const std::vector<size_t>& idx) {
        Eigen::MatrixXd A(d, d);
        Vec b(d);
        for (int r = 0; r < d; ++r) {
            A.row(r) = P.normal(idx[static_cast<size_t>(r)]).transpose();
            b[r] = P.offset(idx[static_cast<size_t>(r)]);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        if (!lu.isInvertible()) return;
        const Vec x = lu.solve(b);
        if (feasible(x)) out.push_back(x);
    };
    if (d == 2) {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j) consider({i, j});
    } else {
        for (size_t i = 0; i < m; ++i)
            for (size_t j = i + 1; j < m; ++j)
                for (size_t k = j + 1; k < m; ++k) consider({i, j, k});
    }
    return out;
}

inline double brute_support(const HalfspacePolytope& P, const Vec& u) {
    double h = -INFINITY;
    for (const Vec& x : brute_vertices(P)) h = std::max(h, u.dot(x));
    return h;
}

/// Shoelace area of a polygon given by its vertices in any order around the origin.
inline double shoelace_area(std::vector<Vec> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const Vec& a, const Vec& b) { return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]); });
    double s = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec& a = pts[i];
        const Vec& b = pts[(i + 1) % pts.size()];
        s += a[0] * b[1] - a[1] * b[0];
    }
    return 0.5 * std::abs(s);
}

/// Regular polygon normals at angles offset + 2 pi k / count.
inline std::vector<Vec> polygon_normals(int count, double offset = 0.0) {
    std::vector<Vec> n;
    for (int k = 0; k < count; ++k) {
        const double a = offset + 2.0 * std::numbers::pi * k / count;
        n.push_back(vec2(std::cos(a), std::sin(a)));
    }
    return n;
}

}  // namespace orlimink::testing
