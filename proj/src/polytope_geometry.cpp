#include "orlimink/polytope_geometry.hpp"

#include "orlimink/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace orlimink {

namespace {

using V2 = Eigen::Vector2d;
using V3 = Eigen::Vector3d;

constexpr long kNoLabel = -1000;

/// Per-axis bounds [-lower_k, upper_k] containing the body, from h(+-e_k) <= sum lambda_i h_i
/// whenever sum lambda_i v_i = +-e_k with lambda >= 0.
std::pair<Vec, Vec> bounding_box(int dim, std::span<const Vec> normals, std::span<const double> offsets) {
    Eigen::MatrixXd A(dim, static_cast<Eigen::Index>(normals.size()));
    Vec h(static_cast<Eigen::Index>(normals.size()));
    for (size_t i = 0; i < normals.size(); ++i) {
        A.col(static_cast<Eigen::Index>(i)) = normals[i];
        h[static_cast<Eigen::Index>(i)] = offsets[i];
    }
    Vec lower(dim), upper(dim);
    for (int k = 0; k < dim; ++k) {
        for (double s : {1.0, -1.0}) {
            const NnlsResult r = nnls(A, s * Vec::Unit(dim, k));
            if (r.residual.norm() > 1e-8)
                throw InvalidBody("halfspace intersection is unbounded along axis " + std::to_string(k));
            const double bound = 2.0 * r.x.dot(h) + 1e-9;
            (s > 0 ? upper : lower)[k] = bound;
        }
    }
    return {lower, upper};
}

// ---------------------------------------------------------------- 2D clipping

struct Corner2 {
    V2 p;
    long label;  // halfspace carrying the edge that starts at this corner
};

void clip2(std::vector<Corner2>& poly, const V2& n, double d, long id, double eps) {
    const size_t m = poly.size();
    std::vector<double> s(m);
    bool any_in = false, any_out = false;
    for (size_t i = 0; i < m; ++i) {
        s[i] = n.dot(poly[i].p) - d;
        if (s[i] <= eps) any_in = true;
        if (s[i] > eps) any_out = true;
    }
    if (!any_out) return;
    if (!any_in) throw InvalidBody("halfspace intersection is empty");

    std::vector<Corner2> out;
    out.reserve(m + 2);
    for (size_t i = 0; i < m; ++i) {
        const size_t j = (i + 1) % m;
        const bool a_in = s[i] <= eps, b_out = s[j] > eps;
        if (a_in) {
            if (b_out) {
                if (s[i] < -eps) {
                    out.push_back(poly[i]);
                    const double t = s[i] / (s[i] - s[j]);
                    out.push_back({poly[i].p + t * (poly[j].p - poly[i].p), id});
                } else {
                    out.push_back({poly[i].p, id});
                }
            } else {
                out.push_back(poly[i]);
            }
        } else if (s[j] < -eps) {
            const double t = s[i] / (s[i] - s[j]);
            out.push_back({poly[i].p + t * (poly[j].p - poly[i].p), poly[i].label});
        }
    }
    poly = std::move(out);
}

PolytopeGeometry intersect2(std::span<const Vec> normals, std::span<const double> offsets) {
    const auto [lo, hi] = bounding_box(2, normals, offsets);
    const double scale = std::max(lo.maxCoeff(), hi.maxCoeff());
    const double eps = 1e-12 * scale;

    std::vector<Corner2> poly = {{V2(-lo[0], -lo[1]), kNoLabel},
                                 {V2(hi[0], -lo[1]), kNoLabel},
                                 {V2(hi[0], hi[1]), kNoLabel},
                                 {V2(-lo[0], hi[1]), kNoLabel}};
    for (size_t i = 0; i < normals.size(); ++i)
        clip2(poly, V2(normals[i][0], normals[i][1]), offsets[i], static_cast<long>(i), eps);

    // Merge coincident corners; the surviving corner keeps the later edge label.
    std::vector<Corner2> merged;
    for (const Corner2& c : poly) {
        if (!merged.empty() && (merged.back().p - c.p).norm() <= 1e-11 * scale) {
            merged.back().label = c.label;
        } else {
            merged.push_back(c);
        }
    }
    while (merged.size() > 1 && (merged.back().p - merged.front().p).norm() <= 1e-11 * scale) {
        merged.front().p = merged.back().p;
        merged.pop_back();
    }
    if (merged.size() < 3) throw InvalidBody("halfspace intersection is degenerate");

    PolytopeGeometry g;
    g.dim = 2;
    for (const Corner2& c : merged) {
        if (c.label < 0) throw InvalidBody("halfspace intersection is unbounded");
        g.vertices.push_back(Vec(c.p));
    }
    for (size_t i = 0; i < merged.size(); ++i) {
        const size_t j = (i + 1) % merged.size();
        const double len = (merged[j].p - merged[i].p).norm();
        if (len > 1e-14 * scale) g.faces.push_back({static_cast<size_t>(merged[i].label), {i, j}, len});
    }
    return g;
}

// ---------------------------------------------------------------- 3D clipping

struct Face3 {
    long label;
    std::vector<size_t> verts;
};

struct Poly3 {
    std::vector<V3> verts;
    std::vector<Face3> faces;
};

/// Orders points counter-clockwise around their centroid as seen from +n.
std::vector<size_t> order_ccw(const std::vector<V3>& pts, std::vector<size_t> ids, const V3& n) {
    V3 c = V3::Zero();
    for (size_t id : ids) c += pts[id];
    c /= static_cast<double>(ids.size());
    V3 e1 = std::abs(n.x()) < 0.9 ? n.cross(V3::UnitX()) : n.cross(V3::UnitY());
    e1.normalize();
    const V3 e2 = n.cross(e1);
    std::vector<std::pair<double, size_t>> keyed;
    for (size_t id : ids) {
        const V3 r = pts[id] - c;
        keyed.emplace_back(std::atan2(r.dot(e2), r.dot(e1)), id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<size_t> out;
    for (const auto& [a, id] : keyed) out.push_back(id);
    return out;
}

void clip3(Poly3& poly, const V3& n, double d, long id, double eps) {
    const size_t nv = poly.verts.size();
    std::vector<double> s(nv);
    bool any_in = false, any_out = false;
    for (size_t i = 0; i < nv; ++i) {
        s[i] = n.dot(poly.verts[i]) - d;
        if (s[i] <= eps) any_in = true;
        if (s[i] > eps) any_out = true;
    }
    if (!any_out) return;
    if (!any_in) throw InvalidBody("halfspace intersection is empty");

    std::unordered_map<std::uint64_t, size_t> edge_point;
    std::vector<char> on_cap(nv, 0);
    std::vector<size_t> cap;
    auto crossing = [&](size_t a, size_t b) {
        const std::uint64_t key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) | std::max(a, b);
        auto it = edge_point.find(key);
        if (it != edge_point.end()) return it->second;
        const double t = s[a] / (s[a] - s[b]);
        const V3 p = poly.verts[a] + t * (poly.verts[b] - poly.verts[a]);
        poly.verts.push_back(p);
        const size_t idx = poly.verts.size() - 1;
        edge_point.emplace(key, idx);
        cap.push_back(idx);
        return idx;
    };

    std::vector<Face3> faces;
    for (const Face3& f : poly.faces) {
        std::vector<size_t> out;
        const size_t m = f.verts.size();
        for (size_t i = 0; i < m; ++i) {
            const size_t a = f.verts[i], b = f.verts[(i + 1) % m];
            if (s[a] <= eps) {
                out.push_back(a);
                if (s[a] >= -eps && !on_cap[a]) {
                    on_cap[a] = 1;
                    cap.push_back(a);
                }
                if (s[a] < -eps && s[b] > eps) out.push_back(crossing(a, b));
            } else if (s[b] < -eps) {
                out.push_back(crossing(a, b));
            }
        }
        if (out.size() >= 3) faces.push_back({f.label, std::move(out)});
    }
    if (cap.size() >= 3) faces.push_back({id, order_ccw(poly.verts, cap, n)});
    poly.faces = std::move(faces);

    // Drop vertices no face references.
    std::vector<long> remap(poly.verts.size(), -1);
    std::vector<V3> kept;
    for (Face3& f : poly.faces) {
        for (size_t& v : f.verts) {
            if (remap[v] < 0) {
                remap[v] = static_cast<long>(kept.size());
                kept.push_back(poly.verts[v]);
            }
            v = static_cast<size_t>(remap[v]);
        }
    }
    poly.verts = std::move(kept);
}

PolytopeGeometry intersect3(std::span<const Vec> normals, std::span<const double> offsets) {
    const auto [lo, hi] = bounding_box(3, normals, offsets);
    const double scale = std::max(lo.maxCoeff(), hi.maxCoeff());
    const double eps = 1e-12 * scale;

    Poly3 poly;
    for (int i = 0; i < 8; ++i)
        poly.verts.emplace_back((i & 1) ? hi[0] : -lo[0], (i & 2) ? hi[1] : -lo[1], (i & 4) ? hi[2] : -lo[2]);
    for (int axis = 0; axis < 3; ++axis) {
        for (int side = 0; side < 2; ++side) {
            std::vector<size_t> ids;
            for (size_t i = 0; i < 8; ++i)
                if (((i >> axis) & 1) == static_cast<size_t>(side)) ids.push_back(i);
            const V3 n = (side ? 1.0 : -1.0) * V3::Unit(axis);
            poly.faces.push_back({kNoLabel, order_ccw(poly.verts, ids, n)});
        }
    }
    for (size_t i = 0; i < normals.size(); ++i)
        clip3(poly, V3(normals[i][0], normals[i][1], normals[i][2]), offsets[i], static_cast<long>(i), eps);

    // Merge vertices closer than the clipping tolerance.
    const double merge_tol = 1e-11 * scale;
    std::vector<size_t> rep(poly.verts.size());
    std::vector<size_t> uniq;
    for (size_t i = 0; i < poly.verts.size(); ++i) {
        rep[i] = i;
        for (size_t u : uniq) {
            if ((poly.verts[u] - poly.verts[i]).norm() <= merge_tol) {
                rep[i] = u;
                break;
            }
        }
        if (rep[i] == i) uniq.push_back(i);
    }
    std::vector<long> index(poly.verts.size(), -1);
    PolytopeGeometry g;
    g.dim = 3;
    for (size_t u : uniq) {
        index[u] = static_cast<long>(g.vertices.size());
        g.vertices.push_back(Vec(poly.verts[u]));
    }
    for (const Face3& f : poly.faces) {
        if (f.label < 0) throw InvalidBody("halfspace intersection is unbounded");
        std::vector<size_t> vs;
        for (size_t v : f.verts) {
            const auto id = static_cast<size_t>(index[rep[v]]);
            if (vs.empty() || vs.back() != id) vs.push_back(id);
        }
        while (vs.size() > 1 && vs.back() == vs.front()) vs.pop_back();
        if (vs.size() < 3) continue;
        const V3 n(normals[static_cast<size_t>(f.label)][0], normals[static_cast<size_t>(f.label)][1],
                   normals[static_cast<size_t>(f.label)][2]);
        double area = 0.0;
        const V3 p0 = g.vertices[vs[0]];
        for (size_t i = 1; i + 1 < vs.size(); ++i) {
            const V3 a = V3(g.vertices[vs[i]]) - p0, b = V3(g.vertices[vs[i + 1]]) - p0;
            area += 0.5 * n.dot(a.cross(b));
        }
        if (area > 1e-14 * scale * scale) g.faces.push_back({static_cast<size_t>(f.label), std::move(vs), area});
    }
    if (g.faces.size() < 4) throw InvalidBody("halfspace intersection is degenerate");
    return g;
}

// ---------------------------------------------------------------- point hulls

std::vector<HullFacet> hull2(std::span<const Vec> points) {
    std::vector<size_t> order(points.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
        return points[a][1] < points[b][1];
    });
    double scale = 0.0;
    for (const Vec& p : points) scale = std::max(scale, p.cwiseAbs().maxCoeff());
    const double eps = 1e-13 * scale * scale;
    auto cross = [&](size_t o, size_t a, size_t b) {
        return (points[a][0] - points[o][0]) * (points[b][1] - points[o][1]) -
               (points[a][1] - points[o][1]) * (points[b][0] - points[o][0]);
    };
    std::vector<size_t> hull;
    for (int pass = 0; pass < 2; ++pass) {
        const size_t start = hull.size();
        for (size_t k = 0; k < order.size(); ++k) {
            const size_t idx = pass == 0 ? order[k] : order[order.size() - 1 - k];
            while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), idx) <= eps) hull.pop_back();
            hull.push_back(idx);
        }
        hull.pop_back();
    }
    if (hull.size() < 3) throw InvalidBody("point hull is degenerate (collinear points)");

    std::vector<HullFacet> out;
    for (size_t i = 0; i < hull.size(); ++i) {
        const size_t a = hull[i], b = hull[(i + 1) % hull.size()];
        const V2 e(points[b][0] - points[a][0], points[b][1] - points[a][1]);
        Vec n(2);
        n << e.y(), -e.x();
        n.normalize();
        out.push_back({n, n.dot(points[a]), {a, b}});
    }
    return out;
}

struct Tri {
    size_t a, b, c;
    V3 n;  // unit outer normal
    double d;
    bool alive = true;
};

std::vector<HullFacet> hull3(std::span<const Vec> points) {
    std::vector<V3> P;
    P.reserve(points.size());
    double scale = 0.0;
    for (const Vec& p : points) {
        P.emplace_back(p[0], p[1], p[2]);
        scale = std::max(scale, p.cwiseAbs().maxCoeff());
    }
    // Points within eps of a triangle's plane count as coplanar with it.
    const double eps = 1e-10 * scale;
    const size_t N = P.size();
    if (N < 4) throw InvalidBody("point hull needs at least four points");

    // Initial tetrahedron from extreme points.
    size_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
    for (size_t i = 1; i < N; ++i)
        if (P[i].x() < P[i0].x()) i0 = i;
    double best = -1.0;
    for (size_t i = 0; i < N; ++i)
        if ((P[i] - P[i0]).norm() > best) best = (P[i] - P[i0]).norm(), i1 = i;
    best = -1.0;
    const V3 dir = (P[i1] - P[i0]).normalized();
    for (size_t i = 0; i < N; ++i) {
        const V3 r = P[i] - P[i0];
        const double dist = (r - r.dot(dir) * dir).norm();
        if (dist > best) best = dist, i2 = i;
    }
    if (best <= eps) throw InvalidBody("point hull is degenerate (collinear points)");
    const V3 pn = (P[i1] - P[i0]).cross(P[i2] - P[i0]).normalized();
    best = -1.0;
    for (size_t i = 0; i < N; ++i) {
        const double dist = std::abs(pn.dot(P[i] - P[i0]));
        if (dist > best) best = dist, i3 = i;
    }
    if (best <= eps) throw InvalidBody("point hull is degenerate (coplanar points)");

    const V3 inside = 0.25 * (P[i0] + P[i1] + P[i2] + P[i3]);
    std::vector<Tri> tris;
    std::unordered_map<std::uint64_t, size_t> edge_owner;
    auto key = [](size_t a, size_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
    auto add_with_plane = [&](size_t a, size_t b, size_t c, const V3& n, double d) {
        tris.push_back({a, b, c, n, d});
        const size_t t = tris.size() - 1;
        edge_owner[key(a, b)] = t;
        edge_owner[key(b, c)] = t;
        edge_owner[key(c, a)] = t;
    };
    auto add = [&](size_t a, size_t b, size_t c) {
        const V3 n = (P[b] - P[a]).cross(P[c] - P[a]).normalized();
        add_with_plane(a, b, c, n, n.dot(P[a]));
    };
    auto add_oriented = [&](size_t a, size_t b, size_t c) {
        const V3 n = (P[b] - P[a]).cross(P[c] - P[a]);
        if (n.dot(inside - P[a]) > 0.0) {
            add(a, c, b);
        } else {
            add(a, b, c);
        }
    };
    add_oriented(i0, i1, i2);
    add_oriented(i0, i1, i3);
    add_oriented(i0, i2, i3);
    add_oriented(i1, i2, i3);

    for (size_t p = 0; p < N; ++p) {
        if (p == i0 || p == i1 || p == i2 || p == i3) continue;
        std::vector<size_t> visible;
        for (size_t t = 0; t < tris.size(); ++t)
            if (tris[t].alive && tris[t].n.dot(P[p]) - tris[t].d > eps) visible.push_back(t);
        if (visible.empty()) continue;
        for (size_t t : visible) tris[t].alive = false;
        struct Edge {
            size_t x, y, neighbor;
        };
        std::vector<Edge> horizon;
        for (size_t t : visible) {
            const size_t v[3] = {tris[t].a, tris[t].b, tris[t].c};
            for (int e = 0; e < 3; ++e) {
                const size_t x = v[e], y = v[(e + 1) % 3];
                const auto it = edge_owner.find(key(y, x));
                if (it != edge_owner.end() && tris[it->second].alive) horizon.push_back({x, y, it->second});
            }
        }
        for (size_t t : visible) {
            edge_owner.erase(key(tris[t].a, tris[t].b));
            edge_owner.erase(key(tris[t].b, tris[t].c));
            edge_owner.erase(key(tris[t].c, tris[t].a));
        }
        // A new triangle coplanar with the triangle across its horizon edge
        // extends that face and keeps its plane. Recomputing the plane from a
        // thin triangle would tilt it enough to misclassify distant points.
        for (const Edge& e : horizon) {
            const Tri& nb = tris[e.neighbor];
            if (std::abs(nb.n.dot(P[p]) - nb.d) <= eps) {
                const V3 n = nb.n;
                const double d = nb.d;
                add_with_plane(e.x, e.y, p, n, d);
            } else {
                add(e.x, e.y, p);
            }
        }
    }

    // Merge coplanar triangles into facets.
    std::vector<HullFacet> out;
    std::vector<double> best_area;
    for (const Tri& t : tris) {
        if (!t.alive) continue;
        const double area = 0.5 * (P[t.b] - P[t.a]).cross(P[t.c] - P[t.a]).norm();
        bool merged = false;
        for (size_t f = 0; f < out.size(); ++f) {
            const V3 fn(out[f].normal[0], out[f].normal[1], out[f].normal[2]);
            if ((fn - t.n).norm() <= 1e-9 && std::abs(out[f].offset - t.d) <= 1e-9 * scale) {
                for (size_t v : {t.a, t.b, t.c})
                    if (std::find(out[f].points.begin(), out[f].points.end(), v) == out[f].points.end())
                        out[f].points.push_back(v);
                if (area > best_area[f]) {
                    out[f].normal = Vec(t.n);
                    out[f].offset = t.d;
                    best_area[f] = area;
                }
                merged = true;
                break;
            }
        }
        if (!merged) {
            out.push_back({Vec(t.n), t.d, {t.a, t.b, t.c}});
            best_area.push_back(area);
        }
    }
    for (HullFacet& f : out) {
        double d = -std::numeric_limits<double>::infinity();
        for (size_t v : f.points) d = std::max(d, f.normal.dot(points[v]));
        f.offset = d;
    }
    return out;
}

}  // namespace

double PolytopeGeometry::volume(std::span<const double> offsets) const {
    double v = 0.0;
    for (const PolytopeFace& f : faces) v += offsets[f.halfspace] * f.measure;
    return v / dim;
}

PolytopeGeometry halfspace_intersection(int dim, std::span<const Vec> normals, std::span<const double> offsets) {
    if (normals.size() != offsets.size()) throw InvalidArgument("halfspace_intersection: length mismatch");
    if (dim == 2) return intersect2(normals, offsets);
    if (dim == 3) return intersect3(normals, offsets);
    throw InvalidArgument("halfspace_intersection: exact geometry is available for dim 2 and 3 only");
}

std::vector<HullFacet> point_hull(int dim, std::span<const Vec> points) {
    for (const Vec& p : points)
        if (p.size() != dim) throw InvalidArgument("point_hull: dimension mismatch");
    if (dim == 2) return hull2(points);
    if (dim == 3) return hull3(points);
    throw InvalidArgument("point_hull: exact hulls are available for dim 2 and 3 only");
}

}  // namespace orlimink
