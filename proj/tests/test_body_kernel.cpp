#include "doctest.h"

#include "orlimink/body_kernel.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace orlimink;
using namespace orlimink::testing;
using std::numbers::pi;

namespace {

double max_vertex_dot(const std::vector<Vec>& verts, const Vec& u) {
    double h = -INFINITY;
    for (const Vec& x : verts) h = std::max(h, u.dot(x));
    return h;
}

std::vector<HalfspacePolytope> corpus(int dim, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> facets(6, 40);
    std::vector<HalfspacePolytope> out;
    for (int i = 0; i < count; ++i) out.push_back(random_polytope(rng, dim, facets(rng)));
    return out;
}

HalfspacePolytope ball2(double r, int count = 64) {
    return HalfspacePolytope(2, polygon_normals(count), std::vector<double>(static_cast<size_t>(count), r));
}

}  // namespace

TEST_CASE("construction validates offsets, normals and hemispheres") {
    const std::vector<Vec> n = {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)};
    CHECK_THROWS_AS(HalfspacePolytope(2, n, {1, 1, 0, 1}), InvalidBody);
    CHECK_THROWS_AS(HalfspacePolytope(2, n, {1, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(HalfspacePolytope(2, {vec2(2, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)}, {1, 1, 1, 1}),
                    InvalidArgument);
    try {
        HalfspacePolytope(2, {vec2(1, 0), vec2(0, 1), unit(vec2(1, 1))}, {1, 1, 1});
        FAIL("expected HemisphereError");
    } catch (const HemisphereError& e) {
        for (const Vec& v : n) (void)v;
        CHECK(e.witness().dot(vec2(1, 0)) <= 1e-12);
        CHECK(e.witness().dot(vec2(0, 1)) <= 1e-12);
    }
}

TEST_CASE("radial function of the cube") {
    const HalfspacePolytope C = cube(3);
    CHECK(radial_function(C, Vec::Unit(3, 0)).radius == doctest::Approx(1.0));
    const Vec d = unit(vec3(1, 1, 1));
    CHECK(radial_function(C, d).radius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(radial_function(C, d).radius == doctest::Approx(brute_radial(C, d)).epsilon(1e-15));

    const HalfspacePolytope B = ball2(0.8);
    for (int k = 0; k < 50; ++k) {
        const double a = 0.1237 * k;
        const double r = radial_function(B, vec2(std::cos(a), std::sin(a))).radius;
        CHECK(r >= 0.8 - 1e-15);
        CHECK(r <= 0.8 / std::cos(pi / 64) + 1e-15);
    }
}

TEST_CASE("support function matches brute-force vertex enumeration") {
    CHECK(support_function(square(), vec2(1, 0)) == doctest::Approx(1.0));
    const Vec d = unit(vec3(1, 1, 1));
    CHECK(support_function(cube(3), d) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
    CHECK(brute_support(cube(3), d) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));

    std::mt19937_64 rng(5);
    for (int dim : {2, 3}) {
        for (const HalfspacePolytope& P : corpus(dim, 6, 100 + static_cast<unsigned>(dim))) {
            for (int t = 0; t < 5; ++t) {
                const Vec u = random_unit(rng, dim);
                CHECK(std::abs(support_function(P, u) - brute_support(P, u)) <= 1e-10);
            }
        }
    }
    const HalfspacePolytope B = ball2(1.3);
    CHECK(support_function(B, vec2(0.6, 0.8)) <= 1.3 / std::cos(pi / 64) + 1e-12);
    CHECK(support_function(B, vec2(0.6, 0.8)) >= 1.3 - 1e-12);
}

TEST_CASE("geometry: vertex sets and volumes agree with brute force") {
    for (int dim : {2, 3}) {
        for (const HalfspacePolytope& P : corpus(dim, 8, 200 + static_cast<unsigned>(dim))) {
            const PolytopeGeometry g = geometry(P);
            const std::vector<Vec> brute = brute_vertices(P);
            for (const Vec& v : g.vertices) {
                double best = INFINITY;
                for (const Vec& w : brute) best = std::min(best, (v - w).norm());
                CHECK(best <= 1e-9);
            }
            for (const Vec& w : brute) {
                double best = INFINITY;
                for (const Vec& v : g.vertices) best = std::min(best, (v - w).norm());
                CHECK(best <= 1e-9);
            }
            if (dim == 2) CHECK(g.volume(P.offsets()) == doctest::Approx(shoelace_area(g.vertices)).epsilon(1e-12));
        }
    }
    CHECK(geometry(cube(3, 2.0)).volume(cube(3, 2.0).offsets()) == doctest::Approx(64.0).epsilon(1e-12));
}

TEST_CASE("polar of the square is the cross-polytope") {
    const HalfspacePolytope Q = polar(square());
    REQUIRE(Q.size() == 4);
    std::set<std::pair<long, long>> signs;
    for (size_t i = 0; i < Q.size(); ++i) {
        CHECK(Q.offset(i) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
        CHECK(std::abs(std::abs(Q.normal(i)[0]) - 1.0 / std::sqrt(2.0)) <= 1e-14);
        signs.insert({std::lround(std::copysign(1.0, Q.normal(i)[0])), std::lround(std::copysign(1.0, Q.normal(i)[1]))});
    }
    CHECK(signs.size() == 4);
    // The discretized ball of radius r has a polar close to the ball of radius 1/r.
    const HalfspacePolytope Bp = polar(ball2(2.0, 256));
    const SphericalGrid g = build_grid(2, GridRule::equal_angle_2d, 1000);
    for (double r : radial_samples(Bp, g)) CHECK(std::abs(r - 0.5) <= 0.5 * (1.0 / std::cos(pi / 256) - 1.0) + 1e-12);
}

TEST_CASE("duality identity and bipolarity on a random corpus") {
    const SphericalGrid g2 = build_grid(2, GridRule::equal_angle_2d, 720);
    const SphericalGrid g3 = build_grid(3, GridRule::fibonacci_3d, 2000);
    for (int dim : {2, 3}) {
        const SphericalGrid& g = dim == 2 ? g2 : g3;
        for (const HalfspacePolytope& P : corpus(dim, 10, 300 + static_cast<unsigned>(dim))) {
            const HalfspacePolytope Pstar = polar(P);
            const std::vector<Vec> verts = brute_vertices(P);
            const std::vector<double> rho = radial_samples(Pstar, g);
            double worst = 0.0;
            for (size_t k = 0; k < g.size(); ++k)
                worst = std::max(worst, std::abs(rho[k] * max_vertex_dot(verts, g.node(k)) - 1.0));
            CHECK(worst <= 1e-9);
            CHECK(radial_distance(polar(Pstar), P, g) <= 1e-9);
        }
    }
    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 5000);
    CHECK(radial_distance(polar(polar(cube(3))), cube(3), g) <= 1e-9);
}

TEST_CASE("Wulff shapes: support samples of the cube reproduce the cube") {
    const HalfspacePolytope C = cube(3);
    const HalfspacePolytope W = wulff_shape(3, C.normals(), C.offsets());
    CHECK(W.size() == 6);
    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 3000);
    CHECK(radial_distance(W, C, g) == 0.0);

    const SphericalGrid ring = build_grid(2, GridRule::equal_angle_2d, 128);
    const HalfspacePolytope ball = wulff_shape(2, ring.nodes(), std::vector<double>(128, 0.7));
    for (double r : radial_samples(ball, build_grid(2, GridRule::equal_angle_2d, 999)))
        CHECK(std::abs(r - 0.7) <= 0.7 * (1.0 / std::cos(pi / 128) - 1.0) + 1e-12);
}

TEST_CASE("Wulff shapes: support bound with equality exactly on kept directions") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(0.5, 2.0);
    for (int dim : {2, 3}) {
        const SphericalGrid dirs = dim == 2 ? build_grid(2, GridRule::equal_angle_2d, 40)
                                            : build_grid(3, GridRule::fibonacci_3d, 40);
        std::vector<double> f(dirs.size());
        for (double& v : f) v = val(rng);
        const HalfspacePolytope full = wulff_shape(dim, dirs.nodes(), f, false);
        const std::vector<size_t> keep = nonredundant_facets(full);
        const std::vector<Vec> verts = brute_vertices(full);
        for (size_t i = 0; i < dirs.size(); ++i) {
            const double h = max_vertex_dot(verts, dirs.node(i));
            CHECK(h <= f[i] + 1e-10);
            const bool kept = std::find(keep.begin(), keep.end(), i) != keep.end();
            if (kept) CHECK(std::abs(h - f[i]) <= 1e-10);
        }
        const HalfspacePolytope pruned = wulff_shape(dim, dirs.nodes(), f);
        CHECK(pruned.size() == keep.size());
        const SphericalGrid g = dim == 2 ? build_grid(2, GridRule::equal_angle_2d, 500)
                                         : build_grid(3, GridRule::fibonacci_3d, 2000);
        CHECK(radial_distance(pruned, full, g) <= 1e-12);
    }
}

TEST_CASE("Wulff/hull duality on random samples") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(0.5, 2.0);
    for (int dim : {2, 3}) {
        const SphericalGrid dirs = dim == 2 ? build_grid(2, GridRule::equal_angle_2d, 64)
                                            : build_grid(3, GridRule::fibonacci_3d, 64);
        const SphericalGrid g = dim == 2 ? build_grid(2, GridRule::equal_angle_2d, 1000)
                                         : build_grid(3, GridRule::fibonacci_3d, 3000);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<double> f(dirs.size()), inv(dirs.size());
            for (size_t i = 0; i < f.size(); ++i) {
                f[i] = val(rng);
                inv[i] = 1.0 / f[i];
            }
            const HalfspacePolytope lhs = polar(wulff_shape(dim, dirs.nodes(), f));
            const HalfspacePolytope rhs = convex_hull_of_radial(RadialSampleBody(dim, dirs.nodes(), inv));
            CHECK(radial_distance(lhs, rhs, g) <= 1e-9);
        }
    }
}

TEST_CASE("convex hull of radial samples") {
    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 4000);
    const HalfspacePolytope C = cube(3);
    const HalfspacePolytope H = convex_hull_of_radial(RadialSampleBody(3, g.nodes(), radial_samples(C, g)));
    const SphericalGrid probe = build_grid(3, GridRule::fibonacci_3d, 1500);
    const double d = radial_distance(H, C, probe);
    CHECK(d <= 0.1);
    // Sampled points lie in the cube, so the hull is inside it.
    for (double r : radial_samples(H, probe)) (void)r;
    for (size_t k = 0; k < probe.size(); ++k)
        CHECK(radial_function(H, probe.node(k)).radius <= radial_function(C, probe.node(k)).radius + 1e-12);

    const SphericalGrid ring = build_grid(2, GridRule::equal_angle_2d, 256);
    const HalfspacePolytope disk = convex_hull_of_radial(RadialSampleBody(2, ring.nodes(), std::vector<double>(256, 1.5)));
    for (double r : radial_samples(disk, build_grid(2, GridRule::equal_angle_2d, 777)))
        CHECK(std::abs(r - 1.5) <= 1.5 * (1.0 - std::cos(pi / 256)) + 1e-12);

    CHECK_THROWS_AS(RadialSampleBody(2, {vec2(1, 0), vec2(-1, 0)}, {1, 1}), InvalidArgument);
    CHECK_THROWS_AS(RadialSampleBody(2, {vec2(1, 0), vec2(-1, 0), vec2(1, 0)}, {1, 1, 1}), HemisphereError);
}

TEST_CASE("radial Gauss assignment: hits, ties and the partition property") {
    const HalfspacePolytope S = square();
    const double a30 = pi / 6;
    CHECK(radial_function(S, vec2(std::cos(a30), std::sin(a30))).facet == 0);
    CHECK(radial_function(S, unit(vec2(1, 1))).facet == 0);
    CHECK(radial_function(S, unit(vec2(-1, 1))).facet == 1);
    CHECK(radial_function(S, unit(vec2(-1, -1))).facet == 2);

    const SphericalGrid g = build_grid(2, GridRule::equal_angle_2d, 4096);
    const auto a = radial_gauss_assignment(S, g);
    std::set<size_t> used(a.begin(), a.end());
    CHECK(used == std::set<size_t>{0, 1, 2, 3});

    std::mt19937_64 rng(31);
    for (const HalfspacePolytope& P : corpus(3, 5, 400)) {
        const SphericalGrid g3 = build_grid(3, GridRule::fibonacci_3d, 4000);
        const auto asg = radial_gauss_assignment(P, g3);
        std::vector<double> f(g3.size());
        for (double& v : f) v = std::uniform_real_distribution<double>(0, 1)(rng);
        std::vector<double> per(P.size(), 0.0);
        for (size_t k = 0; k < asg.size(); ++k) per[asg[k]] += f[k];
        double grouped = 0.0, direct = 0.0;
        for (double v : per) grouped += v;
        for (double v : f) direct += v;
        CHECK(grouped == doctest::Approx(direct).epsilon(1e-12));
        for (size_t k = 0; k < asg.size(); ++k)
            CHECK(brute_radial(P, g3.node(k)) * P.normal(asg[k]).dot(g3.node(k)) ==
                  doctest::Approx(P.offset(asg[k])).epsilon(1e-12));

        const PruneResult pr = prune(P, g3);
        const auto again = radial_gauss_assignment(pr.body, g3);
        std::set<size_t> u(again.begin(), again.end());
        CHECK(u.size() == pr.body.size());
        CHECK(radial_distance(pr.body, P, g3) <= 1e-12);
    }
}

TEST_CASE("dilation scales radii and preserves the assignment") {
    const HalfspacePolytope C = cube(3);
    const HalfspacePolytope D = dilate(C, 2.0);
    CHECK(radial_function(D, Vec::Unit(3, 0)).radius == 2.0);
    CHECK(D.offsets() == std::vector<double>(6, 2.0));
    CHECK_THROWS_AS(dilate(C, 0.0), InvalidArgument);
    CHECK_THROWS_AS(dilate(C, -1.0), InvalidArgument);

    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 3000);
    for (const HalfspacePolytope& P : corpus(3, 5, 500)) {
        const HalfspacePolytope back = dilate(dilate(P, 2.0), 0.5);
        CHECK(back.offsets() == P.offsets());
        const auto base = radial_gauss_assignment(P, g);
        const auto rho = radial_samples(P, g);
        for (double lam : {0.3, 2.0, 7.5}) {
            const HalfspacePolytope Q = dilate(P, lam);
            CHECK(radial_gauss_assignment(Q, g) == base);
            const auto r2 = radial_samples(Q, g);
            for (size_t k = 0; k < g.size(); k += 97) CHECK(r2[k] == doctest::Approx(lam * rho[k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("radial distance") {
    const SphericalGrid g2 = build_grid(2, GridRule::equal_angle_2d, 512);
    CHECK(radial_distance(square(), square(), g2) == 0.0);
    const SphericalGrid ring = build_grid(2, GridRule::equal_angle_2d, 512);
    const HalfspacePolytope b1 = wulff_shape(2, ring.nodes(), std::vector<double>(512, 1.0), false);
    const HalfspacePolytope b2 = wulff_shape(2, ring.nodes(), std::vector<double>(512, 2.0), false);
    CHECK(radial_distance(b1, b2, g2) == doctest::Approx(1.0).epsilon(1e-12));

    const double delta = 0.01;
    const SphericalGrid g3 = build_grid(3, GridRule::fibonacci_3d, 100000);
    const double d = radial_distance(cube(3), dilate(cube(3), 1.0 + delta), g3);
    CHECK(d <= delta * std::sqrt(3.0) + 1e-15);
    CHECK(d >= delta * std::sqrt(3.0) * 0.99);
}

TEST_CASE("higher dimensions use the sampled polar") {
    const SphericalGrid g = build_grid(4, GridRule::monte_carlo, 5000, 3);
    const HalfspacePolytope C = cube(4);
    const Vec d = Vec::Constant(4, 0.5);
    CHECK(support_function(C, d, g) <= 2.0 + 1e-12);
    CHECK(support_function(C, d, g) >= 1.6);  // sampled polar, resolution-limited
    CHECK_THROWS_AS(support_function(C, d), InvalidArgument);
}
