#include "doctest.h"

#include "orlimink/measure_engine.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace orlimink;
using namespace orlimink::testing;
using std::numbers::pi;

namespace {

ScalarFn power(double q) {
    return [q](double t) { return std::pow(t, q); };
}

/// Exact cone volume over each facet from brute-force vertices: the facet
/// polygon is collected from vertices on the facet plane and measured in-plane.
std::vector<double> cone_volumes(const HalfspacePolytope& P) {
    const int d = P.dim();
    const std::vector<Vec> verts = brute_vertices(P);
    std::vector<double> out(P.size(), 0.0);
    for (size_t i = 0; i < P.size(); ++i) {
        std::vector<Vec> on;
        for (const Vec& x : verts) {
            if (std::abs(P.normal(i).dot(x) - P.offset(i)) > 1e-9) continue;
            bool dup = false;
            for (const Vec& y : on) dup = dup || (x - y).norm() < 1e-9;
            if (!dup) on.push_back(x);
        }
        if (static_cast<int>(on.size()) < d) continue;
        double measure = 0.0;
        if (d == 2) {
            measure = (on[0] - on[1]).norm();
        } else {
            Vec c = Vec::Zero(3);
            for (const Vec& x : on) c += x;
            c /= static_cast<double>(on.size());
            const Eigen::Vector3d n = P.normal(i);
            Eigen::Vector3d a = n.unitOrthogonal();
            const Eigen::Vector3d b = n.cross(a);
            std::vector<Vec> flat;
            for (const Vec& x : on) flat.push_back(vec2((x - c).dot(a), (x - c).dot(b)));
            measure = shoelace_area(flat);
        }
        out[i] = P.offset(i) * measure / d;
    }
    return out;
}

HalfspacePolytope regular_polygon(int count, double r) {
    return HalfspacePolytope(2, polygon_normals(count), std::vector<double>(static_cast<size_t>(count), r));
}

}  // namespace

TEST_CASE("discrete measures validate their atoms") {
    const DiscreteSphericalMeasure mu(2, {vec2(1, 0), vec2(0, 1)}, {1.0, 2.5});
    CHECK(mu.total() == 3.5);
    CHECK_THROWS_AS(DiscreteSphericalMeasure(2, {vec2(1, 0)}, {0.0}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteSphericalMeasure(2, {vec2(1, 0), vec2(1, 0)}, {1.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteSphericalMeasure(2, {vec2(1, 1)}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteSphericalMeasure(2, {}, {}), InvalidArgument);
    CHECK_THROWS_AS(DiscreteSphericalMeasure(3, {vec2(1, 0)}, {1.0}), InvalidArgument);
}

TEST_CASE("quermassintegral: balls, the square and the cube") {
    const SphericalGrid ring = build_grid(2, GridRule::equal_angle_2d, 256);
    const HalfspacePolytope disk(2, ring.nodes(), std::vector<double>(256, 1.5));
    const SphericalGrid g2 = build_grid(2, GridRule::equal_angle_2d, 256);
    // The grid nodes coincide with the normals, so rho = 1.5 exactly at every node.
    CHECK(dual_orlicz_quermassintegral(disk, power(-1), g2) == doctest::Approx(2 * pi / 1.5 / 2).epsilon(1e-12));

    const SphericalGrid fib = build_grid(3, GridRule::fibonacci_3d, 2000);
    const HalfspacePolytope ball3(3, fib.nodes(), std::vector<double>(2000, 0.8));
    const double want = std::pow(0.8, -2) / 2 * 4 * pi / 3;
    CHECK(dual_orlicz_quermassintegral(ball3, [](double t) { return std::pow(t, -2) / 2; }, fib) ==
          doctest::Approx(want).epsilon(1e-12));

    CHECK(std::abs(dual_orlicz_quermassintegral(square(), power(2), build_grid(2, GridRule::equal_angle_2d, 4096)) - 4.0) <=
          4e-3);
    CHECK(std::abs(dual_orlicz_quermassintegral(cube(3), power(3), build_grid(3, GridRule::fibonacci_3d, 100000)) - 8.0) <=
          8e-2);
    CHECK_THROWS_AS(dual_orlicz_quermassintegral(square(), [](double) { return NAN; }, g2), InvalidArgument);
}

TEST_CASE("curvature masses: cone-volume oracle") {
    const SphericalGrid g2 = build_grid(2, GridRule::equal_angle_2d, 4096);
    const CurvatureMeasure s = curvature_masses(square(), power(2), g2);
    for (double c : s.masses) CHECK(std::abs(c - 1.0) <= 1e-3);
    CHECK(std::abs(s.total - 4.0) <= 1e-3);

    const SphericalGrid g3 = build_grid(3, GridRule::fibonacci_3d, 100000);
    const CurvatureMeasure c = curvature_masses(cube(3), power(3), g3);
    for (double m : c.masses) CHECK(std::abs(m - 4.0 / 3.0) <= 1e-2);
    CHECK(std::abs(c.total - 8.0) <= 1e-2);

    std::mt19937_64 rng(41);
    for (int t = 0; t < 5; ++t) {
        const HalfspacePolytope P = random_polytope(rng, 2, 12);
        const std::vector<double> exact = cone_volumes(P);
        const CurvatureMeasure m = curvature_masses(P, power(2), g2);
        double rmax = 0.0;
        for (const Vec& v : brute_vertices(P)) rmax = std::max(rmax, v.norm());
        // Each facet can be off by at most one node's worth of mass at either end.
        const double slack = 2.0 * (2 * pi / 4096) * rmax * rmax / 2;
        for (size_t j = 0; j < P.size(); ++j) CHECK(std::abs(m.masses[j] - exact[j]) <= slack);
    }
    const SphericalGrid g3b = build_grid(3, GridRule::fibonacci_3d, 100000);
    for (int t = 0; t < 3; ++t) {
        const HalfspacePolytope P = random_polytope(rng, 3, 14);
        const std::vector<double> exact = cone_volumes(P);
        const CurvatureMeasure m = curvature_masses(P, power(3), g3b);
        double vol = 0.0;
        for (double e : exact) vol += e;
        for (size_t j = 0; j < P.size(); ++j) CHECK(std::abs(m.masses[j] - exact[j]) <= 5e-3 * vol);
        CHECK(m.total == doctest::Approx(vol).epsilon(5e-3));
    }
}

TEST_CASE("curvature masses: symmetric balls, totals and integration") {
    const HalfspacePolytope B = regular_polygon(64, 1.2);
    const SphericalGrid g = build_grid(2, GridRule::equal_angle_2d, 4096);
    for (double q : {-1.0, -2.0, 2.0}) {
        const CurvatureMeasure c = dual_orlicz_curvature_measure(B, make_power_pair(q), g);
        for (double m : c.masses) CHECK(std::abs(m - c.masses[0]) <= 1e-9 * c.masses[0]);
    }

    std::mt19937_64 rng(43);
    for (int dim : {2, 3}) {
        const SphericalGrid grid = dim == 2 ? g : build_grid(3, GridRule::fibonacci_3d, 20000);
        for (int t = 0; t < 4; ++t) {
            const HalfspacePolytope P = random_polytope(rng, dim, 10);
            for (double q : {-1.0, -2.0, 2.0}) {
                const OrliczPair pair = make_power_pair(q);
                const CurvatureMeasure c = dual_orlicz_curvature_measure(P, pair, grid);
                CHECK(c.total == doctest::Approx(dual_orlicz_quermassintegral(P, pair.varphi, grid)).epsilon(1e-12));
                const std::vector<double> ones(P.size(), 1.0);
                CHECK(integrate_against_curvature(P, pair, grid, ones) == doctest::Approx(c.total).epsilon(1e-14));
                std::vector<double> ind(P.size(), 0.0);
                ind[3] = 1.0;
                CHECK(integrate_against_curvature(P, pair, grid, ind) == c.masses[3]);
                // Additivity over an arbitrary grouping of facets.
                double even = 0.0, odd = 0.0;
                for (size_t j = 0; j < P.size(); ++j) (j % 2 ? odd : even) += c.masses[j];
                CHECK(even + odd == doctest::Approx(c.total).epsilon(1e-14));
            }
        }
    }
    const std::vector<double> g4 = {1, 2, 3, 4};
    CHECK(std::abs(integrate_against_curvature(square(), make_power_pair(2), g, g4) - 10.0) <= 4e-3);
    CHECK_THROWS_AS(integrate_against_curvature(square(), make_power_pair(2), g, std::vector<double>{1, 2}),
                    InvalidArgument);
}

TEST_CASE("curvature masses vanish on redundant halfspaces") {
    std::vector<Vec> n = square().normals();
    std::vector<double> h = square().offsets();
    n.push_back(unit(vec2(1, 1)));
    h.push_back(std::sqrt(2.0) + 0.05);
    const HalfspacePolytope P(2, n, h);
    const SphericalGrid g = build_grid(2, GridRule::equal_angle_2d, 4096);
    const CurvatureMeasure c = dual_orlicz_curvature_measure(P, make_power_pair(-1), g);
    CHECK(c.masses[4] == 0.0);
}

TEST_CASE("curvature masses converge under small perturbations of the cube") {
    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 50000);
    const OrliczPair pair = make_power_pair(-1);
    const CurvatureMeasure base = dual_orlicz_curvature_measure(cube(3), pair, g);
    const std::vector<double> pattern = {1.0, -0.5, 0.25, 0.8, -1.0, 0.3};
    double prev = INFINITY;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
        std::vector<double> h(6);
        for (size_t j = 0; j < 6; ++j) h[j] = 1.0 + delta * pattern[j];
        const CurvatureMeasure c = dual_orlicz_curvature_measure(cube(3).with_offsets(h), pair, g);
        double dev = 0.0;
        for (size_t j = 0; j < 6; ++j) dev = std::max(dev, std::abs(c.masses[j] - base.masses[j]));
        CHECK(dev < prev);
        prev = dev;
    }
}

TEST_CASE("quermassintegral decreases under dilation for family A") {
    std::mt19937_64 rng(47);
    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 5000);
    const OrliczPair pair = make_power_pair(-2);
    for (int t = 0; t < 3; ++t) {
        const HalfspacePolytope P = random_polytope(rng, 3, 12);
        double prev = INFINITY;
        for (double lam : {0.5, 1.0, 2.0, 4.0}) {
            const double v = dual_orlicz_quermassintegral(dilate(P, lam), pair.phi, g);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("curvature measures separate the square from its dilate") {
    const SphericalGrid g = build_grid(2, GridRule::equal_angle_2d, 4096);
    const OrliczPair pair = make_power_pair(-1);
    const CurvatureMeasure a = dual_orlicz_curvature_measure(square(), pair, g);
    const CurvatureMeasure b = dual_orlicz_curvature_measure(dilate(square(), 1.1), pair, g);
    double dev = 0.0;
    for (size_t j = 0; j < 4; ++j) dev = std::max(dev, std::abs(a.masses[j] - b.masses[j]));
    CHECK(dev > 10 * 1e-3);
}

TEST_CASE("dual Orlicz mixed volume") {
    const SphericalGrid fib = build_grid(3, GridRule::fibonacci_3d, 3000);
    const HalfspacePolytope K(3, fib.nodes(), std::vector<double>(3000, 0.7));
    const HalfspacePolytope L(3, fib.nodes(), std::vector<double>(3000, 1.9));
    const ScalarFn psi = [](double t) { return std::exp(t); };
    CHECK(dual_orlicz_mixed_volume(K, L, psi, fib) ==
          doctest::Approx(std::exp(1.9 / 0.7) * std::pow(0.7, 3) * 4 * pi / 3).epsilon(1e-12));

    const SphericalGrid g = build_grid(3, GridRule::fibonacci_3d, 20000);
    const double vk = dual_orlicz_quermassintegral(cube(3), power(3), g);
    CHECK(dual_orlicz_mixed_volume(cube(3), cube(3), psi, g) == doctest::Approx(std::exp(1.0) * vk).epsilon(1e-12));

    std::mt19937_64 rng(53);
    const HalfspacePolytope A = random_polytope(rng, 3, 10), B = random_polytope(rng, 3, 10);
    CHECK(dual_orlicz_mixed_volume(A, B, power(3), g) ==
          doctest::Approx(dual_orlicz_quermassintegral(B, power(3), g)).epsilon(1e-12));
}

TEST_CASE("surface area measure") {
    const std::vector<double> s = surface_area_measure(square(), build_grid(2, GridRule::equal_angle_2d, 4096));
    for (double a : s) CHECK(std::abs(a - 2.0) <= 1e-3 * 2);
    const std::vector<double> c = surface_area_measure(cube(3), build_grid(3, GridRule::fibonacci_3d, 100000));
    for (double a : c) CHECK(std::abs(a - 4.0) <= 1e-2 * 3);

    const SphericalGrid nodes = build_grid(3, GridRule::fibonacci_3d, 400);
    const HalfspacePolytope ball(3, nodes.nodes(), std::vector<double>(400, 1.3));
    const std::vector<double> b = surface_area_measure(ball, build_grid(3, GridRule::fibonacci_3d, 100000));
    double total = 0.0;
    for (double a : b) total += a;
    CHECK(total == doctest::Approx(4 * pi * 1.3 * 1.3).epsilon(1e-2));
}

TEST_CASE("hemisphere concentration check") {
    std::vector<Vec> cross;
    for (int s : {1, -1})
        for (int k = 0; k < 3; ++k) cross.push_back(s * Vec::Unit(3, k));
    CHECK(hemisphere_concentration_check(DiscreteSphericalMeasure(3, cross, std::vector<double>(6, 1.0))).pass);
    CHECK(hemisphere_concentration_check(
              DiscreteSphericalMeasure(2, {vec2(1, 0), vec2(0, 1), vec2(-1, 0), vec2(0, -1)}, {1, 1, 1, 1}))
              .pass);

    const DiscreteSphericalMeasure two(2, {vec2(1, 0), vec2(0, 1)}, {1, 1});
    const HemisphereCheck r = hemisphere_concentration_check(two);
    CHECK_FALSE(r.pass);
    CHECK((r.witness - unit(vec2(-1, -1))).norm() <= 1e-12);
    CHECK(hemisphere_functional(two, r.witness) <= 1e-10);

    // On the boundary: antipodal pair in the plane.
    const DiscreteSphericalMeasure line(2, {vec2(1, 0), vec2(-1, 0), vec2(0, 1)}, {1, 1, 1});
    const HemisphereCheck l = hemisphere_concentration_check(line);
    CHECK_FALSE(l.pass);
    CHECK(hemisphere_functional(line, l.witness) <= 1e-10 * line.total());

    std::mt19937_64 rng(59);
    for (int t = 0; t < 20; ++t) {
        std::vector<Vec> d;
        std::vector<double> m;
        for (int i = 0; i < 6; ++i) {
            Vec v = random_unit(rng, 3);
            v[2] = std::abs(v[2]) + 0.01;  // all strictly in the upper half
            d.push_back(unit(v));
            m.push_back(1.0 + i);
        }
        const DiscreteSphericalMeasure mu(3, d, m);
        const HemisphereCheck h = hemisphere_concentration_check(mu);
        CHECK_FALSE(h.pass);
        CHECK(hemisphere_functional(mu, h.witness) <= 1e-10 * mu.total());
    }
}
