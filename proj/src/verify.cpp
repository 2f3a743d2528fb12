#include "orlimink/verify.hpp"

#include "orlimink/cone.hpp"
#include "orlimink/minkowski_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace orlimink {

namespace {

constexpr int kDefault2d = 4096;
constexpr int kDefault3d = 100000;

Vec random_direction(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> g;
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = g(rng);
    return v / v.norm();
}

HalfspacePolytope random_body(std::mt19937_64& rng, int dim, int facets) {
    std::uniform_real_distribution<double> off(0.5, 1.5);
    for (;;) {
        std::vector<Vec> n;
        std::vector<double> h;
        for (int i = 0; i < facets; ++i) {
            n.push_back(random_direction(rng, dim));
            h.push_back(off(rng));
        }
        if (positive_span(n).spans) return HalfspacePolytope(dim, std::move(n), std::move(h));
    }
}

HalfspacePolytope cube_body(int dim, double a = 1.0) {
    std::vector<Vec> n;
    for (int s : {1, -1})
        for (int k = 0; k < dim; ++k) n.push_back(s * Vec::Unit(dim, k));
    return HalfspacePolytope(dim, n, std::vector<double>(n.size(), a));
}

double support_from_vertices(const std::vector<Vec>& verts, const Vec& u) {
    double h = -INFINITY;
    for (const Vec& x : verts) h = std::max(h, u.dot(x));
    return h;
}

VerifyCheck at_most(std::string name, double value, double tol, std::string detail = {}) {
    return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

struct Suite {
    const VerifyOptions& opt;
    SphericalGrid g2;
    SphericalGrid g3;
    std::vector<HalfspacePolytope> corpus;  // 10 bodies in dim 2, then 10 in dim 3
    std::vector<VerifyCheck> out;

    explicit Suite(const VerifyOptions& o)
        : opt(o),
          g2(build_grid(2, GridRule::equal_angle_2d, o.resolution > 0 ? o.resolution : kDefault2d)),
          g3(build_grid(3, GridRule::fibonacci_3d, o.resolution > 0 ? o.resolution : kDefault3d)) {
        std::mt19937_64 rng(o.seed);
        std::uniform_int_distribution<int> facets(6, 40);
        for (int dim : {2, 3})
            for (int i = 0; i < 10; ++i) corpus.push_back(random_body(rng, dim, facets(rng)));
    }

    const SphericalGrid& grid(int dim) const { return dim == 2 ? g2 : g3; }

    // Node-quantization error of the cone-volume masses shrinks like 1/N on
    // the circle and like 1/sqrt(N) on the Fibonacci sphere.
    double cone_tol(int dim) const {
        return dim == 2 ? 1e-3 * kDefault2d / g2.size() : 1e-2 * std::sqrt(double(kDefault3d) / g3.size());
    }

    void duality() {
        double dual = 0.0, bipolar = 0.0;
        for (const HalfspacePolytope& P : corpus) {
            const SphericalGrid& g = grid(P.dim());
            const HalfspacePolytope Q = polar(P);
            const std::vector<Vec> verts = geometry(P).vertices;
            const std::vector<double> rho = radial_samples(Q, g);
            for (size_t k = 0; k < g.size(); ++k)
                dual = std::max(dual, std::abs(rho[k] * support_from_vertices(verts, g.node(k)) - 1.0));
            bipolar = std::max(bipolar, radial_distance(polar(Q), P, g));
        }
        out.push_back(at_most("duality", dual, 1e-9, "max |rho_{P*} h_P - 1| over 20 bodies"));
        out.push_back(at_most("bipolarity", bipolar, 1e-9, "max radial distance of P** to P"));
    }

    void wulff() {
        std::mt19937_64 rng(opt.seed + 1);
        std::uniform_real_distribution<double> val(0.5, 2.0);
        double hull = 0.0, bound = 0.0;
        int equality_misses = 0;
        for (int dim : {2, 3}) {
            const SphericalGrid dirs = dim == 2 ? build_grid(2, GridRule::equal_angle_2d, 64)
                                                : build_grid(3, GridRule::fibonacci_3d, 64);
            for (int trial = 0; trial < 5; ++trial) {
                std::vector<double> f(dirs.size()), inv(dirs.size());
                for (size_t i = 0; i < f.size(); ++i) {
                    f[i] = val(rng);
                    inv[i] = 1.0 / f[i];
                }
                const HalfspacePolytope lhs = polar(wulff_shape(dim, dirs.nodes(), f));
                const HalfspacePolytope rhs = convex_hull_of_radial(RadialSampleBody(dim, dirs.nodes(), inv));
                hull = std::max(hull, radial_distance(lhs, rhs, grid(dim)));

                const HalfspacePolytope full = wulff_shape(dim, dirs.nodes(), f, false);
                const std::vector<size_t> kept = nonredundant_facets(full);
                const std::vector<Vec> verts = geometry(full).vertices;
                for (size_t i = 0; i < f.size(); ++i) {
                    const double h = support_from_vertices(verts, dirs.node(i));
                    bound = std::max(bound, h - f[i]);
                    const bool on = std::abs(h - f[i]) <= 1e-10 * f[i];
                    const bool listed = std::find(kept.begin(), kept.end(), i) != kept.end();
                    if (on != listed) ++equality_misses;
                }
            }
        }
        out.push_back(at_most("wulff_hull_duality", hull, 1e-9, "polar(wulff(f)) vs hull(1/f), 10 samples"));
        out.push_back(at_most("support_bound", bound, 1e-10, "max h_[f](v_i) - f(v_i)"));
        out.push_back(at_most("support_equality", equality_misses, 0,
                              "directions where equality and non-redundancy disagree"));
    }

    void partition_and_additivity() {
        double partition = 0.0, additivity = 0.0;
        std::mt19937_64 rng(opt.seed + 2);
        const OrliczPair pair = make_power_pair(-1);
        for (const HalfspacePolytope& P : corpus) {
            const SphericalGrid& g = grid(P.dim());
            const std::vector<size_t> cls = radial_gauss_assignment(P, g);
            const std::vector<double> rho = radial_samples(P, g);
            std::vector<double> by_class(P.size(), 0.0);
            double full = 0.0;
            for (size_t k = 0; k < g.size(); ++k) {
                const double f = g.weight(k) * std::pow(rho[k], P.dim());
                by_class[cls[k]] += f;
                full += f;
            }
            double summed = 0.0;
            for (double v : by_class) summed += v;
            partition = std::max(partition, std::abs(summed - full) / full);

            const CurvatureMeasure c = dual_orlicz_curvature_measure(P, pair, g);
            std::uniform_int_distribution<int> group(0, 2);
            double groups[3] = {0, 0, 0};
            for (double m : c.masses) groups[group(rng)] += m;
            additivity = std::max(additivity, std::abs(groups[0] + groups[1] + groups[2] - c.total) / c.total);
        }
        out.push_back(at_most("assignment_partition", partition, 1e-12, "class sums vs full-grid sum, relative"));
        out.push_back(at_most("additivity", additivity, 1e-12, "random facet groups vs total, relative"));
    }

    void absolute_continuity() {
        double worst = 0.0;
        for (int dim : {2, 3}) {
            const HalfspacePolytope C = cube_body(dim);
            std::vector<Vec> n = C.normals();
            std::vector<double> h = C.offsets();
            n.push_back(unit(Vec::Ones(dim)));
            h.push_back(std::sqrt(double(dim)) + 0.05);
            const HalfspacePolytope P(dim, n, h);
            const CurvatureMeasure c = dual_orlicz_curvature_measure(P, make_power_pair(-1), grid(dim));
            worst = std::max(worst, c.masses.back());
        }
        out.push_back(at_most("absolute_continuity", worst, 0.0, "mass on an appended redundant halfspace"));
    }

    void weak_continuity() {
        const OrliczPair pair = make_power_pair(-1);
        const HalfspacePolytope C = cube_body(3);
        const CurvatureMeasure base = dual_orlicz_curvature_measure(C, pair, g3);
        const std::vector<double> pattern = {1.0, -0.5, 0.25, 0.8, -1.0, 0.3};
        double prev = INFINITY;
        int violations = 0;
        std::ostringstream detail;
        detail << "max facet deviation at delta 1e-2,1e-3,1e-4:";
        for (double delta : {1e-2, 1e-3, 1e-4}) {
            std::vector<double> h(6);
            for (size_t j = 0; j < 6; ++j) h[j] = 1.0 + delta * pattern[j];
            const CurvatureMeasure c = dual_orlicz_curvature_measure(C.with_offsets(h), pair, g3);
            double dev = 0.0;
            for (size_t j = 0; j < 6; ++j) dev = std::max(dev, std::abs(c.masses[j] - base.masses[j]));
            if (!(dev < prev)) ++violations;
            detail << ' ' << dev;
            prev = dev;
        }
        out.push_back(at_most("weak_continuity", violations, 0, detail.str()));
    }

    void dilation() {
        const OrliczPair pair = make_power_pair(-2);
        int order = 0;
        double ratio = 0.0;
        for (const HalfspacePolytope& P : corpus) {
            double prev = INFINITY;
            for (double lam : {0.5, 1.0, 2.0, 4.0}) {
                const double v = dual_orlicz_quermassintegral(dilate(P, lam), pair.phi, grid(P.dim()));
                if (!(v < prev)) ++order;
                // phi(t) = t^-2 / 2 makes V(lambda P) = lambda^-2 V(P); successive ratios are 1/4.
                if (std::isfinite(prev)) ratio = std::max(ratio, std::abs(v / prev - 0.25) / 0.25);
                prev = v;
            }
        }
        out.push_back(at_most("dilation_monotonicity", order, 0, "non-decreasing steps over lambda 0.5..4"));
        out.push_back(at_most("dilation_homogeneity", ratio, 1e-6, "successive ratios vs lambda^-2, relative"));
    }

    void cone_volumes() {
        const OrliczPair two = make_power_pair(2), three = make_power_pair(3);
        const CurvatureMeasure s = dual_orlicz_curvature_measure(cube_body(2), two, g2);
        double e2 = std::abs(s.total - 4.0);
        for (double m : s.masses) e2 = std::max(e2, std::abs(m - 1.0));
        const CurvatureMeasure c = dual_orlicz_curvature_measure(cube_body(3), three, g3);
        double e3 = std::abs(c.total - 8.0);
        for (double m : c.masses) e3 = std::max(e3, std::abs(m - 4.0 / 3.0));
        out.push_back(at_most("cone_volume_square", e2, cone_tol(2), "masses vs 1, total vs 4"));
        out.push_back(at_most("cone_volume_cube", e3, cone_tol(3), "masses vs 4/3, total vs 8"));
    }

    void uniqueness() {
        const OrliczPair pair = make_power_pair(-1);
        const CurvatureMeasure a = dual_orlicz_curvature_measure(cube_body(2), pair, g2);
        const CurvatureMeasure b = dual_orlicz_curvature_measure(cube_body(2, 1.1), pair, g2);
        double dev = 0.0;
        for (size_t j = 0; j < a.masses.size(); ++j) dev = std::max(dev, std::abs(a.masses[j] - b.masses[j]));
        const double need = 10 * cone_tol(2);
        out.push_back({"uniqueness_data", dev > need, dev, need, "square vs 1.1 square, must exceed tolerance"});
    }

    void gradient_audit() {
        std::mt19937_64 rng(opt.seed + 3);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        // Direction t perturbs 3D corpus body t mod 10, so the audit samples the whole corpus.
        for (double q : {-1.0, -2.0, 2.0}) {
            const OrliczPair pair = make_power_pair(q);
            int good = 0;
            double worst = 0.0;
            for (int t = 0; t < 20; ++t) {
                const HalfspacePolytope& P = corpus[10 + t % 10];
                std::vector<double> g(P.size()), hp(P.size()), hm(P.size());
                for (double& v : g) v = u(rng);
                for (size_t j = 0; j < P.size(); ++j) {
                    hp[j] = P.offset(j) * std::exp(opt.t_fd * g[j]);
                    hm[j] = P.offset(j) * std::exp(-opt.t_fd * g[j]);
                }
                const double fd = (dual_orlicz_quermassintegral(P.with_offsets(hp), pair.phi, g3) -
                                   dual_orlicz_quermassintegral(P.with_offsets(hm), pair.phi, g3)) /
                                  (2 * opt.t_fd);
                const double an = constraint_directional_derivative(P, pair, g3, g);
                const double rel = std::abs(an - fd) / std::max(std::abs(fd), 1e-300);
                worst = std::max(worst, rel);
                if (rel <= 1e-3) ++good;
            }
            char name[48];
            std::snprintf(name, sizeof name, "gradient_audit[%s]", pair.label.c_str());
            out.push_back({name, good >= 19, double(good), 19.0,
                           "directions within 1e-3 of the finite difference (of 20); worst " + std::to_string(worst)});
        }
    }
};

}  // namespace

std::vector<VerifyCheck> run_identity_suite(const VerifyOptions& options) {
    if (options.resolution < 0) throw InvalidArgument("verify: resolution must be >= 0");
    Suite s(options);
    s.duality();
    s.wulff();
    s.partition_and_additivity();
    s.absolute_continuity();
    s.weak_continuity();
    s.dilation();
    s.cone_volumes();
    s.uniqueness();
    s.gradient_audit();
    return std::move(s.out);
}

std::string format_table(const std::vector<VerifyCheck>& checks) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof line, "%-28s %-6s %-14s %-14s %s\n", "check", "result", "value", "tolerance", "detail");
    os << line;
    int failed = 0;
    for (const VerifyCheck& c : checks) {
        std::snprintf(line, sizeof line, "%-28s %-6s %-14.6g %-14.6g ", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                      c.value, c.tolerance);
        os << line << c.detail << '\n';
        if (!c.passed) ++failed;
    }
    os << checks.size() - failed << '/' << checks.size() << " checks passed\n";
    return os.str();
}

}  // namespace orlimink
