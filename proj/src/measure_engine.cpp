#include "orlimink/measure_engine.hpp"

#include "orlimink/cone.hpp"
#include "orlimink/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlimink {

DiscreteSphericalMeasure::DiscreteSphericalMeasure(int dim, std::vector<Vec> directions, std::vector<double> masses)
    : dim_(dim), directions_(std::move(directions)), masses_(std::move(masses)) {
    if (dim_ < 2) throw InvalidArgument("measure: dim must be >= 2");
    if (directions_.empty()) throw InvalidArgument("measure: no atoms");
    if (directions_.size() != masses_.size()) throw InvalidArgument("measure: directions/masses length mismatch");
    for (size_t i = 0; i < directions_.size(); ++i) {
        if (directions_[i].size() != dim_)
            throw InvalidArgument("measure: atom " + std::to_string(i) + " has the wrong dimension");
        const double n = directions_[i].norm();
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-9)
            throw InvalidArgument("measure: atom " + std::to_string(i) + " direction is not a unit vector");
        if (std::abs(n - 1.0) > 4e-16) directions_[i] /= n;
        if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i]))
            throw InvalidArgument("measure: atom " + std::to_string(i) + " mass must be positive and finite");
    }
    for (size_t i = 0; i < directions_.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            // Chord length is accurate for small angles where acos is not.
            if ((directions_[i] - directions_[j]).norm() <= 1e-12)
                throw InvalidArgument("measure: atoms " + std::to_string(j) + " and " + std::to_string(i) +
                                      " share a direction");
        }
    for (double m : masses_) total_ += m;
}

RadialTable::RadialTable(const SphericalGrid& grid, std::span<const Vec> normals)
    : grid_(&grid), facets_(normals.size()), dots_(grid.size() * normals.size()) {
    for (const Vec& v : normals)
        if (v.size() != grid.dim()) throw InvalidArgument("radial table: dimension mismatch");
    parallel_for(grid.size(), [&](size_t b, size_t e) {
        for (size_t k = b; k < e; ++k)
            for (size_t i = 0; i < facets_; ++i) dots_[k * facets_ + i] = grid.node(k).dot(normals[i]);
    });
}

namespace {

inline double min_ratio(const double* dots, std::span<const double> h) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < h.size(); ++i)
        if (dots[i] > 0.0) best = std::min(best, h[i] / dots[i]);
    return best;
}

}  // namespace

std::vector<double> RadialTable::radii(std::span<const double> offsets) const {
    if (offsets.size() != facets_) throw InvalidArgument("radial table: offsets length mismatch");
    std::vector<double> rho(grid_->size());
    parallel_for(rho.size(), [&](size_t b, size_t e) {
        for (size_t k = b; k < e; ++k) rho[k] = min_ratio(&dots_[k * facets_], offsets);
    });
    return rho;
}

RadialTable::Samples RadialTable::evaluate(std::span<const double> offsets) const {
    Samples s;
    s.rho = radii(offsets);
    const size_t N = s.rho.size();
    s.begin.resize(N + 1);
    s.hits.reserve(N + N / 16);
    for (size_t k = 0; k < N; ++k) {
        s.begin[k] = static_cast<std::uint32_t>(s.hits.size());
        const double* d = &dots_[k * facets_];
        const double cut = s.rho[k] * (1.0 + kTieRelTol);
        for (size_t i = 0; i < facets_; ++i)
            if (d[i] > 0.0 && offsets[i] / d[i] <= cut) s.hits.push_back(static_cast<std::uint32_t>(i));
    }
    s.begin[N] = static_cast<std::uint32_t>(s.hits.size());
    return s;
}

double dual_orlicz_quermassintegral(const HalfspacePolytope& P, const ScalarFn& f, const SphericalGrid& grid) {
    const std::vector<double> rho = radial_samples(P, grid);
    std::vector<double> vals(rho.size());
    for (size_t k = 0; k < rho.size(); ++k) vals[k] = f(rho[k]);
    return integrate(grid, vals) / P.dim();
}

CurvatureMeasure curvature_masses(const RadialTable& table, std::span<const double> offsets, const ScalarFn& varphi) {
    const SphericalGrid& grid = table.grid();
    const RadialTable::Samples s = table.evaluate(offsets);
    const double n = grid.dim();
    CurvatureMeasure out;
    out.masses.assign(table.facets(), 0.0);
    for (size_t k = 0; k < s.rho.size(); ++k) {
        const double f = varphi(s.rho[k]);
        if (!std::isfinite(f)) throw InvalidArgument("curvature measure: non-finite varphi value at node " + std::to_string(k));
        const std::uint32_t b = s.begin[k], e = s.begin[k + 1];
        const double share = grid.weight(k) * f / n / static_cast<double>(e - b);
        for (std::uint32_t t = b; t < e; ++t) out.masses[s.hits[t]] += share;
    }
    for (double c : out.masses) out.total += c;
    return out;
}

CurvatureMeasure curvature_masses(const HalfspacePolytope& P, const ScalarFn& varphi, const SphericalGrid& grid) {
    if (grid.dim() != P.dim()) throw InvalidArgument("curvature measure: grid dimension mismatch");
    const RadialTable table(grid, P.normals());
    return curvature_masses(table, P.offsets(), varphi);
}

CurvatureMeasure dual_orlicz_curvature_measure(const HalfspacePolytope& P, const OrliczPair& pair,
                                               const SphericalGrid& grid) {
    return curvature_masses(P, pair.varphi, grid);
}

double integrate_against_curvature(const HalfspacePolytope& P, const OrliczPair& pair, const SphericalGrid& grid,
                                   std::span<const double> g) {
    if (g.size() != P.size()) throw InvalidArgument("integrate_against_curvature: one value per facet required");
    const CurvatureMeasure c = dual_orlicz_curvature_measure(P, pair, grid);
    double s = 0.0;
    for (size_t j = 0; j < g.size(); ++j) s += g[j] * c.masses[j];
    return s;
}

double dual_orlicz_mixed_volume(const HalfspacePolytope& K, const HalfspacePolytope& L, const ScalarFn& psi,
                                const SphericalGrid& grid) {
    if (K.dim() != L.dim()) throw InvalidArgument("mixed volume: dimension mismatch");
    const std::vector<double> rk = radial_samples(K, grid), rl = radial_samples(L, grid);
    std::vector<double> vals(rk.size());
    for (size_t k = 0; k < rk.size(); ++k) {
        const double p = psi(rl[k] / rk[k]);
        if (!std::isfinite(p)) throw InvalidArgument("mixed volume: non-finite psi value at node " + std::to_string(k));
        vals[k] = p * std::pow(rk[k], K.dim());
    }
    return integrate(grid, vals) / K.dim();
}

std::vector<double> surface_area_measure(const HalfspacePolytope& P, const SphericalGrid& grid) {
    const int n = P.dim();
    const CurvatureMeasure c = curvature_masses(P, [n](double t) { return std::pow(t, n); }, grid);
    std::vector<double> area(P.size());
    for (size_t j = 0; j < area.size(); ++j) area[j] = n * c.masses[j] / P.offset(j);
    return area;
}

double hemisphere_functional(const DiscreteSphericalMeasure& mu, const Vec& xi) {
    double s = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) s += mu.mass(i) * std::max(0.0, xi.dot(mu.direction(i)));
    return s;
}

HemisphereCheck hemisphere_concentration_check(const DiscreteSphericalMeasure& mu) {
    HemisphereCheck out;
    out.tolerance = 1e-10 * mu.total();
    const SpanCheck span = positive_span(mu.directions());
    if (!span.spans) {
        out.pass = false;
        out.witness = span.witness;
        out.value = hemisphere_functional(mu, span.witness);
        return out;
    }
    out.value = std::numeric_limits<double>::quiet_NaN();
    if (mu.dim() == 2 || mu.dim() == 3) {
        const SphericalGrid cert = mu.dim() == 2 ? build_grid(2, GridRule::equal_angle_2d, 8192)
                                                 : build_grid(3, GridRule::fibonacci_3d, 20000);
        size_t arg = 0;
        double best = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < cert.size(); ++k) {
            const double v = hemisphere_functional(mu, cert.node(k));
            if (v < best) best = v, arg = k;
        }
        out.value = best;
        if (!(best > out.tolerance)) {
            out.pass = false;
            out.witness = cert.node(arg);
            return out;
        }
    }
    out.pass = true;
    return out;
}

}  // namespace orlimink
