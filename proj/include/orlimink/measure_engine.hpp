#pragma once

#include "orlimink/body_kernel.hpp"
#include "orlimink/orlicz_pairs.hpp"
#include "orlimink/sphere_quadrature.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace orlimink {

/// Finite positive measure on S^{n-1}: sum_i mass_i delta_{direction_i}.
class DiscreteSphericalMeasure {
public:
    /// Validates unit directions (renormalized within 1e-9), positive finite
    /// masses and pairwise distinct directions (angle > 1e-12). The measure
    /// may be concentrated on a hemisphere; see hemisphere_concentration_check.
    DiscreteSphericalMeasure(int dim, std::vector<Vec> directions, std::vector<double> masses);

    int dim() const { return dim_; }
    size_t size() const { return directions_.size(); }
    const std::vector<Vec>& directions() const { return directions_; }
    const std::vector<double>& masses() const { return masses_; }
    const Vec& direction(size_t i) const { return directions_[i]; }
    double mass(size_t i) const { return masses_[i]; }
    /// |mu|, summed in atom order.
    double total() const { return total_; }

private:
    int dim_;
    std::vector<Vec> directions_;
    std::vector<double> masses_;
    double total_ = 0.0;
};

/// Facet-indexed masses of a curvature measure; total is their sum in index order.
struct CurvatureMeasure {
    std::vector<double> masses;
    double total = 0.0;
};

/// Node-by-facet table of u_k . v_i for a fixed grid and normal set. Lets
/// repeated evaluations with changing offsets (the solver) skip the dot products.
class RadialTable {
public:
    RadialTable(const SphericalGrid& grid, std::span<const Vec> normals);

    const SphericalGrid& grid() const { return *grid_; }
    size_t facets() const { return facets_; }

    struct Samples {
        std::vector<double> rho;
        /// Nodes on a ridge are shared: node k hits facets hits[begin[k]] .. hits[begin[k+1]-1].
        std::vector<std::uint32_t> begin;
        std::vector<std::uint32_t> hits;
    };

    /// rho at every node plus every facet within the tie tolerance of the minimum.
    Samples evaluate(std::span<const double> offsets) const;
    /// rho only.
    std::vector<double> radii(std::span<const double> offsets) const;

private:
    const SphericalGrid* grid_;
    size_t facets_;
    std::vector<double> dots_;  // node-major
};

/// (1/n) sum_k w_k f(rho_P(u_k)). Throws InvalidArgument on a non-finite value of f.
double dual_orlicz_quermassintegral(const HalfspacePolytope& P, const ScalarFn& f, const SphericalGrid& grid);

/// c_j = (1/n) sum over nodes hitting facet j of w_k varphi(rho(u_k)). A node
/// whose boundary point lies on a ridge splits its weight equally between the
/// facets meeting there.
CurvatureMeasure curvature_masses(const HalfspacePolytope& P, const ScalarFn& varphi, const SphericalGrid& grid);
CurvatureMeasure curvature_masses(const RadialTable& table, std::span<const double> offsets, const ScalarFn& varphi);

/// Dual Orlicz curvature measure of P for the varphi of `pair`.
CurvatureMeasure dual_orlicz_curvature_measure(const HalfspacePolytope& P, const OrliczPair& pair,
                                               const SphericalGrid& grid);

/// sum_j g_j c_j with c the curvature masses of P.
double integrate_against_curvature(const HalfspacePolytope& P, const OrliczPair& pair, const SphericalGrid& grid,
                                   std::span<const double> g);

/// (1/n) sum_k w_k psi(rho_L / rho_K) rho_K^n. psi may be any positive function.
double dual_orlicz_mixed_volume(const HalfspacePolytope& K, const HalfspacePolytope& L, const ScalarFn& psi,
                                const SphericalGrid& grid);

/// Facet areas A_j = n c_j / h_j from the cone-volume masses (varphi = t^n).
std::vector<double> surface_area_measure(const HalfspacePolytope& P, const SphericalGrid& grid);

struct HemisphereCheck {
    bool pass = false;
    /// On failure: unit xi with sum_i mu_i (xi . v_i)_+ <= tolerance.
    Vec witness;
    /// sum_i mu_i (xi . v_i)_+ at the witness (failure) or the smallest value
    /// found on the certificate grid (success, dim 2 and 3; otherwise NaN).
    double value = 0.0;
    double tolerance = 0.0;
};

/// Whether mu is concentrated on a closed hemisphere, at tolerance 1e-10 |mu|.
/// The cone test uses NNLS over the atom directions; in dim 2 and 3 a fine
/// grid of candidate xi must also keep sum mu_i (xi . v_i)_+ above tolerance.
HemisphereCheck hemisphere_concentration_check(const DiscreteSphericalMeasure& mu);

/// sum_i mu_i (xi . v_i)_+
double hemisphere_functional(const DiscreteSphericalMeasure& mu, const Vec& xi);

}  // namespace orlimink
