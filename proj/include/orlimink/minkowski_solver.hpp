#pragma once

#include "orlimink/measure_engine.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orlimink {

struct SolverConfig {
    /// Grid used for every measure evaluation. A resolution of 0 picks the
    /// default for the dimension: 262144 (dim 2), 100000 (dim 3), 20000
    /// otherwise. Node-assignment masses move in steps of about one node's
    /// share of the total (roughly 0.8 / resolution in dim 2), which bounds
    /// the reachable residual from below.
    std::optional<GridRule> grid_rule;
    int resolution = 0;
    std::uint64_t grid_seed = 1;  ///< only used by monte_carlo grids

    double step = 0.5;        ///< initial step length in log h
    double backtrack = 0.5;   ///< step reduction factor
    int max_backtracks = 30;
    double tol_res = 1e-5;    ///< stop when max_j |mu_j/|mu| - c_j/V_varphi| <= tol_res
    double tol_con = 1e-8;    ///< required |V_phi - |mu|| / |mu|
    int max_iters = 5000;
    /// Stop early when the best residual has not dropped by 0.1% for this many iterations.
    int stall_iters = 200;
    double bracket_lo = 1e-6;  ///< initial dilation bracket for constraint restoration
    double bracket_hi = 1e6;
    /// When set, the initial support numbers get a random log perturbation in [-0.25, 0.25].
    std::optional<std::uint64_t> seed;
    double t_fd = 1e-5;  ///< finite-difference step for gradient audits

    /// Throws InvalidArgument on out-of-range fields.
    void validate() const;
    /// The grid this configuration selects for a dimension.
    SphericalGrid make_grid(int dim) const;
};

enum class Termination { converged, max_iters, degenerate_measure, invalid_pair };

std::string to_string(Termination t);

struct SolveReport {
    Termination termination = Termination::max_iters;
    /// Final body: normals are the atom directions in atom order. Empty only
    /// for degenerate_measure and invalid_pair.
    std::optional<HalfspacePolytope> body;
    double tau = 0.0;                      ///< |mu| / V_varphi(body)
    std::vector<double> residuals;         ///< mu_j/|mu| - c_j/V_varphi
    std::vector<double> curvature;         ///< c_j of the final body
    std::vector<double> phi_trace;         ///< objective after each accepted iterate
    std::vector<double> vphi_trace;        ///< V_phi after each accepted iterate
    int iterations = 0;
    double constraint_error = 0.0;         ///< |V_phi - |mu|| / |mu| of the final body
    std::optional<Vec> witness;            ///< hemisphere witness for degenerate_measure
    std::string message;

    double max_residual() const;
};

/// -(1/|mu|) sum_j mu_j log h_j.
double objective_phi(std::span<const double> h, const DiscreteSphericalMeasure& mu);

/// d/dt V_phi([h e^{t g}]) at t = 0: -sum_j g_j c_j for family A, +sum_j g_j c_j for family B.
double constraint_directional_derivative(const HalfspacePolytope& P, const OrliczPair& pair,
                                         const SphericalGrid& grid, std::span<const double> g);

struct RescaleResult {
    double lambda = 1.0;
    HalfspacePolytope body;
};

/// The unique lambda with V_phi(lambda P) = target for a family A pair. The
/// bracket [bracket_lo, bracket_hi] grows by 1e3 per side up to 10 times;
/// BracketError when it never encloses the root or the root misses tol_con.
RescaleResult rescale_to_constraint(const HalfspacePolytope& P, const OrliczPair& pair, const SphericalGrid& grid,
                                    double target, double tol_con = 1e-8, double bracket_lo = 1e-6,
                                    double bracket_hi = 1e6);

struct Stationarity {
    double tau = 0.0;
    std::vector<double> residuals;
    double max_abs() const;
};

/// tau = |mu| / V_varphi(P) and r_j = mu_j/|mu| - c_j/V_varphi(P). P's normals
/// must be mu's directions in the same order.
Stationarity stationarity_residual(const DiscreteSphericalMeasure& mu, const HalfspacePolytope& P,
                                   const OrliczPair& pair, const SphericalGrid& grid);

/// Maximizes the objective over support numbers at mu's atoms subject to
/// V_phi = |mu| by projected gradient ascent in log h with exact rescaling.
SolveReport solve_dual_orlicz_minkowski(const DiscreteSphericalMeasure& mu, const OrliczPair& pair,
                                        const SolverConfig& config = {});

}  // namespace orlimink
