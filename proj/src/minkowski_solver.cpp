#include "orlimink/minkowski_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace orlimink {

std::string to_string(Termination t) {
    switch (t) {
        case Termination::converged: return "converged";
        case Termination::max_iters: return "max_iters";
        case Termination::degenerate_measure: return "degenerate_measure";
        case Termination::invalid_pair: return "invalid_pair";
    }
    return "unknown";
}

void SolverConfig::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string("solver config: ") + name + " must be positive");
    };
    positive(step, "step");
    positive(tol_res, "tol_res");
    positive(tol_con, "tol_con");
    positive(t_fd, "t_fd");
    positive(bracket_lo, "bracket_lo");
    positive(bracket_hi, "bracket_hi");
    if (!(backtrack > 0.0 && backtrack < 1.0)) throw InvalidArgument("solver config: backtrack must lie in (0, 1)");
    if (max_iters < 1) throw InvalidArgument("solver config: max_iters must be >= 1");
    if (stall_iters < 1) throw InvalidArgument("solver config: stall_iters must be >= 1");
    if (max_backtracks < 0) throw InvalidArgument("solver config: max_backtracks must be >= 0");
    if (!(bracket_lo < bracket_hi)) throw InvalidArgument("solver config: bracket_lo must be below bracket_hi");
    if (resolution < 0) throw InvalidArgument("solver config: resolution must be >= 0");
}

SphericalGrid SolverConfig::make_grid(int dim) const {
    GridRule rule = dim == 2 ? GridRule::equal_angle_2d : dim == 3 ? GridRule::fibonacci_3d : GridRule::monte_carlo;
    if (grid_rule) rule = *grid_rule;
    int res = resolution;
    if (res == 0) res = dim == 2 ? 262144 : dim == 3 ? 100000 : 20000;
    std::optional<std::uint64_t> s;
    if (rule == GridRule::monte_carlo) s = grid_seed;
    return build_grid(dim, rule, res, s);
}

double SolveReport::max_residual() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
}

double Stationarity::max_abs() const {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, std::abs(r));
    return m;
}

double objective_phi(std::span<const double> h, const DiscreteSphericalMeasure& mu) {
    if (h.size() != mu.size()) throw InvalidArgument("objective: one support number per atom required");
    double s = 0.0;
    for (size_t j = 0; j < h.size(); ++j) {
        if (!(h[j] > 0.0)) throw InvalidArgument("objective: support numbers must be positive");
        s += mu.mass(j) * std::log(h[j]);
    }
    return -s / mu.total();
}

double constraint_directional_derivative(const HalfspacePolytope& P, const OrliczPair& pair,
                                         const SphericalGrid& grid, std::span<const double> g) {
    if (g.size() != P.size()) throw InvalidArgument("directional derivative: one value per facet required");
    return pair.sign() * integrate_against_curvature(P, pair, grid, g);
}

namespace {

/// V_phi(e^s K) from the radial samples of K.
struct ScaledQuermass {
    const SphericalGrid& grid;
    const std::vector<double>& rho;
    const OrliczPair& pair;

    double value(double s) const {
        const double lam = std::exp(s);
        double v = 0.0;
        for (size_t k = 0; k < rho.size(); ++k) v += grid.weight(k) * pair.phi(lam * rho[k]);
        return v / grid.dim();
    }
    double slope(double s) const {
        const double lam = std::exp(s);
        double v = 0.0;
        for (size_t k = 0; k < rho.size(); ++k) {
            const double t = lam * rho[k];
            v += grid.weight(k) * pair.phi_prime(t) * t;
        }
        return v / grid.dim();
    }
};

/// log lambda with V_phi(lambda K) = target. V is decreasing in s for family A.
/// Safeguarded Newton inside a shrinking bracket, run to rounding level so
/// that objective comparisons between iterates are not polluted.
double solve_log_scale(const ScaledQuermass& q, double target, double lo, double hi) {
    double slo = std::log(lo), shi = std::log(hi);
    const double grow = std::log(1e3);
    for (int i = 0; i < 10 && !(q.value(slo) >= target); ++i) slo -= grow;
    for (int i = 0; i < 10 && !(q.value(shi) <= target); ++i) shi += grow;
    const double flo = q.value(slo), fhi = q.value(shi);
    if (!(flo >= target) || !(fhi <= target))
        throw BracketError("constraint restoration: dilation bracket does not enclose the target");

    double s = std::clamp(0.0, slo, shi);
    for (int it = 0; it < 100; ++it) {
        const double f = q.value(s) - target;
        if (std::abs(f) <= 1e-14 * target) return s;
        if (f > 0.0) {
            slo = s;
        } else {
            shi = s;
        }
        const double d = q.slope(s);
        double next = d < 0.0 ? s - f / d : 0.5 * (slo + shi);
        if (!(next > slo && next < shi)) next = 0.5 * (slo + shi);
        if (std::abs(next - s) <= 1e-15 * std::max(1.0, std::abs(s))) return next;
        s = next;
    }
    return s;
}

void require_family_a(const OrliczPair& pair, const char* what) {
    if (pair.family != PairFamily::A_decreasing)
        throw InvalidArgument(std::string(what) + ": requires a family A (decreasing) pair");
}

}  // namespace

RescaleResult rescale_to_constraint(const HalfspacePolytope& P, const OrliczPair& pair, const SphericalGrid& grid,
                                    double target, double tol_con, double bracket_lo, double bracket_hi) {
    require_family_a(pair, "rescale_to_constraint");
    if (!(target > 0.0) || !std::isfinite(target)) throw InvalidArgument("rescale_to_constraint: target must be positive");
    const std::vector<double> rho = radial_samples(P, grid);
    const ScaledQuermass q{grid, rho, pair};
    const double s = solve_log_scale(q, target, bracket_lo, bracket_hi);
    const double err = std::abs(q.value(s) - target);
    if (!(err <= tol_con * target))
        throw BracketError("constraint restoration: residual " + std::to_string(err / target) + " exceeds tolerance");
    const double lam = std::exp(s);
    return {lam, dilate(P, lam)};
}

Stationarity stationarity_residual(const DiscreteSphericalMeasure& mu, const HalfspacePolytope& P,
                                   const OrliczPair& pair, const SphericalGrid& grid) {
    if (P.size() != mu.size() || P.dim() != mu.dim())
        throw InvalidArgument("stationarity: body facets must correspond to the measure atoms");
    for (size_t j = 0; j < mu.size(); ++j)
        if ((P.normal(j) - mu.direction(j)).norm() > 1e-9)
            throw InvalidArgument("stationarity: facet " + std::to_string(j) + " normal differs from its atom");
    const CurvatureMeasure c = dual_orlicz_curvature_measure(P, pair, grid);
    Stationarity out;
    out.tau = mu.total() / c.total;
    out.residuals.resize(mu.size());
    for (size_t j = 0; j < mu.size(); ++j) out.residuals[j] = mu.mass(j) / mu.total() - c.masses[j] / c.total;
    return out;
}

SolveReport solve_dual_orlicz_minkowski(const DiscreteSphericalMeasure& mu, const OrliczPair& pair,
                                        const SolverConfig& config) {
    config.validate();
    SolveReport rep;

    if (pair.family != PairFamily::A_decreasing) {
        rep.termination = Termination::invalid_pair;
        rep.message = "the solver requires a family A pair; got " + to_string(pair.family);
        return rep;
    }
    const ValidationReport vr = validate_pair(pair, log_probe(1e-3, 1e3, 61));
    if (!vr.valid()) {
        rep.termination = Termination::invalid_pair;
        rep.message = "pair " + pair.label + " fails validation:";
        for (const std::string& w : vr.warnings()) rep.message += " " + w + ";";
        return rep;
    }
    const HemisphereCheck hc = hemisphere_concentration_check(mu);
    if (!hc.pass) {
        rep.termination = Termination::degenerate_measure;
        rep.witness = hc.witness;
        rep.message = "measure is concentrated on a closed hemisphere; no solution exists";
        return rep;
    }

    const int n = mu.dim();
    const size_t m = mu.size();
    const double total = mu.total();
    const SphericalGrid grid = config.make_grid(n);
    const RadialTable table(grid, mu.directions());

    // Ball of the right constraint level: phi(r0) |S^{n-1}| / n = |mu|.
    const double sphere = grid.total_weight();
    const double r0 = bisect_log_increasing([&](double r) { return total - pair.phi(r) * sphere / n; }, 1e-12, 1e12);
    std::vector<double> x(m, std::log(r0));
    if (config.seed) {
        std::mt19937_64 rng(*config.seed);
        std::uniform_real_distribution<double> jitter(-0.25, 0.25);
        for (double& v : x) v += jitter(rng);
    }

    auto offsets_of = [](const std::vector<double>& logs) {
        std::vector<double> h(logs.size());
        for (size_t j = 0; j < logs.size(); ++j) h[j] = std::exp(logs[j]);
        return h;
    };
    auto phi_of = [&](const std::vector<double>& logs) {
        double s = 0.0;
        for (size_t j = 0; j < m; ++j) s += mu.mass(j) * logs[j];
        return -s / total;
    };
    // Shifts logs so that V_phi = |mu|; returns the restored V_phi.
    auto restore = [&](std::vector<double>& logs) {
        const std::vector<double> rho = table.radii(offsets_of(logs));
        const ScaledQuermass q{grid, rho, pair};
        const double s = solve_log_scale(q, total, config.bracket_lo, config.bracket_hi);
        for (double& v : logs) v += s;
        return q.value(s);
    };

    double vphi = restore(x);
    double phi = phi_of(x);
    rep.phi_trace.push_back(phi);
    rep.vphi_trace.push_back(vphi);

    CurvatureMeasure c;
    std::vector<double> r(m);
    auto measure_state = [&] {
        c = curvature_masses(table, offsets_of(x), pair.varphi);
        double worst = 0.0;
        for (size_t j = 0; j < m; ++j) {
            r[j] = mu.mass(j) / total - c.masses[j] / c.total;
            worst = std::max(worst, std::abs(r[j]));
        }
        return worst;
    };

    double worst = measure_state();
    double best = worst;
    int iter = 0, since_best = 0;
    bool stalled = false, flat = false;
    while (worst > config.tol_res && iter < config.max_iters) {
        // Ascent direction for the objective, projected onto the tangent
        // space of the constraint (whose gradient in log h is -c).
        double mc = 0.0, cc = 0.0;
        for (size_t j = 0; j < m; ++j) {
            mc += mu.mass(j) * c.masses[j];
            cc += c.masses[j] * c.masses[j];
        }
        const double beta = mc / (total * cc);
        std::vector<double> d(m);
        for (size_t j = 0; j < m; ++j) d[j] = -mu.mass(j) / total + beta * c.masses[j];

        double alpha = config.step;
        bool accepted = false;
        std::vector<double> trial(m);
        double trial_v = 0.0;
        for (int bt = 0; bt <= config.max_backtracks; ++bt, alpha *= config.backtrack) {
            for (size_t j = 0; j < m; ++j) trial[j] = x[j] + alpha * d[j];
            trial_v = restore(trial);
            if (phi_of(trial) >= phi - 1e-12) {
                accepted = true;
                break;
            }
        }
        ++iter;
        if (!accepted) {
            stalled = true;
            break;
        }
        x = trial;
        vphi = trial_v;
        phi = phi_of(x);
        rep.phi_trace.push_back(phi);
        rep.vphi_trace.push_back(vphi);
        worst = measure_state();
        if (worst < (1.0 - 1e-3) * best) {
            best = worst;
            since_best = 0;
        } else if (++since_best >= config.stall_iters) {
            flat = true;
            break;
        }
    }

    rep.iterations = iter;
    rep.body = HalfspacePolytope(n, mu.directions(), offsets_of(x));
    rep.curvature = c.masses;
    rep.residuals = r;
    rep.tau = total / c.total;
    rep.constraint_error = std::abs(vphi - total) / total;
    const bool ok = worst <= config.tol_res && rep.constraint_error <= config.tol_con;
    rep.termination = ok ? Termination::converged : Termination::max_iters;
    if (ok) {
        rep.message = "converged";
    } else if (stalled) {
        rep.message = "line search found no ascent step";
    } else if (flat) {
        rep.message = "residual stopped improving (grid resolution floor?)";
    } else {
        rep.message = "iteration limit reached";
    }
    return rep;
}

}  // namespace orlimink
