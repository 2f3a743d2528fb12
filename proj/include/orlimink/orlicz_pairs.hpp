#pragma once

#include "orlimink/core.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace orlimink {

using ScalarFn = std::function<double(double)>;

/// A: phi strictly decreasing, phi(0+) = inf, phi(inf) = 0, varphi = -phi' t.
/// B: phi strictly increasing, phi(0+) = 0, phi(inf) = inf, varphi = phi' t.
enum class PairFamily { A_decreasing, B_increasing };

std::string to_string(PairFamily family);

/// The function pair (phi, varphi) together with phi'. Functions must be pure.
struct OrliczPair {
    PairFamily family = PairFamily::A_decreasing;
    ScalarFn phi;
    ScalarFn phi_prime;
    ScalarFn varphi;
    std::string label;

    /// +1 for family B, -1 for family A: the sign in varphi(t) = sign * phi'(t) t.
    double sign() const { return family == PairFamily::B_increasing ? 1.0 : -1.0; }
};

/// q < 0: family A, phi = -t^q / q. q > 0: family B, phi = t^q / q. varphi = t^q.
OrliczPair make_power_pair(double q);

/// Pair from samples (t, phi, phi') sorted by t. Values between samples are
/// linearly interpolated; outside the sampled range the end segments are
/// extended linearly in log-log coordinates. varphi is derived from the
/// family relation, the family from the sign of phi'.
OrliczPair make_table_pair(std::vector<double> t, std::vector<double> phi, std::vector<double> phi_prime,
                           std::string label = "table");

/// Reads CSV rows "t,phi,phi_prime" (an optional non-numeric header row is skipped).
OrliczPair load_table_pair(const std::filesystem::path& path);

/// Parses "power:<q>" or "table:<path>".
OrliczPair parse_pair_spec(const std::string& spec);

/// Parses "power:<q>" into the scalar function t^q (used for psi and radial addition).
ScalarFn parse_scalar_spec(const std::string& spec);

struct ConditionCheck {
    std::string name;  ///< e.g. "A1.monotone", "A1.limits", "A2.derivative_sign", "A3.relation"
    bool passed = false;
    double value = 0.0;  ///< a diagnostic magnitude (mismatch, count of violations, growth factor)
    std::string detail;
};

struct ValidationReport {
    PairFamily family = PairFamily::A_decreasing;
    std::vector<ConditionCheck> checks;
    /// Largest |varphi(t) - sign phi'(t) t| / varphi(t) over the probe.
    double max_relation_mismatch = 0.0;
    bool finite = true;

    bool passed(const std::string& name) const;
    /// Every check passes.
    bool valid() const;
    /// Every check except the limit heuristics passes (those only warn).
    bool valid_ignoring_limits() const;
    std::vector<std::string> warnings() const;
};

/// Log-spaced probe set {lo * (hi/lo)^(i/(count-1))}.
std::vector<double> log_probe(double lo, double hi, int count);

/// Probe-based surrogate of A1-A3 / B1-B3.
///
/// The limit heuristic follows the phi values six decades beyond each end of
/// the probe: for family A phi must at least double toward 0 and at least
/// halve toward infinity; for family B the reverse.
ValidationReport validate_pair(const OrliczPair& pair, std::span<const double> probe);

enum class Monotonicity { increasing, decreasing };

struct RadialAdditionSpec {
    ScalarFn phi1;
    ScalarFn phi2;
    Monotonicity direction = Monotonicity::increasing;
    double epsilon = 1.0;

    /// Throws InvalidArgument when epsilon <= 0 or the functions do not share
    /// the declared monotonicity on a log-spaced probe of [1e-3, 1e3].
    void validate() const;
};

/// Per-node solution rho > 0 of phi1(rhoK/rho) + eps phi2(rhoL/rho) = 1.
/// Bisection in log rho on [min*1e-6, max*1e6], expanded by 1e3 per side up to
/// 10 times. Throws BracketError naming the node when no sign change is found.
std::vector<double> radial_addition(std::span<const double> rhoK, std::span<const double> rhoL,
                                    const RadialAdditionSpec& spec);

/// Root of an increasing function f on [lo, hi] with f(lo) <= 0 <= f(hi), by
/// bisection in log space until the relative bracket width falls below rel_tol.
double bisect_log_increasing(const std::function<double(double)>& f, double lo, double hi,
                             double rel_tol = 1e-15, int max_iter = 400);

}  // namespace orlimink
