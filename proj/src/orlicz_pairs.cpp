#include "orlimink/orlicz_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace orlimink {

std::string to_string(PairFamily family) {
    return family == PairFamily::A_decreasing ? "A_decreasing" : "B_increasing";
}

namespace {

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

OrliczPair make_power_pair(double q) {
    if (q == 0.0 || !std::isfinite(q))
        throw InvalidArgument("power pair requires a finite nonzero exponent (the log pair is not supported)");
    OrliczPair p;
    p.label = "power:" + format_number(q);
    p.varphi = [q](double t) { return std::pow(t, q); };
    if (q < 0.0) {
        p.family = PairFamily::A_decreasing;
        p.phi = [q](double t) { return -std::pow(t, q) / q; };
        p.phi_prime = [q](double t) { return -std::pow(t, q - 1.0); };
    } else {
        p.family = PairFamily::B_increasing;
        p.phi = [q](double t) { return std::pow(t, q) / q; };
        p.phi_prime = [q](double t) { return std::pow(t, q - 1.0); };
    }
    return p;
}

namespace {

/// Piecewise-linear interpolant with log-log linear tails. Values must share one sign.
class SampledFunction {
public:
    SampledFunction(std::vector<double> t, std::vector<double> y) : t_(std::move(t)), y_(std::move(y)) {
        sign_ = y_.front() < 0.0 ? -1.0 : 1.0;
    }

    double operator()(double x) const {
        const size_t n = t_.size();
        if (x <= t_.front()) return tail(x, 0, 1);
        if (x >= t_.back()) return tail(x, n - 2, n - 1);
        const auto it = std::upper_bound(t_.begin(), t_.end(), x);
        const size_t j = static_cast<size_t>(it - t_.begin());
        const double a = (x - t_[j - 1]) / (t_[j] - t_[j - 1]);
        return (1.0 - a) * y_[j - 1] + a * y_[j];
    }

private:
    double tail(double x, size_t i, size_t j) const {
        const double la = std::log(sign_ * y_[i]);
        const double lb = std::log(sign_ * y_[j]);
        const double slope = (lb - la) / (std::log(t_[j]) - std::log(t_[i]));
        const double anchor_t = x <= t_.front() ? t_[i] : t_[j];
        const double anchor_y = x <= t_.front() ? la : lb;
        return sign_ * std::exp(anchor_y + slope * (std::log(x) - std::log(anchor_t)));
    }

    std::vector<double> t_;
    std::vector<double> y_;
    double sign_ = 1.0;
};

}  // namespace

OrliczPair make_table_pair(std::vector<double> t, std::vector<double> phi, std::vector<double> phi_prime,
                           std::string label) {
    const size_t n = t.size();
    if (n < 2 || phi.size() != n || phi_prime.size() != n)
        throw InvalidArgument("table pair needs at least two rows of (t, phi, phi_prime)");
    for (size_t i = 0; i < n; ++i) {
        if (!(t[i] > 0.0) || !std::isfinite(t[i]) || !std::isfinite(phi[i]) || !std::isfinite(phi_prime[i]))
            throw InvalidArgument("table pair row " + std::to_string(i) + ": values must be finite with t > 0");
        if (!(phi[i] > 0.0)) throw InvalidArgument("table pair row " + std::to_string(i) + ": phi must be positive");
        if (phi_prime[i] == 0.0)
            throw InvalidArgument("table pair row " + std::to_string(i) + ": phi_prime must be nonzero");
        if (i > 0 && !(t[i] > t[i - 1])) throw InvalidArgument("table pair: t must be strictly increasing");
    }
    const bool decreasing = phi_prime.front() < 0.0;
    for (size_t i = 0; i < n; ++i) {
        if ((phi_prime[i] < 0.0) != decreasing)
            throw InvalidArgument("table pair: phi_prime changes sign at row " + std::to_string(i));
        if (i > 0 && ((phi[i] < phi[i - 1]) != decreasing || phi[i] == phi[i - 1]))
            throw InvalidArgument("table pair: phi is not strictly monotone at row " + std::to_string(i));
    }

    OrliczPair p;
    p.family = decreasing ? PairFamily::A_decreasing : PairFamily::B_increasing;
    p.label = std::move(label);
    auto f = std::make_shared<SampledFunction>(t, std::move(phi));
    auto df = std::make_shared<SampledFunction>(std::move(t), std::move(phi_prime));
    const double sign = p.sign();
    p.phi = [f](double x) { return (*f)(x); };
    p.phi_prime = [df](double x) { return (*df)(x); };
    p.varphi = [df, sign](double x) { return sign * (*df)(x) * x; };
    return p;
}

OrliczPair load_table_pair(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open pair table '" + path.string() + "'");
    std::vector<double> t, phi, dphi;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double a = 0, b = 0, c = 0;
        if (!(row >> a >> b >> c)) {
            if (t.empty() && lineno == 1) continue;  // header
            throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected t,phi,phi_prime");
        }
        t.push_back(a);
        phi.push_back(b);
        dphi.push_back(c);
    }
    return make_table_pair(std::move(t), std::move(phi), std::move(dphi), "table:" + path.string());
}

namespace {

double parse_exponent(const std::string& spec, const std::string& body) {
    size_t used = 0;
    double q = 0.0;
    try {
        q = std::stod(body, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("malformed function spec '" + spec + "'");
    }
    if (used != body.size()) throw InvalidArgument("malformed function spec '" + spec + "'");
    return q;
}

}  // namespace

OrliczPair parse_pair_spec(const std::string& spec) {
    if (spec.rfind("power:", 0) == 0) return make_power_pair(parse_exponent(spec, spec.substr(6)));
    if (spec.rfind("table:", 0) == 0) return load_table_pair(spec.substr(6));
    throw InvalidArgument("unknown pair spec '" + spec + "' (expected power:<q> or table:<path>)");
}

ScalarFn parse_scalar_spec(const std::string& spec) {
    if (spec.rfind("power:", 0) == 0) {
        const double q = parse_exponent(spec, spec.substr(6));
        return [q](double t) { return std::pow(t, q); };
    }
    if (spec.rfind("table:", 0) == 0) return load_table_pair(spec.substr(6)).varphi;
    throw InvalidArgument("unknown function spec '" + spec + "' (expected power:<q> or table:<path>)");
}

bool ValidationReport::passed(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c.passed;
    return false;
}

bool ValidationReport::valid() const {
    return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) { return c.passed; });
}

bool ValidationReport::valid_ignoring_limits() const {
    return std::all_of(checks.begin(), checks.end(), [](const ConditionCheck& c) {
        return c.passed || c.name.find(".limits") != std::string::npos;
    });
}

std::vector<std::string> ValidationReport::warnings() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (!c.passed) out.push_back(c.name + ": " + c.detail);
    return out;
}

std::vector<double> log_probe(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) throw InvalidArgument("log_probe: need 0 < lo < hi, count >= 2");
    std::vector<double> out(static_cast<size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<size_t>(i)] = lo * std::exp(step * i);
    out.back() = hi;
    return out;
}

ValidationReport validate_pair(const OrliczPair& pair, std::span<const double> probe) {
    if (probe.empty()) throw InvalidArgument("validate_pair: empty probe");
    for (size_t i = 0; i < probe.size(); ++i) {
        if (!(probe[i] > 0.0) || !std::isfinite(probe[i]))
            throw InvalidArgument("validate_pair: probe values must be positive and finite");
        if (i > 0 && !(probe[i] > probe[i - 1])) throw InvalidArgument("validate_pair: probe must be sorted");
    }

    ValidationReport rep;
    rep.family = pair.family;
    const bool A = pair.family == PairFamily::A_decreasing;
    const std::string tag = A ? "A" : "B";
    const double sign = pair.sign();

    std::vector<double> phi(probe.size()), dphi(probe.size()), vphi(probe.size());
    int nonfinite = 0;
    for (size_t i = 0; i < probe.size(); ++i) {
        phi[i] = pair.phi(probe[i]);
        dphi[i] = pair.phi_prime(probe[i]);
        vphi[i] = pair.varphi(probe[i]);
        if (!std::isfinite(phi[i]) || !std::isfinite(dphi[i]) || !std::isfinite(vphi[i])) ++nonfinite;
    }
    rep.finite = nonfinite == 0;
    rep.checks.push_back({"finite", nonfinite == 0, static_cast<double>(nonfinite),
                          nonfinite == 0 ? "all values finite"
                                         : std::to_string(nonfinite) + " probe points with non-finite values"});

    int nonpositive = 0;
    for (size_t i = 0; i < probe.size(); ++i)
        if (!(phi[i] > 0.0) || !(vphi[i] > 0.0)) ++nonpositive;
    rep.checks.push_back({"positivity", nonpositive == 0, static_cast<double>(nonpositive),
                          nonpositive == 0 ? "phi > 0 and varphi > 0"
                                           : std::to_string(nonpositive) + " probe points with phi or varphi <= 0"});

    int bad_mono = 0;
    for (size_t i = 1; i < probe.size(); ++i) {
        const bool ok = A ? phi[i] < phi[i - 1] : phi[i] > phi[i - 1];
        if (!ok) ++bad_mono;
    }
    rep.checks.push_back({tag + "1.monotone", bad_mono == 0, static_cast<double>(bad_mono),
                          bad_mono == 0 ? std::string(A ? "strictly decreasing" : "strictly increasing")
                                        : std::to_string(bad_mono) + " probe pairs violate monotonicity"});

    {
        const double lo = probe.front(), hi = probe.back();
        const double at_zero = pair.phi(lo * 1e-6);
        const double at_inf = pair.phi(hi * 1e6);
        bool ok = false;
        double growth = 0.0;
        if (A) {
            ok = !std::isnan(at_zero) && at_zero >= 2.0 * phi.front() && !std::isnan(at_inf) &&
                 at_inf <= 0.5 * phi.back();
            growth = at_zero / phi.front();
        } else {
            ok = !std::isnan(at_zero) && at_zero <= 0.5 * phi.front() && !std::isnan(at_inf) &&
                 at_inf >= 2.0 * phi.back();
            growth = at_inf / phi.back();
        }
        std::ostringstream d;
        d << "phi(" << lo * 1e-6 << ")=" << at_zero << " vs phi(" << lo << ")=" << phi.front() << "; phi("
          << hi * 1e6 << ")=" << at_inf << " vs phi(" << hi << ")=" << phi.back();
        rep.checks.push_back({tag + "1.limits", ok, growth, d.str()});
    }

    int bad_sign = 0;
    for (size_t i = 0; i < probe.size(); ++i)
        if (!(sign * dphi[i] > 0.0)) ++bad_sign;
    rep.checks.push_back({tag + "2.derivative_sign", bad_sign == 0, static_cast<double>(bad_sign),
                          bad_sign == 0 ? std::string(A ? "phi' < 0" : "phi' > 0")
                                        : std::to_string(bad_sign) + " probe points with wrong sign of phi'"});

    double mismatch = 0.0;
    for (size_t i = 0; i < probe.size(); ++i) {
        const double m = std::abs(vphi[i] - sign * dphi[i] * probe[i]) / std::abs(vphi[i]);
        if (std::isnan(m)) {
            mismatch = std::numeric_limits<double>::infinity();
        } else {
            mismatch = std::max(mismatch, m);
        }
    }
    rep.max_relation_mismatch = mismatch;
    rep.checks.push_back({tag + "3.relation", mismatch <= 1e-10, mismatch,
                          std::string(A ? "varphi = -phi' t" : "varphi = phi' t") + ", max relative mismatch " +
                              std::to_string(mismatch)});
    return rep;
}

void RadialAdditionSpec::validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InvalidArgument("radial addition: epsilon must be > 0");
    if (!phi1 || !phi2) throw InvalidArgument("radial addition: both functions are required");
    const auto probe = log_probe(1e-3, 1e3, 61);
    for (const ScalarFn* f : {&phi1, &phi2}) {
        double prev = (*f)(probe.front());
        if (!(prev > 0.0)) throw InvalidArgument("radial addition: functions must be positive");
        for (size_t i = 1; i < probe.size(); ++i) {
            const double cur = (*f)(probe[i]);
            const bool ok = direction == Monotonicity::increasing ? cur > prev : cur < prev;
            if (!ok || !(cur > 0.0))
                throw InvalidArgument("radial addition: functions do not share the declared strict monotonicity");
            prev = cur;
        }
    }
}

double bisect_log_increasing(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
                             int max_iter) {
    double llo = std::log(lo), lhi = std::log(hi);
    for (int it = 0; it < max_iter; ++it) {
        const double lmid = 0.5 * (llo + lhi);
        if (lmid <= llo || lmid >= lhi) break;
        if (f(std::exp(lmid)) <= 0.0) {
            llo = lmid;
        } else {
            lhi = lmid;
        }
        if (lhi - llo <= rel_tol) break;
    }
    return std::exp(0.5 * (llo + lhi));
}

std::vector<double> radial_addition(std::span<const double> rhoK, std::span<const double> rhoL,
                                    const RadialAdditionSpec& spec) {
    spec.validate();
    if (rhoK.size() != rhoL.size()) throw InvalidArgument("radial addition: sample count mismatch");
    const double orient = spec.direction == Monotonicity::increasing ? -1.0 : 1.0;

    std::vector<double> out(rhoK.size());
    for (size_t k = 0; k < rhoK.size(); ++k) {
        const double a = rhoK[k], b = rhoL[k];
        if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
            throw InvalidArgument("radial addition: radial samples must be positive at node " + std::to_string(k));
        // Oriented so that f is increasing in rho.
        auto f = [&](double rho) { return orient * (spec.phi1(a / rho) + spec.epsilon * spec.phi2(b / rho) - 1.0); };

        double lo = std::min(a, b) * 1e-6, hi = std::max(a, b) * 1e6;
        int expansions = 0;
        while (!(f(lo) <= 0.0) && expansions < 10) {
            lo *= 1e-3;
            ++expansions;
        }
        expansions = 0;
        while (!(f(hi) >= 0.0) && expansions < 10) {
            hi *= 1e3;
            ++expansions;
        }
        if (!(f(lo) <= 0.0) || !(f(hi) >= 0.0))
            throw BracketError("radial addition: no sign change bracketed at node " + std::to_string(k),
                               static_cast<long>(k));
        out[k] = bisect_log_increasing(f, lo, hi);
    }
    return out;
}

}  // namespace orlimink
