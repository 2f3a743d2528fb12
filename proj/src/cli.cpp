#include "orlimink/cli.hpp"

#include "orlimink/io.hpp"
#include "orlimink/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iostream>

#ifndef ORLIMINK_VERSION
#define ORLIMINK_VERSION "0.0.0"
#endif

namespace orlimink {

namespace fs = std::filesystem;

std::string version() { return ORLIMINK_VERSION; }

namespace {

struct Options {
    std::string measure, body, body2, config, pair = "power:-1", psi, grid_rule, out = ".";
    double epsilon = 1.0;
    int dim = 0;
    int grid = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_res, tol_con;
    std::optional<int> max_iters;
};

/// Collects what the manifest records about one invocation.
struct Manifest {
    std::string subcommand;
    Json inputs = Json::object();
    Json overrides = Json::object();
    Json grid = nullptr;
    std::string pair;
    std::vector<std::string> outputs;
};

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw InputError(std::string("missing required option ") + flag);
}

void require_file(const std::string& path, const char* flag) {
    require(path, flag);
    if (!fs::exists(path)) throw InputError(path + ": no such file (" + flag + ")");
}

SolverConfig effective_config(const Options& o, Manifest& m) {
    SolverConfig c;
    if (!o.config.empty()) {
        require_file(o.config, "--config");
        c = config_from_json(read_json_file(o.config), o.config);
        m.inputs["config"] = o.config;
    }
    if (!o.grid_rule.empty()) {
        c.grid_rule = parse_grid_rule(o.grid_rule);
        m.overrides["grid_rule"] = o.grid_rule;
    }
    if (o.grid > 0) {
        c.resolution = o.grid;
        m.overrides["resolution"] = o.grid;
    }
    if (o.tol_res) {
        c.tol_res = *o.tol_res;
        m.overrides["tol_res"] = *o.tol_res;
    }
    if (o.tol_con) {
        c.tol_con = *o.tol_con;
        m.overrides["tol_con"] = *o.tol_con;
    }
    if (o.max_iters) {
        c.max_iters = *o.max_iters;
        m.overrides["max_iters"] = *o.max_iters;
    }
    c.validate();
    return c;
}

/// Grid for the evaluation subcommands; --seed picks the Monte Carlo stream.
SphericalGrid evaluation_grid(const Options& o, int dim, Manifest& m) {
    SolverConfig c = effective_config(o, m);
    if (o.seed) {
        c.grid_seed = *o.seed;
        m.overrides["grid_seed"] = *o.seed;
    }
    SphericalGrid g = c.make_grid(dim);
    m.grid = {{"rule", to_string(g.rule())}, {"resolution", g.resolution()}};
    return g;
}

void check_dim(const Options& o, int dim, const std::string& source) {
    if (o.dim != 0 && o.dim != dim)
        throw InputError(source + ": dim is " + std::to_string(dim) + " but --dim " + std::to_string(o.dim) +
                         " was given");
}

HalfspacePolytope load_body(const std::string& path, const char* flag, Manifest& m) {
    require_file(path, flag);
    m.inputs[std::string(flag).substr(2)] = path;
    return body_from_json(read_json_file(path), path);
}

fs::path output(const Options& o, Manifest& m, const std::string& name) {
    m.outputs.push_back(name);
    return fs::path(o.out) / name;
}

void write_geometry(const Options& o, Manifest& m, const HalfspacePolytope& body) {
    if (body.dim() == 3) write_text_file(output(o, m, "body.obj"), body_to_obj(body));
    if (body.dim() == 2) write_text_file(output(o, m, "body.csv"), body_to_csv(body));
}

int cmd_solve(const Options& o, Manifest& m) {
    require_file(o.measure, "--measure");
    m.inputs["measure"] = o.measure;
    const DiscreteSphericalMeasure mu = measure_from_json(read_json_file(o.measure), o.measure);
    check_dim(o, mu.dim(), o.measure);
    SolverConfig c = effective_config(o, m);
    if (o.seed) {
        c.seed = *o.seed;
        m.overrides["seed"] = *o.seed;
    }
    const OrliczPair pair = parse_pair_spec(o.pair);
    const SphericalGrid g = c.make_grid(mu.dim());
    m.grid = {{"rule", to_string(g.rule())}, {"resolution", g.resolution()}};

    const SolveReport r = solve_dual_orlicz_minkowski(mu, pair, c);
    Json report = to_json(r);
    report["pair"] = pair.label;
    report["grid"] = m.grid;
    report["config"] = to_json(c);
    write_json_file(output(o, m, "report.json"), report);
    if (r.body) {
        write_json_file(output(o, m, "body.json"), to_json(*r.body));
        write_geometry(o, m, *r.body);
    }
    switch (r.termination) {
        case Termination::converged:
            std::cerr << "converged after " << r.iterations << " iterations, max residual " << r.max_residual()
                      << "\n";
            return kExitOk;
        case Termination::degenerate_measure: {
            std::cerr << "no solution: the measure is concentrated on a closed hemisphere; witness xi = (";
            for (Eigen::Index i = 0; i < r.witness->size(); ++i) std::cerr << (i ? ", " : "") << (*r.witness)[i];
            std::cerr << "), sum mu_i (xi . v_i)_+ = " << hemisphere_functional(mu, *r.witness) << "\n";
            return kExitDegenerate;
        }
        case Termination::max_iters:
            std::cerr << "not converged: " << r.message << " (max residual " << r.max_residual() << ")\n";
            return kExitMaxIters;
        case Termination::invalid_pair:
            std::cerr << "invalid pair: " << r.message << "\n";
            return kExitInvalidInput;
    }
    return kExitFailed;
}

int cmd_measure(const Options& o, Manifest& m) {
    const HalfspacePolytope P = load_body(o.body, "--body", m);
    check_dim(o, P.dim(), o.body);
    const OrliczPair pair = parse_pair_spec(o.pair);
    const SphericalGrid g = evaluation_grid(o, P.dim(), m);
    const CurvatureMeasure c = dual_orlicz_curvature_measure(P, pair, g);
    write_json_file(output(o, m, "curvature.json"), curvature_to_json(P, c, pair.label, g));
    return kExitOk;
}

int cmd_quermass(const Options& o, Manifest& m) {
    const HalfspacePolytope P = load_body(o.body, "--body", m);
    check_dim(o, P.dim(), o.body);
    const OrliczPair pair = parse_pair_spec(o.pair);
    const SphericalGrid g = evaluation_grid(o, P.dim(), m);
    Json j;
    j["pair"] = pair.label;
    j["phi"] = dual_orlicz_quermassintegral(P, pair.phi, g);
    j["varphi"] = dual_orlicz_quermassintegral(P, pair.varphi, g);
    j["grid"] = m.grid;
    write_json_file(output(o, m, "quermass.json"), j);
    return kExitOk;
}

int cmd_addition(const Options& o, Manifest& m) {
    const HalfspacePolytope K = load_body(o.body, "--body", m);
    const HalfspacePolytope L = load_body(o.body2, "--body2", m);
    if (K.dim() != L.dim()) throw InputError("--body and --body2 have different dimensions");
    check_dim(o, K.dim(), o.body);
    RadialAdditionSpec spec;
    spec.phi1 = parse_scalar_spec(o.pair);
    spec.phi2 = parse_scalar_spec(o.psi.empty() ? o.pair : o.psi);
    spec.direction = spec.phi1(2.0) > spec.phi1(1.0) ? Monotonicity::increasing : Monotonicity::decreasing;
    spec.epsilon = o.epsilon;
    m.overrides["epsilon"] = o.epsilon;
    if (!o.psi.empty()) m.overrides["psi"] = o.psi;
    spec.validate();
    const SphericalGrid g = evaluation_grid(o, K.dim(), m);
    const std::vector<double> rk = radial_samples(K, g), rl = radial_samples(L, g);
    const std::vector<double> rho = radial_addition(rk, rl, spec);

    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < K.dim(); ++i) os << 'u' << i << ',';
    os << "rho_K,rho_L,rho,residual\n";
    for (size_t k = 0; k < g.size(); ++k) {
        for (int i = 0; i < K.dim(); ++i) os << g.node(k)[i] << ',';
        const double res = spec.phi1(rk[k] / rho[k]) + spec.epsilon * spec.phi2(rl[k] / rho[k]) - 1.0;
        os << rk[k] << ',' << rl[k] << ',' << rho[k] << ',' << res << '\n';
    }
    write_text_file(output(o, m, "addition.csv"), os.str());
    return kExitOk;
}

int cmd_verify(const Options& o, Manifest& m) {
    VerifyOptions v;
    v.resolution = o.grid;
    if (o.seed) v.seed = *o.seed;
    if (o.grid > 0) m.overrides["resolution"] = o.grid;
    if (o.seed) m.overrides["seed"] = *o.seed;
    const std::vector<VerifyCheck> checks = run_identity_suite(v);
    const std::string table = format_table(checks);
    write_text_file(output(o, m, "verify.txt"), table);
    std::cout << table;
    for (const VerifyCheck& c : checks)
        if (!c.passed) return kExitFailed;
    return kExitOk;
}

int cmd_export(const Options& o, Manifest& m) {
    const HalfspacePolytope P = load_body(o.body, "--body", m);
    if (P.dim() != 2 && P.dim() != 3) throw InputError(o.body + ": export needs a 2D or 3D body");
    write_json_file(output(o, m, "body.json"), to_json(P));
    write_geometry(o, m, P);
    return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "output directory (created if missing)");
    sub->add_option("--config", o.config, "solver/grid configuration JSON");
    sub->add_option("--dim", o.dim, "expected dimension of the input");
    sub->add_option("--grid", o.grid, "grid resolution (0 = default for the dimension)")->check(CLI::NonNegativeNumber);
    sub->add_option("--grid-rule", o.grid_rule, "equal_angle_2d | fibonacci_3d | monte_carlo");
    sub->add_option("--seed", o.seed, "random seed");
}

}  // namespace

int run(int argc, char** argv) {
    const auto start = std::chrono::steady_clock::now();
    Options o;
    CLI::App app("Dual Orlicz-Minkowski problem for discrete measures", "orlimink");
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    auto* solve = app.add_subcommand("solve", "solve for a polytope with a given curvature measure");
    add_common(solve, o);
    solve->add_option("--measure", o.measure, "measure JSON");
    solve->add_option("--pair", o.pair, "power:<q> or table:<csv>");
    solve->add_option("--tol-res", o.tol_res, "stationarity tolerance");
    solve->add_option("--tol-con", o.tol_con, "relative constraint tolerance");
    solve->add_option("--max-iters", o.max_iters, "iteration limit");

    auto* measure = app.add_subcommand("measure", "curvature measure of a body");
    add_common(measure, o);
    measure->add_option("--body", o.body, "body JSON");
    measure->add_option("--pair", o.pair, "power:<q> or table:<csv>");

    auto* quermass = app.add_subcommand("quermass", "dual Orlicz quermassintegrals of a body");
    add_common(quermass, o);
    quermass->add_option("--body", o.body, "body JSON");
    quermass->add_option("--pair", o.pair, "power:<q> or table:<csv>");

    auto* addition = app.add_subcommand("addition", "radial samples of the Orlicz radial addition of two bodies");
    add_common(addition, o);
    addition->add_option("--body", o.body, "first body JSON");
    addition->add_option("--body2", o.body2, "second body JSON");
    addition->add_option("--pair", o.pair, "phi1 as power:<q>");
    addition->add_option("--psi", o.psi, "phi2 as power:<q> (defaults to phi1)");
    addition->add_option("--epsilon", o.epsilon, "weight of the second body");

    auto* verify = app.add_subcommand("verify", "run the identity suite");
    verify->add_option("--out", o.out, "output directory");
    verify->add_option("--grid", o.grid, "grid resolution (0 = defaults)")->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", o.seed, "corpus seed");

    auto* exp = app.add_subcommand("export", "convert a body JSON to OBJ (3D) or CSV (2D)");
    add_common(exp, o);
    exp->add_option("--body", o.body, "body JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalidInput;
    }

    Manifest m;
    CLI::App* sub = app.get_subcommands().front();
    m.subcommand = sub->get_name();
    m.pair = o.pair;
    int code = kExitFailed;
    try {
        fs::create_directories(o.out);
        if (sub == solve) code = cmd_solve(o, m);
        else if (sub == measure) code = cmd_measure(o, m);
        else if (sub == quermass) code = cmd_quermass(o, m);
        else if (sub == addition) code = cmd_addition(o, m);
        else if (sub == verify) code = cmd_verify(o, m);
        else code = cmd_export(o, m);
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const InvalidBody& e) {
        std::cerr << "error: invalid body: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json manifest;
    manifest["subcommand"] = m.subcommand;
    manifest["inputs"] = m.inputs;
    manifest["pair"] = m.pair;
    manifest["grid"] = m.grid;
    manifest["overrides"] = m.overrides;
    manifest["output_dir"] = o.out;
    manifest["outputs"] = m.outputs;
    manifest["version"] = version();
    manifest["duration_seconds"] = seconds;
    manifest["exit_code"] = code;
    try {
        write_json_file(fs::path(o.out) / "manifest.json", manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return code;
}

}  // namespace orlimink
