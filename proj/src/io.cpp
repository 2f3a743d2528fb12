#include "orlimink/io.hpp"

#include <fstream>
#include <sstream>

namespace orlimink {

namespace {

[[noreturn]] void field_error(const std::string& source, const std::string& path, const std::string& what) {
    throw InputError(source + ": " + path + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& source, const std::string& path) {
    if (!j.is_object()) field_error(source, path.empty() ? "(root)" : path, "expected an object");
    const auto it = j.find(key);
    const std::string where = path.empty() ? key : path + "." + key;
    if (it == j.end()) field_error(source, where, "missing field");
    return *it;
}

double number(const Json& j, const std::string& source, const std::string& path) {
    if (!j.is_number()) field_error(source, path, "expected a number");
    return j.get<double>();
}

long long integer(const Json& j, const std::string& source, const std::string& path) {
    if (!j.is_number_integer()) field_error(source, path, "expected an integer");
    return j.get<long long>();
}

Vec vector(const Json& j, int dim, const std::string& source, const std::string& path) {
    if (!j.is_array()) field_error(source, path, "expected an array of numbers");
    if (static_cast<int>(j.size()) != dim)
        field_error(source, path, "expected " + std::to_string(dim) + " components, got " + std::to_string(j.size()));
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = number(j[static_cast<size_t>(i)], source, path + "[" + std::to_string(i) + "]");
    return v;
}

int dimension(const Json& j, const std::string& source) {
    const long long d = integer(member(j, "dim", source, ""), source, "dim");
    if (d < 2 || d > 64) field_error(source, "dim", "must be between 2 and 64");
    return static_cast<int>(d);
}

Json vec_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

/// Re-throws library validation errors as input errors naming the file.
template <class F>
auto validated(const std::string& source, F&& build) {
    try {
        return build();
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(source + ": " + e.what());
    }
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path.string() + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        size_t line = 1, col = 1;
        const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" +
                         e.what() + ")");
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

Json to_json(const SphericalGrid& grid) {
    Json j;
    j["dim"] = grid.dim();
    j["rule"] = to_string(grid.rule());
    j["resolution"] = grid.resolution();
    j["seed"] = grid.seed() ? Json(*grid.seed()) : Json(nullptr);
    Json nodes = Json::array();
    for (const Vec& u : grid.nodes()) nodes.push_back(vec_json(u));
    j["nodes"] = std::move(nodes);
    j["weights"] = grid.weights();
    return j;
}

Json to_json(const HalfspacePolytope& body) {
    Json j;
    j["dim"] = body.dim();
    Json normals = Json::array();
    for (const Vec& v : body.normals()) normals.push_back(vec_json(v));
    j["normals"] = std::move(normals);
    j["offsets"] = body.offsets();
    return j;
}

Json to_json(const DiscreteSphericalMeasure& mu) {
    Json j;
    j["dim"] = mu.dim();
    Json atoms = Json::array();
    for (size_t i = 0; i < mu.size(); ++i) atoms.push_back({{"direction", vec_json(mu.direction(i))}, {"mass", mu.mass(i)}});
    j["atoms"] = std::move(atoms);
    return j;
}

Json curvature_to_json(const HalfspacePolytope& body, const CurvatureMeasure& c, const std::string& phi_label,
                       const SphericalGrid& grid) {
    Json j;
    j["dim"] = body.dim();
    Json atoms = Json::array();
    for (size_t i = 0; i < body.size(); ++i)
        atoms.push_back({{"direction", vec_json(body.normal(i))}, {"mass", c.masses[i]}});
    j["atoms"] = std::move(atoms);
    j["total"] = c.total;
    j["phi_label"] = phi_label;
    j["grid"] = {{"rule", to_string(grid.rule())}, {"resolution", grid.resolution()}};
    return j;
}

Json to_json(const SolveReport& report) {
    Json j;
    j["termination"] = to_string(report.termination);
    j["message"] = report.message;
    j["body"] = report.body ? to_json(*report.body) : Json(nullptr);
    j["tau"] = report.tau;
    j["residuals"] = report.residuals;
    j["max_residual"] = report.max_residual();
    j["curvature_masses"] = report.curvature;
    j["constraint_error"] = report.constraint_error;
    j["phi_trace"] = report.phi_trace;
    j["vphi_trace"] = report.vphi_trace;
    j["iterations"] = report.iterations;
    if (report.witness) j["witness"] = vec_json(*report.witness);
    return j;
}

Json to_json(const SolverConfig& c) {
    Json j;
    j["grid_rule"] = c.grid_rule ? Json(to_string(*c.grid_rule)) : Json(nullptr);
    j["resolution"] = c.resolution;
    j["grid_seed"] = c.grid_seed;
    j["step"] = c.step;
    j["backtrack"] = c.backtrack;
    j["max_backtracks"] = c.max_backtracks;
    j["tol_res"] = c.tol_res;
    j["tol_con"] = c.tol_con;
    j["max_iters"] = c.max_iters;
    j["stall_iters"] = c.stall_iters;
    j["bracket_lo"] = c.bracket_lo;
    j["bracket_hi"] = c.bracket_hi;
    j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
    j["t_fd"] = c.t_fd;
    return j;
}

HalfspacePolytope body_from_json(const Json& j, const std::string& source) {
    const int dim = dimension(j, source);
    const Json& normals = member(j, "normals", source, "");
    const Json& offsets = member(j, "offsets", source, "");
    if (!normals.is_array()) field_error(source, "normals", "expected an array");
    if (!offsets.is_array()) field_error(source, "offsets", "expected an array");
    if (normals.size() != offsets.size())
        field_error(source, "offsets", "length " + std::to_string(offsets.size()) + " differs from normals length " +
                                           std::to_string(normals.size()));
    std::vector<Vec> n;
    std::vector<double> h;
    for (size_t i = 0; i < normals.size(); ++i) {
        n.push_back(vector(normals[i], dim, source, "normals[" + std::to_string(i) + "]"));
        h.push_back(number(offsets[i], source, "offsets[" + std::to_string(i) + "]"));
    }
    return validated(source, [&] { return HalfspacePolytope(dim, std::move(n), std::move(h)); });
}

DiscreteSphericalMeasure measure_from_json(const Json& j, const std::string& source) {
    const int dim = dimension(j, source);
    const Json& atoms = member(j, "atoms", source, "");
    if (!atoms.is_array() || atoms.empty()) field_error(source, "atoms", "expected a nonempty array");
    std::vector<Vec> d;
    std::vector<double> m;
    for (size_t i = 0; i < atoms.size(); ++i) {
        const std::string path = "atoms[" + std::to_string(i) + "]";
        d.push_back(vector(member(atoms[i], "direction", source, path), dim, source, path + ".direction"));
        m.push_back(number(member(atoms[i], "mass", source, path), source, path + ".mass"));
    }
    return validated(source, [&] { return DiscreteSphericalMeasure(dim, std::move(d), std::move(m)); });
}

SolverConfig config_from_json(const Json& j, const std::string& source) {
    if (!j.is_object()) field_error(source, "(root)", "expected an object");
    SolverConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "grid_rule") {
            if (v.is_null()) continue;
            if (!v.is_string()) field_error(source, key, "expected a string");
            c.grid_rule = validated(source, [&] { return parse_grid_rule(v.get<std::string>()); });
        } else if (key == "resolution") {
            c.resolution = static_cast<int>(integer(v, source, key));
        } else if (key == "grid_seed") {
            c.grid_seed = static_cast<std::uint64_t>(integer(v, source, key));
        } else if (key == "step") {
            c.step = number(v, source, key);
        } else if (key == "backtrack") {
            c.backtrack = number(v, source, key);
        } else if (key == "max_backtracks") {
            c.max_backtracks = static_cast<int>(integer(v, source, key));
        } else if (key == "tol_res") {
            c.tol_res = number(v, source, key);
        } else if (key == "tol_con") {
            c.tol_con = number(v, source, key);
        } else if (key == "max_iters") {
            c.max_iters = static_cast<int>(integer(v, source, key));
        } else if (key == "stall_iters") {
            c.stall_iters = static_cast<int>(integer(v, source, key));
        } else if (key == "bracket_lo") {
            c.bracket_lo = number(v, source, key);
        } else if (key == "bracket_hi") {
            c.bracket_hi = number(v, source, key);
        } else if (key == "seed") {
            if (v.is_null()) continue;
            c.seed = static_cast<std::uint64_t>(integer(v, source, key));
        } else if (key == "t_fd") {
            c.t_fd = number(v, source, key);
        } else {
            field_error(source, key, "unknown field");
        }
    }
    validated(source, [&] {
        c.validate();
        return 0;
    });
    return c;
}

std::string body_to_obj(const HalfspacePolytope& body) {
    if (body.dim() != 3) throw InvalidArgument("OBJ export needs a 3D body");
    const PolytopeGeometry g = geometry(body);
    std::ostringstream os;
    os.precision(17);
    os << "# " << g.vertices.size() << " vertices, " << g.faces.size() << " faces\n";
    for (const Vec& v : g.vertices) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (const PolytopeFace& f : g.faces) {
        os << 'f';
        for (size_t i : f.vertices) os << ' ' << i + 1;
        os << '\n';
    }
    return os.str();
}

std::string body_to_csv(const HalfspacePolytope& body) {
    if (body.dim() != 2) throw InvalidArgument("CSV export needs a 2D body");
    const PolytopeGeometry g = geometry(body);
    // Edges are stored counter-clockwise; chain them by shared endpoints.
    std::vector<size_t> next(g.vertices.size(), static_cast<size_t>(-1));
    for (const PolytopeFace& f : g.faces) next[f.vertices[0]] = f.vertices[1];
    std::ostringstream os;
    os.precision(17);
    os << "x,y\n";
    const size_t start = g.faces.front().vertices[0];
    size_t v = start;
    for (size_t step = 0; step < g.faces.size(); ++step) {
        os << g.vertices[v][0] << ',' << g.vertices[v][1] << '\n';
        v = next[v];
        if (v == start || v == static_cast<size_t>(-1)) break;
    }
    return os.str();
}

}  // namespace orlimink
