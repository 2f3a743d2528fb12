#pragma once

// File formats: JSON for bodies, measures, curvature output, solver reports
// and configs; OBJ (3D) and CSV vertex loops (2D) for geometry interchange.

#include "orlimink/minkowski_solver.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>

namespace orlimink {

using Json = nlohmann::json;

/// Malformed or inconsistent input file. what() carries "file:line:col" for
/// syntax errors and "file: field.path: problem" for schema errors.
class InputError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// Two-space indented JSON with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

Json to_json(const SphericalGrid& grid);
Json to_json(const HalfspacePolytope& body);
Json to_json(const DiscreteSphericalMeasure& mu);
/// Mirrors the measure schema (atoms = facet normals with their masses) plus
/// total, phi_label and grid {rule, resolution}.
Json curvature_to_json(const HalfspacePolytope& body, const CurvatureMeasure& c, const std::string& phi_label,
                       const SphericalGrid& grid);
/// {body, tau, residuals, phi_trace, vphi_trace, iterations, termination, ...}. No timing, so
/// identical runs give identical bytes.
Json to_json(const SolveReport& report);
Json to_json(const SolverConfig& config);

/// `source` names the file in diagnostics.
HalfspacePolytope body_from_json(const Json& j, const std::string& source = "body");
DiscreteSphericalMeasure measure_from_json(const Json& j, const std::string& source = "measure");
/// Every field optional; unknown fields are rejected so typos do not pass silently.
SolverConfig config_from_json(const Json& j, const std::string& source = "config");

/// Wavefront OBJ of the exact hull (dim 3).
std::string body_to_obj(const HalfspacePolytope& body);
/// "x,y" vertex loop in counter-clockwise order (dim 2).
std::string body_to_csv(const HalfspacePolytope& body);

}  // namespace orlimink
