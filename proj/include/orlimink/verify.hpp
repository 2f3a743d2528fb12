#pragma once

// Self-check suite behind `orlimink verify`: geometric identities of the body
// kernel, structural properties of the curvature measures and the gradient
// audit, evaluated on a seeded random corpus.

#include <cstdint>
#include <string>
#include <vector>

namespace orlimink {

struct VerifyOptions {
    /// Grid size for the measure checks; 0 keeps the defaults (4096 nodes in
    /// dim 2, 100000 in dim 3). Duality checks use the same grids.
    int resolution = 0;
    std::uint64_t seed = 1;
    double t_fd = 1e-5;
};

struct VerifyCheck {
    std::string name;
    bool passed = false;
    double value = 0.0;      ///< the measured quantity (worst error, count, ...)
    double tolerance = 0.0;  ///< its threshold
    std::string detail;
};

std::vector<VerifyCheck> run_identity_suite(const VerifyOptions& options);

/// Fixed-width text table, one row per check, then a summary line.
std::string format_table(const std::vector<VerifyCheck>& checks);

}  // namespace orlimink
