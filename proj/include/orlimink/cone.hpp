#pragma once

#include "orlimink/core.hpp"

#include <span>
#include <vector>

namespace orlimink {

/// Solution of min ||A x - b|| subject to x >= 0.
struct NnlsResult {
    Vec x;
    Vec residual;  ///< b - A x
    int iterations = 0;
};

/// Lawson-Hanson active-set non-negative least squares.
NnlsResult nnls(const Eigen::MatrixXd& A, const Vec& b);

/// Outcome of testing whether directions positively span R^n, i.e. are not
/// contained in any closed hemisphere.
struct SpanCheck {
    bool spans = false;
    /// When !spans: a unit xi with xi . v <= ~0 for every direction v.
    Vec witness;
    /// Largest NNLS residual norm over the positive basis probes.
    double worst_residual = 0.0;
};

/// Decides positive spanning by checking that each vector of the positive
/// basis {e_1, ..., e_n, -(e_1 + ... + e_n)/sqrt(n)} lies in the cone of the
/// directions. A probe b outside the cone leaves an NNLS residual r with
/// A^T r <= 0, so r/|r| certifies a closed hemisphere containing every direction.
SpanCheck positive_span(std::span<const Vec> directions, double tol = 1e-10);

}  // namespace orlimink
