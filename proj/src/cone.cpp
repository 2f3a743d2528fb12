#include "orlimink/cone.hpp"

#include <algorithm>
#include <cmath>

namespace orlimink {

NnlsResult nnls(const Eigen::MatrixXd& A, const Vec& b) {
    const Eigen::Index m = A.cols();
    if (A.rows() != b.size()) throw InvalidArgument("nnls: row count mismatch");

    const double scale = std::max({1.0, A.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
    const double wtol = 1e-14 * scale * scale;

    NnlsResult out;
    out.x = Vec::Zero(m);
    std::vector<char> passive(static_cast<size_t>(m), 0);
    Vec w = A.transpose() * b;

    const int max_outer = static_cast<int>(3 * m + 10);
    for (int outer = 0; outer < max_outer; ++outer) {
        Eigen::Index t = -1;
        double best = wtol;
        for (Eigen::Index j = 0; j < m; ++j) {
            if (!passive[j] && w[j] > best) {
                best = w[j];
                t = j;
            }
        }
        if (t < 0) break;
        passive[t] = 1;

        for (int inner = 0; inner < max_outer; ++inner) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index j = 0; j < m; ++j)
                if (passive[j]) idx.push_back(j);
            Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
            for (size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
            const Vec sp = Ap.colPivHouseholderQr().solve(b);

            bool feasible = true;
            for (Eigen::Index k = 0; k < sp.size(); ++k)
                if (sp[k] <= 0.0) feasible = false;
            if (feasible) {
                out.x.setZero();
                for (size_t k = 0; k < idx.size(); ++k) out.x[idx[k]] = sp[static_cast<Eigen::Index>(k)];
                break;
            }
            double alpha = 1.0;
            for (size_t k = 0; k < idx.size(); ++k) {
                const double s = sp[static_cast<Eigen::Index>(k)];
                const double xv = out.x[idx[k]];
                if (s <= 0.0 && xv - s > 0.0) alpha = std::min(alpha, xv / (xv - s));
            }
            for (size_t k = 0; k < idx.size(); ++k) {
                const double s = sp[static_cast<Eigen::Index>(k)];
                out.x[idx[k]] += alpha * (s - out.x[idx[k]]);
            }
            for (size_t k = 0; k < idx.size(); ++k) {
                if (out.x[idx[k]] <= 1e-15 * scale) {
                    out.x[idx[k]] = 0.0;
                    passive[idx[k]] = 0;
                }
            }
        }
        ++out.iterations;
        w = A.transpose() * (b - A * out.x);
    }
    out.residual = b - A * out.x;
    return out;
}

SpanCheck positive_span(std::span<const Vec> directions, double tol) {
    SpanCheck out;
    if (directions.empty()) throw InvalidArgument("positive_span: no directions");
    const Eigen::Index n = directions.front().size();
    Eigen::MatrixXd A(n, static_cast<Eigen::Index>(directions.size()));
    for (size_t j = 0; j < directions.size(); ++j) {
        if (directions[j].size() != n) throw InvalidArgument("positive_span: mixed dimensions");
        A.col(static_cast<Eigen::Index>(j)) = directions[j];
    }

    std::vector<Vec> probes;
    for (Eigen::Index k = 0; k < n; ++k) probes.push_back(Vec::Unit(n, k));
    probes.push_back(-Vec::Ones(n) / std::sqrt(static_cast<double>(n)));

    out.spans = true;
    for (const Vec& b : probes) {
        const NnlsResult r = nnls(A, b);
        const double rn = r.residual.norm();
        if (rn > out.worst_residual) out.worst_residual = rn;
        if (rn > tol && out.spans) {
            out.spans = false;
            out.witness = r.residual / rn;
        }
    }
    return out;
}

}  // namespace orlimink
