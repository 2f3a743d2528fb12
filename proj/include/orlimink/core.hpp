#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace orlimink {

using Vec = Eigen::VectorXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (sizes, signs, enum/dimension mismatch).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A body is unbounded, empty, or does not contain the origin in its interior.
class InvalidBody : public Error {
public:
    using Error::Error;
};

/// A direction set (normals, measure atoms, nodes) lies in a closed hemisphere.
class HemisphereError : public InvalidBody {
public:
    HemisphereError(const std::string& what, Vec witness)
        : InvalidBody(what), witness_(std::move(witness)) {}

    const Vec& witness() const { return witness_; }

private:
    Vec witness_;
};

/// A bracketing root-finder could not enclose a sign change.
class BracketError : public Error {
public:
    BracketError(const std::string& what, long index = -1) : Error(what), index_(index) {}

    /// Node index that failed, or -1 when not node-indexed.
    long index() const { return index_; }

private:
    long index_;
};

inline Vec unit(Vec v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw InvalidArgument("cannot normalize a zero vector");
    return v / n;
}

/// Surface measure of the unit sphere S^{dim-1}: 2 pi^{dim/2} / Gamma(dim/2).
double sphere_measure(int dim);

}  // namespace orlimink
