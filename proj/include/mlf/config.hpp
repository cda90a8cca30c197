#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mlf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Every tolerance in the library lives here. All values are absolute unless
// the field comment says otherwise.
struct Tolerances {
    double membership = 1e-9;      // gauge(S, x) <= 1 + membership
    double inclusion = 1e-9;       // certified margin <= inclusion counts as holding
    double redundancy = 1e-9;      // row kept iff its LP value exceeds 1 + redundancy
    double hausdorff = 1e-8;       // approximate fixed-point stopping rule
    double lp_pivot = 1e-12;       // simplex pivot / reduced-cost threshold
    double symmetry = 1e-12;       // ellipsoid symmetry check after symmetrization
    double max_condition = 1e12;   // ellipsoid condition number ceiling for inversion
};

inline constexpr Tolerances kDefaultTolerances{};

inline constexpr int kDefaultPowerCap = 10000;
inline constexpr int kDefaultMaxIter = 1000;

// Error taxonomy. The CLI maps these to exit codes: ParseError -> 2,
// PreconditionError/DimensionError/UnsupportedError -> 3, NumericalError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class DimensionError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class UnsupportedError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class UnboundedError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw PreconditionError(what);
}

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* ctx) {
    if (got != want) {
        throw DimensionError(std::string(ctx) + ": dimension mismatch (got " + std::to_string(got) +
                             ", expected " + std::to_string(want) + ")");
    }
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace mlf
