#pragma once

#include <stdexcept>
#include <string>

namespace coherent {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct IndexOutOfRange : Error {
    using Error::Error;
};
struct NegativeWeight : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct UnsupportedField : Error {
    using Error::Error;
};
struct InconsistentVertexCount : Error {
    using Error::Error;
};
struct EmptyDirectory : Error {
    using Error::Error;
};
struct DanglingVertex : Error {
    using Error::Error;
};
struct SingularNu : Error {
    using Error::Error;
};
struct KindMismatch : Error {
    using Error::Error;
};
struct NotSymmetric : Error {
    using Error::Error;
};
struct NotSymmetrizable : Error {
    using Error::Error;
};
struct ZeroDegree : Error {
    using Error::Error;
};
struct NoConvergence : Error {
    using Error::Error;
};
struct InvalidDistribution : Error {
    using Error::Error;
};
struct NonpositiveEpsilon : Error {
    using Error::Error;
};
struct KTooLarge : Error {
    using Error::Error;
};
struct TooFewEigenvalues : Error {
    using Error::Error;
};
struct EmptyCluster : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct InvalidConfig : Error {
    using Error::Error;
};

/// Numerical tolerances shared by the library and its tests. Keeping them in
/// one place guarantees that invariant checks and implementations agree.
struct Tolerances {
    static constexpr double row_sum = 1e-12;       // per-row stochasticity slack, scaled by n
    static constexpr double symmetry = 1e-12;      // max-norm symmetry slack for Q
    static constexpr double laplacian_row = 1e-10; // zero row sums of I - P, I - Q
    static constexpr double psd_slack = 1e-10;     // smallest eigenvalue of Q may dip below 0 by this
    static constexpr double residual = 1e-9;       // Lanczos Ritz residual target
    static constexpr double nu_invertible = 1e-14; // nu entries below this count as zero
};

} // namespace coherent
