#pragma once

#include <stdexcept>
#include <string>

namespace scet {

// Base class for all library errors. CLI maps these to exit code 2 unless a
// subclass says otherwise.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct EncodingError : Error {
    using Error::Error;
};

// Power iteration (or any fixed-point solve) ran out of iterations.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& msg, double residual)
        : Error(msg), residual(residual) {}
    double residual;
};

// All candidate mass underflowed to zero in a selection distribution.
struct DegenerateDistributionError : Error {
    using Error::Error;
};

// KL(p || q) with p > 0 where q = 0.
struct InfiniteDivergenceError : Error {
    using Error::Error;
};

// Explicit finite-difference step size violates the stability bound.
struct StabilityError : Error {
    StabilityError(const std::string& msg, double required_dt)
        : Error(msg), required_dt(required_dt) {}
    double required_dt;
};

// Trajectory or training run produced non-finite values.
struct DivergenceError : Error {
    using Error::Error;
};

// Operation requires a different embedding mode (static vs scet).
struct ModeError : Error {
    using Error::Error;
};

struct EmptyInputError : Error {
    using Error::Error;
};

// Sequence exceeds the model context window.
struct LengthError : Error {
    using Error::Error;
};

}  // namespace scet
