#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad run configuration: out-of-range site, unknown observable, malformed flag.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Input violates a numeric invariant (normalization, degenerate seed, empty field).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Probability reached the edge of the truncated lattice.
class LatticeOverflowError : public Error {
public:
    LatticeOverflowError(long step, double leak)
        : Error("lattice overflow at step " + std::to_string(step) +
                ": boundary probability " + std::to_string(leak)),
          step_(step), leak_(leak) {}

    long step() const noexcept { return step_; }
    double leak() const noexcept { return leak_; }

private:
    long step_;
    double leak_;
};

class FitError : public Error {
public:
    using Error::Error;
};

/// Non-finite values (overflow in a recursion) or a broken self-consistency check.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace qwalk
