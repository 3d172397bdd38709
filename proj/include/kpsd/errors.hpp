#pragma once

#include <stdexcept>
#include <string>

namespace kpsd {

/// Invalid input: bad dimensions, out-of-range indices, malformed files.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed to meet its contract (non-convergence,
/// postcondition violated at the requested tolerance).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A verdict would depend on the sign of a quantity that sits inside its
/// zero band; the classifier refuses to guess. The message names the
/// borderline quantity.
struct AmbiguityError : NumericalError {
    using NumericalError::NumericalError;
};

/// Internal consistency check failed (e.g. a rank classification upstream
/// contradicts an adjugate identity that should follow from it).
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace kpsd
