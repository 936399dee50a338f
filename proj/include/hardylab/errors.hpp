#pragma once

#include <stdexcept>
#include <string>

namespace hardylab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied values was violated (bad spec, ordering,
/// out-of-range parameter). The CLI reports these as usage errors.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Base for failures that arise while computing (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

class OnRidge : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AtSingularity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Adaptive subdivision budget exhausted; usually a missed singularity.
class NonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DivergentIntegral : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ZeroDenominator : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The requested inequality or constant does not apply to this domain.
class HypothesisViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace hardylab
