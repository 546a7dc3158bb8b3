#pragma once

#include <stdexcept>
#include <string>

namespace leaky {

// Invalid configuration or argument. The message names the offending field.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the band where an operation is defined (e.g. eps_R not in
// the radiation band).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Newton left the trust region around its seed.
class RootJumped : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Evaluation hit K = 0 or Q = 0, where the quantization function has a pole.
class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class MatchingFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityDetected : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class PeakAmbiguity : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace leaky
