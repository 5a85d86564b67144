#pragma once

#include <stdexcept>
#include <string>

namespace zenolab {

// Raised when a matrix or vector does not describe a physical two-level state.
struct InvalidStateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An operand violates a mathematical precondition (e.g. non-Hermitian observable).
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Unphysical bath parameters.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Parameters are physical but outside the regime a formula applies to.
struct UnsupportedParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Short-time expansions evaluated outside their range of validity.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct PreconditionError : std::logic_error {
    using std::logic_error::logic_error;
};

struct StepSizeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularNormalizationError : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace zenolab
