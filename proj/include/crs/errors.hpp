#pragma once

#include <stdexcept>
#include <string>

namespace crs {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Gamma-function argument at (or within 1e-12 of) a pole.
class PoleError : public DomainError {
public:
    using DomainError::DomainError;
};

// Numerical procedure did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No straight Mellin-Barnes contour separates the two pole families.
class SeparationError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

// Contour grid would exceed the configured point budget.
class BudgetError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

// Parameter combination the closed-form route cannot represent
// (e.g. a non-integer nonlinearity parameter in a Meijer-G term).
class UnsupportedError : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

// Invalid user configuration (scenario files, CLI flags, system parameters).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace crs
