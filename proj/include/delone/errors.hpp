#pragma once

#include <stdexcept>
#include <string>

namespace delone {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments or a request the current mode does not support.
struct UsageError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct RangeError : Error {
    using Error::Error;
};

struct DivisibilityError : Error {
    using Error::Error;
};

// Something would not fit: integer width, levels built, cell caps, budgets.
struct CapacityError : Error {
    using Error::Error;
};

struct CoverageError : CapacityError {
    using CapacityError::CapacityError;
};

struct DegenerateInputError : Error {
    using Error::Error;
};

struct InvariantError : Error {
    using Error::Error;
};

struct IntegrationError : Error {
    IntegrationError(const std::string& what, double estimate)
        : Error(what), last_estimate(estimate) {}
    double last_estimate;
};

}  // namespace delone
