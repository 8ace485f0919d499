#pragma once

#include <stdexcept>
#include <string>

namespace eitsim {

// Physics precondition violated by the inputs (resonant regime, extinction, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Caller broke an API contract (bad grid, step size, schedule shape).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Integration produced non-finite values.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace eitsim
