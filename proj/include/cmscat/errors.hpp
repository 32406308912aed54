#pragma once

#include <stdexcept>
#include <string>

namespace cmscat {

// Bad input or configuration. The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical contract (residual, tolerance, invariant) was violated.
// The CLI maps this to exit code 3.
class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Spectral parameter inside the exclusion zone of an eigenvalue.
class ExceptionalPointError : public ContractError {
public:
    using ContractError::ContractError;
};

class SolverError : public ContractError {
public:
    SolverError(const std::string& what, double condition_estimate)
        : ContractError(what), condition(condition_estimate) {}
    double condition;
};

class NotEigenfunctionError : public ContractError {
public:
    using ContractError::ContractError;
};

class ConsistencyError : public ContractError {
public:
    using ContractError::ContractError;
};

class PoleExtractionError : public ContractError {
public:
    using ContractError::ContractError;
};

}  // namespace cmscat
