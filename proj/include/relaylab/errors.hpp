#pragma once

#include <stdexcept>
#include <string>

namespace relaylab {

/// Base class for all relaylab exceptions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (schema violations, bad ranges).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A link was queried for which no distance has been set.
class MissingLinkError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Topology invariant broken (non-positive distance, bad node id).
class InvalidTopologyError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// A function precondition was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// Exact enumeration requested beyond the 2^n feasibility bound.
class EnumerationLimitError : public ContractError {
public:
    using ContractError::ContractError;
};

/// A quantity that presumes a stable relay queue was requested for an
/// unstable configuration. Carries the offending drift (lambda1 - mu).
class InstabilityError : public Error {
public:
    InstabilityError(const std::string& what, double drift)
        : Error(what), drift_(drift) {}
    double drift() const { return drift_; }

private:
    double drift_;
};

}  // namespace relaylab
