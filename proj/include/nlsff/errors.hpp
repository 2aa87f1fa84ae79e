#pragma once

#include <stdexcept>
#include <string>

namespace nlsff {

// Base class for every failure this library reports on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / input-validation failures (CLI exit code 2).
struct ConfigError : Error {
    using Error::Error;
};

// A numerical contract could not be met (CLI exit code 3).
struct ContractError : Error {
    using Error::Error;
};

// An iteration failed to converge (CLI exit code 4).
struct NonConvergence : Error {
    using Error::Error;
};

struct DegenerateQuantumNumbers : ConfigError {
    using ConfigError::ConfigError;
};
struct DeltaTooLarge : ConfigError {
    using ConfigError::ConfigError;
};
struct GeometryMismatch : ConfigError {
    using ConfigError::ConfigError;
};
struct RegimeMismatch : ConfigError {
    using ConfigError::ConfigError;
};
struct CoincidingRapidities : ConfigError {
    using ConfigError::ConfigError;
};
struct OrderTooLarge : ConfigError {
    using ConfigError::ConfigError;
};
struct CostGuardExceeded : ConfigError {
    using ConfigError::ConfigError;
};
struct SeparationTooSmall : ConfigError {
    using ConfigError::ConfigError;
};
struct RootCollision : ConfigError {
    using ConfigError::ConfigError;
};
struct OutOfRange : ConfigError {
    using ConfigError::ConfigError;
};
struct StripViolation : ConfigError {
    using ConfigError::ConfigError;
};
struct OnSegment : ConfigError {
    using ConfigError::ConfigError;
};
struct BarnesRange : ConfigError {
    using ConfigError::ConfigError;
};
struct RangeViolation : ContractError {
    using ContractError::ContractError;
};
struct NonPositiveResult : ContractError {
    using ContractError::ContractError;
};
struct SingularNystrom : ContractError {
    using ContractError::ContractError;
};
struct BracketingFailure : ContractError {
    using ContractError::ContractError;
};
struct DenominatorZero : ContractError {
    using ContractError::ContractError;
};
struct NonConvergedNodes : ContractError {
    using ContractError::ContractError;
};
struct ContourInvalid : ContractError {
    using ContractError::ContractError;
};
struct DeformationImpossible : ContractError {
    using ContractError::ContractError;
};
struct CacheError : ContractError {
    using ContractError::ContractError;
};

} // namespace nlsff
