#pragma once

#include <stdexcept>
#include <string>

namespace degrenet {

// Argument outside the model's domain (bad degree, negative rate, malformed
// bounds). Maps to CLI exit code 2.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Operation asked for a policy it does not support.
class UnsupportedPolicyError : public DomainError {
public:
    explicit UnsupportedPolicyError(const std::string& msg) : DomainError(msg) {}
};

// The requested stationary object does not exist for these parameters.
// Maps to CLI exit code 3.
class ExistenceError : public std::runtime_error {
public:
    explicit ExistenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Truncating the stationary series at k_max left more tail mass than the
// caller allowed. Carries a k_max that would satisfy the tolerance.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& msg, int suggested)
        : std::runtime_error(msg), suggested_k_max(suggested) {}
    int suggested_k_max;
};

// Correlation of a constant vector.
class UndefinedCorrelationError : public std::runtime_error {
public:
    explicit UndefinedCorrelationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Hit an event/iteration cap before finishing.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// An arrival found fewer live vertices than endpoints it needs.
class InfeasibleArrivalError : public std::runtime_error {
public:
    explicit InfeasibleArrivalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Unreadable/unwritable streams, unusable input files. CLI exit code 4.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace degrenet
