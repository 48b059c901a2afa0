#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace pqspecial {

/// Argument outside the mathematical domain of a function (t <= 0, q outside (0,1), ...).
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Derivative order outside the supported range or with the wrong parity.
class OrderError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// Inputs violate the hypotheses of a theorem (e.g. s > 1 for the digamma superadditivity).
class HypothesisError : public DomainError {
   public:
    using DomainError::DomainError;
};

/// A truncated series or product hit its term cap before the tail dropped below tolerance.
class ToleranceNotReached : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Result not representable as a finite double; the log-space variant stays finite.
class OverflowError : public std::overflow_error {
   public:
    using std::overflow_error::overflow_error;
};

/// Malformed sweep plan, limit schedule or CLI configuration.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Round-trip rendering of a double for diagnostics.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

}  // namespace pqspecial
