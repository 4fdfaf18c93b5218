#pragma once

#include <stdexcept>
#include <string>

namespace anarchy {

// Thrown on malformed input: bad curve lengths, inconsistent player counts,
// unparseable scalars, invalid JSON schemas, and violated preconditions
// (e.g. the validity condition of traditional smoothness).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an enumeration (profile space, CCE support) exceeds its cap.
class CapExceededError : public std::runtime_error {
public:
    explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a requested smoothness/price-of-anarchy bound does not exist
// (LP value rho* <= 0, empty feasible set, or no feasible welfare pair).
class NoFiniteBoundError : public std::runtime_error {
public:
    explicit NoFiniteBoundError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the rational simplex when entries exceed the configured bit
// budget; callers may retry in float mode.
class NumericOverflowError : public std::runtime_error {
public:
    explicit NumericOverflowError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an internally constructed certificate or instance fails its
// own consistency check; carries diagnostics, never silently ignored.
class VerificationError : public std::runtime_error {
public:
    explicit VerificationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace anarchy
