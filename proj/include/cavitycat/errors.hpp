#pragma once

#include <stdexcept>
#include <string>

namespace cavitycat {

// Preparation or normalization hit a branch with (numerically) zero norm.
class ZeroStateError : public std::runtime_error {
public:
    explicit ZeroStateError(const std::string& what) : std::runtime_error(what) {}
};

// A density eigenvalue fell below the clamp tolerance.
class PositivityViolation : public std::runtime_error {
public:
    explicit PositivityViolation(const std::string& what) : std::runtime_error(what) {}
};

// Near-coalescing labels that survive merging: the state's weight sits in a
// direction the Gram factorization cannot resolve in double precision.
class DegenerateSpanError : public PositivityViolation {
public:
    explicit DegenerateSpanError(const std::string& what) : PositivityViolation(what) {}
};

// Caller broke a documented precondition (e.g. reducing an unnormalized state).
class ContractViolation : public std::logic_error {
public:
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

class UnsupportedInput : public std::invalid_argument {
public:
    explicit UnsupportedInput(const std::string& what) : std::invalid_argument(what) {}
};

// Fock truncation too small for the requested state.
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

class CapacityError : public std::runtime_error {
public:
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cavitycat
