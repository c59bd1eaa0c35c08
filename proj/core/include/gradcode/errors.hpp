#pragma once

#include <stdexcept>
#include <string>

namespace gradcode {

// A requested scheme family cannot be built for the given parameters.
struct ConstructionInfeasible : std::runtime_error {
    explicit ConstructionInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// A scheme violates the structural invariants (row support outside assignment, ...).
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// The exhaustive oracle was asked for an instance above its size limits.
struct OracleTooLarge : std::runtime_error {
    explicit OracleTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-supplied configuration (flags, config files, pattern sizes, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Internal invariant that proofs guarantee; a failure is a bug, not bad input.
inline void hard_check(bool cond, const char* what) {
    if (!cond) throw std::logic_error(what);
}

}  // namespace gradcode
