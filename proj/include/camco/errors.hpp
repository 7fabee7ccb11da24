#pragma once

#include <stdexcept>
#include <string>

namespace camco {

/** Base class for all engine errors so callers can catch one type. */
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration value out of range or structurally invalid.
class ConfigInvalid : public Error {
public:
    explicit ConfigInvalid(const std::string& what) : Error("config invalid: " + what) {}
};

/// Serialized document carries an unknown or missing schema tag / field.
class SchemaMismatch : public Error {
public:
    explicit SchemaMismatch(const std::string& what) : Error("schema mismatch: " + what) {}
};

/// Vector arity disagreement (action vs. box vs. halfspace normals).
class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

/// Iterative projection failed to reach tolerance within the sweep cap.
class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& what) : Error("non-convergence: " + what) {}
};

/// Risk profile lacks an indicator required for an evaluation.
class MissingIndicator : public Error {
public:
    explicit MissingIndicator(const std::string& what) : Error("missing indicator: " + what) {}
};

/// Joint action space exceeds the enumeration cap.
class OracleCapExceeded : public Error {
public:
    explicit OracleCapExceeded(const std::string& what) : Error("enumeration cap exceeded: " + what) {}
};

/// Fallback joint action is itself non-compliant; configuration bug.
class FallbackInfeasible : public Error {
public:
    explicit FallbackInfeasible(const std::string& what) : Error("fallback infeasible: " + what) {}
};

/// Scenario name not registered.
class UnknownScenario : public Error {
public:
    explicit UnknownScenario(const std::string& what) : Error("unknown scenario: " + what) {}
};

/// Filesystem read/write failure.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io error: " + what) {}
};

/// Audit log record failed to parse; carries the zero-based record index.
class AuditParseError : public Error {
public:
    AuditParseError(std::size_t record_index, const std::string& what)
        : Error("audit parse error at record " + std::to_string(record_index) + ": " + what),
          record_index(record_index) {}
    std::size_t record_index;
};

} // namespace camco
