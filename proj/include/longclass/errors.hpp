#pragma once

#include <stdexcept>
#include <string>

namespace longclass {

/// Failure of a statistical estimation step (singular covariance,
/// degenerate subsets, non-estimable factors, ...).
class EstimationError : public std::runtime_error {
public:
    explicit EstimationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input data (CSV panel problems, label problems, ...).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration or argument values.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Quadratic program could not be solved (infeasible constraints,
/// iteration cap exceeded).
class QpError : public std::runtime_error {
public:
    explicit QpError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace longclass
