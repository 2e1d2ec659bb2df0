#pragma once

#include <stdexcept>
#include <string>

namespace pint {

/// Invalid parameters, sizes or divisibility rules detected before a solve.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (zero pivot, NaN, singular system).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pint
