#pragma once

#include <stdexcept>
#include <string>

namespace randns {

/// Operands live on different lattices.
class GridMismatch : public std::invalid_argument {
public:
    explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid run or probe configuration. The message names the violated condition.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Non-finite values or runaway growth during time integration.
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

}  // namespace randns
