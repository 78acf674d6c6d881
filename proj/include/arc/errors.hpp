#pragma once

#include <stdexcept>
#include <string>

namespace arc {

/// Fixed-point iteration failed to reach the requested tolerance.
/// Carries the residual at the last iterate.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Invalid experiment configuration (bad field, violated invariant).
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Internal structural failure: a lookup or table was queried outside the
/// domain it was built for (names the offending time step / state).
class StructuralError : public std::logic_error {
  public:
    explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

} // namespace arc
