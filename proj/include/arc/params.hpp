#pragma once

#include <algorithm>
#include <stdexcept>

namespace arc {

/// A candidate model: per-period excess-return mean and variance.
struct ModelParams {
    double mu = 0.0;
    double var = 0.0;

    friend bool operator==(const ModelParams& a, const ModelParams& b) {
        return a.mu == b.mu && a.var == b.var;
    }
};

/// The compact rectangle the unknown parameter is known to live in.
/// In the known-variance setting the variance side collapses to a point.
struct ParameterSpace {
    double mu_lo = 0.0;
    double mu_hi = 0.0;
    double var_lo = 0.0;
    double var_hi = 0.0;

    void validate() const {
        if (!(mu_lo <= mu_hi)) {
            throw std::invalid_argument("ParameterSpace: mu_lo > mu_hi");
        }
        if (!(0.0 <= var_lo && var_lo <= var_hi)) {
            throw std::invalid_argument("ParameterSpace: need 0 <= var_lo <= var_hi");
        }
    }

    bool contains(const ModelParams& p) const noexcept {
        return p.mu >= mu_lo && p.mu <= mu_hi && p.var >= var_lo && p.var <= var_hi;
    }
};

/// Euclidean projection onto the rectangle: the coordinatewise clamp.
inline ModelParams project(const ModelParams& p, const ParameterSpace& space) {
    return {std::clamp(p.mu, space.mu_lo, space.mu_hi),
            std::clamp(p.var, space.var_lo, space.var_hi)};
}

} // namespace arc
