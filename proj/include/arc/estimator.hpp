#pragma once

#include <cstdint>

#include "arc/params.hpp"

namespace arc {

/// Recursive point estimate of (mu, sigma^2) after absorbing `n` observations.
/// Always kept inside the parameter rectangle; in the known-variance setting
/// `var` is frozen at the known value.
struct EstimatorState {
    double mean = 0.0;
    double var = 0.0;
    std::int64_t n = 0;

    friend bool operator==(const EstimatorState& a, const EstimatorState& b) {
        return a.mean == b.mean && a.var == b.var && a.n == b.n;
    }
};

/// Unprojected one-step recursion for the running mean:
///   mean' = t/(t+1) mean + 1/(t+1) z.
double raw_update_mean(double mean, std::int64_t n, double z);

/// Unprojected one-step recursion for (mean, biased variance):
///   mean' = t/(t+1) mean + 1/(t+1) z
///   var'  = t/(t+1) var  + t/(t+1)^2 (mean - z)^2.
/// Equals the batch sample mean / biased sample variance of the stream.
ModelParams raw_update_mean_var(double mean, double var, std::int64_t n, double z);

/// Absorb one observation, updating the mean only (variance stays frozen);
/// the result is projected into `space`.
EstimatorState update_mean(const EstimatorState& state, double z,
                           const ParameterSpace& space);

/// Absorb one observation, updating mean and variance; projected into `space`.
EstimatorState update_mean_var(const EstimatorState& state, double z,
                               const ParameterSpace& space);

} // namespace arc
