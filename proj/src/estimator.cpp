#include "arc/estimator.hpp"

namespace arc {

double raw_update_mean(double mean, std::int64_t n, double z) {
    const double t = static_cast<double>(n);
    return t / (t + 1.0) * mean + z / (t + 1.0);
}

ModelParams raw_update_mean_var(double mean, double var, std::int64_t n, double z) {
    const double t = static_cast<double>(n);
    const double d = mean - z;
    return {t / (t + 1.0) * mean + z / (t + 1.0),
            t / (t + 1.0) * var + t / ((t + 1.0) * (t + 1.0)) * d * d};
}

EstimatorState update_mean(const EstimatorState& state, double z,
                           const ParameterSpace& space) {
    EstimatorState next;
    next.mean = project({raw_update_mean(state.mean, state.n, z), state.var}, space).mu;
    next.var = state.var;
    next.n = state.n + 1;
    return next;
}

EstimatorState update_mean_var(const EstimatorState& state, double z,
                               const ParameterSpace& space) {
    const ModelParams raw = raw_update_mean_var(state.mean, state.var, state.n, z);
    const ModelParams clipped = project(raw, space);
    return {clipped.mu, clipped.var, state.n + 1};
}

} // namespace arc
