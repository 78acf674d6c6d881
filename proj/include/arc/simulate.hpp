#pragma once

#include <cstdint>
#include <vector>

#include "arc/market.hpp"
#include "arc/policy.hpp"

namespace arc {

/// Matrix of simulated excess returns, one row per path.
struct NoiseMatrix {
    std::size_t n_paths = 0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    std::vector<double> z; // row-major, n_paths x steps

    double at(std::size_t path, std::size_t t) const { return z[path * steps + t]; }
};

/// Draws z = mu + sigma * eps with eps standard normal from the
/// counter-based generator: entry (path, t) depends only on (seed, path, t),
/// so runs are reproducible across thread counts and path-count changes.
NoiseMatrix simulate_noise(const ModelParams& theta_star, std::size_t n_paths,
                           std::size_t steps, std::uint64_t seed);

/// Simulated wealth trajectories with the applied controls and the online
/// estimator states recorded alongside; the generating configuration is
/// echoed so the run can be replayed from the artifact alone.
struct WealthPaths {
    std::size_t n_paths = 0;
    std::size_t steps = 0;
    std::uint64_t seed = 0;
    MarketConfig config;
    double v0 = 0.0;
    std::vector<double> wealth;  // n_paths x (steps + 1)
    std::vector<double> action;  // n_paths x steps (action values)
    std::vector<double> mean;    // n_paths x (steps + 1)
    std::vector<double> var;     // n_paths x (steps + 1)

    double wealth_at(std::size_t p, std::size_t t) const {
        return wealth[p * (steps + 1) + t];
    }
    double action_at(std::size_t p, std::size_t t) const { return action[p * steps + t]; }
    double mean_at(std::size_t p, std::size_t t) const { return mean[p * (steps + 1) + t]; }
    double var_at(std::size_t p, std::size_t t) const { return var[p * (steps + 1) + t]; }

    std::vector<double> terminal() const;
};

/// Rolls the policy through the wealth recursion V' = V (1 + r + a z) with
/// online estimator updates, starting each path at (v0, c0). The policy is
/// queried at the current estimator state; state-independent rules ignore
/// it. Throws StructuralError naming (path, t) if a gross return is not
/// positive.
WealthPaths run_strategy(const Policy& policy, const NoiseMatrix& noise,
                         const MarketConfig& cfg, Case kind, double v0);

} // namespace arc
