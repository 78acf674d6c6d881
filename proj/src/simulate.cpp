#include "arc/simulate.hpp"

#include <cmath>
#include <string>

#include "arc/errors.hpp"
#include "arc/parallel.hpp"
#include "arc/rng.hpp"

namespace arc {

NoiseMatrix simulate_noise(const ModelParams& theta_star, std::size_t n_paths,
                           std::size_t steps, std::uint64_t seed) {
    if (theta_star.var < 0.0) {
        throw std::invalid_argument("simulate_noise: negative variance");
    }
    NoiseMatrix m;
    m.n_paths = n_paths;
    m.steps = steps;
    m.seed = seed;
    m.z.resize(n_paths * steps);
    const double sigma = std::sqrt(theta_star.var);
    parallel_for(n_paths, [&](std::size_t p) {
        for (std::size_t t = 0; t < steps; ++t) {
            m.z[p * steps + t] = theta_star.mu + sigma * normal_draw(seed, p, t);
        }
    });
    return m;
}

std::vector<double> WealthPaths::terminal() const {
    std::vector<double> out(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        out[p] = wealth_at(p, steps);
    }
    return out;
}

WealthPaths run_strategy(const Policy& policy, const NoiseMatrix& noise,
                         const MarketConfig& cfg, Case kind, double v0) {
    if (policy.horizon() < noise.steps) {
        throw StructuralError("run_strategy: policy horizon " +
                              std::to_string(policy.horizon()) + " shorter than noise (" +
                              std::to_string(noise.steps) + " steps)");
    }
    WealthPaths out;
    out.n_paths = noise.n_paths;
    out.steps = noise.steps;
    out.seed = noise.seed;
    out.config = cfg;
    out.v0 = v0;
    out.wealth.resize(noise.n_paths * (noise.steps + 1));
    out.action.resize(noise.n_paths * noise.steps);
    out.mean.resize(noise.n_paths * (noise.steps + 1));
    out.var.resize(noise.n_paths * (noise.steps + 1));

    parallel_for(noise.n_paths, [&](std::size_t p) {
        EstimatorState c = cfg.init_state;
        double v = v0;
        out.wealth[p * (noise.steps + 1)] = v;
        out.mean[p * (noise.steps + 1)] = c.mean;
        out.var[p * (noise.steps + 1)] = c.var;
        for (std::size_t t = 0; t < noise.steps; ++t) {
            const int ai = policy.action_index(t, c);
            const double a = cfg.actions[static_cast<std::size_t>(ai)];
            const double z = noise.at(p, t);
            const double gross = 1.0 + cfg.r + a * z;
            if (!(gross > 0.0)) {
                throw StructuralError("run_strategy: non-positive gross return at path " +
                                      std::to_string(p) + ", t = " + std::to_string(t));
            }
            v *= gross;
            c = kind == Case::MeanOnly ? update_mean(c, z, cfg.space)
                                       : update_mean_var(c, z, cfg.space);
            out.action[p * noise.steps + t] = a;
            out.wealth[p * (noise.steps + 1) + t + 1] = v;
            out.mean[p * (noise.steps + 1) + t + 1] = c.mean;
            out.var[p * (noise.steps + 1) + t + 1] = c.var;
        }
    });
    return out;
}

} // namespace arc
