#include "arc/market.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace arc {

void MarketConfig::validate() const {
    if (gamma == 1.0) {
        throw std::invalid_argument("MarketConfig: gamma must differ from 1");
    }
    if (actions.empty()) {
        throw std::invalid_argument("MarketConfig: action set is empty");
    }
    for (double a : actions) {
        if (!(a >= 0.0 && a <= 1.0)) {
            throw std::invalid_argument("MarketConfig: action " + std::to_string(a) +
                                        " outside [0, 1]");
        }
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("MarketConfig: alpha must lie in (0, 1)");
    }
    if (quantizer.size() == 0) {
        throw std::invalid_argument("MarketConfig: quantizer is empty");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("MarketConfig: dt must be positive");
    }
    space.validate();
    if (!space.contains(true_params)) {
        throw std::invalid_argument("MarketConfig: true parameters outside the rectangle");
    }
    if (!space.contains({init_state.mean, init_state.var})) {
        throw std::invalid_argument("MarketConfig: initial estimate outside the rectangle");
    }
    if (init_state.n != 0) {
        throw std::invalid_argument("MarketConfig: initial estimator state must have n = 0");
    }

    // CRRA power needs a positive gross return for every reachable
    // combination. The gross return is monotone in mu and in sigma for a
    // fixed-sign quantizer point, so rectangle corners x extreme points
    // cover the whole rectangle.
    const double mus[2] = {space.mu_lo, space.mu_hi};
    const double sigs[2] = {std::sqrt(space.var_lo), std::sqrt(space.var_hi)};
    const double zs[2] = {quantizer.points.front(), quantizer.points.back()};
    for (double a : actions) {
        for (double mu : mus) {
            for (double sig : sigs) {
                for (double z : zs) {
                    const double gross = 1.0 + r + a * (mu + sig * z);
                    if (!(gross > 0.0)) {
                        throw std::invalid_argument(
                            "MarketConfig: gross return " + std::to_string(gross) +
                            " <= 0 at action " + std::to_string(a) + ", mu " +
                            std::to_string(mu) + ", sigma " + std::to_string(sig) +
                            ", z " + std::to_string(z));
                    }
                }
            }
        }
    }
}

} // namespace arc
