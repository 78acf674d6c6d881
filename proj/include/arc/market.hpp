#pragma once

#include <cstdint>
#include <vector>

#include "arc/estimator.hpp"
#include "arc/params.hpp"
#include "arc/quantizer.hpp"

namespace arc {

/// Which parameters are unknown: mean only, or mean and variance.
enum class Case { MeanOnly, MeanVariance };

/// Continuation-value lookup on the state grid.
enum class Lookup { Nearest, Linear };

/// Per-step market model for one solve/simulation run. All rates and
/// parameters are per rebalancing step; `dt` records the step length in
/// years so outputs can be re-annualized.
struct MarketConfig {
    double r = 0.0;               // per-step risk-free rate
    double dt = 1.0;              // step length in years
    double gamma = 2.0;           // CRRA coefficient, != 1
    std::vector<double> actions;  // allocation fractions, each in [0, 1]
    std::size_t horizon_steps = 0;
    double alpha = 0.1;           // confidence level for the regions
    Quantizer quantizer;
    ParameterSpace space;         // per-step parameter rectangle
    ModelParams true_params;      // per-step truth, used by simulation
    EstimatorState init_state;    // c0, with n = 0
    std::int64_t n_offset = 0;    // pseudo-observations credited to c0
    Lookup lookup = Lookup::Nearest;

    double terminal_value() const { return 1.0 / (1.0 - gamma); }

    /// Checks every invariant, including positivity of the gross return
    /// 1 + r + a (mu + sigma z) over all actions, parameter-rectangle
    /// corners and quantizer points. Throws std::invalid_argument naming
    /// the violation.
    void validate() const;
};

} // namespace arc
