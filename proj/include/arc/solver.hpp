#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "arc/market.hpp"
#include "arc/policy.hpp"
#include "arc/region.hpp"
#include "arc/state_grid.hpp"

namespace arc {

/// Expected one-step CRRA factor times continuation value:
///   E_q[ (1 + r + a (mu + sigma eps))^{1-gamma}
///        * continuation(propagate(c, mu + sigma eps)) ].
/// `propagate` folds the realized excess return into the estimator state;
/// `continuation` evaluates the next-step value there.
template <typename Cont, typename Prop>
double step_utility(double action, const ModelParams& theta, const Quantizer& q, double r,
                    double gamma, Cont&& continuation, Prop&& propagate,
                    const EstimatorState& c) {
    const double sigma = std::sqrt(theta.var);
    const double power = 1.0 - gamma;
    double sum = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
        const double z = theta.mu + sigma * q.points[k];
        sum += q.weights[k] * std::pow(1.0 + r + action * z, power) *
               continuation(propagate(c, z));
    }
    return sum;
}

/// Backward-induction output: values on the grid for t = 0..T (the level-T
/// entries hold the terminal value), optimal action indices and attaining
/// adversary parameters for t = 0..T-1. Scalar methods carry one state per
/// time step.
struct ValueTable {
    Method method = Method::TrueModel;
    std::vector<std::vector<double>> value;
    std::vector<std::vector<int>> action;
    std::vector<std::vector<ModelParams>> worst;

    double root_value() const { return value.front().front(); }
};

struct Solution {
    ValueTable table;
    Policy policy;
};

/// Candidate adversary parameters offered at (t, state). The production
/// providers discretize the data-driven confidence regions; tests inject
/// custom (e.g. nested) sets through the same hook.
using RegionProvider =
    std::function<std::vector<ModelParams>(std::size_t t, const EstimatorState&)>;

/// Region provider backed by the confidence regions of the given case:
/// interval regions discretized at `resolution` points, ellipsoids on an
/// `resolution` x `shells` polar grid.
RegionProvider confidence_region_provider(const MarketConfig& cfg, Case kind,
                                          std::size_t resolution, std::size_t shells);

/// Scalar backward recursion under a single known parameter. The optimal
/// action maximizes the expected one-step CRRA factor times the
/// continuation value; ties go to the lowest action index.
Solution solve_true_model(const MarketConfig& cfg, const ModelParams& theta);

/// Scalar max-min recursion with the adversary ranging over the whole
/// discretized rectangle at every step (the no-learning game; the
/// history-dependent adversary attains the same value here).
Solution solve_robust(const MarketConfig& cfg, Case kind, std::size_t resolution,
                      std::size_t shells);

/// Certainty-equivalent family: one true-model solve per candidate
/// parameter; at run time the member nearest the current point estimate
/// (per-axis normalized, ties to the lower index) acts.
Policy solve_adaptive_family(const MarketConfig& cfg,
                             const std::vector<ModelParams>& theta_grid);

/// Uniform lattice over the parameter rectangle used as the default
/// certainty-equivalent family (n_var collapses to 1 when the variance
/// side is a point).
std::vector<ModelParams> theta_lattice(const ParameterSpace& space, std::size_t n_mu,
                                       std::size_t n_var);

/// Adaptive robust backward induction on the state grid: at each grid
/// state the adversary minimizes the expected utility over the offered
/// region set, the controller maximizes over actions, and continuation
/// values come from the t+1 level by nearest-neighbor (or linear) lookup.
/// Values and selectors are exact for this discretized game.
Solution solve_adaptive_robust(const MarketConfig& cfg,
                               std::shared_ptr<const StateGrid> grid,
                               const RegionProvider& regions);
Solution solve_adaptive_robust(const MarketConfig& cfg,
                               std::shared_ptr<const StateGrid> grid,
                               std::size_t region_resolution, std::size_t region_shells);

/// Fixes the policy and runs the adversary's best response over the same
/// discretization; returns the utility-scale value at the root state.
double evaluate_policy_worstcase(const MarketConfig& cfg, const Policy& policy,
                                 std::shared_ptr<const StateGrid> grid,
                                 const RegionProvider& regions);
double evaluate_policy_worstcase(const MarketConfig& cfg, const Policy& policy,
                                 std::shared_ptr<const StateGrid> grid,
                                 std::size_t region_resolution, std::size_t region_shells);

} // namespace arc
