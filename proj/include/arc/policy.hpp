#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "arc/estimator.hpp"
#include "arc/params.hpp"
#include "arc/state_grid.hpp"

namespace arc {

enum class Method { TrueModel, Robust, Adaptive, AdaptiveRobust };

std::string method_tag(Method m);

/// A feedback control rule: maps (time step, estimator state) to an index
/// into the configured action set. Three shapes cover the four methods:
/// a per-step action sequence (true-model and robust rules ignore the
/// state), a certainty-equivalent family indexed by the nearest candidate
/// parameter, and a per-grid-state table with nearest-neighbor lookup.
class Policy {
  public:
    struct PerStep {
        std::vector<int> action_by_t;
    };
    struct Family {
        std::vector<ModelParams> thetas;
        std::vector<std::vector<int>> action_by_theta_t;
        ParameterSpace space; // per-axis normalization for the nearest lookup
    };
    struct GridTable {
        std::shared_ptr<const StateGrid> grid;
        std::vector<std::vector<int>> action_by_t_state;
    };

    Policy(Method method, PerStep rule);
    Policy(Method method, Family rule);
    Policy(Method method, GridTable rule);

    Method method() const noexcept { return method_; }
    std::size_t horizon() const noexcept { return horizon_; }

    /// Action index for time step t at estimator state c. Throws
    /// StructuralError naming (t, state) when the rule is not defined there.
    int action_index(std::size_t t, const EstimatorState& c) const;

    /// Index of the family member the rule would select for state c
    /// (family policies only; ties go to the lower index).
    std::size_t nearest_theta(const EstimatorState& c) const;

  private:
    Method method_;
    std::size_t horizon_;
    std::variant<PerStep, Family, GridTable> rule_;
};

} // namespace arc
