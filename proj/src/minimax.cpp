#include "arc/minimax.hpp"

#include <limits>
#include <string>

#include "arc/errors.hpp"

namespace arc {

MinimaxSolution solve_minimax(const MinimaxProblem& p) {
    if (p.stage_sizes.size() != p.horizon + 1) {
        throw StructuralError("solve_minimax: stage_sizes must have horizon + 1 entries");
    }
    if (p.n_actions == 0 || p.outcome_weights.empty()) {
        throw StructuralError("solve_minimax: need actions and outcomes");
    }

    MinimaxSolution sol;
    sol.value.resize(p.horizon + 1);
    sol.action.resize(p.horizon);
    sol.worst.resize(p.horizon);

    sol.value[p.horizon].resize(p.stage_sizes[p.horizon]);
    for (std::size_t i = 0; i < p.stage_sizes[p.horizon]; ++i) {
        sol.value[p.horizon][i] = p.terminal(i);
    }

    for (std::size_t t = p.horizon; t-- > 0;) {
        const std::size_t n = p.stage_sizes[t];
        sol.value[t].resize(n);
        sol.action[t].resize(n);
        sol.worst[t].resize(n);
        const auto& next_values = sol.value[t + 1];
        for (std::size_t i = 0; i < n; ++i) {
            const auto thetas = p.regions(t, i);
            if (thetas.empty()) {
                throw StructuralError("solve_minimax: empty adversary set at t = " +
                                      std::to_string(t));
            }
            double best = -std::numeric_limits<double>::infinity();
            int best_a = 0;
            ModelParams best_th = thetas.front();
            for (std::size_t a = 0; a < p.n_actions; ++a) {
                double worst = std::numeric_limits<double>::infinity();
                ModelParams worst_th = thetas.front();
                for (std::size_t j = 0; j < thetas.size(); ++j) {
                    double v = 0.0;
                    for (std::size_t k = 0; k < p.outcome_weights.size(); ++k) {
                        v += p.outcome_weights[k] * p.factor(t, i, a, j, k) *
                             next_values[p.next(t, i, a, j, k)];
                    }
                    if (v < worst) {
                        worst = v;
                        worst_th = thetas[j];
                    }
                }
                if (worst > best) {
                    best = worst;
                    best_a = static_cast<int>(a);
                    best_th = worst_th;
                }
            }
            sol.value[t][i] = best;
            sol.action[t][i] = best_a;
            sol.worst[t][i] = best_th;
        }
    }
    return sol;
}

} // namespace arc
