#include "arc/solver.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "arc/errors.hpp"
#include "arc/parallel.hpp"

namespace arc {

namespace {

// Continuation evaluator over the t+1 level of the grid.
class LevelLookup {
  public:
    LevelLookup(const StateGrid& grid, std::size_t next_t, const std::vector<double>& values,
                Lookup mode)
        : grid_(grid), t_(next_t), values_(values), mode_(mode) {}

    double operator()(const EstimatorState& c) const {
        if (mode_ == Lookup::Linear && grid_.kind() == Case::MeanOnly) {
            const auto w = grid_.interp1d(t_, c.mean);
            return (1.0 - w.w) * values_[w.i] + w.w * values_[w.j];
        }
        return values_[grid_.nearest(t_, c.mean, c.var)];
    }

  private:
    const StateGrid& grid_;
    std::size_t t_;
    const std::vector<double>& values_;
    Lookup mode_;
};

struct Propagator {
    Case kind;
    const ParameterSpace& space;

    EstimatorState operator()(const EstimatorState& c, double z) const {
        return kind == Case::MeanOnly ? update_mean(c, z, space)
                                      : update_mean_var(c, z, space);
    }
};

// max over actions of min over thetas; strict comparisons keep the first
// maximizer / first minimizer, which makes ties deterministic.
template <typename Eval>
void max_min(const std::vector<double>& actions, const std::vector<ModelParams>& thetas,
             Eval&& eval, double& best_value, int& best_action, ModelParams& best_worst) {
    best_value = -std::numeric_limits<double>::infinity();
    best_action = 0;
    best_worst = thetas.front();
    for (std::size_t ai = 0; ai < actions.size(); ++ai) {
        double worst = std::numeric_limits<double>::infinity();
        ModelParams worst_theta = thetas.front();
        for (const ModelParams& th : thetas) {
            const double v = eval(actions[ai], th);
            if (v < worst) {
                worst = v;
                worst_theta = th;
            }
        }
        if (worst > best_value) {
            best_value = worst;
            best_action = static_cast<int>(ai);
            best_worst = worst_theta;
        }
    }
}

// Grid-state variant of max_min. The propagated state, and with it the
// continuation value, does not depend on the action, so continuation
// lookups are hoisted out of the action loop (theta outer, actions inner).
// Scan order keeps the tie-breaking and the floating-point sums identical
// to the plain formulation: per (action, theta) the same products are
// added in the same outcome order.
template <typename Cont, typename Prop>
void max_min_on_grid(const MarketConfig& cfg, const std::vector<ModelParams>& thetas,
                     const Cont& cont, const Prop& prop, const EstimatorState& c,
                     double& best_value, int& best_action, ModelParams& best_worst) {
    const Quantizer& q = cfg.quantizer;
    const std::size_t K = q.size();
    const double power = 1.0 - cfg.gamma;
    std::vector<double> z_real(K), cont_k(K), worst(cfg.actions.size(),
                                                    std::numeric_limits<double>::infinity());
    std::vector<ModelParams> worst_theta(cfg.actions.size(), thetas.front());

    for (const ModelParams& th : thetas) {
        const double sigma = std::sqrt(th.var);
        for (std::size_t k = 0; k < K; ++k) {
            z_real[k] = th.mu + sigma * q.points[k];
            cont_k[k] = cont(prop(c, z_real[k]));
        }
        for (std::size_t ai = 0; ai < cfg.actions.size(); ++ai) {
            const double a = cfg.actions[ai];
            double v = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                v += q.weights[k] * std::pow(1.0 + cfg.r + a * z_real[k], power) * cont_k[k];
            }
            if (v < worst[ai]) {
                worst[ai] = v;
                worst_theta[ai] = th;
            }
        }
    }
    best_value = -std::numeric_limits<double>::infinity();
    best_action = 0;
    best_worst = thetas.front();
    for (std::size_t ai = 0; ai < cfg.actions.size(); ++ai) {
        if (worst[ai] > best_value) {
            best_value = worst[ai];
            best_action = static_cast<int>(ai);
            best_worst = worst_theta[ai];
        }
    }
}

// Scalar recursion shared by the true-model and robust solvers: the
// adversary set is state-independent and the continuation is a constant
// per time step.
Solution solve_scalar(const MarketConfig& cfg, Method method,
                      const std::vector<ModelParams>& thetas) {
    cfg.validate();
    if (thetas.empty()) {
        throw StructuralError("solve_scalar: empty adversary set");
    }
    const std::size_t T = cfg.horizon_steps;
    ValueTable table;
    table.method = method;
    table.value.assign(T + 1, std::vector<double>(1));
    table.action.assign(T, std::vector<int>(1));
    table.worst.assign(T, std::vector<ModelParams>(1));
    table.value[T][0] = cfg.terminal_value();

    const EstimatorState dummy{};
    const auto keep = [](const EstimatorState& c, double) { return c; };
    for (std::size_t t = T; t-- > 0;) {
        const double next = table.value[t + 1][0];
        double best;
        int best_a;
        ModelParams best_th;
        max_min(
            cfg.actions, thetas,
            [&](double a, const ModelParams& th) {
                return step_utility(a, th, cfg.quantizer, cfg.r, cfg.gamma,
                                    [&](const EstimatorState&) { return next; }, keep, dummy);
            },
            best, best_a, best_th);
        table.value[t][0] = best;
        table.action[t][0] = best_a;
        table.worst[t][0] = best_th;
    }

    std::vector<int> actions_by_t(T);
    for (std::size_t t = 0; t < T; ++t) {
        actions_by_t[t] = table.action[t][0];
    }
    return {std::move(table), Policy(method, Policy::PerStep{std::move(actions_by_t)})};
}

} // namespace

RegionProvider confidence_region_provider(const MarketConfig& cfg, Case kind,
                                          std::size_t resolution, std::size_t shells) {
    const double sigma = std::sqrt(cfg.true_params.var);
    const double alpha = cfg.alpha;
    const ParameterSpace space = cfg.space;
    const std::int64_t n_offset = cfg.n_offset;
    if (kind == Case::MeanOnly) {
        return [=](std::size_t, const EstimatorState& c) {
            return discretize_region(region_case1(c, sigma, alpha, space, n_offset),
                                     resolution);
        };
    }
    return [=](std::size_t, const EstimatorState& c) {
        const ConfidenceRegion r = region_case2(c, alpha, space, n_offset);
        if (r.full) {
            return discretize_region(r, resolution);
        }
        return discretize_ellipsoid(r, resolution, shells);
    };
}

Solution solve_true_model(const MarketConfig& cfg, const ModelParams& theta) {
    if (!cfg.space.contains(theta)) {
        throw std::invalid_argument("solve_true_model: theta outside the rectangle");
    }
    return solve_scalar(cfg, Method::TrueModel, {theta});
}

std::vector<ModelParams> theta_lattice(const ParameterSpace& space, std::size_t n_mu,
                                       std::size_t n_var) {
    if (n_mu == 0 || n_var == 0) {
        throw std::invalid_argument("theta_lattice: resolutions must be positive");
    }
    if (space.var_hi == space.var_lo) {
        n_var = 1;
    }
    if (space.mu_hi == space.mu_lo) {
        n_mu = 1;
    }
    std::vector<ModelParams> out;
    out.reserve(n_mu * n_var);
    for (std::size_t i = 0; i < n_mu; ++i) {
        const double fm = n_mu > 1 ? static_cast<double>(i) / (n_mu - 1) : 0.0;
        for (std::size_t j = 0; j < n_var; ++j) {
            const double fv = n_var > 1 ? static_cast<double>(j) / (n_var - 1) : 0.0;
            out.push_back({space.mu_lo + fm * (space.mu_hi - space.mu_lo),
                           space.var_lo + fv * (space.var_hi - space.var_lo)});
        }
    }
    return out;
}

Solution solve_robust(const MarketConfig& cfg, Case kind, std::size_t resolution,
                      std::size_t shells) {
    // The adversary set is the whole discretized rectangle: the no-data
    // confidence region of the corresponding case.
    EstimatorState no_data = cfg.init_state;
    no_data.n = 0;
    std::vector<ModelParams> thetas;
    if (kind == Case::MeanOnly) {
        thetas = discretize_region(
            region_case1(no_data, std::sqrt(cfg.true_params.var), cfg.alpha, cfg.space, 0),
            resolution);
    } else {
        ConfidenceRegion full;
        full.kind = ConfidenceRegion::Kind::Ellipsoid;
        full.full = true;
        full.clip = cfg.space;
        full.center = project({no_data.mean, no_data.var}, cfg.space);
        thetas = discretize_ellipsoid(full, resolution, shells);
    }
    return solve_scalar(cfg, Method::Robust, thetas);
}

Policy solve_adaptive_family(const MarketConfig& cfg,
                             const std::vector<ModelParams>& theta_grid) {
    if (theta_grid.empty()) {
        throw std::invalid_argument("solve_adaptive_family: empty theta grid");
    }
    Policy::Family fam;
    fam.thetas = theta_grid;
    fam.space = cfg.space;
    fam.action_by_theta_t.resize(theta_grid.size());
    parallel_for(theta_grid.size(), [&](std::size_t j) {
        if (!cfg.space.contains(theta_grid[j])) {
            throw std::invalid_argument("solve_adaptive_family: theta outside the rectangle");
        }
        Solution s = solve_true_model(cfg, theta_grid[j]);
        std::vector<int> by_t(cfg.horizon_steps);
        for (std::size_t t = 0; t < cfg.horizon_steps; ++t) {
            by_t[t] = s.table.action[t][0];
        }
        fam.action_by_theta_t[j] = std::move(by_t);
    });
    return Policy(Method::Adaptive, std::move(fam));
}

Solution solve_adaptive_robust(const MarketConfig& cfg,
                               std::shared_ptr<const StateGrid> grid,
                               const RegionProvider& regions) {
    cfg.validate();
    if (!grid) {
        throw StructuralError("solve_adaptive_robust: missing state grid");
    }
    if (grid->horizon() != cfg.horizon_steps) {
        throw StructuralError("solve_adaptive_robust: grid horizon " +
                              std::to_string(grid->horizon()) + " != config horizon " +
                              std::to_string(cfg.horizon_steps));
    }
    const std::size_t T = cfg.horizon_steps;
    const Propagator prop{grid->kind(), cfg.space};

    ValueTable table;
    table.method = Method::AdaptiveRobust;
    table.value.resize(T + 1);
    table.action.resize(T);
    table.worst.resize(T);
    table.value[T].assign(grid->level(T).size(), cfg.terminal_value());

    for (std::size_t t = T; t-- > 0;) {
        const auto& level = grid->level(t);
        table.value[t].resize(level.size());
        table.action[t].resize(level.size());
        table.worst[t].resize(level.size());
        const LevelLookup cont(*grid, t + 1, table.value[t + 1], cfg.lookup);
        parallel_for(level.size(), [&](std::size_t i) {
            const EstimatorState& c = level[i];
            const auto thetas = regions(t, c);
            if (thetas.empty()) {
                throw StructuralError("solve_adaptive_robust: empty region set at t = " +
                                      std::to_string(t));
            }
            double best;
            int best_a;
            ModelParams best_th;
            max_min_on_grid(cfg, thetas, cont, prop, c, best, best_a, best_th);
            table.value[t][i] = best;
            table.action[t][i] = best_a;
            table.worst[t][i] = best_th;
        });
    }

    Policy policy(Method::AdaptiveRobust, Policy::GridTable{grid, table.action});
    return {std::move(table), std::move(policy)};
}

Solution solve_adaptive_robust(const MarketConfig& cfg,
                               std::shared_ptr<const StateGrid> grid,
                               std::size_t region_resolution, std::size_t region_shells) {
    if (!grid) {
        throw StructuralError("solve_adaptive_robust: missing state grid");
    }
    return solve_adaptive_robust(
        cfg, grid,
        confidence_region_provider(cfg, grid->kind(), region_resolution, region_shells));
}

double evaluate_policy_worstcase(const MarketConfig& cfg, const Policy& policy,
                                 std::shared_ptr<const StateGrid> grid,
                                 const RegionProvider& regions) {
    cfg.validate();
    if (!grid || grid->horizon() != cfg.horizon_steps) {
        throw StructuralError("evaluate_policy_worstcase: grid does not match config");
    }
    const std::size_t T = cfg.horizon_steps;
    const Propagator prop{grid->kind(), cfg.space};

    std::vector<double> next(grid->level(T).size(), cfg.terminal_value());
    for (std::size_t t = T; t-- > 0;) {
        const auto& level = grid->level(t);
        std::vector<double> cur(level.size());
        const LevelLookup cont(*grid, t + 1, next, cfg.lookup);
        parallel_for(level.size(), [&](std::size_t i) {
            const EstimatorState& c = level[i];
            const double a = cfg.actions[static_cast<std::size_t>(policy.action_index(t, c))];
            const auto thetas = regions(t, c);
            if (thetas.empty()) {
                throw StructuralError("evaluate_policy_worstcase: empty region set at t = " +
                                      std::to_string(t));
            }
            double worst = std::numeric_limits<double>::infinity();
            for (const ModelParams& th : thetas) {
                const double v =
                    step_utility(a, th, cfg.quantizer, cfg.r, cfg.gamma, cont, prop, c);
                if (v < worst) {
                    worst = v;
                }
            }
            cur[i] = worst;
        });
        next = std::move(cur);
    }
    if (next.size() != 1) {
        throw StructuralError("evaluate_policy_worstcase: root level is not a singleton");
    }
    return next.front();
}

double evaluate_policy_worstcase(const MarketConfig& cfg, const Policy& policy,
                                 std::shared_ptr<const StateGrid> grid,
                                 std::size_t region_resolution, std::size_t region_shells) {
    if (!grid) {
        throw StructuralError("evaluate_policy_worstcase: missing state grid");
    }
    return evaluate_policy_worstcase(
        cfg, policy, grid,
        confidence_region_provider(cfg, grid->kind(), region_resolution, region_shells));
}

} // namespace arc
