#include "arc/policy.hpp"

#include <cmath>
#include <limits>

#include "arc/errors.hpp"

namespace arc {

std::string method_tag(Method m) {
    switch (m) {
        case Method::TrueModel: return "true";
        case Method::Robust: return "robust";
        case Method::Adaptive: return "adaptive";
        case Method::AdaptiveRobust: return "adaptive_robust";
    }
    return "?";
}

Policy::Policy(Method method, PerStep rule)
    : method_(method), horizon_(rule.action_by_t.size()), rule_(std::move(rule)) {}

Policy::Policy(Method method, Family rule)
    : method_(method),
      horizon_(rule.action_by_theta_t.empty() ? 0 : rule.action_by_theta_t.front().size()),
      rule_(std::move(rule)) {
    const auto& fam = std::get<Family>(rule_);
    if (fam.thetas.empty() || fam.thetas.size() != fam.action_by_theta_t.size()) {
        throw StructuralError("Policy: family rule needs one action table per theta");
    }
}

Policy::Policy(Method method, GridTable rule)
    : method_(method), horizon_(rule.action_by_t_state.size()), rule_(std::move(rule)) {
    const auto& gt = std::get<GridTable>(rule_);
    if (!gt.grid || gt.grid->horizon() != horizon_) {
        throw StructuralError("Policy: grid table does not match its state grid");
    }
}

std::size_t Policy::nearest_theta(const EstimatorState& c) const {
    const auto& fam = std::get<Family>(rule_);
    const double wm = fam.space.mu_hi > fam.space.mu_lo ? fam.space.mu_hi - fam.space.mu_lo : 1.0;
    const double wv = fam.space.var_hi > fam.space.var_lo ? fam.space.var_hi - fam.space.var_lo : 1.0;
    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t j = 0; j < fam.thetas.size(); ++j) {
        const double dm = (fam.thetas[j].mu - c.mean) / wm;
        const double dv = (fam.thetas[j].var - c.var) / wv;
        const double d2 = dm * dm + dv * dv;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = j;
        }
    }
    return best;
}

int Policy::action_index(std::size_t t, const EstimatorState& c) const {
    if (t >= horizon_) {
        throw StructuralError("Policy: no action defined at t = " + std::to_string(t) +
                              " (state mean " + std::to_string(c.mean) + ", var " +
                              std::to_string(c.var) + ")");
    }
    if (const auto* ps = std::get_if<PerStep>(&rule_)) {
        return ps->action_by_t[t];
    }
    if (const auto* fam = std::get_if<Family>(&rule_)) {
        return fam->action_by_theta_t[nearest_theta(c)][t];
    }
    const auto& gt = std::get<GridTable>(rule_);
    return gt.action_by_t_state[t][gt.grid->nearest(t, c.mean, c.var)];
}

} // namespace arc
