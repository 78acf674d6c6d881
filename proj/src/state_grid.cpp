#include "arc/state_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "arc/errors.hpp"
#include "arc/rng.hpp"

namespace arc {

namespace {

bool level_less(const EstimatorState& a, const EstimatorState& b) {
    return a.mean != b.mean ? a.mean < b.mean : a.var < b.var;
}

} // namespace

StateGrid::StateGrid(Case kind, std::vector<std::vector<EstimatorState>> levels,
                     const ParameterSpace& space)
    : kind_(kind), levels_(std::move(levels)) {
    if (levels_.empty()) {
        throw StructuralError("StateGrid: no levels");
    }
    for (std::size_t t = 0; t < levels_.size(); ++t) {
        auto& lv = levels_[t];
        if (lv.empty()) {
            throw StructuralError("StateGrid: empty level at t = " + std::to_string(t));
        }
        std::sort(lv.begin(), lv.end(), level_less);
        lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
    }
    mu_width_ = space.mu_hi - space.mu_lo;
    var_width_ = space.var_hi - space.var_lo;
    if (mu_width_ <= 0.0) {
        mu_width_ = 1.0;
    }
    if (var_width_ <= 0.0) {
        var_width_ = 1.0;
    }
    if (kind_ == Case::MeanVariance) {
        build_buckets();
    }
}

const std::vector<EstimatorState>& StateGrid::level(std::size_t t) const {
    if (t >= levels_.size()) {
        throw StructuralError("StateGrid: level " + std::to_string(t) + " out of range");
    }
    return levels_[t];
}

void StateGrid::build_buckets() {
    buckets_.resize(levels_.size());
    for (std::size_t t = 0; t < levels_.size(); ++t) {
        const auto& lv = levels_[t];
        BucketIndex& bi = buckets_[t];
        double xlo = lv.front().mean / mu_width_, xhi = xlo;
        double ylo = lv.front().var / var_width_, yhi = ylo;
        for (const auto& s : lv) {
            xlo = std::min(xlo, s.mean / mu_width_);
            xhi = std::max(xhi, s.mean / mu_width_);
            ylo = std::min(ylo, s.var / var_width_);
            yhi = std::max(yhi, s.var / var_width_);
        }
        const std::size_t n = static_cast<std::size_t>(
            std::max(1.0, std::ceil(std::sqrt(static_cast<double>(lv.size())))));
        bi.nx = bi.ny = n;
        bi.x0 = xlo;
        bi.y0 = ylo;
        bi.cw = std::max((xhi - xlo) / static_cast<double>(n), 1e-300);
        bi.ch = std::max((yhi - ylo) / static_cast<double>(n), 1e-300);
        bi.cells.assign(n * n, {});
        for (std::uint32_t i = 0; i < lv.size(); ++i) {
            const auto cx = std::min<std::size_t>(
                n - 1, static_cast<std::size_t>(std::max(0.0, (lv[i].mean / mu_width_ - xlo) / bi.cw)));
            const auto cy = std::min<std::size_t>(
                n - 1, static_cast<std::size_t>(std::max(0.0, (lv[i].var / var_width_ - ylo) / bi.ch)));
            bi.cells[cy * n + cx].push_back(i);
        }
    }
}

std::size_t StateGrid::nearest(std::size_t t, double mean, double var) const {
    const auto& lv = level(t);
    if (lv.size() == 1) {
        return 0;
    }

    if (kind_ == Case::MeanOnly) {
        auto it = std::lower_bound(lv.begin(), lv.end(), mean,
                                   [](const EstimatorState& s, double m) { return s.mean < m; });
        if (it == lv.begin()) {
            return 0;
        }
        if (it == lv.end()) {
            return lv.size() - 1;
        }
        const std::size_t hi = static_cast<std::size_t>(it - lv.begin());
        const std::size_t lo = hi - 1;
        // earlier index wins a tie
        return std::abs(lv[lo].mean - mean) <= std::abs(lv[hi].mean - mean) ? lo : hi;
    }

    const BucketIndex& bi = buckets_[t];
    const double x = mean / mu_width_;
    const double y = var / var_width_;
    const auto clamp_cell = [](double v, std::size_t n) {
        if (v < 0.0) return std::size_t{0};
        const std::size_t c = static_cast<std::size_t>(v);
        return c >= n ? n - 1 : c;
    };
    const std::size_t cx = clamp_cell((x - bi.x0) / bi.cw, bi.nx);
    const std::size_t cy = clamp_cell((y - bi.y0) / bi.ch, bi.ny);

    double best_d2 = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    const double min_cell = std::min(bi.cw, bi.ch);
    const std::size_t max_ring = std::max(bi.nx, bi.ny);
    for (std::size_t ring = 0; ring <= max_ring; ++ring) {
        if (ring > 0) {
            const double reach = (static_cast<double>(ring) - 1.0) * min_cell;
            if (reach > 0.0 && reach * reach > best_d2) {
                break;
            }
        }
        const std::ptrdiff_t r = static_cast<std::ptrdiff_t>(ring);
        for (std::ptrdiff_t dy = -r; dy <= r; ++dy) {
            for (std::ptrdiff_t dx = -r; dx <= r; ++dx) {
                if (std::max(std::abs(dx), std::abs(dy)) != r) {
                    continue; // ring boundary only
                }
                const std::ptrdiff_t gx = static_cast<std::ptrdiff_t>(cx) + dx;
                const std::ptrdiff_t gy = static_cast<std::ptrdiff_t>(cy) + dy;
                if (gx < 0 || gy < 0 || gx >= static_cast<std::ptrdiff_t>(bi.nx) ||
                    gy >= static_cast<std::ptrdiff_t>(bi.ny)) {
                    continue;
                }
                for (std::uint32_t idx : bi.cells[static_cast<std::size_t>(gy) * bi.nx +
                                                  static_cast<std::size_t>(gx)]) {
                    const double ddx = lv[idx].mean / mu_width_ - x;
                    const double ddy = lv[idx].var / var_width_ - y;
                    const double d2 = ddx * ddx + ddy * ddy;
                    if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
                        best_d2 = d2;
                        best = idx;
                    }
                }
            }
        }
    }
    return best;
}

StateGrid::Interp StateGrid::interp1d(std::size_t t, double mean) const {
    const auto& lv = level(t);
    if (lv.size() == 1 || mean <= lv.front().mean) {
        return {0, 0, 0.0};
    }
    if (mean >= lv.back().mean) {
        return {lv.size() - 1, lv.size() - 1, 0.0};
    }
    auto it = std::lower_bound(lv.begin(), lv.end(), mean,
                               [](const EstimatorState& s, double m) { return s.mean < m; });
    const std::size_t hi = static_cast<std::size_t>(it - lv.begin());
    const std::size_t lo = hi - 1;
    const double span = lv[hi].mean - lv[lo].mean;
    return {lo, hi, span > 0.0 ? (mean - lv[lo].mean) / span : 0.0};
}

StateGrid build_state_grid(const MarketConfig& cfg, Case kind, std::size_t n_paths,
                           std::uint64_t seed) {
    if (n_paths == 0) {
        throw std::invalid_argument("build_state_grid: need at least one path");
    }
    const std::size_t T = cfg.horizon_steps;
    const double sigma = std::sqrt(cfg.true_params.var);

    std::vector<std::vector<EstimatorState>> levels(T + 1);
    levels[0].push_back(cfg.init_state);
    std::vector<EstimatorState> states(n_paths, cfg.init_state);
    for (std::size_t t = 0; t < T; ++t) {
        auto& out = levels[t + 1];
        out.reserve(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            const double z = cfg.true_params.mu + sigma * normal_draw(seed, p, t);
            states[p] = kind == Case::MeanOnly ? update_mean(states[p], z, cfg.space)
                                               : update_mean_var(states[p], z, cfg.space);
            out.push_back(states[p]);
        }
    }
    return StateGrid(kind, std::move(levels), cfg.space);
}

} // namespace arc
