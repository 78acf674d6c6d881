#pragma once

#include <cstdint>
#include <vector>

#include "arc/estimator.hpp"
#include "arc/market.hpp"

namespace arc {

/// Per-time-step collections of estimator states, obtained by simulating
/// estimator trajectories under the true model. Level t holds the distinct
/// states seen after t updates, sorted by (mean, var); level 0 is the
/// singleton {c0}.
///
/// Nearest-neighbor queries use Euclidean distance with each axis
/// normalized by the parameter-rectangle width; ties resolve to the
/// earlier state in level order.
class StateGrid {
  public:
    StateGrid(Case kind, std::vector<std::vector<EstimatorState>> levels,
              const ParameterSpace& space);

    Case kind() const noexcept { return kind_; }
    std::size_t horizon() const noexcept { return levels_.size() - 1; }
    const std::vector<EstimatorState>& level(std::size_t t) const;

    /// Index of the nearest state in level t.
    std::size_t nearest(std::size_t t, double mean, double var) const;

    /// Linear interpolation weights along the mean axis (one-dimensional
    /// grids): value = (1-w) * V[i] + w * V[j], clamped at the ends.
    struct Interp {
        std::size_t i;
        std::size_t j;
        double w;
    };
    Interp interp1d(std::size_t t, double mean) const;

  private:
    struct BucketIndex {
        std::size_t nx = 0, ny = 0;
        double x0 = 0.0, y0 = 0.0, cw = 1.0, ch = 1.0;
        std::vector<std::vector<std::uint32_t>> cells;
    };

    Case kind_;
    std::vector<std::vector<EstimatorState>> levels_;
    double mu_width_;
    double var_width_;
    std::vector<BucketIndex> buckets_; // built per level for 2-d grids

    void build_buckets();
};

/// Simulates `n_paths` estimator trajectories under cfg.true_params and
/// collects the state sets per time step. Deterministic in `seed`; noise
/// draws are indexed by (path, step) so enlarging n_paths keeps earlier
/// paths unchanged.
StateGrid build_state_grid(const MarketConfig& cfg, Case kind, std::size_t n_paths,
                           std::uint64_t seed);

} // namespace arc
