#pragma once

#include <cstddef>
#include <vector>

#include "arc/estimator.hpp"
#include "arc/params.hpp"

namespace arc {

/// A (1-alpha) confidence region for the unknown model parameter,
/// intersected with the parameter rectangle.
///
/// Two shapes arise: an interval for the mean when the variance is known,
/// and a chi-squared (2 dof) ellipsoid for (mean, variance). With no data
/// (n = 0, or a degenerate variance estimate) the region is the whole
/// rectangle; that case is carried explicitly by `full`.
struct ConfidenceRegion {
    enum class Kind { Interval, Ellipsoid };

    Kind kind = Kind::Interval;
    ModelParams center;       // clamped into clip
    double radius = 0.0;      // interval half-width (before clipping)
    double kappa = 0.0;       // chi-squared level (ellipsoid only)
    double semi_mu = 0.0;     // ellipsoid semi-axes
    double semi_var = 0.0;
    bool full = false;        // no-data case: region == clip
    ParameterSpace clip;

    /// Membership test (ellipsoid form evaluated with a 1e-12 relative
    /// slack so boundary points generated by the discretizer pass).
    bool contains(const ModelParams& p) const;

    /// Tight parameter bounds of the region: intersection of the shape's
    /// bounding box with the rectangle.
    ParameterSpace bounds() const;
};

/// Interval region for the mean: center +- sigma/sqrt(n) * Phi^{-1}(1-alpha/2),
/// clipped to [mu_lo, mu_hi]. With n = 0 the full mu-range is returned.
/// `n_offset` counts extra pseudo-observations attributed to the initial
/// guess (0 by default).
ConfidenceRegion region_case1(const EstimatorState& state, double sigma, double alpha,
                              const ParameterSpace& space, std::int64_t n_offset = 0);

/// Ellipsoid region for (mean, variance):
///   n/var (mean-mu)^2 + n/(2 var^2) (var-sigma^2)^2 <= kappa,
/// kappa the (1-alpha) chi-squared(2) quantile, intersected with the
/// rectangle. n = 0 or var = 0 yields the full rectangle.
ConfidenceRegion region_case2(const EstimatorState& state, double alpha,
                              const ParameterSpace& space, std::int64_t n_offset = 0);

/// Finite search set covering the region, every point a member:
///  - interval: `resolution` equally spaced points including both endpoints;
///  - ellipsoid: polar grid of `n_angles` angles by `n_shells` radial shells
///    (center counts as the innermost shell), clipped into the rectangle,
///    plus the region's extreme points along each axis; exact duplicates
///    removed;
///  - full rectangle: `resolution` x `resolution` lattice including corners.
std::vector<ModelParams> discretize_region(const ConfidenceRegion& region,
                                           std::size_t resolution);
std::vector<ModelParams> discretize_ellipsoid(const ConfidenceRegion& region,
                                              std::size_t n_angles,
                                              std::size_t n_shells);

} // namespace arc
