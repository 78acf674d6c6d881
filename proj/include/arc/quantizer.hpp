#pragma once

#include <cstddef>
#include <vector>

namespace arc {

/// Finite point/weight approximation of the standard normal law.
///
/// A quantizer is Lloyd-stationary when every point coincides with the
/// conditional mean of the distribution over its Voronoi cell; the weights
/// are the cell probabilities. Points are strictly increasing, weights sum
/// to one, and the construction is symmetric about zero.
struct Quantizer {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const noexcept { return points.size(); }

    /// Quantized expectation: sum_i weights[i] * f(points[i]).
    template <typename F>
    double expect(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            s += weights[i] * f(points[i]);
        }
        return s;
    }
};

/// Builds an n-point quantizer of N(0,1) by Lloyd's fixed-point iteration,
/// initialized at the equiprobable quantiles Phi^{-1}((i+0.5)/n). Cell
/// probabilities and conditional means are evaluated in closed form from
/// the normal CDF/PDF, so the result is deterministic.
///
/// Converged means no point moves by more than `tol` in one Lloyd step.
/// Throws ConvergenceError (carrying the last residual) if `max_iter`
/// steps do not get there, and std::invalid_argument for bad arguments.
Quantizer build_normal_quantizer(std::size_t n, double tol = 1e-10,
                                 std::size_t max_iter = 200000);

/// One Lloyd step applied to the given points: returns the Voronoi cell
/// centroids. Exposed so stationarity can be checked from the outside.
std::vector<double> lloyd_step(const std::vector<double>& points);

} // namespace arc
