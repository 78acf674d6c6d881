#include "arc/quantizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "arc/errors.hpp"
#include "arc/normal.hpp"

namespace arc {

namespace {

// Voronoi boundaries b_0..b_n with b_0 = -inf, b_n = +inf.
std::vector<double> boundaries(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> b(n + 1);
    b[0] = -std::numeric_limits<double>::infinity();
    b[n] = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        b[i] = 0.5 * (x[i - 1] + x[i]);
    }
    return b;
}

std::vector<double> cell_weights(const std::vector<double>& b) {
    std::vector<double> w(b.size() - 1);
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = normal_cdf(b[i + 1]) - normal_cdf(b[i]);
    }
    return w;
}

} // namespace

std::vector<double> lloyd_step(const std::vector<double>& points) {
    const auto b = boundaries(points);
    const auto w = cell_weights(b);
    std::vector<double> m(points.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        // Integral of z phi(z) over [a, b] is phi(a) - phi(b); phi(+-inf) = 0.
        const double pa = std::isinf(b[i]) ? 0.0 : normal_pdf(b[i]);
        const double pb = std::isinf(b[i + 1]) ? 0.0 : normal_pdf(b[i + 1]);
        m[i] = (pa - pb) / w[i];
    }
    return m;
}

Quantizer build_normal_quantizer(std::size_t n, double tol, std::size_t max_iter) {
    if (n == 0) {
        throw std::invalid_argument("build_normal_quantizer: n must be positive");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("build_normal_quantizer: tol must be positive");
    }

    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = normal_quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    }

    double residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < max_iter; ++it) {
        auto m = lloyd_step(x);
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            residual = std::max(residual, std::abs(m[i] - x[i]));
        }
        x = std::move(m);
        if (residual <= tol) {
            Quantizer q;
            q.points = std::move(x);
            q.weights = cell_weights(boundaries(q.points));
            return q;
        }
    }
    throw ConvergenceError("build_normal_quantizer: no fixed point after " +
                               std::to_string(max_iter) + " Lloyd steps (residual " +
                               std::to_string(residual) + ")",
                           residual);
}

} // namespace arc
