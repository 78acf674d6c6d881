#include "arc/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arc/normal.hpp"

namespace arc {

namespace {

constexpr double kMembershipSlack = 1e-12;
constexpr double kPi = 3.14159265358979323846;

void sort_unique(std::vector<ModelParams>& pts) {
    std::sort(pts.begin(), pts.end(), [](const ModelParams& a, const ModelParams& b) {
        return a.mu != b.mu ? a.mu < b.mu : a.var < b.var;
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

std::vector<ModelParams> lattice(const ParameterSpace& box, std::size_t n_mu,
                                 std::size_t n_var) {
    std::vector<ModelParams> pts;
    pts.reserve(n_mu * n_var);
    for (std::size_t i = 0; i < n_mu; ++i) {
        const double fm = n_mu > 1 ? static_cast<double>(i) / (n_mu - 1) : 0.0;
        const double mu = box.mu_lo + fm * (box.mu_hi - box.mu_lo);
        for (std::size_t j = 0; j < n_var; ++j) {
            const double fv = n_var > 1 ? static_cast<double>(j) / (n_var - 1) : 0.0;
            pts.push_back({mu, box.var_lo + fv * (box.var_hi - box.var_lo)});
        }
    }
    sort_unique(pts);
    return pts;
}

} // namespace

bool ConfidenceRegion::contains(const ModelParams& p) const {
    if (kind == Kind::Interval) {
        const double lo = full ? clip.mu_lo : std::max(center.mu - radius, clip.mu_lo);
        const double hi = full ? clip.mu_hi : std::min(center.mu + radius, clip.mu_hi);
        const double slack = kMembershipSlack * std::max(1.0, std::abs(radius));
        return p.mu >= lo - slack && p.mu <= hi + slack;
    }
    if (!clip.contains(p)) {
        return false;
    }
    if (full) {
        return true;
    }
    const double dm = (p.mu - center.mu) / semi_mu;
    const double dv = (p.var - center.var) / semi_var;
    return dm * dm + dv * dv <= 1.0 + kMembershipSlack;
}

ParameterSpace ConfidenceRegion::bounds() const {
    if (full) {
        return clip;
    }
    ParameterSpace b = clip;
    if (kind == Kind::Interval) {
        b.mu_lo = std::max(center.mu - radius, clip.mu_lo);
        b.mu_hi = std::min(center.mu + radius, clip.mu_hi);
    } else {
        b.mu_lo = std::max(center.mu - semi_mu, clip.mu_lo);
        b.mu_hi = std::min(center.mu + semi_mu, clip.mu_hi);
        b.var_lo = std::max(center.var - semi_var, clip.var_lo);
        b.var_hi = std::min(center.var + semi_var, clip.var_hi);
    }
    return b;
}

ConfidenceRegion region_case1(const EstimatorState& state, double sigma, double alpha,
                              const ParameterSpace& space, std::int64_t n_offset) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("region_case1: sigma must be positive");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("region_case1: alpha must lie in (0, 1)");
    }
    ConfidenceRegion r;
    r.kind = ConfidenceRegion::Kind::Interval;
    r.clip = space;
    r.center = project({state.mean, state.var}, space);
    const std::int64_t n = state.n + n_offset;
    if (n <= 0) {
        r.full = true;
        r.radius = 0.5 * (space.mu_hi - space.mu_lo);
        r.center.mu = 0.5 * (space.mu_lo + space.mu_hi);
        return r;
    }
    r.radius = sigma / std::sqrt(static_cast<double>(n)) * normal_quantile(1.0 - alpha / 2.0);
    return r;
}

ConfidenceRegion region_case2(const EstimatorState& state, double alpha,
                              const ParameterSpace& space, std::int64_t n_offset) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("region_case2: alpha must lie in (0, 1)");
    }
    ConfidenceRegion r;
    r.kind = ConfidenceRegion::Kind::Ellipsoid;
    r.clip = space;
    r.center = project({state.mean, state.var}, space);
    r.kappa = chi2_2_quantile(1.0 - alpha);
    const std::int64_t n = state.n + n_offset;
    if (n <= 0 || !(state.var > 0.0)) {
        r.full = true;
        return r;
    }
    const double nn = static_cast<double>(n);
    r.semi_mu = std::sqrt(r.kappa * state.var / nn);
    r.semi_var = state.var * std::sqrt(2.0 * r.kappa / nn);
    return r;
}

std::vector<ModelParams> discretize_ellipsoid(const ConfidenceRegion& region,
                                              std::size_t n_angles, std::size_t n_shells) {
    if (n_angles < 2 || n_shells < 2) {
        throw std::invalid_argument("discretize_ellipsoid: need at least 2 angles and shells");
    }
    if (region.full) {
        return lattice(region.clip, n_angles, n_shells);
    }
    std::vector<ModelParams> pts;
    pts.reserve((n_shells - 1) * n_angles + 5);
    pts.push_back(region.center);
    for (std::size_t s = 1; s < n_shells; ++s) {
        const double f = static_cast<double>(s) / (n_shells - 1);
        for (std::size_t j = 0; j < n_angles; ++j) {
            const double phi = 2.0 * kPi * static_cast<double>(j) / n_angles;
            pts.push_back(project({region.center.mu + f * region.semi_mu * std::cos(phi),
                                   region.center.var + f * region.semi_var * std::sin(phi)},
                                  region.clip));
        }
    }
    // Make sure the axis extremes are represented.
    const ModelParams extremes[4] = {
        {region.center.mu - region.semi_mu, region.center.var},
        {region.center.mu + region.semi_mu, region.center.var},
        {region.center.mu, region.center.var - region.semi_var},
        {region.center.mu, region.center.var + region.semi_var}};
    const double tol_mu = 1e-9 * std::max(1.0, region.semi_mu);
    const double tol_var = 1e-9 * std::max(1.0, region.semi_var);
    for (const ModelParams& raw : extremes) {
        const ModelParams e = project(raw, region.clip);
        const bool present =
            std::any_of(pts.begin(), pts.end(), [&](const ModelParams& p) {
                return std::abs(p.mu - e.mu) <= tol_mu && std::abs(p.var - e.var) <= tol_var;
            });
        if (!present) {
            pts.push_back(e);
        }
    }
    sort_unique(pts);
    return pts;
}

std::vector<ModelParams> discretize_region(const ConfidenceRegion& region,
                                           std::size_t resolution) {
    if (resolution < 2) {
        throw std::invalid_argument("discretize_region: resolution must be at least 2");
    }
    if (region.kind == ConfidenceRegion::Kind::Ellipsoid) {
        return discretize_ellipsoid(region, resolution, resolution);
    }
    const ParameterSpace box = region.bounds();
    if (box.mu_lo == box.mu_hi) {
        return {{box.mu_lo, region.center.var}};
    }
    std::vector<ModelParams> pts;
    pts.reserve(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
        const double f = static_cast<double>(i) / (resolution - 1);
        pts.push_back({box.mu_lo + f * (box.mu_hi - box.mu_lo), region.center.var});
    }
    sort_unique(pts);
    return pts;
}

} // namespace arc
