#include "arc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arc {

namespace {

std::vector<double> discounted_pnl(const std::vector<double>& vt, double v0, double r,
                                   double T_years) {
    if (vt.empty()) {
        throw std::domain_error("metrics: empty terminal wealth sample");
    }
    const double disc = std::exp(-r * T_years);
    std::vector<double> d(vt.size());
    for (std::size_t i = 0; i < vt.size(); ++i) {
        d[i] = disc * vt[i] - v0;
    }
    return d;
}

} // namespace

double glr(const std::vector<double>& terminal_wealth, double v0, double r, double T_years) {
    const auto d = discounted_pnl(terminal_wealth, v0, r, T_years);
    double sum = 0.0;
    double loss = 0.0;
    for (double x : d) {
        sum += x;
        if (x < 0.0) {
            loss -= x;
        }
    }
    const double n = static_cast<double>(d.size());
    if (!(sum / n > 0.0)) {
        return 0.0;
    }
    if (loss == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return sum / loss;
}

double var95(const std::vector<double>& terminal_wealth, double v0, double r,
             double T_years) {
    const auto d = discounted_pnl(terminal_wealth, v0, r, T_years);
    std::vector<double> losses(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        losses[i] = -d[i];
    }
    std::sort(losses.begin(), losses.end());
    // smallest v with #(L > v) <= 5%: the ceil(0.95 n)-th order statistic
    const std::size_t n = losses.size();
    const std::size_t k =
        static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    return losses[std::max<std::size_t>(k, 1) - 1];
}

SeriesStats summarize(const WealthPaths& paths) {
    SeriesStats s;
    const std::size_t n = paths.n_paths;
    const std::size_t len = paths.steps + 1;
    s.mean.resize(len);
    s.stddev.resize(len);
    s.single_path = n < 2;
    for (std::size_t t = 0; t < len; ++t) {
        double m = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            m += paths.wealth_at(p, t);
        }
        m /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const double d = paths.wealth_at(p, t) - m;
            ss += d * d;
        }
        s.mean[t] = m;
        s.stddev[t] = n < 2 ? 0.0 : std::sqrt(ss / static_cast<double>(n - 1));
    }
    return s;
}

MethodReport report(const std::string& method, double horizon_years,
                    const std::vector<double>& terminal_wealth, double v0, double r) {
    MethodReport rep;
    rep.method = method;
    rep.horizon_years = horizon_years;
    const double n = static_cast<double>(terminal_wealth.size());
    double m = 0.0;
    for (double v : terminal_wealth) {
        m += v;
    }
    m /= n;
    double ss = 0.0;
    for (double v : terminal_wealth) {
        ss += (v - m) * (v - m);
    }
    rep.mean_vt = m;
    rep.std_vt = terminal_wealth.size() < 2 ? 0.0 : std::sqrt(ss / (n - 1.0));
    rep.var95 = var95(terminal_wealth, v0, r, horizon_years);
    rep.glr = glr(terminal_wealth, v0, r, horizon_years);
    return rep;
}

} // namespace arc
