#pragma once

#include <string>
#include <vector>

#include "arc/simulate.hpp"

namespace arc {

/// Gain-to-loss ratio of discounted terminal P&L d_i = e^{-rT} V_i - v0:
/// mean(d) / mean(max(-d, 0)), 0 when mean(d) <= 0, +infinity when the
/// mean is positive and no path loses. r and T are annualized rate and
/// horizon in years. Throws std::domain_error on empty input.
double glr(const std::vector<double>& terminal_wealth, double v0, double r, double T_years);

/// Empirical 95% value-at-risk of the discounted loss L_i = v0 - e^{-rT} V_i:
/// the smallest order statistic v with at most 5% of losses above it
/// (no interpolation). Negative when every path gains.
double var95(const std::vector<double>& terminal_wealth, double v0, double r,
             double T_years);

/// Cross-path mean and sample standard deviation (divisor n-1) of V_t per
/// time step. With a single path the deviation is reported as 0 and
/// `single_path` is set.
struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    bool single_path = false;
};
SeriesStats summarize(const WealthPaths& paths);

/// One comparison row: terminal-wealth statistics of a method at a horizon.
struct MethodReport {
    std::string method;
    double horizon_years = 0.0;
    double mean_vt = 0.0;
    double std_vt = 0.0;
    double var95 = 0.0;
    double glr = 0.0;
};

MethodReport report(const std::string& method, double horizon_years,
                    const std::vector<double>& terminal_wealth, double v0, double r);

} // namespace arc
