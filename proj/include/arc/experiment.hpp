#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "arc/market.hpp"
#include "arc/metrics.hpp"
#include "arc/solver.hpp"

namespace arc {

/// Experiment description as loaded from a flat JSON config file
/// (see configs/config.schema.json). Under "annualized" scaling the model
/// fields are annual quantities converted to per-step values at
/// 1/steps_per_year; under "per_step" they are used as per-step values
/// directly (step counts per horizon stay steps_per_year * years).
struct ExperimentConfig {
    enum class Scaling { Annualized, PerStep };

    Case kind = Case::MeanOnly;
    double mu_star = 0.0;
    double sigma_star = 0.0; // volatility, not variance
    double r = 0.0;
    double v0 = 100.0;
    double gamma = 2.0;
    double alpha = 0.1;
    double mu_min = 0.0, mu_max = 0.0;
    double var_min = 0.0, var_max = 0.0;
    double mu_hat0 = 0.0;
    double sigma_hat0 = 0.0;
    std::vector<double> horizons; // years
    std::size_t steps_per_year = 300;
    Scaling scaling = Scaling::Annualized;
    std::size_t n_paths = 1000;
    std::size_t n_grid_paths = 1000;
    std::size_t quantizer_points = 10;
    std::size_t region_resolution = 9;
    std::size_t region_shells = 6;
    std::size_t adaptive_grid_mu = 81;
    std::size_t adaptive_grid_var = 21;
    std::vector<double> actions;
    Lookup lookup = Lookup::Nearest;
    std::int64_t n_offset = 0;
    std::uint64_t seed = 1;

    static ExperimentConfig from_json_file(const std::filesystem::path& path);
    static ExperimentConfig from_json_text(const std::string& text);

    /// Field-level checks (presence and ranges); MarketConfig invariants
    /// are re-checked per horizon by market_for().
    void validate() const;

    /// Per-step market model for one horizon (includes the quantizer).
    MarketConfig market_for(double horizon_years) const;

    std::size_t steps_for(double horizon_years) const;

    /// Multiplier that converts per-step parameters back to reported units.
    double report_scale() const;

    /// Annualized-equivalent rate for discounting in the metrics.
    double metrics_r() const;
};

/// Solves and simulates all four methods per horizon on a shared noise
/// matrix and writes comparison.csv plus per-method value/policy and
/// summary CSVs into out_dir. Returns the comparison rows (horizon-major,
/// methods in the order true, robust, adaptive, adaptive_robust).
std::vector<MethodReport> run_compare(const ExperimentConfig& config,
                                      const std::filesystem::path& out_dir,
                                      bool write_paths = false);

/// Simulates one estimator path at the longest horizon and writes per-step
/// confidence-region bounds and a contains-truth flag to regions.csv.
/// Mean-and-variance case only.
void run_regions(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// Solves a single method at every horizon and writes its value/policy
/// CSVs (no simulation).
void run_solve(const ExperimentConfig& config, Method method,
               const std::filesystem::path& out_dir);

} // namespace arc
