#include "arc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "arc/csv.hpp"
#include "arc/errors.hpp"
#include "arc/rng.hpp"

namespace arc {

namespace {

using nlohmann::json;

// substream tags for the one experiment seed
constexpr std::uint64_t kGridStream = 1;
constexpr std::uint64_t kSimStream = 2;
constexpr std::uint64_t kRegionStream = 3;

const std::set<std::string> kKnownKeys = {
    "case",         "mu_star",           "sigma_star",       "r",
    "v0",           "gamma",             "alpha",            "mu_min",
    "mu_max",       "var_min",           "var_max",          "mu_hat0",
    "sigma_hat0",   "horizons",          "steps_per_year",   "param_scaling",
    "n_paths",      "n_grid_paths",      "quantizer_points", "region_resolution",
    "region_shells","adaptive_grid_mu",  "adaptive_grid_var","actions",
    "lookup",       "n_offset",          "seed"};

double need_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_number()) {
        throw ConfigError("config: missing or non-numeric field '" + key + "'");
    }
    return j[key].get<double>();
}

std::size_t need_count(const json& j, const std::string& key) {
    const double v = need_number(j, key);
    if (v < 0 || v != std::floor(v)) {
        throw ConfigError("config: field '" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::size_t>(v);
}

std::string horizon_label(double h) {
    return format_double(h);
}

std::vector<std::string> value_columns(Case kind) {
    if (kind == Case::MeanOnly) {
        return {"t", "mean", "value", "action", "worst_mu", "worst_var"};
    }
    return {"t", "mean", "var", "value", "action", "worst_mu", "worst_var"};
}

void write_value_table(const std::filesystem::path& file, const ExperimentConfig& ec,
                       const MarketConfig& cfg, const ValueTable& table,
                       const StateGrid* grid) {
    const double scale = ec.report_scale();
    CsvWriter csv(value_columns(ec.kind));
    const std::size_t T = cfg.horizon_steps;
    for (std::size_t t = 0; t < T; ++t) {
        const std::size_t n = table.value[t].size();
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::string> row;
            row.push_back(std::to_string(t));
            if (grid != nullptr) {
                const EstimatorState& s = grid->level(t)[i];
                row.push_back(format_double(s.mean * scale));
                if (ec.kind == Case::MeanVariance) {
                    row.push_back(format_double(s.var * scale));
                }
            } else {
                row.push_back("");
                if (ec.kind == Case::MeanVariance) {
                    row.push_back("");
                }
            }
            row.push_back(format_double(table.value[t][i]));
            row.push_back(format_double(cfg.actions[static_cast<std::size_t>(table.action[t][i])]));
            row.push_back(format_double(table.worst[t][i].mu * scale));
            row.push_back(format_double(table.worst[t][i].var * scale));
            csv.row(row);
        }
    }
    atomic_write(file, csv.str());
}

void write_family(const std::filesystem::path& file, const ExperimentConfig& ec,
                  const MarketConfig& cfg, const std::vector<ModelParams>& thetas,
                  const Policy& policy) {
    const double scale = ec.report_scale();
    CsvWriter csv({"theta_mu", "theta_var", "t", "action"});
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        EstimatorState probe{thetas[j].mu, thetas[j].var, 0};
        for (std::size_t t = 0; t < cfg.horizon_steps; ++t) {
            const int ai = policy.action_index(t, probe);
            csv.row({format_double(thetas[j].mu * scale), format_double(thetas[j].var * scale),
                     std::to_string(t),
                     format_double(cfg.actions[static_cast<std::size_t>(ai)])});
        }
    }
    atomic_write(file, csv.str());
}

void write_summary(const std::filesystem::path& file, const ExperimentConfig& ec,
                   const WealthPaths& paths) {
    const SeriesStats s = summarize(paths);
    CsvWriter csv({"t", "time_years", "mean", "std"});
    const double dt = 1.0 / static_cast<double>(ec.steps_per_year);
    for (std::size_t t = 0; t < s.mean.size(); ++t) {
        csv.row({std::to_string(t), format_double(static_cast<double>(t) * dt),
                 format_double(s.mean[t]), format_double(s.stddev[t])});
    }
    atomic_write(file, csv.str());
}

void write_paths_long(const std::filesystem::path& file, const ExperimentConfig& ec,
                      const WealthPaths& paths) {
    const double scale = ec.report_scale();
    std::vector<std::string> cols = {"path", "t", "V", "action", "mean"};
    if (ec.kind == Case::MeanVariance) {
        cols.push_back("var");
    }
    CsvWriter csv(cols);
    for (std::size_t p = 0; p < paths.n_paths; ++p) {
        for (std::size_t t = 0; t <= paths.steps; ++t) {
            std::vector<std::string> row = {
                std::to_string(p), std::to_string(t), format_double(paths.wealth_at(p, t)),
                t < paths.steps ? format_double(paths.action_at(p, t)) : "",
                format_double(paths.mean_at(p, t) * scale)};
            if (ec.kind == Case::MeanVariance) {
                row.push_back(format_double(paths.var_at(p, t) * scale));
            }
            csv.row(row);
        }
    }
    atomic_write(file, csv.str());
}

} // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config: top level must be a flat JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (kKnownKeys.count(key) == 0) {
            throw ConfigError("config: unknown field '" + key + "'");
        }
    }

    ExperimentConfig c;
    const std::string cs = j.value("case", "");
    if (cs == "I") {
        c.kind = Case::MeanOnly;
    } else if (cs == "II") {
        c.kind = Case::MeanVariance;
    } else {
        throw ConfigError("config: 'case' must be \"I\" or \"II\"");
    }
    c.mu_star = need_number(j, "mu_star");
    c.sigma_star = need_number(j, "sigma_star");
    c.r = need_number(j, "r");
    c.v0 = need_number(j, "v0");
    c.gamma = need_number(j, "gamma");
    c.alpha = need_number(j, "alpha");
    c.mu_min = need_number(j, "mu_min");
    c.mu_max = need_number(j, "mu_max");
    if (c.kind == Case::MeanVariance) {
        c.var_min = need_number(j, "var_min");
        c.var_max = need_number(j, "var_max");
        c.sigma_hat0 = need_number(j, "sigma_hat0");
    } else {
        // known variance: the rectangle collapses unless overridden
        c.var_min = j.contains("var_min") ? need_number(j, "var_min")
                                          : c.sigma_star * c.sigma_star;
        c.var_max = j.contains("var_max") ? need_number(j, "var_max")
                                          : c.sigma_star * c.sigma_star;
        c.sigma_hat0 = j.contains("sigma_hat0") ? need_number(j, "sigma_hat0") : c.sigma_star;
    }
    c.mu_hat0 = need_number(j, "mu_hat0");
    if (!j.contains("horizons") || !j["horizons"].is_array() || j["horizons"].empty()) {
        throw ConfigError("config: 'horizons' must be a nonempty array");
    }
    for (const auto& h : j["horizons"]) {
        if (!h.is_number()) {
            throw ConfigError("config: horizons must be numeric");
        }
        c.horizons.push_back(h.get<double>());
    }
    c.steps_per_year = need_count(j, "steps_per_year");
    const std::string sc = j.value("param_scaling", "annualized");
    if (sc == "annualized") {
        c.scaling = Scaling::Annualized;
    } else if (sc == "per_step") {
        c.scaling = Scaling::PerStep;
    } else {
        throw ConfigError("config: 'param_scaling' must be \"annualized\" or \"per_step\"");
    }
    c.n_paths = need_count(j, "n_paths");
    c.n_grid_paths = need_count(j, "n_grid_paths");
    c.quantizer_points = j.contains("quantizer_points") ? need_count(j, "quantizer_points") : 10;
    c.region_resolution =
        j.contains("region_resolution") ? need_count(j, "region_resolution")
                                        : (c.kind == Case::MeanOnly ? std::size_t{9} : std::size_t{12});
    c.region_shells = j.contains("region_shells") ? need_count(j, "region_shells") : 6;
    c.adaptive_grid_mu = j.contains("adaptive_grid_mu") ? need_count(j, "adaptive_grid_mu") : 81;
    c.adaptive_grid_var =
        j.contains("adaptive_grid_var") ? need_count(j, "adaptive_grid_var") : 21;
    if (!j.contains("actions") || !j["actions"].is_array() || j["actions"].empty()) {
        throw ConfigError("config: 'actions' must be a nonempty array");
    }
    for (const auto& a : j["actions"]) {
        if (!a.is_number()) {
            throw ConfigError("config: actions must be numeric");
        }
        c.actions.push_back(a.get<double>());
    }
    const std::string lk = j.value("lookup", "nearest");
    if (lk == "nearest") {
        c.lookup = Lookup::Nearest;
    } else if (lk == "linear") {
        c.lookup = Lookup::Linear;
    } else {
        throw ConfigError("config: 'lookup' must be \"nearest\" or \"linear\"");
    }
    c.n_offset = j.contains("n_offset")
                     ? static_cast<std::int64_t>(need_number(j, "n_offset"))
                     : 0;
    if (!j.contains("seed") || !j["seed"].is_number_unsigned()) {
        throw ConfigError("config: 'seed' must be a nonnegative integer");
    }
    c.seed = j["seed"].get<std::uint64_t>();
    c.validate();
    return c;
}

void ExperimentConfig::validate() const {
    if (horizons.empty()) {
        throw ConfigError("config: horizons list is empty");
    }
    for (double h : horizons) {
        if (!(h > 0.0)) {
            throw ConfigError("config: horizons must be positive");
        }
        if (steps_for(h) == 0) {
            throw ConfigError("config: horizon " + format_double(h) +
                              " rounds to zero steps");
        }
    }
    if (gamma == 1.0) {
        throw ConfigError("config: gamma must differ from 1");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("config: alpha must lie in (0, 1)");
    }
    if (!(sigma_star > 0.0)) {
        throw ConfigError("config: sigma_star must be positive");
    }
    if (!(v0 > 0.0)) {
        throw ConfigError("config: v0 must be positive");
    }
    if (steps_per_year == 0) {
        throw ConfigError("config: steps_per_year must be positive");
    }
    if (n_paths == 0 || n_grid_paths == 0) {
        throw ConfigError("config: n_paths and n_grid_paths must be positive");
    }
    if (quantizer_points == 0) {
        throw ConfigError("config: quantizer_points must be positive");
    }
    if (region_resolution < 2 || region_shells < 2) {
        throw ConfigError("config: region_resolution and region_shells must be at least 2");
    }
    if (adaptive_grid_mu == 0 || adaptive_grid_var == 0) {
        throw ConfigError("config: adaptive grid resolutions must be positive");
    }
    if (kind == Case::MeanOnly && sigma_hat0 != sigma_star) {
        throw ConfigError("config: with known variance, sigma_hat0 must equal sigma_star");
    }
    if (lookup == Lookup::Linear && kind == Case::MeanVariance) {
        throw ConfigError("config: linear lookup is only available with a known variance");
    }
    // rectangle and membership checks run through MarketConfig per horizon
    market_for(horizons.front());
}

std::size_t ExperimentConfig::steps_for(double horizon_years) const {
    return static_cast<std::size_t>(
        std::llround(horizon_years * static_cast<double>(steps_per_year)));
}

double ExperimentConfig::report_scale() const {
    return scaling == Scaling::Annualized ? static_cast<double>(steps_per_year) : 1.0;
}

double ExperimentConfig::metrics_r() const {
    return scaling == Scaling::Annualized ? r : r * static_cast<double>(steps_per_year);
}

MarketConfig ExperimentConfig::market_for(double horizon_years) const {
    const double dt = 1.0 / static_cast<double>(steps_per_year);
    const double s = scaling == Scaling::Annualized ? dt : 1.0;

    MarketConfig cfg;
    cfg.r = r * s;
    cfg.dt = dt;
    cfg.gamma = gamma;
    cfg.actions = actions;
    cfg.horizon_steps = steps_for(horizon_years);
    cfg.alpha = alpha;
    cfg.quantizer = build_normal_quantizer(quantizer_points);
    cfg.space = ParameterSpace{mu_min * s, mu_max * s, var_min * s, var_max * s};
    cfg.true_params = ModelParams{mu_star * s, sigma_star * sigma_star * s};
    cfg.init_state = EstimatorState{mu_hat0 * s, sigma_hat0 * sigma_hat0 * s, 0};
    // keep c0 inside the rectangle (it is the t = 0 grid point)
    const ModelParams c0 = project({cfg.init_state.mean, cfg.init_state.var}, cfg.space);
    cfg.init_state.mean = c0.mu;
    cfg.init_state.var = c0.var;
    cfg.n_offset = n_offset;
    cfg.lookup = lookup;
    cfg.validate();
    return cfg;
}

std::vector<MethodReport> run_compare(const ExperimentConfig& config,
                                      const std::filesystem::path& out_dir,
                                      bool write_paths) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const std::uint64_t grid_seed = derive_stream(config.seed, kGridStream);
    const std::uint64_t sim_seed = derive_stream(config.seed, kSimStream);
    std::vector<MethodReport> rows;

    for (double h : config.horizons) {
        const MarketConfig cfg = config.market_for(h);
        const auto grid = std::make_shared<const StateGrid>(
            build_state_grid(cfg, config.kind, config.n_grid_paths, grid_seed));

        Solution s_true = solve_true_model(cfg, cfg.true_params);
        Solution s_rob = solve_robust(cfg, config.kind, config.region_resolution,
                                      config.region_shells);
        const auto thetas = theta_lattice(cfg.space, config.adaptive_grid_mu,
                                          config.kind == Case::MeanOnly
                                              ? 1
                                              : config.adaptive_grid_var);
        Policy p_adapt = solve_adaptive_family(cfg, thetas);
        Solution s_ar = solve_adaptive_robust(cfg, grid, config.region_resolution,
                                              config.region_shells);

        const NoiseMatrix noise =
            simulate_noise(cfg.true_params, config.n_paths, cfg.horizon_steps, sim_seed);

        const std::string label = horizon_label(h);
        struct Entry {
            const Policy* policy;
            Method method;
        };
        const Entry entries[4] = {{&s_true.policy, Method::TrueModel},
                                  {&s_rob.policy, Method::Robust},
                                  {&p_adapt, Method::Adaptive},
                                  {&s_ar.policy, Method::AdaptiveRobust}};
        for (const Entry& e : entries) {
            const WealthPaths paths =
                run_strategy(*e.policy, noise, cfg, config.kind, config.v0);
            const std::string tag = method_tag(e.method);
            rows.push_back(
                report(tag, h, paths.terminal(), config.v0, config.metrics_r()));
            write_summary(out_dir / ("summary_" + tag + "_T" + label + ".csv"), config,
                          paths);
            if (write_paths) {
                write_paths_long(out_dir / ("paths_" + tag + "_T" + label + ".csv"), config,
                                 paths);
            }
        }
        write_value_table(out_dir / ("value_true_T" + label + ".csv"), config, cfg,
                          s_true.table, nullptr);
        write_value_table(out_dir / ("value_robust_T" + label + ".csv"), config, cfg,
                          s_rob.table, nullptr);
        write_value_table(out_dir / ("value_adaptive_robust_T" + label + ".csv"), config,
                          cfg, s_ar.table, grid.get());
        write_family(out_dir / ("family_adaptive_T" + label + ".csv"), config, cfg, thetas,
                     p_adapt);
    }

    CsvWriter csv({"method", "T", "mean", "std", "var95", "glr"});
    for (const MethodReport& r : rows) {
        csv.row({r.method, format_double(r.horizon_years), format_double(r.mean_vt),
                 format_double(r.std_vt), format_double(r.var95), format_double(r.glr)});
    }
    atomic_write(out_dir / "comparison.csv", csv.str());
    return rows;
}

void run_regions(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    if (config.kind != Case::MeanVariance) {
        throw ConfigError("regions: requires case II (unknown mean and variance)");
    }
    const double h = *std::max_element(config.horizons.begin(), config.horizons.end());
    const MarketConfig cfg = config.market_for(h);
    const std::uint64_t seed = derive_stream(config.seed, kRegionStream);
    const double sigma = std::sqrt(cfg.true_params.var);
    const double scale = config.report_scale();

    CsvWriter csv({"t", "mu_lo", "mu_hi", "var_lo", "var_hi", "kappa", "contains_true"});
    EstimatorState c = cfg.init_state;
    for (std::size_t t = 0; t <= cfg.horizon_steps; ++t) {
        const ConfidenceRegion reg = region_case2(c, cfg.alpha, cfg.space, cfg.n_offset);
        const ParameterSpace b = reg.bounds();
        csv.row({std::to_string(t), format_double(b.mu_lo * scale),
                 format_double(b.mu_hi * scale), format_double(b.var_lo * scale),
                 format_double(b.var_hi * scale), format_double(reg.kappa),
                 reg.contains(cfg.true_params) ? "1" : "0"});
        if (t < cfg.horizon_steps) {
            const double z = cfg.true_params.mu + sigma * normal_draw(seed, 0, t);
            c = update_mean_var(c, z, cfg.space);
        }
    }
    atomic_write(out_dir / "regions.csv", csv.str());
}

void run_solve(const ExperimentConfig& config, Method method,
               const std::filesystem::path& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);
    const std::uint64_t grid_seed = derive_stream(config.seed, kGridStream);
    for (double h : config.horizons) {
        const MarketConfig cfg = config.market_for(h);
        const std::string label = horizon_label(h);
        const std::string tag = method_tag(method);
        switch (method) {
            case Method::TrueModel: {
                Solution s = solve_true_model(cfg, cfg.true_params);
                write_value_table(out_dir / ("value_" + tag + "_T" + label + ".csv"),
                                  config, cfg, s.table, nullptr);
                break;
            }
            case Method::Robust: {
                Solution s = solve_robust(cfg, config.kind, config.region_resolution,
                                          config.region_shells);
                write_value_table(out_dir / ("value_" + tag + "_T" + label + ".csv"),
                                  config, cfg, s.table, nullptr);
                break;
            }
            case Method::Adaptive: {
                const auto thetas = theta_lattice(cfg.space, config.adaptive_grid_mu,
                                                  config.kind == Case::MeanOnly
                                                      ? 1
                                                      : config.adaptive_grid_var);
                Policy p = solve_adaptive_family(cfg, thetas);
                write_family(out_dir / ("family_" + tag + "_T" + label + ".csv"), config,
                             cfg, thetas, p);
                break;
            }
            case Method::AdaptiveRobust: {
                const auto grid = std::make_shared<const StateGrid>(
                    build_state_grid(cfg, config.kind, config.n_grid_paths, grid_seed));
                Solution s = solve_adaptive_robust(cfg, grid, config.region_resolution,
                                                   config.region_shells);
                write_value_table(out_dir / ("value_" + tag + "_T" + label + ".csv"),
                                  config, cfg, s.table, grid.get());
                break;
            }
        }
    }
}

} // namespace arc
