#include <doctest.h>

#include "testutil.hpp"

#include <cmath>

#include "arc/errors.hpp"
#include "arc/quantizer.hpp"
#include "arc/simulate.hpp"
#include "arc/solver.hpp"

using namespace arc;

namespace {

MarketConfig small_market(std::size_t steps) {
    const double dt = 1.0 / 300.0;
    MarketConfig cfg;
    cfg.r = 0.02 * dt;
    cfg.dt = dt;
    cfg.gamma = 5.0;
    cfg.actions = {0.0, 0.5, 1.0};
    cfg.horizon_steps = steps;
    cfg.alpha = 0.1;
    cfg.quantizer = build_normal_quantizer(5);
    cfg.space = {-1.0 * dt, 1.0 * dt, 0.09 * dt, 0.09 * dt};
    cfg.true_params = {0.07 * dt, 0.09 * dt};
    cfg.init_state = {0.1 * dt, 0.09 * dt, 0};
    return cfg;
}

} // namespace

TEST_CASE("noise: zero variance draws the mean everywhere") {
    const NoiseMatrix m = simulate_noise({0.03, 0.0}, 4, 6, 99);
    for (double z : m.z) {
        CHECK(z == 0.03);
    }
}

TEST_CASE("noise: identical seeds give identical matrices") {
    const NoiseMatrix a = simulate_noise({0.01, 0.04}, 8, 16, 2024);
    const NoiseMatrix b = simulate_noise({0.01, 0.04}, 8, 16, 2024);
    REQUIRE(a.z.size() == b.z.size());
    for (std::size_t i = 0; i < a.z.size(); ++i) {
        CHECK(a.z[i] == b.z[i]);
    }
}

TEST_CASE("noise: growing the path count keeps earlier paths") {
    const NoiseMatrix small = simulate_noise({0.0, 1.0}, 3, 10, 7);
    const NoiseMatrix big = simulate_noise({0.0, 1.0}, 6, 10, 7);
    for (std::size_t p = 0; p < 3; ++p) {
        for (std::size_t t = 0; t < 10; ++t) {
            CHECK(small.at(p, t) == big.at(p, t));
        }
    }
}

TEST_CASE("noise: sample mean within four standard errors of mu") {
    const std::size_t n = 1000, steps = 1000; // one million draws
    const double mu = 0.02, var = 0.09;
    const NoiseMatrix m = simulate_noise({mu, var}, n, steps, 31415);
    double sum = 0.0;
    for (double z : m.z) {
        sum += z;
    }
    const double mean = sum / static_cast<double>(n * steps);
    const double se = std::sqrt(var / static_cast<double>(n * steps));
    CHECK(std::abs(mean - mu) < 4.0 * se);
}

TEST_CASE("all-cash policy compounds the risk-free rate exactly") {
    const MarketConfig cfg = small_market(20);
    const Policy cash(Method::Robust, Policy::PerStep{std::vector<int>(20, 0)});
    const NoiseMatrix noise = simulate_noise(cfg.true_params, 5, 20, 11);
    const WealthPaths out = run_strategy(cash, noise, cfg, Case::MeanOnly, 100.0);
    const double expected = 100.0 * std::pow(1.0 + cfg.r, 20.0);
    for (std::size_t p = 0; p < 5; ++p) {
        CHECK(out.wealth_at(p, 20) == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("deterministic noise with full allocation grows at 1 + r + mu") {
    MarketConfig cfg = small_market(12);
    cfg.true_params.var = 0.0;
    cfg.space.var_lo = 0.0;
    cfg.init_state.var = 0.0;
    const Policy full(Method::TrueModel, Policy::PerStep{std::vector<int>(12, 2)});
    const NoiseMatrix noise = simulate_noise(cfg.true_params, 3, 12, 1);
    const WealthPaths out = run_strategy(full, noise, cfg, Case::MeanOnly, 100.0);
    const double expected = 100.0 * std::pow(1.0 + cfg.r + cfg.true_params.mu, 12.0);
    CHECK(out.wealth_at(0, 12) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("one step by hand: half allocation on a ten percent move") {
    MarketConfig cfg = small_market(1);
    cfg.r = 0.0;
    NoiseMatrix noise;
    noise.n_paths = 1;
    noise.steps = 1;
    noise.z = {0.1};
    const Policy half(Method::TrueModel, Policy::PerStep{{1}}); // action 0.5
    const WealthPaths out = run_strategy(half, noise, cfg, Case::MeanOnly, 100.0);
    CHECK(out.wealth_at(0, 1) == within(105.0, 1e-12));
    CHECK(out.action_at(0, 0) == 0.5);
}

TEST_CASE("replay: stored actions and noise reproduce stored wealth") {
    const MarketConfig cfg = small_market(15);
    const Solution truth = solve_true_model(cfg, cfg.true_params);
    const NoiseMatrix noise = simulate_noise(cfg.true_params, 6, 15, 5);
    const WealthPaths out = run_strategy(truth.policy, noise, cfg, Case::MeanOnly, 100.0);
    for (std::size_t p = 0; p < 6; ++p) {
        double v = 100.0;
        for (std::size_t t = 0; t < 15; ++t) {
            v *= 1.0 + cfg.r + out.action_at(p, t) * noise.at(p, t);
            CHECK(out.wealth_at(p, t + 1) == v);
        }
    }
}

TEST_CASE("recorded estimator trajectory equals a standalone replay") {
    const MarketConfig cfg = small_market(10);
    const Solution truth = solve_true_model(cfg, cfg.true_params);
    const NoiseMatrix noise = simulate_noise(cfg.true_params, 4, 10, 17);
    const WealthPaths out = run_strategy(truth.policy, noise, cfg, Case::MeanOnly, 50.0);
    for (std::size_t p = 0; p < 4; ++p) {
        EstimatorState c = cfg.init_state;
        CHECK(out.mean_at(p, 0) == c.mean);
        for (std::size_t t = 0; t < 10; ++t) {
            c = update_mean(c, noise.at(p, t), cfg.space);
            CHECK(out.mean_at(p, t + 1) == c.mean);
            CHECK(out.var_at(p, t + 1) == c.var);
        }
    }
}

TEST_CASE("true-model policy beats the bank on average (pinned seed)") {
    const MarketConfig cfg = small_market(60);
    const Solution truth = solve_true_model(cfg, cfg.true_params);
    const NoiseMatrix noise = simulate_noise(cfg.true_params, 1000, 60, 4242);
    const WealthPaths out = run_strategy(truth.policy, noise, cfg, Case::MeanOnly, 100.0);
    double mean = 0.0;
    for (double v : out.terminal()) {
        mean += v;
    }
    mean /= 1000.0;
    CHECK(mean > 100.0 * std::pow(1.0 + cfg.r, 60.0));
}

TEST_CASE("policy shorter than the noise horizon is a structural error") {
    const MarketConfig cfg = small_market(5);
    const Policy cash(Method::Robust, Policy::PerStep{std::vector<int>(3, 0)});
    const NoiseMatrix noise = simulate_noise(cfg.true_params, 2, 5, 3);
    CHECK_THROWS_AS(run_strategy(cash, noise, cfg, Case::MeanOnly, 100.0),
                    arc::StructuralError);
}

TEST_CASE("a wipe-out move raises a structural error naming the step") {
    const MarketConfig cfg = small_market(1);
    NoiseMatrix noise;
    noise.n_paths = 1;
    noise.steps = 1;
    noise.z = {-1.5}; // full allocation loses more than everything
    const Policy full(Method::TrueModel, Policy::PerStep{{2}});
    CHECK_THROWS_AS(run_strategy(full, noise, cfg, Case::MeanOnly, 100.0),
                    arc::StructuralError);
}
