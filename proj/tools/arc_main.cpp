#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arc/csv.hpp"
#include "arc/errors.hpp"
#include "arc/experiment.hpp"
#include "arc/parallel.hpp"
#include "arc/quantizer.hpp"

namespace {

arc::Method parse_method(const std::string& tag) {
    if (tag == "true") return arc::Method::TrueModel;
    if (tag == "robust") return arc::Method::Robust;
    if (tag == "adaptive") return arc::Method::Adaptive;
    if (tag == "adaptive_robust") return arc::Method::AdaptiveRobust;
    throw arc::ConfigError("unknown method '" + tag +
                           "' (expected true|robust|adaptive|adaptive_robust)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive robust portfolio allocation: solvers, simulation, benchmarks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string method_tag;
    std::size_t quantizer_n = 10;
    std::uint64_t seed_override = 0;
    bool has_seed = false;
    bool write_paths = false;
    std::size_t threads = 0;

    app.add_option("--threads", threads,
                   "worker threads (default: ARC_THREADS or hardware concurrency)");

    auto* cmp = app.add_subcommand("compare", "solve all four methods and benchmark them");
    cmp->add_option("--config", config_path, "experiment config (JSON)")->required();
    cmp->add_option("--out", out_dir, "output directory");
    cmp->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { has_seed = true; });
    cmp->add_flag("--write-paths", write_paths, "also write per-path wealth CSVs");

    auto* reg = app.add_subcommand("regions", "confidence-region time series for one path");
    reg->add_option("--config", config_path, "experiment config (JSON)")->required();
    reg->add_option("--out", out_dir, "output directory");
    reg->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { has_seed = true; });

    auto* qz = app.add_subcommand("quantizer", "print an optimal normal quantizer as CSV");
    qz->add_option("--n", quantizer_n, "number of points")->required();

    auto* sol = app.add_subcommand("solve", "solve one method and write its tables");
    sol->add_option("--config", config_path, "experiment config (JSON)")->required();
    sol->add_option("--method", method_tag, "true|robust|adaptive|adaptive_robust")
        ->required();
    sol->add_option("--out", out_dir, "output directory");
    sol->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { has_seed = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        if (threads > 0) {
            arc::set_thread_count(threads);
        }
        if (qz->parsed()) {
            const arc::Quantizer q = arc::build_normal_quantizer(quantizer_n);
            std::printf("point,weight\n");
            for (std::size_t i = 0; i < q.size(); ++i) {
                std::printf("%s,%s\n", arc::format_double(q.points[i]).c_str(),
                            arc::format_double(q.weights[i]).c_str());
            }
            return 0;
        }

        arc::ExperimentConfig config = arc::ExperimentConfig::from_json_file(config_path);
        if (has_seed) {
            config.seed = seed_override;
        }
        if (cmp->parsed()) {
            arc::run_compare(config, out_dir, write_paths);
        } else if (reg->parsed()) {
            arc::run_regions(config, out_dir);
        } else if (sol->parsed()) {
            arc::run_solve(config, parse_method(method_tag), out_dir);
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
