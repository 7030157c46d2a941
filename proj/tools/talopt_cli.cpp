// Command-line front end: speed-sweep experiments, oracle runs on tiny
// instances, and CSV/plot-data export.

#include "talopt/errors.hpp"
#include "talopt/experiment.hpp"
#include "talopt/mopso.hpp"
#include "talopt/oracle.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> speed_ranges;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int trials = 0;
    int population = 0;
    int iterations = 0;
    bool emit_plot_data = false;
    bool oracle = false;
    bool paper_scale = false;
};

talopt::SpeedRange parse_range(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw talopt::ConfigError("--speed-range: expected lo,hi");
    try {
        return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw talopt::ConfigError("--speed-range: expected lo,hi");
    }
}

talopt::ExperimentConfig assemble_config(const CliOptions& options) {
    talopt::ExperimentConfig config;
    if (!options.config_path.empty())
        config = talopt::load_config(options.config_path);

    if (options.paper_scale) {
        config.mopso.population = 10000;
        config.mopso.iterations = 400;
    }
    if (options.population > 0)
        config.mopso.population = options.population;
    if (options.iterations > 0)
        config.mopso.iterations = options.iterations;
    if (!options.out_dir.empty())
        config.plan.output_dir = options.out_dir;
    if (options.emit_plot_data)
        config.plan.emit_plot_data = true;

    if (!options.speed_ranges.empty()) {
        config.plan.speed_ranges.clear();
        for (const auto& text : options.speed_ranges)
            config.plan.speed_ranges.push_back(parse_range(text));
    }

    if (!options.seeds.empty()) {
        config.plan.seeds = options.seeds;
        config.plan.trials_per_range = static_cast<int>(options.seeds.size());
        if (options.trials > 0 && options.trials != config.plan.trials_per_range)
            throw talopt::ConfigError("--trials: does not match the number of --seeds");
    } else if (options.trials > 0) {
        // regenerate consecutive seeds from the base seed
        const std::uint64_t base = options.seed_given ? options.seed : 1;
        config.plan.trials_per_range = options.trials;
        config.plan.seeds.clear();
        for (int i = 0; i < options.trials; ++i)
            config.plan.seeds.push_back(base + static_cast<std::uint64_t>(i));
    } else if (options.seed_given) {
        config.plan.seeds = {options.seed};
        config.plan.trials_per_range = 1;
    }

    config.network.validate();
    config.mopso.validate();
    config.plan.validate();
    return config;
}

int run_oracle(const talopt::ExperimentConfig& config) {
    const auto adjacency = talopt::build_topology(config.network);
    // the oracle characterizes one speed level: the first range's representative
    const double speed = config.plan.speed_ranges.front().midpoint();
    const auto mobility = talopt::build_mobility(config.network, speed, adjacency);
    const auto result = talopt::true_pareto_front(config.network, mobility,
                                                  config.plan.sigma_step,
                                                  config.plan.oracle_budget);

    std::vector<talopt::ObjectivePair> front;
    front.reserve(result.front.size());
    for (const auto& point : result.front)
        front.push_back(point.objectives);
    const std::size_t compromise = talopt::best_compromise(front);

    std::filesystem::create_directories(config.plan.output_dir);
    const auto path = std::filesystem::path(config.plan.output_dir) / "oracle_front.csv";
    talopt::export_front_csv(path.string(), front, compromise);

    std::cout << "oracle: enumerated " << result.enumerated << " candidates at speed "
              << speed << " m/s\n"
              << "oracle: front size " << front.size() << ", hypervolume "
              << result.hypervolume << " (reference " << result.reference.j1 << ", "
              << result.reference.j2 << ")\n"
              << "oracle: front written to " << path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlapping tracking-area-list planner and speed-sweep harness"};
    CliOptions options;

    app.add_option("--config", options.config_path, "JSON configuration file");
    app.add_option("--seed", options.seed, "base RNG seed")
        ->each([&](const std::string&) { options.seed_given = true; });
    app.add_option("--seeds", options.seeds, "explicit per-trial seeds")->delimiter(',');
    app.add_option("--trials", options.trials, "trials per speed range");
    app.add_option("--speed-range", options.speed_ranges,
                   "speed range as lo,hi in m/s (repeatable)")
        ->take_all();
    app.add_option("--population", options.population, "swarm size");
    app.add_option("--iterations", options.iterations, "swarm iterations");
    app.add_option("--out", options.out_dir, "output directory");
    app.add_flag("--emit-plot-data", options.emit_plot_data,
                 "also write whitespace-separated plot series");
    app.add_flag("--oracle", options.oracle,
                 "exhaustive ground-truth front instead of a swarm run (tiny instances)");
    app.add_flag("--paper-scale", options.paper_scale,
                 "population 10000 and 400 iterations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const talopt::ExperimentConfig config = assemble_config(options);

        // fail on an unusable output directory before burning compute
        std::error_code ec;
        std::filesystem::create_directories(config.plan.output_dir, ec);
        if (!std::filesystem::is_directory(config.plan.output_dir))
            throw talopt::ConfigError("output_dir: cannot create " + config.plan.output_dir);

        if (options.oracle)
            return run_oracle(config);

        talopt::ExperimentResults results;
        try {
            talopt::run_experiment(config, results);
        } catch (const std::exception& e) {
            // flush whatever finished before the failure
            if (!results.trials.empty()) {
                results.aggregates =
                    talopt::compute_aggregates(results.trials, config.plan.speed_ranges);
                talopt::export_results(results, config.plan.output_dir,
                                       config.plan.emit_plot_data);
                std::cerr << "error: trial failed after " << results.trials.size()
                          << " completed trials (partial results flushed): " << e.what()
                          << "\n";
                return 3;
            }
            throw;
        }
        talopt::export_results(results, config.plan.output_dir, config.plan.emit_plot_data);

        std::cout << "ran " << results.trials.size() << " trials over "
                  << config.plan.speed_ranges.size() << " speed ranges\n";
        for (const auto& agg : results.aggregates)
            std::cout << "range [" << agg.range.lo << ", " << agg.range.hi
                      << "] m/s: j1 " << agg.j1_mean << " +- " << agg.j1_std << ", j2 "
                      << agg.j2_mean << " +- " << agg.j2_std << ", power " << agg.power_mean
                      << " mW\n";
        std::cout << "results written to " << config.plan.output_dir << "\n";
        return 0;
    } catch (const talopt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const talopt::BudgetError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
