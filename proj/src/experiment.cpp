#include "talopt/experiment.hpp"
#include "talopt/errors.hpp"
#include "talopt/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace talopt {

namespace {

using json = nlohmann::ordered_json;

template <typename T>
void read_field(const json& doc, const char* key, T& out) {
    if (!doc.contains(key))
        return;
    try {
        out = doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string(key) + ": invalid value");
    }
}

const char* const kKnownKeys[] = {
    "num_cells", "num_lists", "list_size", "max_offdiag", "users_per_cell",
    "paging_rate", "cell_radius_m", "speed_min_mps", "speed_max_mps",
    "tau_cost_unit", "relocation_cost_unit", "paging_cost_unit",
    "grid_rows", "grid_cols",
    "population", "iterations", "num_intervals", "cognitive_weight", "social_weight",
    "local_capacity", "global_capacity", "initial_inertia", "inertia_decay",
    "position_min", "position_max", "seed", "threads",
    "speed_ranges", "trials_per_range", "seeds", "speed_sampling",
    "output_dir", "emit_plot_data", "sigma_step", "oracle_budget",
};

ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object())
        throw ConfigError("config: document must be a JSON object");
    for (const auto& item : doc.items()) {
        const bool known = std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                                       [&](const char* k) { return item.key() == k; });
        if (!known)
            throw ConfigError(item.key() + ": unknown configuration key");
    }

    ExperimentConfig config;
    NetworkConfig& net = config.network;
    read_field(doc, "num_cells", net.num_cells);
    read_field(doc, "num_lists", net.num_lists);
    read_field(doc, "list_size", net.list_size);
    read_field(doc, "max_offdiag", net.max_offdiag);
    if (doc.contains("users_per_cell")) {
        const auto& users = doc.at("users_per_cell");
        if (users.is_number()) {
            net.default_users = users.get<double>();
        } else if (users.is_array()) {
            net.users_per_cell = users.get<std::vector<double>>();
        } else {
            throw ConfigError("users_per_cell: expected a number or an array");
        }
    }
    read_field(doc, "paging_rate", net.paging_rate);
    read_field(doc, "cell_radius_m", net.cell_radius_m);
    read_field(doc, "speed_min_mps", net.speed_min_mps);
    read_field(doc, "speed_max_mps", net.speed_max_mps);
    read_field(doc, "tau_cost_unit", net.tau_cost_unit);
    read_field(doc, "relocation_cost_unit", net.relocation_cost_unit);
    read_field(doc, "paging_cost_unit", net.paging_cost_unit);
    read_field(doc, "grid_rows", net.grid_rows);
    read_field(doc, "grid_cols", net.grid_cols);

    MopsoParams& mopso = config.mopso;
    read_field(doc, "population", mopso.population);
    read_field(doc, "iterations", mopso.iterations);
    read_field(doc, "num_intervals", mopso.num_intervals);
    read_field(doc, "cognitive_weight", mopso.cognitive_weight);
    read_field(doc, "social_weight", mopso.social_weight);
    read_field(doc, "local_capacity", mopso.local_capacity);
    read_field(doc, "global_capacity", mopso.global_capacity);
    read_field(doc, "initial_inertia", mopso.initial_inertia);
    read_field(doc, "inertia_decay", mopso.inertia_decay);
    read_field(doc, "position_min", mopso.position_min);
    read_field(doc, "position_max", mopso.position_max);
    read_field(doc, "seed", mopso.seed);
    read_field(doc, "threads", mopso.threads);

    ExperimentPlan& plan = config.plan;
    if (doc.contains("speed_ranges")) {
        plan.speed_ranges.clear();
        try {
            for (const auto& pair : doc.at("speed_ranges")) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ConfigError("");
                plan.speed_ranges.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
            }
        } catch (const std::exception&) {
            throw ConfigError("speed_ranges: expected an array of [lo, hi] pairs");
        }
    }
    read_field(doc, "trials_per_range", plan.trials_per_range);
    if (doc.contains("seeds")) {
        read_field(doc, "seeds", plan.seeds);
        if (!doc.contains("trials_per_range"))
            plan.trials_per_range = static_cast<int>(plan.seeds.size());
    } else if (doc.contains("trials_per_range") && plan.trials_per_range >= 1) {
        // no explicit seed list: run consecutive seeds
        plan.seeds.clear();
        for (int i = 0; i < plan.trials_per_range; ++i)
            plan.seeds.push_back(static_cast<std::uint64_t>(i) + 1);
    }
    if (doc.contains("speed_sampling")) {
        const auto mode = doc.at("speed_sampling").get<std::string>();
        if (mode == "midpoint")
            plan.sample_speed_uniform = false;
        else if (mode == "uniform")
            plan.sample_speed_uniform = true;
        else
            throw ConfigError("speed_sampling: expected \"midpoint\" or \"uniform\"");
    }
    read_field(doc, "output_dir", plan.output_dir);
    read_field(doc, "emit_plot_data", plan.emit_plot_data);
    read_field(doc, "sigma_step", plan.sigma_step);
    read_field(doc, "oracle_budget", plan.oracle_budget);

    config.network.validate();
    config.mopso.validate();
    config.plan.validate();
    if (mopso.position_min < 0.0 || mopso.position_max > 1.0)
        throw ConfigError("position_min/position_max: the relaxed encoding needs bounds within [0, 1]");
    return config;
}

std::string fmt_num(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::string fmt_ms(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("output: cannot write " + path.string());
    return file;
}

std::string range_tag(const SpeedRange& range) {
    return fmt_num(range.lo) + "-" + fmt_num(range.hi);
}

} // namespace

void ExperimentPlan::validate() const {
    if (speed_ranges.empty())
        throw ConfigError("speed_ranges: need at least one range");
    for (std::size_t i = 0; i < speed_ranges.size(); ++i) {
        const auto& range = speed_ranges[i];
        if (range.lo < 0.0 || range.lo > range.hi)
            throw ConfigError("speed_ranges: each range needs 0 <= lo <= hi");
        if (i > 0 && range.lo < speed_ranges[i - 1].hi)
            throw ConfigError("speed_ranges: ranges must be ordered and non-overlapping");
    }
    if (trials_per_range < 1)
        throw ConfigError("trials_per_range: must be >= 1");
    if (static_cast<int>(seeds.size()) != trials_per_range)
        throw ConfigError("seeds: length must equal trials_per_range");
    if (output_dir.empty())
        throw ConfigError("output_dir: must not be empty");
    if (sigma_step <= 0.0 || sigma_step > 1.0)
        throw ConfigError("sigma_step: must be in (0, 1]");
    if (oracle_budget < 1)
        throw ConfigError("oracle_budget: must be >= 1");
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = text.empty() ? json::object() : json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    try {
        return parse_config(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream file(path);
    if (!file)
        throw ConfigError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return config_from_json_text(buffer.str());
}

double mean(std::span<const double> values) {
    if (values.empty())
        return 0.0;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
    if (values.size() < 2)
        return 0.0;
    const double m = mean(values);
    double sum_sq = 0.0;
    for (double v : values)
        sum_sq += (v - m) * (v - m);
    return std::sqrt(sum_sq / static_cast<double>(values.size() - 1));
}

double relative_std_pct(std::span<const double> values) {
    const double m = mean(values);
    if (m == 0.0)
        return 0.0;
    return 100.0 * sample_std(values) / std::abs(m);
}

std::vector<RangeAggregate> compute_aggregates(const std::vector<TrialRecord>& trials,
                                               const std::vector<SpeedRange>& ranges) {
    std::vector<RangeAggregate> aggregates;
    aggregates.reserve(ranges.size());
    for (const auto& range : ranges) {
        std::vector<double> j1s, j2s, powers;
        for (const auto& trial : trials) {
            if (trial.summary.range.lo == range.lo && trial.summary.range.hi == range.hi) {
                j1s.push_back(trial.summary.j1);
                j2s.push_back(trial.summary.j2);
                powers.push_back(trial.summary.power_mw);
            }
        }
        RangeAggregate agg;
        agg.range = range;
        agg.j1_mean = mean(j1s);
        agg.j1_std = sample_std(j1s);
        agg.j1_rsd = relative_std_pct(j1s);
        agg.j2_mean = mean(j2s);
        agg.j2_std = sample_std(j2s);
        agg.j2_rsd = relative_std_pct(j2s);
        agg.power_mean = mean(powers);
        agg.power_std = sample_std(powers);
        agg.power_rsd = relative_std_pct(powers);
        aggregates.push_back(agg);
    }
    return aggregates;
}

void run_experiment(const ExperimentConfig& config, ExperimentResults& out) {
    config.network.validate();
    config.mopso.validate();
    config.plan.validate();
    for (const auto& range : config.plan.speed_ranges)
        if (range.lo < config.network.speed_min_mps || range.hi > config.network.speed_max_mps)
            throw ConfigError("speed_ranges: range [" + fmt_num(range.lo) + ", " +
                              fmt_num(range.hi) + "] falls outside the network speed domain");

    const Adjacency adjacency = build_topology(config.network);
    for (std::size_t range_index = 0; range_index < config.plan.speed_ranges.size();
         ++range_index) {
        const SpeedRange& range = config.plan.speed_ranges[range_index];
        for (const std::uint64_t seed : config.plan.seeds) {
            double speed = range.midpoint();
            if (config.plan.sample_speed_uniform) {
                auto rng = make_rng_stream(seed, 1'000'000 + range_index);
                speed = std::uniform_real_distribution<double>(range.lo, range.hi)(rng);
            }
            const MobilityModel mobility = build_mobility(config.network, speed, adjacency);
            const Evaluator evaluator(config.network, mobility);
            MopsoParams params = config.mopso;
            params.seed = seed;

            const auto start = std::chrono::steady_clock::now();
            const MopsoResult run = run_mopso(evaluator, params);
            const auto stop = std::chrono::steady_clock::now();
            const double wall_ms =
                std::chrono::duration<double, std::milli>(stop - start).count();

            const ArchiveEntry& best = run.front[run.compromise_index];
            const AssignmentSolution solution = decode(best.position, config.network);

            TrialRecord record;
            record.summary = {range, seed, best.objectives.j1, best.objectives.j2,
                              evaluator.power_mw(solution), wall_ms};
            record.front.reserve(run.front.size());
            for (const auto& entry : run.front)
                record.front.push_back(entry.objectives);
            record.compromise_index = run.compromise_index;
            out.trials.push_back(std::move(record));
        }
    }
    out.aggregates = compute_aggregates(out.trials, config.plan.speed_ranges);
}

void export_front_csv(const std::string& path, const std::vector<ObjectivePair>& front,
                      std::size_t compromise_index) {
    auto file = open_output(path);
    file << "j1,j2,is_compromise\n";
    for (std::size_t i = 0; i < front.size(); ++i)
        file << fmt_num(front[i].j1) << ',' << fmt_num(front[i].j2) << ','
             << (i == compromise_index ? 1 : 0) << '\n';
}

void export_results(const ExperimentResults& results, const std::string& out_dir,
                    bool emit_plot_data) {
    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    {
        auto file = open_output(dir / "trials.csv");
        file << "speed_lo,speed_hi,seed,j1,j2,power_mw,wall_ms\n";
        for (const auto& trial : results.trials) {
            const auto& s = trial.summary;
            file << fmt_num(s.range.lo) << ',' << fmt_num(s.range.hi) << ',' << s.seed << ','
                 << fmt_num(s.j1) << ',' << fmt_num(s.j2) << ',' << fmt_num(s.power_mw) << ','
                 << fmt_ms(s.wall_ms) << '\n';
        }
    }
    {
        auto file = open_output(dir / "aggregates.csv");
        file << "speed_lo,speed_hi,j1_mean,j1_std,j1_rsd,j2_mean,j2_std,j2_rsd,"
                "power_mean,power_std,power_rsd\n";
        for (const auto& agg : results.aggregates) {
            file << fmt_num(agg.range.lo) << ',' << fmt_num(agg.range.hi) << ','
                 << fmt_num(agg.j1_mean) << ',' << fmt_num(agg.j1_std) << ','
                 << fmt_num(agg.j1_rsd) << ',' << fmt_num(agg.j2_mean) << ','
                 << fmt_num(agg.j2_std) << ',' << fmt_num(agg.j2_rsd) << ','
                 << fmt_num(agg.power_mean) << ',' << fmt_num(agg.power_std) << ','
                 << fmt_num(agg.power_rsd) << '\n';
        }
    }
    for (const auto& trial : results.trials) {
        const auto& s = trial.summary;
        const std::string name =
            "front_" + range_tag(s.range) + "_s" + std::to_string(s.seed) + ".csv";
        export_front_csv((dir / name).string(), trial.front, trial.compromise_index);
    }
    {
        json meta;
        meta["columns"]["trials.csv"] = "speed_lo,speed_hi,seed,j1,j2,power_mw,wall_ms";
        meta["columns"]["aggregates.csv"] =
            "per-range mean, sample (n-1) standard deviation and RSD = 100*std/mean "
            "of the best-compromise j1, j2 and power over the seeds";
        meta["columns"]["front_*.csv"] =
            "final non-dominated archive of one trial; exactly one row has is_compromise=1";
        meta["definitions"]["speed_representative"] =
            "midpoint of each speed range unless uniform per-trial sampling is enabled";
        meta["definitions"]["overhead_series"] =
            "plot_overhead.dat: mean over trials of the best-compromise j1+j2 per range";
        meta["definitions"]["power_series"] =
            "plot_power.dat: mean over trials of the best-compromise per-UE power (mW) per range";
        meta["definitions"]["power_model"] =
            "10 mW per triggered tracking area update, network-averaged per UE";
        auto file = open_output(dir / "metadata.json");
        file << meta.dump(2) << '\n';
    }
    if (emit_plot_data) {
        for (const auto& agg : results.aggregates) {
            // front scatter of the range's first trial
            for (const auto& trial : results.trials) {
                if (trial.summary.range.lo != agg.range.lo ||
                    trial.summary.range.hi != agg.range.hi)
                    continue;
                auto file = open_output(dir / ("plot_front_" + range_tag(agg.range) + ".dat"));
                for (const auto& p : trial.front)
                    file << fmt_num(p.j1) << ' ' << fmt_num(p.j2) << '\n';
                break;
            }
        }
        {
            auto file = open_output(dir / "plot_overhead.dat");
            for (const auto& agg : results.aggregates)
                file << fmt_num(agg.range.midpoint()) << ' '
                     << fmt_num(agg.j1_mean + agg.j2_mean) << '\n';
        }
        {
            auto file = open_output(dir / "plot_power.dat");
            for (const auto& agg : results.aggregates)
                file << fmt_num(agg.range.midpoint()) << ' ' << fmt_num(agg.power_mean) << '\n';
        }
    }
}

} // namespace talopt
