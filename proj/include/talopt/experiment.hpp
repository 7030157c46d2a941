#pragma once

#include "talopt/mopso.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace talopt {

struct SpeedRange {
    double lo = 0.0;
    double hi = 0.0;
    double midpoint() const { return 0.5 * (lo + hi); }
};

struct ExperimentPlan {
    std::vector<SpeedRange> speed_ranges{{0, 8}, {8, 16}, {16, 25}, {25, 33}};
    int trials_per_range = 4;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4};
    bool sample_speed_uniform = false; // default: range midpoint
    std::string output_dir = "out";
    bool emit_plot_data = false;
    double sigma_step = 0.1; // oracle grid
    std::uint64_t oracle_budget = 10'000'000;

    void validate() const;
};

struct ExperimentConfig {
    NetworkConfig network;
    MopsoParams mopso;
    ExperimentPlan plan;
};

/// Parses and fully validates a JSON configuration document. Missing keys
/// take the built-in defaults; an empty document gives the default
/// experiment. Unknown keys are rejected with the key named.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

struct TrialSummary {
    SpeedRange range;
    std::uint64_t seed = 0;
    double j1 = 0.0; // best compromise
    double j2 = 0.0;
    double power_mw = 0.0;
    double wall_ms = 0.0;
};

struct TrialRecord {
    TrialSummary summary;
    std::vector<ObjectivePair> front;
    std::size_t compromise_index = 0;
};

struct RangeAggregate {
    SpeedRange range;
    double j1_mean = 0.0, j1_std = 0.0, j1_rsd = 0.0;
    double j2_mean = 0.0, j2_std = 0.0, j2_rsd = 0.0;
    double power_mean = 0.0, power_std = 0.0, power_rsd = 0.0;
};

struct ExperimentResults {
    std::vector<TrialRecord> trials;
    std::vector<RangeAggregate> aggregates;
};

// aggregate statistics: sample (n-1) standard deviation and RSD = 100*std/mean
double mean(std::span<const double> values);
double sample_std(std::span<const double> values);
double relative_std_pct(std::span<const double> values);

std::vector<RangeAggregate> compute_aggregates(const std::vector<TrialRecord>& trials,
                                               const std::vector<SpeedRange>& ranges);

/// Runs every (speed range, seed) trial in plan order, appending to `out` as
/// it goes so a failed trial still leaves the finished ones available for a
/// partial flush. Aggregates are recomputed at the end.
void run_experiment(const ExperimentConfig& config, ExperimentResults& out);

/// Writes trials.csv, aggregates.csv, one front CSV per trial, metadata.json
/// and, when asked, the whitespace-separated plot series. Output depends only
/// on the results, so a re-export is byte-identical.
void export_results(const ExperimentResults& results, const std::string& out_dir,
                    bool emit_plot_data);

/// Front dump in the shared tabular format; flags exactly one row as the
/// compromise.
void export_front_csv(const std::string& path, const std::vector<ObjectivePair>& front,
                      std::size_t compromise_index);

} // namespace talopt
