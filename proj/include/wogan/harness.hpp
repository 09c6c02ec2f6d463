#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wogan/baselines.hpp"
#include "wogan/engine.hpp"
#include "wogan/metrics.hpp"
#include "wogan/records.hpp"
#include "wogan/sut.hpp"
#include "wogan/wgan.hpp"

namespace wogan {

enum class Algorithm { Wogan, Random, Frenetic };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Everything needed to reproduce an experiment.
struct CampaignConfig {
    Algorithm algorithm = Algorithm::Wogan;
    Budget budget = Budget::executions(300);
    int repetitions = 20;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = "results";
    /// Worker threads for repetitions.
    int jobs = 1;
    /// Defaults to logical timing for count budgets and wall timing otherwise.
    std::optional<TimingMode> timing;
    /// Applies to failure counting, diversity and the algorithms' own rules.
    double failure_threshold = 0.95;

    GeometryConfig geometry;
    SimConfig sim;
    WoganConfig wogan;
    nn::WganHyper wgan;
    FreneticConfig frenetic;

    TimingMode effective_timing() const;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Overlays fields present in `j` onto `base`. Unknown keys are errors.
CampaignConfig config_from_json(const nlohmann::json& j, CampaignConfig base = {});
nlohmann::json config_to_json(const CampaignConfig& cfg);
CampaignConfig load_config(const std::filesystem::path& path);

struct RepetitionResult {
    int repetition = 0;
    std::uint64_t seed = 0;
    SuiteStats stats;
};

/// Mean and sample SD of one column; absent when no repetition has a value.
struct ColumnSummary {
    std::optional<double> mean;
    std::optional<double> sd;
};

struct CampaignSummary {
    ColumnSummary executed;
    ColumnSummary failing;
    ColumnSummary fitness_final_80;
    ColumnSummary fitness_final_20;
    ColumnSummary diversity;
    ColumnSummary generation_time;
};

ColumnSummary summarize(std::span<const double> values);
CampaignSummary summarize(std::span<const RepetitionResult> reps);

struct CampaignResult {
    std::string algorithm;
    std::vector<RepetitionResult> repetitions;
    CampaignSummary summary;
};

/// Output file names inside a campaign directory.
std::filesystem::path records_path(const std::filesystem::path& dir, int repetition);
std::filesystem::path timing_path(const std::filesystem::path& dir, int repetition);

/// Runs one repetition in isolation, streaming its records to `sink`.
/// Seeded only by `seed`.
struct RepetitionOutput {
    TestSuite suite;
    std::optional<nn::WoganModels> models;
};
RepetitionOutput run_repetition(const CampaignConfig& cfg, std::uint64_t seed, RecordSink sink = {});

/// Runs all repetitions (seeds seed, seed + 1, ...) and writes record
/// streams, timing sidecars, stats.csv, aggregate.csv, campaign.json and,
/// for WOGAN, model checkpoints. Throws IoError or ConfigError.
CampaignResult run_experiment(const CampaignConfig& cfg);

/// Reads a campaign directory and checks that aggregate.csv agrees with the
/// per-repetition rows. Throws SchemaMismatch otherwise.
CampaignResult load_campaign(const std::filesystem::path& dir);

/// Table-1 style comparison: one column per campaign, ten rows.
struct ComparisonTable {
    std::vector<std::string> columns;
    std::vector<std::string> rows;
    std::vector<std::vector<std::string>> cells;

    std::string to_csv() const;
    std::string to_text() const;
};

ComparisonTable aggregate(std::span<const std::filesystem::path> dirs);
ComparisonTable aggregate(std::span<const CampaignResult> results);

/// Simulates `test`, writing trace.csv, road.svg and road.json into
/// `out_dir`. Throws InvalidRoad before writing anything if the road fails
/// validation.
ExecutionResult replay(const CurvatureTest& test, const std::filesystem::path& out_dir, const GeometryConfig& geometry,
                       const SimConfig& sim);

struct CalibrationReport {
    double lookahead = 0.0;
    int samples = 0;
    int valid = 0;
    int failing = 0;
    double mean_fitness = 0.0;
    std::vector<int> histogram;

    double failure_rate() const { return valid > 0 ? static_cast<double>(failing) / valid : 0.0; }
};

/// Executes `samples` uniform random tests (invalid ones are counted and
/// skipped) and reports the failure rate at `threshold`.
CalibrationReport calibrate(const GeometryConfig& geometry, const SimConfig& sim, int samples, std::uint64_t seed,
                            double threshold = 0.95);

} // namespace wogan
