#include <cstdio>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wogan/errors.hpp"
#include "wogan/harness.hpp"
#include "wogan/svg.hpp"

namespace fs = std::filesystem;
using namespace wogan;

namespace {

// WOGAN_VERBOSE=0 silences progress output; 2 adds per-repetition lines.
int verbosity() {
    const char* v = std::getenv("WOGAN_VERBOSE");
    return v ? std::atoi(v) : 1;
}

void info(const std::string& msg) {
    if (verbosity() >= 1) std::cerr << msg << "\n";
}

struct RunArgs {
    std::string config;
    std::optional<std::string> algorithm;
    std::optional<int> budget_tests;
    std::optional<double> budget_seconds;
    std::optional<int> reps;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;
    std::optional<std::string> timing;
};

int cmd_run(const RunArgs& a) {
    CampaignConfig cfg = a.config.empty() ? CampaignConfig{} : load_config(a.config);
    if (a.algorithm) cfg.algorithm = algorithm_from_string(*a.algorithm);
    if (a.budget_tests && a.budget_seconds) throw ConfigError("give either --budget-tests or --budget-seconds");
    if (a.budget_tests) cfg.budget = Budget::executions(*a.budget_tests);
    if (a.budget_seconds) cfg.budget = Budget::seconds(*a.budget_seconds);
    if (a.reps) cfg.repetitions = *a.reps;
    if (a.seed) cfg.seed = *a.seed;
    if (a.out) cfg.output_dir = *a.out;
    if (a.jobs) cfg.jobs = *a.jobs;
    if (a.timing) cfg.timing = timing_mode_from_string(*a.timing);
    cfg.validate();

    info("running " + to_string(cfg.algorithm) + ", " + std::to_string(cfg.repetitions) + " repetitions into " +
         cfg.output_dir.string());
    const CampaignResult result = run_experiment(cfg);
    if (verbosity() >= 2)
        for (const RepetitionResult& r : result.repetitions)
            std::cerr << "rep " << r.repetition << ": " << r.stats.executed << " executed, " << r.stats.failing
                      << " failing\n";
    const std::vector<CampaignResult> one{result};
    std::cout << aggregate(std::span<const CampaignResult>(one)).to_text();
    return 0;
}

int cmd_aggregate(const std::vector<std::string>& dirs, const std::string& out) {
    const std::vector<fs::path> paths(dirs.begin(), dirs.end());
    const ComparisonTable table = aggregate(std::span<const fs::path>(paths));
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw IoError("cannot open " + out + " for writing");
        f << table.to_csv();
    }
    std::cout << table.to_text();
    return 0;
}

int cmd_plot(const std::vector<std::string>& dirs, const std::string& out, const std::string& metric) {
    std::vector<LabeledValues> groups;
    for (const std::string& d : dirs) {
        const CampaignResult r = load_campaign(d);
        std::vector<double> values;
        for (const RepetitionResult& rep : r.repetitions) {
            if (metric == "failing") values.push_back(rep.stats.failing);
            else if (metric == "executed") values.push_back(rep.stats.executed);
            else if (metric == "fitness80") values.push_back(rep.stats.mean_fitness_final_80);
            else if (metric == "fitness20") values.push_back(rep.stats.mean_fitness_final_20);
            else if (rep.stats.diversity) values.push_back(*rep.stats.diversity);
        }
        groups.emplace_back(r.algorithm, std::move(values));
    }
    emit_boxplot(groups, out, metric + " per repetition");
    info("wrote " + out);
    return 0;
}

CurvatureTest read_test(const std::string& spec) {
    // Either a comma-separated list of curvatures or a JSON file with "kappas".
    CurvatureTest t;
    if (fs::exists(spec)) {
        std::ifstream in(spec);
        if (!in) throw IoError("cannot open " + spec);
        nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("kappas")) throw ConfigError(spec + ": expected an object with kappas");
        try {
            t.kappas = j["kappas"].get<std::vector<double>>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError(spec + ": kappas must be numbers");
        }
        return t;
    }
    std::string cell;
    std::istringstream in(spec);
    while (std::getline(in, cell, ',')) {
        try {
            t.kappas.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("cannot parse curvature '" + cell + "'");
        }
    }
    return t;
}

int cmd_replay(const std::string& test_spec, const std::string& out, const std::string& config) {
    const CampaignConfig cfg = config.empty() ? CampaignConfig{} : load_config(config);
    const ExecutionResult r = replay(read_test(test_spec), out, cfg.geometry, cfg.sim);
    std::printf("fitness %.6f over %zu steps, written to %s\n", r.fitness, r.bolp_trace.size(), out.c_str());
    return 0;
}

int cmd_calibrate(const std::string& config, int samples, long long seed, const std::vector<double>& lookaheads) {
    const CampaignConfig cfg = config.empty() ? CampaignConfig{} : load_config(config);
    std::vector<double> sweep = lookaheads;
    if (sweep.empty()) sweep.push_back(cfg.sim.lookahead);
    std::printf("lookahead,valid,failing,failure_rate,mean_fitness\n");
    for (double la : sweep) {
        SimConfig sim = cfg.sim;
        sim.lookahead = la;
        sim.validate();
        const CalibrationReport r =
            calibrate(cfg.geometry, sim, samples, static_cast<std::uint64_t>(seed), cfg.failure_threshold);
        std::printf("%g,%d,%d,%.4f,%.4f\n", la, r.valid, r.failing, r.failure_rate(), r.mean_fitness);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"WOGAN online falsification toolkit"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run repeated campaigns");
    run->add_option("--config", run_args.config, "JSON config file");
    run->add_option("--algorithm", run_args.algorithm, "wogan, random or frenetic");
    run->add_option("--budget-tests", run_args.budget_tests, "execution budget per repetition");
    run->add_option("--budget-seconds", run_args.budget_seconds, "wall-clock budget per repetition");
    run->add_option("--reps", run_args.reps, "number of repetitions");
    run->add_option("--seed", run_args.seed, "base seed");
    run->add_option("--out", run_args.out, "output directory");
    run->add_option("--jobs", run_args.jobs, "parallel repetitions");
    run->add_option("--timing", run_args.timing, "wall or logical");

    std::vector<std::string> agg_dirs;
    std::string agg_out;
    auto* agg = app.add_subcommand("aggregate", "compare campaign directories");
    agg->add_option("dirs", agg_dirs, "campaign directories")->required();
    agg->add_option("--out", agg_out, "write the table as CSV");

    std::vector<std::string> plot_dirs;
    std::string plot_out = "boxplot.svg";
    std::string plot_metric = "failing";
    auto* plot = app.add_subcommand("plot", "box plot of a per-repetition statistic");
    plot->add_option("dirs", plot_dirs, "campaign directories")->required();
    plot->add_option("--out", plot_out, "SVG output path");
    plot->add_option("--metric", plot_metric, "statistic to plot")
        ->check(CLI::IsMember({"failing", "executed", "fitness80", "fitness20", "diversity"}));

    std::string replay_test, replay_out = "replay", replay_config;
    auto* rep = app.add_subcommand("replay", "simulate one test and render it");
    rep->add_option("test", replay_test, "comma-separated curvatures or a road JSON file")->required();
    rep->add_option("--out", replay_out, "output directory");
    rep->add_option("--config", replay_config, "JSON config file");

    std::string cal_config;
    int cal_samples = 2000;
    long long cal_seed = 0;
    std::vector<double> cal_lookaheads;
    auto* cal = app.add_subcommand("calibrate", "mock SUT failure rate on uniform random tests");
    cal->add_option("--config", cal_config, "JSON config file");
    cal->add_option("--samples", cal_samples, "number of sampled tests");
    cal->add_option("--seed", cal_seed, "seed");
    cal->add_option("--lookahead", cal_lookaheads, "lookahead values to sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*agg) return cmd_aggregate(agg_dirs, agg_out);
        if (*plot) return cmd_plot(plot_dirs, plot_out, plot_metric);
        if (*rep) return cmd_replay(replay_test, replay_out, replay_config);
        if (*cal) return cmd_calibrate(cal_config, cal_samples, cal_seed, cal_lookaheads);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
