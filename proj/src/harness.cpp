#include "wogan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "wogan/errors.hpp"
#include "wogan/svg.hpp"

namespace wogan {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads optional fields of a JSON object, rejecting unknown keys.
class FieldReader {
public:
    FieldReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    template <typename T>
    FieldReader& read(const char* key, T& field) {
        known_.insert(key);
        if (!obj_.contains(key)) return *this;
        try {
            field = obj_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "." + key + ": wrong type");
        }
        return *this;
    }

    const json* child(const char* key) {
        known_.insert(key);
        return obj_.contains(key) ? &obj_.at(key) : nullptr;
    }

    void finish() const {
        for (const auto& [key, _] : obj_.items())
            if (!known_.count(key)) throw ConfigError(path_ + "." + key + ": unknown field");
    }

    const std::string& path() const { return path_; }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> known_;
};

std::string rep_name(const char* stem, int rep, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_rep%03d%s", stem, rep, ext);
    return buf;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

std::string fmt_precise(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", *v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaMismatch("cannot parse " + what + " value '" + s + "'");
    }
}

// Label / accessor pairs of the Table-1 style aggregate.
struct AggregateRow {
    const char* label;
    std::optional<double> (*get)(const CampaignSummary&);
};

const std::vector<AggregateRow>& aggregate_rows() {
    static const std::vector<AggregateRow> rows = {
        {"mean executed tests", [](const CampaignSummary& s) { return s.executed.mean; }},
        {"SD executed tests", [](const CampaignSummary& s) { return s.executed.sd; }},
        {"mean failing tests", [](const CampaignSummary& s) { return s.failing.mean; }},
        {"SD failing tests", [](const CampaignSummary& s) { return s.failing.sd; }},
        {"mean fitness final 80%", [](const CampaignSummary& s) { return s.fitness_final_80.mean; }},
        {"SD fitness final 80%", [](const CampaignSummary& s) { return s.fitness_final_80.sd; }},
        {"mean fitness final 20%", [](const CampaignSummary& s) { return s.fitness_final_20.mean; }},
        {"SD fitness final 20%", [](const CampaignSummary& s) { return s.fitness_final_20.sd; }},
        {"mean diversity", [](const CampaignSummary& s) { return s.diversity.mean; }},
        {"SD diversity", [](const CampaignSummary& s) { return s.diversity.sd; }},
    };
    return rows;
}

} // namespace

std::string to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Wogan: return "wogan";
    case Algorithm::Random: return "random";
    case Algorithm::Frenetic: return "frenetic";
    }
    return "wogan";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "wogan") return Algorithm::Wogan;
    if (name == "random") return Algorithm::Random;
    if (name == "frenetic") return Algorithm::Frenetic;
    throw ConfigError("algorithm: expected wogan, random or frenetic, got '" + name + "'");
}

TimingMode CampaignConfig::effective_timing() const {
    if (timing) return *timing;
    return budget.counts_executions() ? TimingMode::Logical : TimingMode::Wall;
}

void CampaignConfig::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions: must be >= 1");
    if (!(budget.amount > 0)) throw ConfigError("budget: must be positive");
    if (jobs < 1) throw ConfigError("jobs: must be >= 1");
    if (!(failure_threshold >= 0.0 && failure_threshold <= 1.0))
        throw ConfigError("failure_threshold: must lie in [0, 1]");
    geometry.validate();
    sim.validate();
    wogan.validate();
    wgan.validate();
    frenetic.validate();
    if (algorithm == Algorithm::Wogan && budget.counts_executions() && budget.amount < wogan.initial_tests)
        throw ConfigError("budget: below wogan.initial_tests");
    if (algorithm == Algorithm::Frenetic && budget.counts_executions() && budget.amount < frenetic.init_population)
        throw ConfigError("budget: below frenetic.init_population");
}

CampaignConfig config_from_json(const json& j, CampaignConfig cfg) {
    FieldReader top(j, "config");
    std::string algorithm = to_string(cfg.algorithm);
    std::string output = cfg.output_dir.string();
    top.read("algorithm", algorithm).read("repetitions", cfg.repetitions).read("seed", cfg.seed);
    top.read("output_dir", output).read("jobs", cfg.jobs).read("failure_threshold", cfg.failure_threshold);
    cfg.algorithm = algorithm_from_string(algorithm);
    cfg.output_dir = output;

    if (const json* t = top.child("timing")) {
        if (!t->is_string()) throw ConfigError("config.timing: wrong type");
        cfg.timing = timing_mode_from_string(t->get<std::string>());
    }
    if (const json* b = top.child("budget")) {
        FieldReader r(*b, "config.budget");
        std::optional<int> tests;
        std::optional<double> seconds;
        if (b->contains("executions")) tests.emplace(0);
        if (b->contains("seconds")) seconds.emplace(0.0);
        if (tests) r.read("executions", *tests);
        if (seconds) r.read("seconds", *seconds);
        r.finish();
        if (tests && seconds) throw ConfigError("config.budget: give either executions or seconds");
        if (tests) cfg.budget = Budget::executions(*tests);
        if (seconds) cfg.budget = Budget::seconds(*seconds);
    }
    if (const json* g = top.child("geometry")) {
        FieldReader r(*g, "config.geometry");
        std::vector<double> start{cfg.geometry.start_point.x, cfg.geometry.start_point.y};
        r.read("map_size", cfg.geometry.map_size).read("step_length", cfg.geometry.step_length);
        r.read("start_point", start).read("start_heading", cfg.geometry.start_heading);
        r.read("samples_per_segment", cfg.geometry.samples_per_segment).read("road_width", cfg.geometry.road_width);
        r.read("lane_width", cfg.geometry.lane_width).read("lane_offset", cfg.geometry.lane_offset);
        r.finish();
        if (start.size() != 2) throw ConfigError("config.geometry.start_point: expected [x, y]");
        cfg.geometry.start_point = {start[0], start[1]};
    }
    if (const json* s = top.child("sim")) {
        FieldReader r(*s, "config.sim");
        r.read("wheelbase", cfg.sim.wheelbase).read("car_length", cfg.sim.car_length);
        r.read("car_width", cfg.sim.car_width).read("speed", cfg.sim.speed).read("lookahead", cfg.sim.lookahead);
        r.read("max_steer", cfg.sim.max_steer).read("max_steer_rate", cfg.sim.max_steer_rate);
        r.read("dt", cfg.sim.dt).read("max_sim_time", cfg.sim.max_sim_time);
        r.finish();
    }
    if (const json* w = top.child("wogan")) {
        FieldReader r(*w, "config.wogan");
        std::string selection = cfg.wogan.selection == BinSelection::DescendingScan ? "scan" : "proportional";
        r.read("initial_tests", cfg.wogan.initial_tests).read("target_reducer", cfg.wogan.target_reducer);
        r.read("latent_dim", cfg.wogan.latent_dim).read("test_dim", cfg.wogan.test_dim);
        r.read("inner_loop_cap", cfg.wogan.inner_loop_cap).read("bins", cfg.wogan.bins);
        r.read("batch_size", cfg.wogan.batch_size).read("bin_selection", selection);
        r.read("analyzer_epochs_per_round", cfg.wogan.analyzer_epochs_per_round);
        r.read("wgan_steps_per_round", cfg.wogan.wgan_steps_per_round);
        r.read("analyzer_batch_size", cfg.wogan.analyzer_batch_size).read("analyzer_lr", cfg.wogan.analyzer_lr);
        r.read("analyzer_beta1", cfg.wogan.analyzer_beta1).read("analyzer_beta2", cfg.wogan.analyzer_beta2);
        r.finish();
        if (selection == "scan") cfg.wogan.selection = BinSelection::DescendingScan;
        else if (selection == "proportional") cfg.wogan.selection = BinSelection::Proportional;
        else throw ConfigError("config.wogan.bin_selection: expected scan or proportional");
    }
    if (const json* w = top.child("wgan")) {
        FieldReader r(*w, "config.wgan");
        r.read("critic_lr", cfg.wgan.critic_lr).read("generator_lr", cfg.wgan.generator_lr);
        r.read("gp_coefficient", cfg.wgan.gp_coefficient);
        r.read("critic_steps_per_generator_step", cfg.wgan.critic_steps_per_generator_step);
        r.read("batch_size", cfg.wgan.batch_size).read("beta1", cfg.wgan.beta1).read("beta2", cfg.wgan.beta2);
        r.read("finite_difference_penalty", cfg.wgan.finite_difference_penalty);
        r.finish();
    }
    if (const json* f = top.child("frenetic")) {
        FieldReader r(*f, "config.frenetic");
        r.read("init_population", cfg.frenetic.init_population).read("road_points", cfg.frenetic.road_points);
        r.read("road_points_jitter", cfg.frenetic.road_points_jitter);
        r.read("passed_mutation_scale", cfg.frenetic.passed_mutation_scale);
        r.read("length_jitter_probability", cfg.frenetic.length_jitter_probability);
        r.read("uniform_selection_floor", cfg.frenetic.uniform_selection_floor);
        r.finish();
    }
    top.finish();
    return cfg;
}

json config_to_json(const CampaignConfig& cfg) {
    json budget = cfg.budget.counts_executions() ? json{{"executions", static_cast<int>(cfg.budget.amount)}}
                                                 : json{{"seconds", cfg.budget.amount}};
    return {
        {"algorithm", to_string(cfg.algorithm)},
        {"budget", budget},
        {"repetitions", cfg.repetitions},
        {"seed", cfg.seed},
        {"output_dir", cfg.output_dir.string()},
        {"jobs", cfg.jobs},
        {"timing", to_string(cfg.effective_timing())},
        {"failure_threshold", cfg.failure_threshold},
        {"geometry",
         {{"map_size", cfg.geometry.map_size},
          {"step_length", cfg.geometry.step_length},
          {"start_point", {cfg.geometry.start_point.x, cfg.geometry.start_point.y}},
          {"start_heading", cfg.geometry.start_heading},
          {"samples_per_segment", cfg.geometry.samples_per_segment},
          {"road_width", cfg.geometry.road_width},
          {"lane_width", cfg.geometry.lane_width},
          {"lane_offset", cfg.geometry.lane_offset}}},
        {"sim",
         {{"wheelbase", cfg.sim.wheelbase},
          {"car_length", cfg.sim.car_length},
          {"car_width", cfg.sim.car_width},
          {"speed", cfg.sim.speed},
          {"lookahead", cfg.sim.lookahead},
          {"max_steer", cfg.sim.max_steer},
          {"max_steer_rate", cfg.sim.max_steer_rate},
          {"dt", cfg.sim.dt},
          {"max_sim_time", cfg.sim.max_sim_time}}},
        {"wogan",
         {{"initial_tests", cfg.wogan.initial_tests},
          {"target_reducer", cfg.wogan.target_reducer},
          {"latent_dim", cfg.wogan.latent_dim},
          {"test_dim", cfg.wogan.test_dim},
          {"inner_loop_cap", cfg.wogan.inner_loop_cap},
          {"bins", cfg.wogan.bins},
          {"batch_size", cfg.wogan.batch_size},
          {"bin_selection", cfg.wogan.selection == BinSelection::DescendingScan ? "scan" : "proportional"},
          {"analyzer_epochs_per_round", cfg.wogan.analyzer_epochs_per_round},
          {"wgan_steps_per_round", cfg.wogan.wgan_steps_per_round},
          {"analyzer_batch_size", cfg.wogan.analyzer_batch_size},
          {"analyzer_lr", cfg.wogan.analyzer_lr},
          {"analyzer_beta1", cfg.wogan.analyzer_beta1},
          {"analyzer_beta2", cfg.wogan.analyzer_beta2}}},
        {"wgan",
         {{"critic_lr", cfg.wgan.critic_lr},
          {"generator_lr", cfg.wgan.generator_lr},
          {"gp_coefficient", cfg.wgan.gp_coefficient},
          {"critic_steps_per_generator_step", cfg.wgan.critic_steps_per_generator_step},
          {"batch_size", cfg.wgan.batch_size},
          {"beta1", cfg.wgan.beta1},
          {"beta2", cfg.wgan.beta2},
          {"finite_difference_penalty", cfg.wgan.finite_difference_penalty}}},
        {"frenetic",
         {{"init_population", cfg.frenetic.init_population},
          {"road_points", cfg.frenetic.road_points},
          {"road_points_jitter", cfg.frenetic.road_points_jitter},
          {"passed_mutation_scale", cfg.frenetic.passed_mutation_scale},
          {"length_jitter_probability", cfg.frenetic.length_jitter_probability},
          {"uniform_selection_floor", cfg.frenetic.uniform_selection_floor}}},
    };
}

CampaignConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config " + path.string() + ": not valid JSON");
    return config_from_json(j);
}

ColumnSummary summarize(std::span<const double> values) {
    ColumnSummary s;
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    s.mean = mean;
    s.sd = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
    return s;
}

CampaignSummary summarize(std::span<const RepetitionResult> reps) {
    std::vector<double> executed, failing, f80, f20, diversity, gen;
    for (const RepetitionResult& r : reps) {
        executed.push_back(r.stats.executed);
        failing.push_back(r.stats.failing);
        f80.push_back(r.stats.mean_fitness_final_80);
        f20.push_back(r.stats.mean_fitness_final_20);
        gen.push_back(r.stats.mean_generation_time);
        if (r.stats.diversity) diversity.push_back(*r.stats.diversity);
    }
    return {summarize(executed), summarize(failing), summarize(f80), summarize(f20), summarize(diversity), summarize(gen)};
}

fs::path records_path(const fs::path& dir, int repetition) { return dir / rep_name("records", repetition, ".jsonl"); }
fs::path timing_path(const fs::path& dir, int repetition) { return dir / rep_name("timing", repetition, ".csv"); }

RepetitionOutput run_repetition(const CampaignConfig& cfg, std::uint64_t seed, RecordSink sink) {
    Rng rng(seed);
    const MockSut sut(cfg.geometry, cfg.sim);
    const TestExecutor executor = sut.executor();
    RepetitionOutput out;
    switch (cfg.algorithm) {
    case Algorithm::Wogan: {
        WoganConfig w = cfg.wogan;
        w.budget = cfg.budget;
        w.failure_threshold = cfg.failure_threshold;
        WoganResult r = wogan_run(executor, w, cfg.geometry, cfg.wgan, rng, std::move(sink));
        out.suite = std::move(r.suite);
        out.models = std::move(r.models);
        break;
    }
    case Algorithm::Random:
        out.suite = random_search_run(executor, cfg.geometry, cfg.budget, rng, std::move(sink), cfg.wogan.test_dim);
        break;
    case Algorithm::Frenetic: {
        FreneticConfig f = cfg.frenetic;
        f.failure_threshold = cfg.failure_threshold;
        out.suite = frenetic_run(executor, cfg.geometry, cfg.budget, f, rng, std::move(sink));
        break;
    }
    }
    return out;
}

namespace {

std::string stats_csv(std::span<const RepetitionResult> reps) {
    std::string text = "repetition,seed";
    for (const std::string& h : stats_csv_header()) text += "," + h;
    text += "\n";
    for (const RepetitionResult& r : reps) {
        text += std::to_string(r.repetition) + "," + std::to_string(r.seed);
        for (const std::string& c : stats_csv_cells(r.stats)) text += "," + c;
        text += "\n";
    }
    return text;
}

std::string aggregate_csv(const CampaignSummary& s) {
    std::string text = "statistic,value\n";
    for (const AggregateRow& row : aggregate_rows()) text += std::string(row.label) + "," + fmt_precise(row.get(s)) + "\n";
    text += "mean generation time," + fmt_precise(s.generation_time.mean) + "\n";
    text += "SD generation time," + fmt_precise(s.generation_time.sd) + "\n";
    return text;
}

void save_model(const fs::path& path, const nn::DenseNet& net) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    nn::save_checkpoint(net, out);
}

} // namespace

CampaignResult run_experiment(const CampaignConfig& cfg) {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create " + cfg.output_dir.string() + ": " + ec.message());
    if (cfg.algorithm == Algorithm::Wogan) {
        fs::create_directories(cfg.output_dir / "models", ec);
        if (ec) throw IoError("cannot create model directory: " + ec.message());
    }
    write_text(cfg.output_dir / "campaign.json", config_to_json(cfg).dump(2) + "\n");

    CampaignResult result;
    result.algorithm = to_string(cfg.algorithm);
    result.repetitions.resize(cfg.repetitions);

    const TimingMode timing = cfg.effective_timing();
    std::mutex error_mutex;
    std::exception_ptr first_error;
    int next = 0;
    std::mutex next_mutex;

    auto worker = [&] {
        for (;;) {
            int rep;
            {
                std::lock_guard lock(next_mutex);
                if (next >= cfg.repetitions) return;
                rep = next++;
            }
            try {
                const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(rep);
                JsonlWriter writer(records_path(cfg.output_dir, rep), timing);
                RepetitionOutput out = run_repetition(cfg, seed, writer.sink());
                write_timing_csv(timing_path(cfg.output_dir, rep), out.suite);
                if (out.models) {
                    save_model(cfg.output_dir / "models" / rep_name("generator", rep, ".json"), out.models->generator());
                    save_model(cfg.output_dir / "models" / rep_name("critic", rep, ".json"), out.models->critic());
                    save_model(cfg.output_dir / "models" / rep_name("analyzer", rep, ".json"), out.models->analyzer());
                }
                result.repetitions[rep] = {rep, seed, suite_stats(out.suite, cfg.failure_threshold, cfg.geometry)};
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    const int threads = std::min(cfg.jobs, cfg.repetitions);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    result.summary = summarize(result.repetitions);
    write_text(cfg.output_dir / "stats.csv", stats_csv(result.repetitions));
    write_text(cfg.output_dir / "aggregate.csv", aggregate_csv(result.summary));
    return result;
}

CampaignResult load_campaign(const fs::path& dir) {
    CampaignResult result;
    {
        std::ifstream in(dir / "campaign.json");
        if (!in) throw IoError("cannot open " + (dir / "campaign.json").string());
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("algorithm") || !j["algorithm"].is_string())
            throw SchemaMismatch((dir / "campaign.json").string() + ": missing algorithm");
        result.algorithm = j["algorithm"].get<std::string>();
    }

    std::ifstream stats(dir / "stats.csv");
    if (!stats) throw IoError("cannot open " + (dir / "stats.csv").string());
    std::string line;
    std::getline(stats, line);
    const std::vector<std::string> header = split_csv(line);
    std::vector<std::string> expected{"repetition", "seed"};
    for (const std::string& h : stats_csv_header()) expected.push_back(h);
    if (header != expected) throw SchemaMismatch((dir / "stats.csv").string() + ": unexpected header");
    while (std::getline(stats, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> c = split_csv(line);
        if (c.size() != expected.size()) throw SchemaMismatch("stats.csv: wrong number of cells");
        RepetitionResult r;
        r.repetition = static_cast<int>(parse_double(c[0], "repetition"));
        r.seed = static_cast<std::uint64_t>(std::stoull(c[1]));
        r.stats.executed = static_cast<int>(parse_double(c[2], "executed tests"));
        r.stats.failing = static_cast<int>(parse_double(c[3], "failing tests"));
        r.stats.mean_fitness_final_80 = parse_double(c[4], "fitness final 80%");
        r.stats.mean_fitness_final_20 = parse_double(c[5], "fitness final 20%");
        r.stats.mean_generation_time = parse_double(c[6], "mean generation time");
        r.stats.sd_generation_time = parse_double(c[7], "sd generation time");
        if (!c[8].empty()) r.stats.diversity = parse_double(c[8], "diversity");
        result.repetitions.push_back(r);
    }
    if (result.repetitions.empty()) throw SchemaMismatch("stats.csv has no repetitions");
    result.summary = summarize(result.repetitions);

    std::ifstream agg(dir / "aggregate.csv");
    if (!agg) throw IoError("cannot open " + (dir / "aggregate.csv").string());
    std::getline(agg, line);
    if (line != "statistic,value") throw SchemaMismatch("aggregate.csv: unexpected header");
    std::size_t matched = 0;
    while (std::getline(agg, line)) {
        const std::vector<std::string> c = split_csv(line);
        if (c.size() != 2) throw SchemaMismatch("aggregate.csv: malformed row");
        for (const AggregateRow& row : aggregate_rows()) {
            if (c[0] != row.label) continue;
            ++matched;
            const std::optional<double> recomputed = row.get(result.summary);
            if (c[1] == "n/a") {
                if (recomputed) throw SchemaMismatch(std::string("aggregate.csv: ") + row.label + " should be present");
                continue;
            }
            const double stored = parse_double(c[1], row.label);
            if (!recomputed || std::abs(stored - *recomputed) > 1e-8 * std::max(1.0, std::abs(*recomputed)))
                throw SchemaMismatch(std::string("aggregate.csv: ") + row.label + " disagrees with stats.csv");
        }
    }
    if (matched != aggregate_rows().size()) throw SchemaMismatch("aggregate.csv: missing rows");
    return result;
}

ComparisonTable aggregate(std::span<const CampaignResult> results) {
    ComparisonTable table;
    for (const AggregateRow& row : aggregate_rows()) table.rows.emplace_back(row.label);
    table.cells.assign(table.rows.size(), {});
    for (const CampaignResult& r : results) {
        table.columns.push_back(r.algorithm);
        for (std::size_t i = 0; i < aggregate_rows().size(); ++i)
            table.cells[i].push_back(fmt_opt(aggregate_rows()[i].get(r.summary)));
    }
    return table;
}

ComparisonTable aggregate(std::span<const fs::path> dirs) {
    std::vector<CampaignResult> results;
    for (const fs::path& d : dirs) results.push_back(load_campaign(d));
    return aggregate(std::span<const CampaignResult>(results));
}

std::string ComparisonTable::to_csv() const {
    std::string text = "statistic";
    for (const std::string& c : columns) text += "," + c;
    text += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        text += rows[i];
        for (const std::string& c : cells[i]) text += "," + c;
        text += "\n";
    }
    return text;
}

std::string ComparisonTable::to_text() const {
    std::size_t label_width = 0;
    for (const std::string& r : rows) label_width = std::max(label_width, r.size());
    std::vector<std::size_t> widths;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        std::size_t w = columns[c].size();
        for (const auto& row : cells) w = std::max(w, row[c].size());
        widths.push_back(w);
    }
    auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
    std::string text = pad("", label_width);
    for (std::size_t c = 0; c < columns.size(); ++c) text += " | " + pad(columns[c], widths[c]);
    text += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        text += pad(rows[i], label_width);
        for (std::size_t c = 0; c < columns.size(); ++c) text += " | " + pad(cells[i][c], widths[c]);
        text += "\n";
    }
    return text;
}

ExecutionResult replay(const CurvatureTest& test, const fs::path& out_dir, const GeometryConfig& geometry,
                       const SimConfig& sim) {
    if (!test.in_range() || test.size() == 0) throw InvalidRoad("test curvatures outside [-0.07, 0.07]");
    const RoadPolyline road = road_from_test(test, geometry);
    const ExecutionResult result = simulate(road, sim, geometry);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    std::ofstream trace(out_dir / "trace.csv");
    if (!trace) throw IoError("cannot open trace.csv for writing");
    write_trace_csv(trace, result, sim);

    std::vector<Vec2> path;
    for (const VehicleState& s : result.pose_trace) path.push_back(s.position);
    write_text(out_dir / "road.svg", road_svg(road, geometry, path, "fitness " + fmt(result.fitness)));
    write_text(out_dir / "road.json", road_to_json(test, road).dump() + "\n");
    return result;
}

CalibrationReport calibrate(const GeometryConfig& geometry, const SimConfig& sim, int samples, std::uint64_t seed,
                            double threshold) {
    if (samples < 1) throw ConfigError("calibrate: samples must be >= 1");
    const MockSut sut(geometry, sim);
    Rng rng(seed);
    CalibrationReport report;
    report.lookahead = sim.lookahead;
    report.samples = samples;
    report.histogram.assign(10, 0);
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        const CurvatureTest t = uniform_random_test(5, rng);
        if (!is_valid_test(t, geometry)) continue;
        const double f = sut.execute(t).fitness;
        ++report.valid;
        sum += f;
        if (f > threshold) ++report.failing;
        ++report.histogram[bin_index(f, 10)];
    }
    report.mean_fitness = report.valid > 0 ? sum / report.valid : 0.0;
    return report;
}

} // namespace wogan
