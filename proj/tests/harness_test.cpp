#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "wogan/errors.hpp"
#include "wogan/harness.hpp"
#include "wogan/records.hpp"
#include "wogan/svg.hpp"

namespace fs = std::filesystem;
using namespace wogan;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("wogan_harness_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

CampaignConfig random_config(const fs::path& out, int budget = 70, int reps = 2) {
    CampaignConfig cfg;
    cfg.algorithm = Algorithm::Random;
    cfg.budget = Budget::executions(budget);
    cfg.repetitions = reps;
    cfg.seed = 5;
    cfg.output_dir = out;
    return cfg;
}

std::size_t line_count(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

} // namespace

TEST(RunExperiment, FileContract) {
    const fs::path dir = scratch_dir("contract");
    const CampaignResult r = run_experiment(random_config(dir));
    ASSERT_EQ(r.repetitions.size(), 2u);
    for (int rep = 0; rep < 2; ++rep) {
        EXPECT_EQ(line_count(slurp(records_path(dir, rep))), 70u);
        EXPECT_TRUE(fs::exists(timing_path(dir, rep)));
        EXPECT_EQ(r.repetitions[rep].seed, 5u + rep);
    }
    EXPECT_FALSE(fs::exists(records_path(dir, 2)));
    EXPECT_TRUE(fs::exists(dir / "stats.csv"));
    EXPECT_TRUE(fs::exists(dir / "aggregate.csv"));
    EXPECT_TRUE(fs::exists(dir / "campaign.json"));
    EXPECT_FALSE(fs::exists(dir / "models"));
    const TestSuite s = read_jsonl(records_path(dir, 0));
    for (const TestRecord& rec : s.records) EXPECT_EQ(rec.source, Source::RandomBaseline);
}

TEST(RunExperiment, MeanFailingMatchesRepetitions) {
    const fs::path dir = scratch_dir("mean");
    const CampaignResult r = run_experiment(random_config(dir, 70, 3));
    double sum = 0.0;
    for (const RepetitionResult& rep : r.repetitions) sum += rep.stats.failing;
    EXPECT_DOUBLE_EQ(*r.summary.failing.mean, sum / 3);
    const CampaignResult loaded = load_campaign(dir);
    EXPECT_DOUBLE_EQ(*loaded.summary.failing.mean, sum / 3);
    EXPECT_EQ(loaded.algorithm, "random");
}

TEST(RunExperiment, ByteIdenticalRecords) {
    const fs::path a = scratch_dir("bytes_a"), b = scratch_dir("bytes_b");
    run_experiment(random_config(a));
    CampaignConfig cfg = random_config(b);
    cfg.jobs = 2;
    run_experiment(cfg);
    for (int rep = 0; rep < 2; ++rep) EXPECT_EQ(slurp(records_path(a, rep)), slurp(records_path(b, rep)));
}

TEST(RunExperiment, WoganWritesCheckpoints) {
    const fs::path dir = scratch_dir("wogan");
    CampaignConfig cfg;
    cfg.algorithm = Algorithm::Wogan;
    cfg.budget = Budget::executions(63);
    cfg.repetitions = 1;
    cfg.output_dir = dir;
    run_experiment(cfg);
    for (const char* name : {"generator", "critic", "analyzer"}) {
        std::ifstream in(dir / "models" / (std::string(name) + "_rep000.json"));
        ASSERT_TRUE(in.good()) << name;
        EXPECT_NO_THROW(nn::load_checkpoint(in));
    }
    const TestSuite s = read_jsonl(records_path(dir, 0));
    ASSERT_EQ(s.size(), 63u);
    EXPECT_EQ(s.records[60].source, Source::Wogan);
}

TEST(RunExperiment, UnwritableOutput) {
    const fs::path blocker = scratch_dir("blocker");
    std::ofstream(blocker.string()) << "file";
    EXPECT_THROW(run_experiment(random_config(blocker / "sub")), IoError);
    fs::remove(blocker);
}

TEST(SeedIsolation, RepetitionDependsOnlyOnItsSeed) {
    const fs::path dir = scratch_dir("isolation");
    const CampaignConfig cfg = random_config(dir, 70, 3);
    run_experiment(cfg);
    // Repetition 2 alone, and in reverse order with the others.
    const TestSuite from_campaign = read_jsonl(records_path(dir, 2));
    for (std::uint64_t seed : {7u, 6u, 5u}) {
        const RepetitionOutput out = run_repetition(cfg, seed);
        if (seed != 7u) continue;
        ASSERT_EQ(out.suite.size(), from_campaign.size());
        for (std::size_t i = 0; i < out.suite.size(); ++i) {
            EXPECT_EQ(out.suite.records[i].test, from_campaign.records[i].test);
            EXPECT_EQ(out.suite.records[i].fitness, from_campaign.records[i].fitness);
        }
    }
}

TEST(CrashSafety, TruncatedStreamKeepsPrefix) {
    const fs::path dir = scratch_dir("crash");
    run_experiment(random_config(dir, 70, 1));
    const std::string full = slurp(records_path(dir, 0));
    // Cut in the middle of record 41.
    std::size_t cut = 0;
    for (int i = 0; i < 40; ++i) cut = full.find('\n', cut) + 1;
    const std::string partial = full.substr(0, cut + 25);
    std::istringstream in(partial);
    const TestSuite prefix = read_jsonl(in);
    ASSERT_EQ(prefix.size(), 40u);

    const TestSuite whole = read_jsonl(records_path(dir, 0));
    TestSuite first40;
    first40.records.assign(whole.records.begin(), whole.records.begin() + 40);
    const SuiteStats a = suite_stats(prefix, 0.95, GeometryConfig{});
    const SuiteStats b = suite_stats(first40, 0.95, GeometryConfig{});
    EXPECT_EQ(a.failing, b.failing);
    EXPECT_DOUBLE_EQ(a.mean_fitness_final_20, b.mean_fitness_final_20);
    EXPECT_EQ(a.diversity.has_value(), b.diversity.has_value());
}

TEST(Records, RoundTripAndSchema) {
    TestRecord r;
    r.test.kappas = {0.01, -0.02};
    r.fitness = 0.5;
    r.source = Source::Frenetic;
    r.executed_at = 1.5;
    r.generation_time = 0.25;
    r.training_time = 0.125;
    r.sim_elapsed = 9.0;
    const auto j = record_to_json(r, TimingMode::Wall);
    const TestRecord back = record_from_json(j);
    EXPECT_EQ(back.test, r.test);
    EXPECT_EQ(back.source, Source::Frenetic);
    EXPECT_EQ(back.generation_time, 0.25);
    EXPECT_EQ(record_to_json(r, TimingMode::Logical)["executed_at"], 9.0);
    EXPECT_THROW(record_from_json(nlohmann::json{{"fitness", 0.5}}), SchemaMismatch);
    EXPECT_THROW(source_from_string("bogus"), SchemaMismatch);
}

TEST(Config, JsonOverlayAndRoundTrip) {
    const auto j = nlohmann::json::parse(R"({"algorithm": "frenetic", "budget": {"executions": 120},
        "repetitions": 4, "sim": {"speed": 10.0}, "wogan": {"bin_selection": "proportional"}})");
    const CampaignConfig cfg = config_from_json(j);
    EXPECT_EQ(cfg.algorithm, Algorithm::Frenetic);
    EXPECT_EQ(cfg.budget.amount, 120.0);
    EXPECT_EQ(cfg.repetitions, 4);
    EXPECT_EQ(cfg.sim.speed, 10.0);
    EXPECT_EQ(cfg.wogan.selection, BinSelection::Proportional);
    const CampaignConfig again = config_from_json(config_to_json(cfg));
    EXPECT_EQ(config_to_json(again), config_to_json(cfg));
}

TEST(Config, ErrorsNameTheField) {
    auto message = [](const char* text) {
        try {
            config_from_json(nlohmann::json::parse(text)).validate();
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message(R"({"sim": {"wheelbase": 2.6, "bogus": 1}})").find("sim.bogus"), std::string::npos);
    EXPECT_NE(message(R"({"repetitions": 0})").find("repetitions"), std::string::npos);
    EXPECT_NE(message(R"({"sim": {"dt": 0}})").find("sim"), std::string::npos);
    EXPECT_NE(message(R"({"algorithm": "hill"})").find("algorithm"), std::string::npos);
    EXPECT_NE(message(R"({"budget": {"executions": 10}})").find("budget"), std::string::npos);
    EXPECT_NE(message(R"({"repetitions": "many"})").find("repetitions"), std::string::npos);
}

TEST(Config, MissingFileIsIoError) { EXPECT_THROW(load_config("/nonexistent/wogan.json"), IoError); }

TEST(Aggregate, ColumnsInOrderAndNa) {
    CampaignResult a, b, c;
    a.algorithm = "wogan";
    b.algorithm = "random";
    c.algorithm = "frenetic";
    for (CampaignResult* r : {&a, &b, &c}) {
        RepetitionResult rep;
        rep.stats.executed = 300;
        rep.stats.failing = 1;
        r->repetitions = {rep, rep};
        r->summary = summarize(std::span<const RepetitionResult>(r->repetitions));
    }
    const std::vector<CampaignResult> all{a, b, c};
    const ComparisonTable t = aggregate(std::span<const CampaignResult>(all));
    EXPECT_EQ(t.columns, (std::vector<std::string>{"wogan", "random", "frenetic"}));
    ASSERT_GE(t.rows.size(), 10u);
    EXPECT_EQ(t.rows[0], "mean executed tests");
    EXPECT_EQ(t.rows[9], "SD diversity");
    EXPECT_EQ(t.cells[8][0], "n/a");
    EXPECT_EQ(t.cells[2][1], "1");
    EXPECT_EQ(t.to_csv().substr(0, t.to_csv().find('\n')), "statistic,wogan,random,frenetic");

    const std::vector<CampaignResult> one{b};
    EXPECT_EQ(aggregate(std::span<const CampaignResult>(one)).columns.size(), 1u);
}

TEST(Aggregate, DetectsTamperedAggregate) {
    const fs::path dir = scratch_dir("tamper");
    run_experiment(random_config(dir));
    const std::vector<fs::path> dirs{dir};
    EXPECT_NO_THROW(aggregate(std::span<const fs::path>(dirs)));
    std::string text = slurp(dir / "aggregate.csv");
    const std::size_t pos = text.find("mean executed tests,");
    text.replace(pos, text.find('\n', pos) - pos, "mean executed tests,12345");
    std::ofstream(dir / "aggregate.csv") << text;
    EXPECT_THROW(load_campaign(dir), SchemaMismatch);
    EXPECT_THROW(load_campaign(scratch_dir("absent")), IoError);
}

TEST(Summarize, MeanAndSampleSd) {
    const std::vector<double> v{1, 2, 3, 4};
    const ColumnSummary s = summarize(std::span<const double>(v));
    EXPECT_DOUBLE_EQ(*s.mean, 2.5);
    EXPECT_NEAR(*s.sd, std::sqrt(5.0 / 3.0), 1e-15);
    EXPECT_FALSE(summarize(std::span<const double>()).mean.has_value());
}

TEST(BoxStats, FiveNumbers) {
    const BoxStats b = box_stats({1, 2, 3, 4, 5});
    EXPECT_DOUBLE_EQ(b.median, 3.0);
    EXPECT_DOUBLE_EQ(b.q1, 2.0);
    EXPECT_DOUBLE_EQ(b.q3, 4.0);
    EXPECT_DOUBLE_EQ(b.whisker_low, 1.0);
    EXPECT_DOUBLE_EQ(b.whisker_high, 5.0);
    EXPECT_TRUE(b.outliers.empty());
}

TEST(BoxStats, DegenerateAndOutliers) {
    const BoxStats flat = box_stats({2, 2, 2});
    EXPECT_EQ(flat.q1, flat.q3);
    const std::vector<LabeledValues> groups{{"flat", {2, 2, 2}}};
    EXPECT_NE(boxplot_svg(groups, "t").find("<svg"), std::string::npos);

    const BoxStats b = box_stats({1, 2, 3, 4, 100});
    EXPECT_EQ(b.outliers, std::vector<double>{100});
    EXPECT_LE(b.whisker_high, 100);
    EXPECT_GE(b.whisker_low, 1);
    EXPECT_THROW(box_stats({}), EmptyGroup);
}

TEST(BoxStats, WhiskersWithinData) {
    Rng rng(1);
    for (int n = 0; n < 100; ++n) {
        std::vector<double> v;
        for (int i = 0; i < 1 + static_cast<int>(pick(rng, 30)); ++i) v.push_back(gaussian(rng, 3.0));
        const BoxStats b = box_stats(v);
        EXPECT_GE(b.whisker_low, *std::min_element(v.begin(), v.end()));
        EXPECT_LE(b.whisker_high, *std::max_element(v.begin(), v.end()));
        EXPECT_LE(b.q1, b.median);
        EXPECT_LE(b.median, b.q3);
    }
}

TEST(EmitBoxplot, WritesFile) {
    const fs::path out = scratch_dir("plot.svg");
    const std::vector<LabeledValues> groups{{"a", {1, 2, 3}}, {"b", {4, 5}}};
    emit_boxplot(groups, out, "failing");
    EXPECT_NE(slurp(out).find("</svg>"), std::string::npos);
    const std::vector<LabeledValues> empty{{"a", {}}};
    EXPECT_THROW(emit_boxplot(empty, out), EmptyGroup);
}

TEST(Replay, WritesTraceAndRendering) {
    const fs::path dir = scratch_dir("replay");
    const CurvatureTest straight{std::vector<double>(5, 0.0)};
    const ExecutionResult r = replay(straight, dir, GeometryConfig{}, SimConfig{});
    EXPECT_LT(r.fitness, 0.05);
    EXPECT_EQ(line_count(slurp(dir / "trace.csv")), r.pose_trace.size() + 1);
    EXPECT_NE(slurp(dir / "road.svg").find("<svg"), std::string::npos);
    const auto road = nlohmann::json::parse(slurp(dir / "road.json"));
    EXPECT_EQ(road["kappas"].size(), 5u);
}

TEST(Replay, InvalidRoadWritesNothing) {
    const fs::path dir = scratch_dir("replay_invalid");
    const CurvatureTest long_straight{std::vector<double>(19, 0.0)};
    EXPECT_THROW(replay(long_straight, dir, GeometryConfig{}, SimConfig{}), InvalidRoad);
    EXPECT_FALSE(fs::exists(dir));
    EXPECT_THROW(replay(CurvatureTest{{0.5}}, dir, GeometryConfig{}, SimConfig{}), InvalidRoad);
}

TEST(Calibrate, ReportsRate) {
    const CalibrationReport r = calibrate(GeometryConfig{}, SimConfig{}, 300, 1);
    EXPECT_EQ(r.samples, 300);
    EXPECT_LE(r.valid, 300);
    EXPECT_GT(r.valid, 200);
    EXPECT_LE(r.failing, r.valid);
    int total = 0;
    for (int h : r.histogram) total += h;
    EXPECT_EQ(total, r.valid);
    EXPECT_THROW(calibrate(GeometryConfig{}, SimConfig{}, 0, 1), ConfigError);
}
