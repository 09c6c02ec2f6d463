#include "wogan/suite.hpp"

#include <algorithm>

#include "wogan/errors.hpp"

namespace wogan {

std::string to_string(Source s) {
    switch (s) {
    case Source::RandomInit: return "random_init";
    case Source::Wogan: return "wogan";
    case Source::RandomBaseline: return "random_baseline";
    case Source::Frenetic: return "frenetic";
    }
    return "random_init";
}

Source source_from_string(const std::string& tag) {
    if (tag == "random_init") return Source::RandomInit;
    if (tag == "wogan") return Source::Wogan;
    if (tag == "random_baseline") return Source::RandomBaseline;
    if (tag == "frenetic") return Source::Frenetic;
    throw SchemaMismatch("unknown record source '" + tag + "'");
}

CampaignRecorder::CampaignRecorder(Budget budget, RecordSink sink)
    : budget_(budget), sink_(std::move(sink)), started_(Clock::now()), last_execution_end_(started_) {
    if (!(budget_.amount > 0)) throw ConfigError("budget must be positive");
}

const TestRecord& CampaignRecorder::execute(const TestExecutor& executor, const CurvatureTest& test, Source source) {
    const auto begin = Clock::now();
    const ExecutionResult result = executor(test);
    const auto end = Clock::now();

    TestRecord record;
    record.test = test;
    record.fitness = std::clamp(result.fitness, 0.0, 1.0);
    record.executed_at = std::chrono::duration<double>(begin - started_).count();
    record.generation_time = std::chrono::duration<double>(begin - last_execution_end_).count();
    record.training_time = std::min(pending_training_, record.generation_time);
    sim_elapsed_ += result.sim_time;
    record.sim_elapsed = sim_elapsed_;
    record.source = source;

    pending_training_ = 0.0;
    last_execution_end_ = end;
    suite_.records.push_back(std::move(record));
    if (sink_) sink_(suite_.records.back());
    return suite_.records.back();
}

double CampaignRecorder::elapsed() const { return std::chrono::duration<double>(Clock::now() - started_).count(); }

bool CampaignRecorder::exhausted() const {
    if (budget_.counts_executions()) return static_cast<double>(suite_.size()) >= budget_.amount;
    return elapsed() >= budget_.amount;
}

double CampaignRecorder::progress() const {
    const double used = budget_.counts_executions() ? static_cast<double>(suite_.size()) : elapsed();
    return std::clamp(used / budget_.amount, 0.0, 1.0);
}

} // namespace wogan
