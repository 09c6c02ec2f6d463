#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "wogan/geometry.hpp"
#include "wogan/sut.hpp"

namespace wogan {

enum class Source { RandomInit, Wogan, RandomBaseline, Frenetic };

std::string to_string(Source s);
/// Throws SchemaMismatch on unknown tags.
Source source_from_string(const std::string& tag);

/// One executed test. Times are wall-clock seconds; `sim_elapsed` is the
/// cumulative simulated time of all executions up to and including this one.
struct TestRecord {
    CurvatureTest test;
    double fitness = 0.0;
    double executed_at = 0.0;
    double generation_time = 0.0;
    double training_time = 0.0;
    double sim_elapsed = 0.0;
    Source source = Source::RandomInit;
};

/// Append-only archive of executed tests in execution order.
struct TestSuite {
    std::vector<TestRecord> records;

    std::size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

/// Campaign limit: a number of executed tests, or wall-clock seconds.
struct Budget {
    enum class Kind { Executions, Seconds };
    Kind kind = Kind::Executions;
    double amount = 300.0;

    static Budget executions(int n) { return {Kind::Executions, static_cast<double>(n)}; }
    static Budget seconds(double s) { return {Kind::Seconds, s}; }
    bool counts_executions() const { return kind == Kind::Executions; }
};

/// Called once per record, right after it is appended.
using RecordSink = std::function<void(const TestRecord&)>;

/// Owns the archive of one campaign: executes tests, stamps timing, tracks the
/// budget and streams each new record to the sink.
class CampaignRecorder {
public:
    CampaignRecorder(Budget budget, RecordSink sink = {});

    /// Runs `test` through `executor` and appends the record.
    const TestRecord& execute(const TestExecutor& executor, const CurvatureTest& test, Source source);

    /// Attributes `seconds` of the current generation interval to training.
    void add_training_time(double seconds) { pending_training_ += seconds; }

    bool exhausted() const;
    /// Fraction of the budget consumed, clamped to [0, 1].
    double progress() const;
    double elapsed() const;

    const TestSuite& suite() const { return suite_; }
    TestSuite take() { return std::move(suite_); }

private:
    using Clock = std::chrono::steady_clock;

    Budget budget_;
    RecordSink sink_;
    Clock::time_point started_;
    Clock::time_point last_execution_end_;
    double pending_training_ = 0.0;
    double sim_elapsed_ = 0.0;
    TestSuite suite_;
};

/// Scoped wall-clock stopwatch.
class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace wogan
