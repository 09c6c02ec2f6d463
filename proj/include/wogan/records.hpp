#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "wogan/geometry.hpp"
#include "wogan/suite.hpp"

namespace wogan {

/// How time fields are written to the record stream. Wall writes measured
/// seconds. Logical writes the cumulative simulated time as executed_at and
/// zero generation/training times, which makes the stream reproducible.
enum class TimingMode { Wall, Logical };

std::string to_string(TimingMode m);
TimingMode timing_mode_from_string(const std::string& name);

nlohmann::json record_to_json(const TestRecord& record, TimingMode mode);
/// Throws SchemaMismatch on missing or mistyped fields.
TestRecord record_from_json(const nlohmann::json& j);

/// Streams one JSON object per line, flushed after every record.
class JsonlWriter {
public:
    JsonlWriter(const std::filesystem::path& path, TimingMode mode);

    void write(const TestRecord& record);
    RecordSink sink();

private:
    std::ofstream out_;
    TimingMode mode_;
};

/// Reads a record stream. A final line without a terminating newline that
/// fails to parse is treated as an interrupted write and dropped.
TestSuite read_jsonl(const std::filesystem::path& path);
TestSuite read_jsonl(std::istream& in);

/// Wall-clock timings, one row per record: index, executed_at,
/// generation_time, training_time.
void write_timing_csv(const std::filesystem::path& path, const TestSuite& suite);
/// Copies timings from a sidecar file into `suite` (matching by index).
void merge_timing_csv(const std::filesystem::path& path, TestSuite& suite);

/// {"kappas": [...], "control_points": [[x, y]...], "centerline": [[x, y]...]}
nlohmann::json road_to_json(const CurvatureTest& test, const RoadPolyline& road);

} // namespace wogan
