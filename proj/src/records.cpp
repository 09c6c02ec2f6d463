#include "wogan/records.hpp"

#include <cstdio>
#include <sstream>

#include "wogan/errors.hpp"

namespace wogan {

namespace {

nlohmann::json points_to_json(const std::vector<Vec2>& pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Vec2& p : pts) arr.push_back({p.x, p.y});
    return arr;
}

} // namespace

std::string to_string(TimingMode m) { return m == TimingMode::Wall ? "wall" : "logical"; }

TimingMode timing_mode_from_string(const std::string& name) {
    if (name == "wall") return TimingMode::Wall;
    if (name == "logical") return TimingMode::Logical;
    throw ConfigError("timing must be 'wall' or 'logical', got '" + name + "'");
}

nlohmann::json record_to_json(const TestRecord& r, TimingMode mode) {
    const bool wall = mode == TimingMode::Wall;
    // Key order is fixed by nlohmann's sorted object map.
    return {{"kappas", r.test.kappas},
            {"fitness", r.fitness},
            {"source", to_string(r.source)},
            {"executed_at", wall ? r.executed_at : r.sim_elapsed},
            {"generation_time", wall ? r.generation_time : 0.0},
            {"training_time", wall ? r.training_time : 0.0}};
}

TestRecord record_from_json(const nlohmann::json& j) {
    try {
        TestRecord r;
        r.test.kappas = j.at("kappas").get<std::vector<double>>();
        r.fitness = j.at("fitness").get<double>();
        r.source = source_from_string(j.at("source").get<std::string>());
        r.executed_at = j.at("executed_at").get<double>();
        r.generation_time = j.at("generation_time").get<double>();
        r.training_time = j.at("training_time").get<double>();
        if (!(r.fitness >= 0.0 && r.fitness <= 1.0)) throw SchemaMismatch("record fitness outside [0, 1]");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("malformed record: ") + e.what());
    }
}

JsonlWriter::JsonlWriter(const std::filesystem::path& path, TimingMode mode) : out_(path), mode_(mode) {
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
}

void JsonlWriter::write(const TestRecord& record) {
    out_ << record_to_json(record, mode_).dump() << '\n';
    out_.flush();
    if (!out_) throw IoError("write to record stream failed");
}

RecordSink JsonlWriter::sink() {
    return [this](const TestRecord& r) { write(r); };
}

TestSuite read_jsonl(std::istream& in) {
    TestSuite suite;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const bool terminated = !in.eof();
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            if (!terminated) break;
            throw SchemaMismatch("record line " + std::to_string(suite.size() + 1) + " is not valid JSON");
        }
        suite.records.push_back(record_from_json(j));
    }
    return suite;
}

TestSuite read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return read_jsonl(in);
}

void write_timing_csv(const std::filesystem::path& path, const TestSuite& suite) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "index,executed_at,generation_time,training_time\n";
    char line[160];
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const TestRecord& r = suite.records[i];
        std::snprintf(line, sizeof line, "%zu,%.9g,%.9g,%.9g\n", i, r.executed_at, r.generation_time, r.training_time);
        out << line;
    }
    if (!out) throw IoError("write to " + path.string() + " failed");
}

void merge_timing_csv(const std::filesystem::path& path, TestSuite& suite) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::size_t idx = 0;
        double at = 0, gen = 0, train = 0;
        if (std::sscanf(line.c_str(), "%zu,%lf,%lf,%lf", &idx, &at, &gen, &train) != 4) continue;
        if (idx >= suite.size()) continue;
        suite.records[idx].executed_at = at;
        suite.records[idx].generation_time = gen;
        suite.records[idx].training_time = train;
    }
}

nlohmann::json road_to_json(const CurvatureTest& test, const RoadPolyline& road) {
    return {{"kappas", test.kappas},
            {"control_points", points_to_json(road.control_points)},
            {"centerline", points_to_json(road.centerline)}};
}

} // namespace wogan
