#include "wogan/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wogan/errors.hpp"

namespace wogan {

namespace {

double clamp_kappa(double k) { return std::clamp(k, -kMaxCurvature, kMaxCurvature); }

std::size_t select_parent(const TestSuite& suite, const FreneticConfig& cfg, Rng& rng) {
    double total = 0.0;
    for (const TestRecord& r : suite.records) total += r.fitness;
    if (total <= 0.0 || uniform(rng, 0.0, 1.0) < cfg.uniform_selection_floor) return pick(rng, suite.size());
    double target = uniform(rng, 0.0, total);
    for (std::size_t i = 0; i < suite.size(); ++i) {
        target -= suite.records[i].fitness;
        if (target <= 0.0) return i;
    }
    return suite.size() - 1;
}

} // namespace

CurvatureTest random_walk_test(int d, Rng& rng) {
    CurvatureTest t;
    t.kappas.reserve(d);
    double c = uniform(rng, -kMaxCurvature, kMaxCurvature);
    t.kappas.push_back(c);
    for (int i = 1; i < d; ++i) {
        c = clamp_kappa(uniform(rng, c - 0.05, c + 0.05));
        t.kappas.push_back(c);
    }
    return t;
}

CurvatureTest uniform_random_test(int d, Rng& rng) {
    CurvatureTest t;
    t.kappas.resize(d);
    for (double& k : t.kappas) k = uniform(rng, -kMaxCurvature, kMaxCurvature);
    return t;
}

TestSuite random_search_run(const TestExecutor& executor, const GeometryConfig& geometry, Budget budget, Rng& rng,
                            RecordSink sink, int d) {
    if (d < 1) throw ConfigError("random search needs d >= 1");
    CampaignRecorder recorder(budget, std::move(sink));
    while (!recorder.exhausted()) {
        const CurvatureTest t = uniform_random_test(d, rng);
        if (!is_valid_test(t, geometry)) continue;
        recorder.execute(executor, t, Source::RandomBaseline);
    }
    return recorder.take();
}

void FreneticConfig::validate() const {
    if (init_population < 1) throw ConfigError("frenetic.init_population must be >= 1");
    if (road_points - road_points_jitter < 2) throw ConfigError("frenetic.road_points too small");
    if (passed_mutation_scale < 0) throw ConfigError("frenetic.passed_mutation_scale must be >= 0");
}

CurvatureTest mutate_reverse(const CurvatureTest& test) {
    CurvatureTest out = test;
    std::reverse(out.kappas.begin(), out.kappas.end());
    return out;
}

CurvatureTest mutate_mirror(const CurvatureTest& test) {
    CurvatureTest out = test;
    for (double& k : out.kappas) k = -k;
    return out;
}

CurvatureTest mutate_split_swap(const CurvatureTest& test) {
    const std::size_t head = (test.size() + 1) / 2;
    CurvatureTest out;
    out.kappas.assign(test.kappas.begin() + static_cast<long>(head), test.kappas.end());
    out.kappas.insert(out.kappas.end(), test.kappas.begin(), test.kappas.begin() + static_cast<long>(head));
    return out;
}

CurvatureTest mutate_reverse_cartesian(const CurvatureTest& test) { return mutate_mirror(mutate_reverse(test)); }

std::array<CurvatureTest, 4> frenetic_mutate_failed(const CurvatureTest& test) {
    return {mutate_reverse(test), mutate_mirror(test), mutate_split_swap(test), mutate_reverse_cartesian(test)};
}

CurvatureTest frenetic_mutate_passed(const CurvatureTest& test, const FreneticConfig& cfg, Rng& rng) {
    CurvatureTest out = test;
    if (cfg.passed_mutation_scale > 0.0)
        for (double& k : out.kappas) k = clamp_kappa(k + gaussian(rng, cfg.passed_mutation_scale));
    if (cfg.length_jitter_probability > 0.0 && uniform(rng, 0.0, 1.0) < cfg.length_jitter_probability) {
        if (out.size() > 2 && uniform(rng, 0.0, 1.0) < 0.5) {
            out.kappas.pop_back();
        } else {
            const double last = out.kappas.empty() ? 0.0 : out.kappas.back();
            out.kappas.push_back(clamp_kappa(uniform(rng, last - 0.05, last + 0.05)));
        }
    }
    return out;
}

TestSuite frenetic_run(const TestExecutor& executor, const GeometryConfig& geometry, Budget budget,
                       const FreneticConfig& cfg, Rng& rng, RecordSink sink) {
    cfg.validate();
    if (budget.counts_executions() && budget.amount < cfg.init_population)
        throw BudgetTooSmall("budget is below the initial random population");

    CampaignRecorder recorder(budget, std::move(sink));
    std::set<std::vector<double>> seen;

    const int lo = cfg.road_points - cfg.road_points_jitter;
    const int hi = cfg.road_points + cfg.road_points_jitter;
    while (static_cast<int>(recorder.suite().size()) < cfg.init_population && !recorder.exhausted()) {
        const int points = lo + static_cast<int>(pick(rng, static_cast<std::size_t>(hi - lo + 1)));
        const CurvatureTest t = random_walk_test(points - 1, rng);
        if (!is_valid_test(t, geometry)) continue;
        seen.insert(t.kappas);
        recorder.execute(executor, t, Source::Frenetic);
    }

    // Each failed test is exploited once.
    std::set<std::size_t> exploited;
    auto try_execute = [&](const CurvatureTest& t) {
        if (recorder.exhausted() || seen.count(t.kappas) || !is_valid_test(t, geometry)) return false;
        seen.insert(t.kappas);
        recorder.execute(executor, t, Source::Frenetic);
        return true;
    };

    while (!recorder.exhausted()) {
        const std::size_t parent_index = select_parent(recorder.suite(), cfg, rng);
        const TestRecord parent = recorder.suite().records[parent_index];
        if (parent.fitness > cfg.failure_threshold && parent.test.size() >= 2 && !exploited.count(parent_index)) {
            exploited.insert(parent_index);
            for (const CurvatureTest& mutant : frenetic_mutate_failed(parent.test)) try_execute(mutant);
            continue;
        }
        try_execute(frenetic_mutate_passed(parent.test, cfg, rng));
    }
    return recorder.take();
}

} // namespace wogan
