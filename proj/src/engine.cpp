#include "wogan/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wogan/baselines.hpp"
#include "wogan/errors.hpp"

namespace wogan {

void SamplerState::validate() const {
    if (bins < 1) throw ConfigError("sampler.bins must be >= 1");
    if (batch_size < 1) throw ConfigError("sampler.batch_size must be >= 1");
    if (!(alpha >= 0.0 && alpha <= 3.0)) throw ConfigError("sampler.alpha must lie in [0, 3]");
}

int bin_index(double fitness, int bins) {
    const int i = static_cast<int>(std::floor(fitness * bins));
    return std::clamp(i, 0, bins - 1);
}

double bin_weight(double midpoint, double alpha) { return 1.0 / (1.0 + std::exp(-(midpoint + alpha))); }

int select_bin(std::span<const int> occupied, const SamplerState& sampler, Rng& rng) {
    if (occupied.empty()) throw EmptyArchive("no populated bins to select from");
    if (sampler.selection == BinSelection::Proportional) {
        std::vector<double> w;
        w.reserve(occupied.size());
        for (int b : occupied) w.push_back(bin_weight(bin_midpoint(b, sampler.bins), sampler.alpha));
        std::discrete_distribution<std::size_t> dist(w.begin(), w.end());
        return occupied[dist(rng)];
    }
    // The sigmoid is positive, so the scan ends with probability one.
    for (;;) {
        for (auto it = occupied.rbegin(); it != occupied.rend(); ++it) {
            if (uniform(rng, 0.0, 1.0) < bin_weight(bin_midpoint(*it, sampler.bins), sampler.alpha)) return *it;
        }
    }
}

std::vector<std::size_t> sample_batch(std::span<const double> fitness, const SamplerState& sampler, Rng& rng) {
    sampler.validate();
    if (fitness.empty()) throw EmptyArchive("cannot sample a batch from an empty archive");

    const std::size_t m = static_cast<std::size_t>(sampler.batch_size);
    if (fitness.size() <= m) {
        std::vector<std::size_t> all(fitness.size());
        std::iota(all.begin(), all.end(), 0);
        std::shuffle(all.begin(), all.end(), rng);
        return all;
    }

    std::vector<std::vector<std::size_t>> members(sampler.bins);
    for (std::size_t i = 0; i < fitness.size(); ++i) members[bin_index(fitness[i], sampler.bins)].push_back(i);
    std::vector<int> occupied;
    for (int b = 0; b < sampler.bins; ++b)
        if (!members[b].empty()) occupied.push_back(b);

    std::vector<std::vector<std::size_t>> unused = members;
    std::vector<std::size_t> batch;
    batch.reserve(m);
    while (batch.size() < m) {
        const int b = select_bin(occupied, sampler, rng);
        auto& pool = unused[b];
        if (pool.empty()) pool = members[b];
        const std::size_t k = pick(rng, pool.size());
        batch.push_back(pool[k]);
        pool[k] = pool.back();
        pool.pop_back();
    }
    return batch;
}

double update_batch_parameter(double progress) { return 3.0 * std::clamp(progress, 0.0, 1.0); }

void WoganConfig::validate() const {
    if (initial_tests < 1) throw ConfigError("wogan.initial_tests must be >= 1");
    if (!(target_reducer > 0.0 && target_reducer < 1.0)) throw ConfigError("wogan.target_reducer must lie in (0, 1)");
    if (latent_dim < 1 || test_dim < 1) throw ConfigError("wogan.latent_dim and wogan.test_dim must be >= 1");
    if (inner_loop_cap < 1) throw ConfigError("wogan.inner_loop_cap must be >= 1");
    if (bins < 1 || batch_size < 1) throw ConfigError("wogan.bins and wogan.batch_size must be >= 1");
    if (analyzer_epochs_per_round < 0 || wgan_steps_per_round < 0)
        throw ConfigError("wogan training amounts per round must be >= 0");
    if (!(budget.amount > 0)) throw ConfigError("wogan.budget must be positive");
}

CandidateResult generate_candidate(const CandidateGenerator& generate, const FitnessPredictor& predict,
                                   const TestValidator& valid, double target_reducer, int cap, Rng& rng) {
    CandidateResult best;
    best.prediction = -1.0;
    double target = 1.0;
    int draws = 0;
    int valid_draws = 0;
    while (draws < cap) {
        CurvatureTest test = generate(rng);
        ++draws;
        if (!valid(test)) continue;
        ++valid_draws;
        target *= target_reducer;
        const double p = predict(test);
        if (p >= target) return {std::move(test), p, draws, valid_draws, target, false};
        if (p > best.prediction) {
            best.test = std::move(test);
            best.prediction = p;
        }
    }
    if (valid_draws == 0) throw NoValidCandidate("no valid candidate within " + std::to_string(cap) + " draws");
    best.draws = draws;
    best.valid_draws = valid_draws;
    best.target = target;
    best.fallback = true;
    return best;
}

CurvatureTest denormalize(std::span<const double> unit) {
    CurvatureTest t;
    t.kappas.reserve(unit.size());
    for (double u : unit) t.kappas.push_back(std::clamp(u * kMaxCurvature, -kMaxCurvature, kMaxCurvature));
    return t;
}

std::vector<double> normalize(const CurvatureTest& test) {
    std::vector<double> u;
    u.reserve(test.size());
    for (double k : test.kappas) u.push_back(k / kMaxCurvature);
    return u;
}

WoganResult wogan_run(const TestExecutor& executor, const WoganConfig& cfg, const GeometryConfig& geometry,
                      const nn::WganHyper& hyper, Rng& rng, RecordSink sink) {
    cfg.validate();
    hyper.validate();
    geometry.validate();
    if (cfg.budget.counts_executions() && cfg.budget.amount < cfg.initial_tests)
        throw BudgetTooSmall("budget is below the number of initial random tests");

    WoganResult out;
    out.models.emplace(cfg.latent_dim, cfg.test_dim, hyper, rng, cfg.analyzer_lr, cfg.analyzer_beta1,
                       cfg.analyzer_beta2);
    nn::WoganModels& models = *out.models;
    CampaignRecorder recorder(cfg.budget, std::move(sink));

    auto valid = [&](const CurvatureTest& t) { return is_valid_test(t, geometry); };

    for (int i = 0; i < cfg.initial_tests && !recorder.exhausted(); ++i) {
        CurvatureTest t;
        do {
            t = random_walk_test(cfg.test_dim, rng);
        } while (!valid(t));
        recorder.execute(executor, t, Source::RandomInit);
    }

    SamplerState sampler;
    sampler.bins = cfg.bins;
    sampler.batch_size = cfg.batch_size;
    sampler.selection = cfg.selection;

    nn::Batch tests;
    std::vector<double> fitness;
    for (const TestRecord& r : recorder.suite().records) {
        tests.push_back(normalize(r.test));
        fitness.push_back(r.fitness);
    }

    while (!recorder.exhausted()) {
        sampler.alpha = update_batch_parameter(recorder.progress());
        out.alpha_history.push_back(sampler.alpha);

        const Stopwatch training;
        models.train_analyzer(tests, fitness, cfg.analyzer_epochs_per_round, cfg.analyzer_batch_size, rng);
        const std::vector<std::size_t> picks = sample_batch(fitness, sampler, rng);
        nn::Batch real;
        real.reserve(picks.size());
        for (std::size_t i : picks) real.push_back(tests[i]);
        for (int s = 0; s < cfg.wgan_steps_per_round; ++s) models.train_wgan(real, rng);
        recorder.add_training_time(training.seconds());

        const CandidateResult candidate = generate_candidate(
            [&](Rng& r) { return denormalize(models.generate(nn::sample_latent(models.latent_dim(), r))); },
            [&](const CurvatureTest& t) { return models.predict(normalize(t)); }, valid, cfg.target_reducer,
            cfg.inner_loop_cap, rng);

        const TestRecord& record = recorder.execute(executor, candidate.test, Source::Wogan);
        tests.push_back(normalize(record.test));
        fitness.push_back(record.fitness);
    }

    out.suite = recorder.take();
    return out;
}

} // namespace wogan
