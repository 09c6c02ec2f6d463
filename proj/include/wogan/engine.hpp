#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wogan/geometry.hpp"
#include "wogan/random.hpp"
#include "wogan/suite.hpp"
#include "wogan/sut.hpp"
#include "wogan/wgan.hpp"

namespace wogan {

enum class BinSelection {
    /// Scan nonempty bins from the top, accepting bin i with probability
    /// sigmoid(midpoint_i + alpha); restart on full rejection.
    DescendingScan,
    /// Pick a nonempty bin with probability proportional to its weight.
    Proportional,
};

/// Biased batch sampler state: B bins over [0, 1], batch size M, shift alpha.
struct SamplerState {
    int bins = 10;
    int batch_size = 32;
    double alpha = 0.0;
    BinSelection selection = BinSelection::DescendingScan;

    void validate() const;
};

/// floor(fitness * bins), clamped to bins - 1.
int bin_index(double fitness, int bins);

/// Midpoint (i + 0.5) / bins of bin i.
inline double bin_midpoint(int bin, int bins) { return (bin + 0.5) / bins; }

/// Shifted sigmoid 1 / (1 + exp(-(x + alpha))).
double bin_weight(double midpoint, double alpha);

/// Indices into `fitness` forming a batch of min(M, |T|) tests. Within a
/// batch a test is reused only after every test of its bin has been drawn.
/// Throws EmptyArchive when `fitness` is empty.
std::vector<std::size_t> sample_batch(std::span<const double> fitness, const SamplerState& sampler, Rng& rng);

/// Index of one bin chosen by the sampler's selection rule among the
/// nonempty bins listed in `occupied` (ascending bin indices).
int select_bin(std::span<const int> occupied, const SamplerState& sampler, Rng& rng);

/// alpha = 3 * progress.
double update_batch_parameter(double progress);

struct WoganConfig {
    int initial_tests = 60;
    double target_reducer = 0.95;
    int latent_dim = 10;
    int test_dim = 5;
    Budget budget = Budget::executions(300);
    /// Most candidate draws per round before falling back to the best valid
    /// candidate seen.
    int inner_loop_cap = 1000;
    double failure_threshold = 0.95;
    int bins = 10;
    int batch_size = 32;
    BinSelection selection = BinSelection::DescendingScan;
    int analyzer_epochs_per_round = 1;
    int wgan_steps_per_round = 1;
    int analyzer_batch_size = 32;
    double analyzer_lr = 0.001;
    double analyzer_beta1 = 0.0;
    double analyzer_beta2 = 0.9;

    void validate() const;
};

struct CandidateResult {
    CurvatureTest test;
    double prediction = 0.0;
    int draws = 0;
    int valid_draws = 0;
    /// Final acceptance target (target_reducer ^ valid_draws).
    double target = 1.0;
    /// True when the cap forced the best-prediction fallback.
    bool fallback = false;
};

using CandidateGenerator = std::function<CurvatureTest(Rng&)>;
using FitnessPredictor = std::function<double(const CurvatureTest&)>;
using TestValidator = std::function<bool(const CurvatureTest&)>;

/// Inner loop: draw candidates, skip invalid ones, decay the target on each
/// valid one and accept once the prediction reaches it. Throws
/// NoValidCandidate when `cap` draws produce no valid test.
CandidateResult generate_candidate(const CandidateGenerator& generate, const FitnessPredictor& predict,
                                   const TestValidator& valid, double target_reducer, int cap, Rng& rng);

/// Scales a normalized vector in [-1, 1]^d to curvature space and back.
CurvatureTest denormalize(std::span<const double> unit);
std::vector<double> normalize(const CurvatureTest& test);

struct WoganResult {
    TestSuite suite;
    std::optional<nn::WoganModels> models;
    /// alpha in effect at the start of each round.
    std::vector<double> alpha_history;
};

/// The online generator loop: N random valid tests, then rounds of analyzer
/// training, biased-batch WGAN training, candidate search and execution until
/// the budget runs out. Throws BudgetTooSmall when a count budget is below N.
WoganResult wogan_run(const TestExecutor& executor, const WoganConfig& cfg, const GeometryConfig& geometry,
                      const nn::WganHyper& hyper, Rng& rng, RecordSink sink = {});

} // namespace wogan
