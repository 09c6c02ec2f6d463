#pragma once

#include <span>
#include <vector>

#include "wogan/nn.hpp"
#include "wogan/random.hpp"

namespace wogan::nn {

/// A batch of equal-length sample vectors.
using Batch = std::vector<std::vector<double>>;

/// WGAN-GP training settings. Adam betas (0, 0.9), lambda 10 and five critic
/// updates per generator update are the usual gradient-penalty defaults.
struct WganHyper {
    double critic_lr = 0.00005;
    double generator_lr = 0.00005;
    double gp_coefficient = 10.0;
    int critic_steps_per_generator_step = 5;
    int batch_size = 32;
    double beta1 = 0.0;
    double beta2 = 0.9;
    /// Use central differences instead of the analytic double-backward for
    /// the penalty's parameter gradient. Slow; meant as a cross-check.
    bool finite_difference_penalty = false;

    void validate() const;
};

/// Norm of the critic's input gradient at `x`.
double input_gradient_norm(const DenseNet& critic, std::span<const double> x);

/// Mean over the batch of (|grad_x C(x_hat)| - 1)^2 with
/// x_hat = eps * real + (1 - eps) * fake, eps ~ U[0,1] per sample. Not scaled
/// by lambda.
double gradient_penalty(const DenseNet& critic, const Batch& real, const Batch& fake, Rng& rng);

struct PenaltyGradient {
    double value = 0.0;
    std::vector<double> params;
};

/// (|grad_x C(x)| - 1)^2 and its gradient with respect to the critic
/// parameters, for a critic of ReLU hidden layers and one identity output.
PenaltyGradient penalty_gradient(const DenseNet& critic, std::span<const double> x);

/// Same quantity by central differences on every parameter.
PenaltyGradient penalty_gradient_fd(const DenseNet& critic, std::span<const double> x, double step = 1e-5);

struct WganLosses {
    double critic_loss = 0.0;
    double generator_loss = 0.0;
};

/// One round of WGAN-GP: critic_steps critic updates on `real` against fresh
/// generator samples, then one generator update. The generator's latent input
/// is uniform on [-1, 1]^latent_dim. Throws EmptyBatch if `real` is empty.
WganLosses train_wgan_step(DenseNet& generator, DenseNet& critic, AdamState& generator_opt, AdamState& critic_opt,
                           const Batch& real, const WganHyper& hyper, Rng& rng);

/// Uniform latent vector on [-1, 1]^dim.
std::vector<double> sample_latent(int dim, Rng& rng);

/// Mini-batch MSE regression of a sigmoid-output net onto `targets`; one
/// shuffled pass per epoch. Returns the mean loss of the final epoch.
/// Throws EmptyData when inputs are empty or sizes disagree.
double train_analyzer(DenseNet& analyzer, AdamState& opt, const Batch& inputs, std::span<const double> targets,
                      int epochs, int batch_size, Rng& rng);

/// Generator, critic and analyzer with their optimizer states, sized as in
/// the WOGAN setup: G latent -> 128 -> 128 -> test (tanh), C test -> 128 ->
/// 128 -> 1 (identity), A test -> 32 -> 32 -> 1 (sigmoid). All three work in
/// the normalized test space [-1, 1]^test_dim.
class WoganModels {
public:
    WoganModels(int latent_dim, int test_dim, const WganHyper& hyper, Rng& rng, double analyzer_lr = 0.001,
                double analyzer_beta1 = 0.0, double analyzer_beta2 = 0.9);

    int latent_dim() const { return latent_dim_; }
    int test_dim() const { return test_dim_; }

    std::vector<double> generate(std::span<const double> latent) const { return forward(generator_, latent); }
    double predict(std::span<const double> test) const { return forward(analyzer_, test)[0]; }

    WganLosses train_wgan(const Batch& real, Rng& rng);
    double train_analyzer(const Batch& tests, std::span<const double> fitness, int epochs, int batch_size, Rng& rng);

    const DenseNet& generator() const { return generator_; }
    const DenseNet& critic() const { return critic_; }
    const DenseNet& analyzer() const { return analyzer_; }
    DenseNet& analyzer() { return analyzer_; }

private:
    int latent_dim_;
    int test_dim_;
    WganHyper hyper_;
    DenseNet generator_;
    DenseNet critic_;
    DenseNet analyzer_;
    AdamState generator_opt_;
    AdamState critic_opt_;
    AdamState analyzer_opt_;
};

} // namespace wogan::nn
