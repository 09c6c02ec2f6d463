#include "wogan/wgan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wogan/errors.hpp"

namespace wogan::nn {

namespace {

void require_penalty_shape(const DenseNet& critic) {
    if (critic.output_dim() != 1) throw ConfigError("critic must have a single output");
    for (std::size_t l = 0; l + 1 < critic.layer_count(); ++l)
        if (critic.layer(l).activation != Activation::Relu) throw ConfigError("critic hidden layers must be ReLU");
    if (critic.layer(critic.layer_count() - 1).activation != Activation::Identity)
        throw ConfigError("critic output must be identity");
}

std::vector<double> critic_input_gradient(const DenseNet& critic, const ForwardTrace& trace) {
    std::vector<double> scratch(critic.params().size(), 0.0);
    const double one = 1.0;
    return backward(critic, trace, std::span(&one, 1), scratch);
}

double norm2(std::span<const double> v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

} // namespace

void WganHyper::validate() const {
    if (!(critic_lr > 0 && generator_lr > 0 && gp_coefficient > 0 && critic_steps_per_generator_step > 0 &&
          batch_size > 0))
        throw ConfigError("wgan: learning rates, gp_coefficient, critic steps and batch size must be positive");
    if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1)) throw ConfigError("wgan: betas must lie in [0, 1)");
}

double input_gradient_norm(const DenseNet& critic, std::span<const double> x) {
    return norm2(critic_input_gradient(critic, forward_trace(critic, x)));
}

double gradient_penalty(const DenseNet& critic, const Batch& real, const Batch& fake, Rng& rng) {
    if (real.size() != fake.size() || real.empty()) throw DimensionMismatch("gradient penalty: batch shapes differ");
    double total = 0.0;
    std::vector<double> mixed;
    for (std::size_t i = 0; i < real.size(); ++i) {
        const double eps = uniform(rng, 0.0, 1.0);
        mixed.resize(real[i].size());
        for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k] = eps * real[i][k] + (1.0 - eps) * fake[i][k];
        const double n = input_gradient_norm(critic, mixed);
        total += (n - 1.0) * (n - 1.0);
    }
    return total / static_cast<double>(real.size());
}

// Double backward through the input gradient.
//
// Layers l = 0..L-1 compute z_l = W_l a_l + b_l; hidden layers apply ReLU with
// mask D_l = [z_l > 0], the last layer is identity with one output. The input
// gradient is the backward recurrence
//
//   delta_{L-1} = 1,   g_l = W_l^T delta_l,   delta_{l-1} = D_{l-1} * g_l,
//
// ending at g = g_0 = dC/dx. Since every D_l is locally constant, g is
// multilinear in the weights and independent of the biases. With
// P = (|g| - 1)^2 and u = dP/dg = 2 (|g| - 1) g / |g|, the adjoint recurrence
// runs the other way:
//
//   gbar_0 = u
//   dP/dW_l[i][j] = delta_l[i] * gbar_l[j]
//   deltabar_l = W_l gbar_l,   gbar_{l+1} = D_l * deltabar_l
//
// for l = 0..L-1, and dP/db_l = 0.
PenaltyGradient penalty_gradient(const DenseNet& critic, std::span<const double> x) {
    require_penalty_shape(critic);
    const ForwardTrace trace = forward_trace(critic, x);
    const std::size_t layers = critic.layer_count();

    // Forward sweep of the backward recurrence, keeping every delta_l.
    std::vector<std::vector<double>> delta(layers);
    delta[layers - 1] = {1.0};
    std::vector<double> g;
    for (std::size_t l = layers; l-- > 0;) {
        const LayerShape& s = critic.layer(l);
        const auto w = critic.weight(l);
        g.assign(s.in, 0.0);
        for (int o = 0; o < s.out; ++o) {
            const double d = delta[l][o];
            if (d == 0.0) continue;
            const double* row = w.data() + static_cast<std::size_t>(o) * s.in;
            for (int i = 0; i < s.in; ++i) g[i] += row[i] * d;
        }
        if (l > 0) {
            delta[l - 1].resize(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) delta[l - 1][i] = trace.pre[l - 1][i] > 0.0 ? g[i] : 0.0;
        }
    }

    PenaltyGradient out;
    out.params.assign(critic.params().size(), 0.0);
    const double n = norm2(g);
    out.value = (n - 1.0) * (n - 1.0);
    if (n == 0.0) return out;

    std::vector<double> gbar(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) gbar[i] = 2.0 * (n - 1.0) * g[i] / n;

    for (std::size_t l = 0; l < layers; ++l) {
        const LayerShape& s = critic.layer(l);
        const auto w = critic.weight(l);
        double* gw = out.params.data() + s.offset;
        std::vector<double> deltabar(s.out, 0.0);
        for (int o = 0; o < s.out; ++o) {
            const double d = delta[l][o];
            const double* row = w.data() + static_cast<std::size_t>(o) * s.in;
            double* grow = gw + static_cast<std::size_t>(o) * s.in;
            double acc = 0.0;
            for (int i = 0; i < s.in; ++i) {
                grow[i] += d * gbar[i];
                acc += row[i] * gbar[i];
            }
            deltabar[o] = acc;
        }
        if (l + 1 < layers) {
            gbar.resize(s.out);
            for (int o = 0; o < s.out; ++o) gbar[o] = trace.pre[l][o] > 0.0 ? deltabar[o] : 0.0;
        }
    }
    return out;
}

PenaltyGradient penalty_gradient_fd(const DenseNet& critic, std::span<const double> x, double step) {
    auto penalty = [&](const DenseNet& net) {
        const double n = input_gradient_norm(net, x);
        return (n - 1.0) * (n - 1.0);
    };
    PenaltyGradient out;
    out.value = penalty(critic);
    out.params.assign(critic.params().size(), 0.0);
    DenseNet probe = critic;
    for (std::size_t i = 0; i < out.params.size(); ++i) {
        const double saved = probe.params()[i];
        probe.params()[i] = saved + step;
        const double up = penalty(probe);
        probe.params()[i] = saved - step;
        const double down = penalty(probe);
        probe.params()[i] = saved;
        out.params[i] = (up - down) / (2.0 * step);
    }
    return out;
}

std::vector<double> sample_latent(int dim, Rng& rng) {
    std::vector<double> z(dim);
    for (double& v : z) v = uniform(rng, -1.0, 1.0);
    return z;
}

WganLosses train_wgan_step(DenseNet& generator, DenseNet& critic, AdamState& generator_opt, AdamState& critic_opt,
                           const Batch& real, const WganHyper& hyper, Rng& rng) {
    if (real.empty()) throw EmptyBatch("train_wgan_step needs a non-empty real batch");
    require_penalty_shape(critic);
    const std::size_t m = real.size();
    const double inv_m = 1.0 / static_cast<double>(m);
    const int latent_dim = generator.input_dim();

    WganLosses losses;
    std::vector<double> grad(critic.params().size());
    std::vector<double> mixed;
    for (int step = 0; step < hyper.critic_steps_per_generator_step; ++step) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double loss = 0.0;
        const double plus = inv_m;
        const double minus = -inv_m;
        for (std::size_t i = 0; i < m; ++i) {
            const std::vector<double> fake = forward(generator, sample_latent(latent_dim, rng));

            const ForwardTrace tf = forward_trace(critic, fake);
            loss += tf.output()[0] * inv_m;
            backward(critic, tf, std::span(&plus, 1), grad);

            const ForwardTrace tr = forward_trace(critic, real[i]);
            loss -= tr.output()[0] * inv_m;
            backward(critic, tr, std::span(&minus, 1), grad);

            const double eps = uniform(rng, 0.0, 1.0);
            mixed.resize(fake.size());
            for (std::size_t k = 0; k < mixed.size(); ++k) mixed[k] = eps * real[i][k] + (1.0 - eps) * fake[k];
            const PenaltyGradient pg =
                hyper.finite_difference_penalty ? penalty_gradient_fd(critic, mixed) : penalty_gradient(critic, mixed);
            loss += hyper.gp_coefficient * pg.value * inv_m;
            for (std::size_t k = 0; k < grad.size(); ++k) grad[k] += hyper.gp_coefficient * inv_m * pg.params[k];
        }
        adam_update(critic.params(), grad, critic_opt);
        losses.critic_loss = loss;
    }

    std::vector<double> ggrad(generator.params().size(), 0.0);
    std::vector<double> scratch(critic.params().size());
    double gloss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const ForwardTrace tg = forward_trace(generator, sample_latent(latent_dim, rng));
        const ForwardTrace tc = forward_trace(critic, tg.output());
        gloss -= tc.output()[0] * inv_m;
        const double seed = -inv_m;
        const std::vector<double> dx = backward(critic, tc, std::span(&seed, 1), scratch);
        backward(generator, tg, dx, ggrad);
    }
    adam_update(generator.params(), ggrad, generator_opt);
    losses.generator_loss = gloss;
    return losses;
}

double train_analyzer(DenseNet& analyzer, AdamState& opt, const Batch& inputs, std::span<const double> targets,
                      int epochs, int batch_size, Rng& rng) {
    if (inputs.empty() || inputs.size() != targets.size())
        throw EmptyData("analyzer training needs equally many (>= 1) tests and fitness values");
    std::vector<std::size_t> order(inputs.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> grad(analyzer.params().size());

    double epoch_loss = 0.0;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(batch_size));
            const double inv = 1.0 / static_cast<double>(end - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t idx = order[k];
                const ForwardTrace t = forward_trace(analyzer, inputs[idx]);
                const double err = t.output()[0] - targets[idx];
                epoch_loss += err * err;
                const double seed = 2.0 * err * inv;
                backward(analyzer, t, std::span(&seed, 1), grad);
            }
            adam_update(analyzer.params(), grad, opt);
        }
        epoch_loss /= static_cast<double>(order.size());
    }
    return epoch_loss;
}

WoganModels::WoganModels(int latent_dim, int test_dim, const WganHyper& hyper, Rng& rng, double analyzer_lr,
                         double analyzer_beta1, double analyzer_beta2)
    : latent_dim_(latent_dim), test_dim_(test_dim), hyper_(hyper) {
    hyper_.validate();
    const int g_sizes[] = {latent_dim, 128, 128, test_dim};
    const int c_sizes[] = {test_dim, 128, 128, 1};
    const int a_sizes[] = {test_dim, 32, 32, 1};
    generator_ = DenseNet::create(g_sizes, Activation::Relu, Activation::Tanh, rng);
    critic_ = DenseNet::create(c_sizes, Activation::Relu, Activation::Identity, rng);
    analyzer_ = DenseNet::create(a_sizes, Activation::Relu, Activation::Sigmoid, rng);
    generator_opt_ = AdamState(generator_.params().size(), hyper_.generator_lr, hyper_.beta1, hyper_.beta2);
    critic_opt_ = AdamState(critic_.params().size(), hyper_.critic_lr, hyper_.beta1, hyper_.beta2);
    analyzer_opt_ = AdamState(analyzer_.params().size(), analyzer_lr, analyzer_beta1, analyzer_beta2);
}

WganLosses WoganModels::train_wgan(const Batch& real, Rng& rng) {
    return train_wgan_step(generator_, critic_, generator_opt_, critic_opt_, real, hyper_, rng);
}

double WoganModels::train_analyzer(const Batch& tests, std::span<const double> fitness, int epochs, int batch_size,
                                   Rng& rng) {
    return nn::train_analyzer(analyzer_, analyzer_opt_, tests, fitness, epochs, batch_size, rng);
}

} // namespace wogan::nn
