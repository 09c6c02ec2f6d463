#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wogan/random.hpp"

namespace wogan::nn {

enum class Activation { Relu, Tanh, Sigmoid, Identity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

struct LayerShape {
    int in = 0;
    int out = 0;
    Activation activation = Activation::Identity;
    /// Offset of the row-major (out x in) weight block in the flat parameter
    /// vector; the bias block follows it.
    std::size_t offset = 0;

    std::size_t weight_count() const { return static_cast<std::size_t>(in) * out; }
    std::size_t parameter_count() const { return weight_count() + out; }
};

/// Fully connected network with all parameters in one flat vector.
class DenseNet {
public:
    DenseNet() = default;

    /// `sizes` lists input, hidden and output widths. Hidden layers use
    /// `hidden`; the last layer uses `output`. Weights are drawn uniform in
    /// +-sqrt(6 / fan_in), biases start at zero.
    static DenseNet create(std::span<const int> sizes, Activation hidden, Activation output, Rng& rng);

    int input_dim() const { return layers_.empty() ? 0 : layers_.front().in; }
    int output_dim() const { return layers_.empty() ? 0 : layers_.back().out; }
    std::size_t layer_count() const { return layers_.size(); }
    const LayerShape& layer(std::size_t i) const { return layers_[i]; }

    std::span<double> params() { return params_; }
    std::span<const double> params() const { return params_; }

    std::span<double> weight(std::size_t l) { return std::span(params_).subspan(layers_[l].offset, layers_[l].weight_count()); }
    std::span<const double> weight(std::size_t l) const {
        return std::span(params_).subspan(layers_[l].offset, layers_[l].weight_count());
    }
    std::span<double> bias(std::size_t l) {
        return std::span(params_).subspan(layers_[l].offset + layers_[l].weight_count(), layers_[l].out);
    }
    std::span<const double> bias(std::size_t l) const {
        return std::span(params_).subspan(layers_[l].offset + layers_[l].weight_count(), layers_[l].out);
    }

    bool all_finite() const;

    /// Builds a net from explicit shapes; parameters zeroed. Throws
    /// DimensionMismatch if adjacent layers do not chain.
    static DenseNet from_shapes(std::vector<LayerShape> shapes);

private:
    std::vector<LayerShape> layers_;
    std::vector<double> params_;
};

/// Per-layer pre- and post-activation values of one forward pass. post[0] is
/// the input.
struct ForwardTrace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;

    std::span<const double> output() const { return post.back(); }
};

/// Throws DimensionMismatch if input size differs from input_dim.
std::vector<double> forward(const DenseNet& net, std::span<const double> input);
ForwardTrace forward_trace(const DenseNet& net, std::span<const double> input);

struct Gradients {
    std::vector<double> params;
    std::vector<double> input;
};

/// Reverse pass for one sample. Adds dL/dparams into `param_grad` (sized like
/// net.params()) and returns dL/dinput.
std::vector<double> backward(const DenseNet& net, const ForwardTrace& trace, std::span<const double> output_grad,
                             std::span<double> param_grad);

/// Loss evaluated on the network output; writes dL/doutput into `grad`.
using LossFn = std::function<double(std::span<const double> output, std::span<double> grad)>;

Gradients gradients(const DenseNet& net, const LossFn& loss, std::span<const double> input);

struct AdamState {
    std::vector<double> first_moment;
    std::vector<double> second_moment;
    long step_count = 0;
    double learning_rate = 0.001;
    double beta1 = 0.0;
    double beta2 = 0.9;
    double epsilon = 1e-8;

    AdamState() = default;
    AdamState(std::size_t n, double lr, double b1, double b2, double eps = 1e-8);
};

/// One bias-corrected Adam step, in place.
void adam_update(std::span<double> params, std::span<const double> grads, AdamState& state);

void save_checkpoint(const DenseNet& net, std::ostream& out);
DenseNet load_checkpoint(std::istream& in);

} // namespace wogan::nn
