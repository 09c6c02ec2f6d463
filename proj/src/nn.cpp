#include "wogan/nn.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wogan/errors.hpp"

namespace wogan::nn {

namespace {

double activate(Activation a, double z) {
    switch (a) {
    case Activation::Relu: return z > 0.0 ? z : 0.0;
    case Activation::Tanh: return std::tanh(z);
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::Identity: return z;
    }
    return z;
}

// Derivative expressed through pre-activation z and output y. ReLU uses 0 at
// the kink.
double activate_grad(Activation a, double z, double y) {
    switch (a) {
    case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::Tanh: return 1.0 - y * y;
    case Activation::Sigmoid: return y * (1.0 - y);
    case Activation::Identity: return 1.0;
    }
    return 1.0;
}

} // namespace

std::string to_string(Activation a) {
    switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    if (name == "sigmoid") return Activation::Sigmoid;
    if (name == "identity") return Activation::Identity;
    throw SchemaMismatch("unknown activation '" + name + "'");
}

DenseNet DenseNet::from_shapes(std::vector<LayerShape> shapes) {
    DenseNet net;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
        if (shapes[i].in <= 0 || shapes[i].out <= 0) throw DimensionMismatch("layer widths must be positive");
        if (i > 0 && shapes[i].in != shapes[i - 1].out) throw DimensionMismatch("layer dimensions do not chain");
        shapes[i].offset = offset;
        offset += shapes[i].parameter_count();
    }
    net.layers_ = std::move(shapes);
    net.params_.assign(offset, 0.0);
    return net;
}

DenseNet DenseNet::create(std::span<const int> sizes, Activation hidden, Activation output, Rng& rng) {
    if (sizes.size() < 2) throw DimensionMismatch("a network needs input and output widths");
    std::vector<LayerShape> shapes;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        LayerShape s;
        s.in = sizes[i];
        s.out = sizes[i + 1];
        s.activation = i + 2 == sizes.size() ? output : hidden;
        shapes.push_back(s);
    }
    DenseNet net = from_shapes(std::move(shapes));
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const double bound = std::sqrt(6.0 / net.layers_[l].in);
        for (double& w : net.weight(l)) w = uniform(rng, -bound, bound);
    }
    return net;
}

bool DenseNet::all_finite() const {
    return std::all_of(params_.begin(), params_.end(), [](double p) { return std::isfinite(p); });
}

ForwardTrace forward_trace(const DenseNet& net, std::span<const double> input) {
    if (static_cast<int>(input.size()) != net.input_dim())
        throw DimensionMismatch("input has " + std::to_string(input.size()) + " components, network expects " +
                                std::to_string(net.input_dim()));
    ForwardTrace trace;
    trace.post.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const LayerShape& s = net.layer(l);
        const auto w = net.weight(l);
        const auto b = net.bias(l);
        const std::vector<double>& x = trace.post.back();
        std::vector<double> z(b.begin(), b.end());
        for (int o = 0; o < s.out; ++o) {
            const double* row = w.data() + static_cast<std::size_t>(o) * s.in;
            double acc = 0.0;
            for (int i = 0; i < s.in; ++i) acc += row[i] * x[i];
            z[o] += acc;
        }
        std::vector<double> y(z.size());
        for (std::size_t o = 0; o < z.size(); ++o) y[o] = activate(s.activation, z[o]);
        trace.pre.push_back(std::move(z));
        trace.post.push_back(std::move(y));
    }
    return trace;
}

std::vector<double> forward(const DenseNet& net, std::span<const double> input) {
    ForwardTrace t = forward_trace(net, input);
    return std::move(t.post.back());
}

std::vector<double> backward(const DenseNet& net, const ForwardTrace& trace, std::span<const double> output_grad,
                             std::span<double> param_grad) {
    std::vector<double> delta(output_grad.begin(), output_grad.end());
    for (std::size_t l = net.layer_count(); l-- > 0;) {
        const LayerShape& s = net.layer(l);
        const auto w = net.weight(l);
        const std::vector<double>& z = trace.pre[l];
        const std::vector<double>& y = trace.post[l + 1];
        const std::vector<double>& x = trace.post[l];
        for (int o = 0; o < s.out; ++o) delta[o] *= activate_grad(s.activation, z[o], y[o]);

        double* gw = param_grad.data() + s.offset;
        double* gb = gw + s.weight_count();
        std::vector<double> prev(s.in, 0.0);
        for (int o = 0; o < s.out; ++o) {
            const double d = delta[o];
            gb[o] += d;
            if (d == 0.0) continue;
            double* grow = gw + static_cast<std::size_t>(o) * s.in;
            const double* row = w.data() + static_cast<std::size_t>(o) * s.in;
            for (int i = 0; i < s.in; ++i) {
                grow[i] += d * x[i];
                prev[i] += d * row[i];
            }
        }
        delta = std::move(prev);
    }
    return delta;
}

Gradients gradients(const DenseNet& net, const LossFn& loss, std::span<const double> input) {
    const ForwardTrace trace = forward_trace(net, input);
    std::vector<double> dout(trace.output().size(), 0.0);
    loss(trace.output(), dout);
    Gradients g;
    g.params.assign(net.params().size(), 0.0);
    g.input = backward(net, trace, dout, g.params);
    return g;
}

AdamState::AdamState(std::size_t n, double lr, double b1, double b2, double eps)
    : first_moment(n, 0.0), second_moment(n, 0.0), learning_rate(lr), beta1(b1), beta2(b2), epsilon(eps) {}

void adam_update(std::span<double> params, std::span<const double> grads, AdamState& state) {
    if (params.size() != grads.size()) throw DimensionMismatch("adam: parameter and gradient sizes differ");
    if (state.first_moment.size() != params.size()) {
        state.first_moment.assign(params.size(), 0.0);
        state.second_moment.assign(params.size(), 0.0);
    }
    ++state.step_count;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < params.size(); ++i) {
        double& m = state.first_moment[i];
        double& v = state.second_moment[i];
        m = state.beta1 * m + (1.0 - state.beta1) * grads[i];
        v = state.beta2 * v + (1.0 - state.beta2) * grads[i] * grads[i];
        params[i] -= state.learning_rate * (m / c1) / (std::sqrt(v / c2) + state.epsilon);
    }
}

void save_checkpoint(const DenseNet& net, std::ostream& out) {
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
        const LayerShape& s = net.layer(l);
        const auto w = net.weight(l);
        const auto b = net.bias(l);
        layers.push_back({{"in", s.in},
                          {"out", s.out},
                          {"activation", to_string(s.activation)},
                          {"weight", std::vector<double>(w.begin(), w.end())},
                          {"bias", std::vector<double>(b.begin(), b.end())}});
    }
    out << nlohmann::json{{"layers", layers}}.dump() << '\n';
}

DenseNet load_checkpoint(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("checkpoint is not valid JSON: ") + e.what());
    }
    try {
        std::vector<LayerShape> shapes;
        for (const auto& layer : doc.at("layers")) {
            LayerShape s;
            s.in = layer.at("in").get<int>();
            s.out = layer.at("out").get<int>();
            s.activation = activation_from_string(layer.at("activation").get<std::string>());
            shapes.push_back(s);
        }
        DenseNet net = DenseNet::from_shapes(std::move(shapes));
        std::size_t l = 0;
        for (const auto& layer : doc.at("layers")) {
            const auto w = layer.at("weight").get<std::vector<double>>();
            const auto b = layer.at("bias").get<std::vector<double>>();
            if (w.size() != net.weight(l).size() || b.size() != net.bias(l).size())
                throw SchemaMismatch("checkpoint parameter count does not match layer shape");
            std::copy(w.begin(), w.end(), net.weight(l).begin());
            std::copy(b.begin(), b.end(), net.bias(l).begin());
            ++l;
        }
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaMismatch(std::string("malformed checkpoint: ") + e.what());
    }
}

} // namespace wogan::nn
