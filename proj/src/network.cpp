#include "learngrad/network.hpp"

#include <cmath>
#include <string>

#include "learngrad/errors.hpp"
#include "learngrad/rng.hpp"

namespace learngrad {

Network build_network(const std::vector<LayerSpec>& specs, std::uint64_t seed) {
    if (specs.empty()) {
        throw IncompatibleSpecs("build_network: no layer specs");
    }
    for (std::size_t l = 0; l + 1 < specs.size(); ++l) {
        if (specs[l].output_width != specs[l + 1].input_width) {
            throw IncompatibleSpecs("build_network: layer " + std::to_string(l) + " output width " +
                                    std::to_string(specs[l].output_width) +
                                    " does not feed layer " + std::to_string(l + 1) +
                                    " input width " + std::to_string(specs[l + 1].input_width));
        }
    }
    Rng rng(seed);
    Network net;
    net.layers.reserve(specs.size());
    for (const LayerSpec& spec : specs) {
        const double limit =
            std::sqrt(6.0 / static_cast<double>(spec.input_width + spec.output_width));
        DenseLayer layer;
        layer.weights = Matrix(spec.output_width, spec.input_width);
        for (double& w : layer.weights.values) {
            w = rng.uniform(-limit, limit);
        }
        layer.biases.assign(spec.output_width, 0.0);
        layer.activation = spec.activation;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

ForwardTrace forward(const Network& net, const Vector& x) {
    if (x.size() != net.input_width()) {
        throw DimensionMismatch("forward: input length " + std::to_string(x.size()) +
                                ", network expects " + std::to_string(net.input_width()));
    }
    ForwardTrace trace;
    trace.input = x;
    trace.pre_activations.reserve(net.layers.size());
    trace.activations.reserve(net.layers.size());
    const Vector* previous = &trace.input;
    for (const DenseLayer& layer : net.layers) {
        Vector z(layer.output_width());
        for (std::size_t j = 0; j < layer.output_width(); ++j) {
            double acc = layer.biases[j];
            for (std::size_t k = 0; k < layer.input_width(); ++k) {
                acc += layer.weights(j, k) * (*previous)[k];
            }
            z[j] = acc;
        }
        Vector a(z.size());
        for (std::size_t j = 0; j < z.size(); ++j) {
            a[j] = activate(layer.activation, z[j]);
        }
        trace.pre_activations.push_back(std::move(z));
        trace.activations.push_back(std::move(a));
        previous = &trace.activations.back();
    }
    return trace;
}

int predict_class(const Network& net, const Vector& x) {
    if (net.output_width() != 1) {
        throw UnsupportedHead("predict_class: output width " +
                              std::to_string(net.output_width()) + ", expected 1");
    }
    return forward(net, x).output()[0] >= 0.5 ? 1 : 0;
}

}  // namespace learngrad
