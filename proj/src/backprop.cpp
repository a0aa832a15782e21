#include "learngrad/backprop.hpp"

#include <cmath>
#include <string>

#include "learngrad/errors.hpp"

namespace learngrad {

namespace {

void check_trace(const Network& net, const ForwardTrace& trace) {
    if (trace.pre_activations.size() != net.layers.size() ||
        trace.activations.size() != net.layers.size()) {
        throw TraceMismatch("trace has " + std::to_string(trace.pre_activations.size()) +
                            " layers, network has " + std::to_string(net.layers.size()));
    }
    if (trace.input.size() != net.input_width()) {
        throw TraceMismatch("trace input length " + std::to_string(trace.input.size()) +
                            ", network expects " + std::to_string(net.input_width()));
    }
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        if (trace.pre_activations[l].size() != net.layers[l].output_width() ||
            trace.activations[l].size() != net.layers[l].output_width()) {
            throw TraceMismatch("trace layer " + std::to_string(l) + " width disagrees with network");
        }
    }
}

}  // namespace

std::vector<DeltaVector> compute_deltas(const Network& net, const ForwardTrace& trace,
                                        const Vector& target) {
    check_trace(net, trace);
    if (target.size() != net.output_width()) {
        throw TraceMismatch("target length " + std::to_string(target.size()) +
                            ", network output width " + std::to_string(net.output_width()));
    }
    const std::size_t depth = net.layers.size();
    std::vector<DeltaVector> deltas(depth);

    const std::size_t last = depth - 1;
    deltas[last].resize(net.layers[last].output_width());
    for (std::size_t j = 0; j < deltas[last].size(); ++j) {
        deltas[last][j] = (trace.output()[j] - target[j]) *
                          activate_prime(net.layers[last].activation, trace.pre_activations[last][j]);
    }

    for (std::size_t l = last; l-- > 0;) {
        const DenseLayer& next = net.layers[l + 1];
        deltas[l].resize(net.layers[l].output_width());
        for (std::size_t k = 0; k < deltas[l].size(); ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < next.output_width(); ++j) {
                acc += deltas[l + 1][j] * next.weights(j, k);
            }
            deltas[l][k] = activate_prime(net.layers[l].activation, trace.pre_activations[l][k]) * acc;
        }
    }
    return deltas;
}

GradientSet gradients_from_deltas(const Network& net, const ForwardTrace& trace,
                                  const std::vector<DeltaVector>& deltas) {
    GradientSet grads;
    grads.weight_gradients.reserve(net.layers.size());
    grads.bias_gradients.reserve(net.layers.size());
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const Vector& input = l == 0 ? trace.input : trace.activations[l - 1];
        Matrix dw(net.layers[l].output_width(), net.layers[l].input_width());
        for (std::size_t j = 0; j < dw.rows; ++j) {
            for (std::size_t k = 0; k < dw.cols; ++k) {
                dw(j, k) = deltas[l][j] * input[k];
            }
        }
        grads.weight_gradients.push_back(std::move(dw));
        grads.bias_gradients.push_back(deltas[l]);  // db equals the delta exactly
    }
    return grads;
}

GradientSet backprop(const Network& net, const ForwardTrace& trace, const Vector& target) {
    return gradients_from_deltas(net, trace, compute_deltas(net, trace, target));
}

void apply_update(Network& net, const GradientSet& grads, double learning_rate) {
    if (grads.weight_gradients.size() != net.layers.size() ||
        grads.bias_gradients.size() != net.layers.size()) {
        throw ShapeMismatch("apply_update: gradient set has " +
                            std::to_string(grads.weight_gradients.size()) + " layers, network has " +
                            std::to_string(net.layers.size()));
    }
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        DenseLayer& layer = net.layers[l];
        const Matrix& dw = grads.weight_gradients[l];
        const Vector& db = grads.bias_gradients[l];
        if (dw.rows != layer.weights.rows || dw.cols != layer.weights.cols ||
            db.size() != layer.biases.size()) {
            throw ShapeMismatch("apply_update: layer " + std::to_string(l) + " gradient shape");
        }
        for (std::size_t i = 0; i < layer.weights.values.size(); ++i) {
            layer.weights.values[i] -= learning_rate * dw.values[i];
        }
        for (std::size_t j = 0; j < layer.biases.size(); ++j) {
            layer.biases[j] -= learning_rate * db[j];
        }
    }
}

GradientSet accumulate(const std::vector<GradientSet>& grads) {
    if (grads.empty()) {
        throw EmptyBatch("accumulate: no gradient sets");
    }
    GradientSet mean = grads.front();
    for (std::size_t g = 1; g < grads.size(); ++g) {
        const GradientSet& next = grads[g];
        if (next.weight_gradients.size() != mean.weight_gradients.size()) {
            throw ShapeMismatch("accumulate: layer count differs at set " + std::to_string(g));
        }
        for (std::size_t l = 0; l < mean.weight_gradients.size(); ++l) {
            Matrix& acc = mean.weight_gradients[l];
            const Matrix& add = next.weight_gradients[l];
            if (add.rows != acc.rows || add.cols != acc.cols ||
                next.bias_gradients[l].size() != mean.bias_gradients[l].size()) {
                throw ShapeMismatch("accumulate: layer " + std::to_string(l) +
                                    " shape differs at set " + std::to_string(g));
            }
            for (std::size_t i = 0; i < acc.values.size(); ++i) {
                acc.values[i] += add.values[i];
            }
            for (std::size_t j = 0; j < mean.bias_gradients[l].size(); ++j) {
                mean.bias_gradients[l][j] += next.bias_gradients[l][j];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(grads.size());
    for (std::size_t l = 0; l < mean.weight_gradients.size(); ++l) {
        for (double& v : mean.weight_gradients[l].values) {
            v *= inv;
        }
        for (double& v : mean.bias_gradients[l]) {
            v *= inv;
        }
    }
    return mean;
}

}  // namespace learngrad
