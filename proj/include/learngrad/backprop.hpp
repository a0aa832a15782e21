#pragma once

#include <vector>

#include "learngrad/network.hpp"
#include "learngrad/numeric.hpp"

namespace learngrad {

// error signal for one layer, one entry per neuron
using DeltaVector = Vector;

struct GradientSet {
    std::vector<Matrix> weight_gradients;  // shaped like each layer's weights
    std::vector<Vector> bias_gradients;    // shaped like each layer's biases
};

// output delta (y_hat - y) * f'(z), then back through each layer via the
// transposed weights; the returned stack is indexed like net.layers
std::vector<DeltaVector> compute_deltas(const Network& net, const ForwardTrace& trace,
                                        const Vector& target);

GradientSet gradients_from_deltas(const Network& net, const ForwardTrace& trace,
                                  const std::vector<DeltaVector>& deltas);

GradientSet backprop(const Network& net, const ForwardTrace& trace, const Vector& target);

// p <- p - learning_rate * dp for every parameter
void apply_update(Network& net, const GradientSet& grads, double learning_rate);

// element-wise arithmetic mean
GradientSet accumulate(const std::vector<GradientSet>& grads);

}  // namespace learngrad
