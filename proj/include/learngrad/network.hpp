#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "learngrad/numeric.hpp"

namespace learngrad {

struct LayerSpec {
    std::size_t input_width = 0;
    std::size_t output_width = 0;
    ActivationKind activation = ActivationKind::ReLU;
};

struct DenseLayer {
    Matrix weights;  // output_width x input_width
    Vector biases;   // output_width
    ActivationKind activation = ActivationKind::ReLU;

    std::size_t input_width() const { return weights.cols; }
    std::size_t output_width() const { return weights.rows; }
};

struct Network {
    std::vector<DenseLayer> layers;
    std::vector<std::string> feature_names;  // optional; empty or one per input

    std::size_t input_width() const { return layers.front().input_width(); }
    std::size_t output_width() const { return layers.back().output_width(); }
};

// everything Alg.-style backward passes need: input, per-layer z and a, output
struct ForwardTrace {
    Vector input;
    std::vector<Vector> pre_activations;
    std::vector<Vector> activations;

    const Vector& output() const { return activations.back(); }
};

// Glorot-uniform weights in +-sqrt(6/(fan_in+fan_out)), zero biases; same seed,
// same bits
Network build_network(const std::vector<LayerSpec>& specs, std::uint64_t seed);

ForwardTrace forward(const Network& net, const Vector& x);

// threshold at 0.5; ties go to class 1
int predict_class(const Network& net, const Vector& x);

}  // namespace learngrad
