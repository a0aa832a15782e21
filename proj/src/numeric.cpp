#include "learngrad/numeric.hpp"

#include <cmath>
#include <string>

#include "learngrad/errors.hpp"

namespace learngrad {

double sigmoid(double z) {
    // branch on sign so the exponential argument is always <= 0: no overflow
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double sigmoid_prime(double z) {
    const double s = sigmoid(z);
    return s * (1.0 - s);
}

double relu(double z) { return z > 0.0 ? z : 0.0; }

// subgradient 0 at the kink keeps dead units dead
double relu_prime(double z) { return z > 0.0 ? 1.0 : 0.0; }

double activate(ActivationKind kind, double z) {
    return kind == ActivationKind::Sigmoid ? sigmoid(z) : relu(z);
}

double activate_prime(ActivationKind kind, double z) {
    return kind == ActivationKind::Sigmoid ? sigmoid_prime(z) : relu_prime(z);
}

double mse_cost(const std::vector<Vector>& predictions, const std::vector<Vector>& targets) {
    if (predictions.empty()) {
        throw EmptyBatch("mse_cost: no examples");
    }
    if (predictions.size() != targets.size()) {
        throw ShapeMismatch("mse_cost: " + std::to_string(predictions.size()) +
                            " predictions vs " + std::to_string(targets.size()) + " targets");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].size() != targets[i].size()) {
            throw ShapeMismatch("mse_cost: example " + std::to_string(i) + " width " +
                                std::to_string(predictions[i].size()) + " vs " +
                                std::to_string(targets[i].size()));
        }
        for (std::size_t j = 0; j < predictions[i].size(); ++j) {
            const double d = predictions[i][j] - targets[i][j];
            total += d * d;
        }
    }
    return total / (2.0 * static_cast<double>(predictions.size()));
}

}  // namespace learngrad
