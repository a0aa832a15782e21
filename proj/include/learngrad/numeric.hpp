#pragma once

#include <cstddef>
#include <vector>

namespace learngrad {

using Vector = std::vector<double>;

enum class ActivationKind { Sigmoid, ReLU };

// dense row-major matrix; rows*cols == values.size() is maintained by construction
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows(rows), cols(cols), values(rows * cols, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

double sigmoid(double z);
double sigmoid_prime(double z);
double relu(double z);
double relu_prime(double z);

double activate(ActivationKind kind, double z);
double activate_prime(ActivationKind kind, double z);

// (1 / 2m) * sum over examples and outputs of (prediction - target)^2
double mse_cost(const std::vector<Vector>& predictions, const std::vector<Vector>& targets);

}  // namespace learngrad
