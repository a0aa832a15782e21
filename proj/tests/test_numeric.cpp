#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "learngrad/errors.hpp"
#include "learngrad/numeric.hpp"
#include "learngrad/rng.hpp"
#include "support/oracles.hpp"

using namespace learngrad;

TEST_CASE("sigmoid fixed points and identities") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(2.0) + sigmoid(-2.0) == doctest::Approx(1.0).epsilon(1e-15));
    // high-precision reference value for z = 10
    CHECK(sigmoid(10.0) == doctest::Approx(0.9999546021312976).epsilon(1e-15));
}

TEST_CASE("sigmoid stays in (0,1) and finite for extreme inputs") {
    for (double z : {-1000.0, -500.0, -20.0, 0.0, 20.0, 500.0, 1000.0}) {
        const double s = sigmoid(z);
        CHECK(std::isfinite(s));
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);  // saturates to exactly 1.0 once exp(-z) underflows
        if (z > -700.0) {
            CHECK(s > 0.0);
        }
        if (z <= 20.0) {
            CHECK(s < 1.0);
        }
    }
}

TEST_CASE("sigmoid_prime values and symmetry") {
    CHECK(sigmoid_prime(0.0) == 0.25);
    // symmetric up to rounding: the two branches evaluate s*(1-s) differently
    CHECK(std::abs(sigmoid_prime(3.0) - sigmoid_prime(-3.0)) < 1e-15);
    // frozen central-difference reference at z = 1
    CHECK(sigmoid_prime(1.0) == doctest::Approx(0.19661193324148185).epsilon(1e-12));
}

TEST_CASE("sigmoid_prime equals s(1-s) within 1e-12 relative") {
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const double z = rng.uniform(-20.0, 20.0);
        const double s = sigmoid(z);
        const double direct = s * (1.0 - s);
        CHECK(sigmoid_prime(z) == doctest::Approx(direct).epsilon(1e-12));
        CHECK(sigmoid_prime(z) > 0.0);
        CHECK(sigmoid_prime(z) <= 0.25);
    }
}

TEST_CASE("relu basics") {
    CHECK(relu(-3.0) == 0.0);
    CHECK(relu(5.0) == 5.0);
    CHECK(relu(0.0) == 0.0);
    CHECK(relu_prime(2.0) == 1.0);
    CHECK(relu_prime(-2.0) == 0.0);
    CHECK(relu_prime(0.0) == 0.0);  // kink convention
}

TEST_CASE("relu identities on random inputs") {
    Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const double z = rng.uniform(-20.0, 20.0);
        CHECK(relu(z) >= 0.0);
        if (z != 0.0) {
            CHECK(relu(z) - z * relu_prime(z) == 0.0);
        }
    }
}

TEST_CASE("derivatives match central finite differences") {
    Rng rng(13);
    int checked = 0;
    while (checked < 1000) {
        const double z = rng.uniform(-20.0, 20.0);
        const double fd_sig = oracles::central_difference(sigmoid, z, 1e-6);
        CHECK(std::abs(sigmoid_prime(z) - fd_sig) < 1e-8);
        if (std::abs(z) >= 1e-3) {  // keep clear of the ReLU kink
            const double fd_relu = oracles::central_difference(relu, z, 1e-6);
            CHECK(std::abs(relu_prime(z) - fd_relu) < 1e-8);
        }
        ++checked;
    }
}

TEST_CASE("mse_cost worked examples") {
    CHECK(mse_cost({{0.3, 0.7}, {0.1, 0.9}}, {{0.3, 0.7}, {0.1, 0.9}}) == 0.0);
    CHECK(mse_cost({{1.0}}, {{0.0}}) == 0.5);
    // (0.25 + 0.5625) / 4
    CHECK(mse_cost({{0.5}, {0.25}}, {{0.0}, {1.0}}) == doctest::Approx(0.203125).epsilon(1e-15));
}

TEST_CASE("mse_cost is invariant under example permutation") {
    Rng rng(17);
    std::vector<Vector> predictions, targets;
    for (int i = 0; i < 12; ++i) {
        predictions.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
        targets.push_back({rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)});
    }
    const double value = mse_cost(predictions, targets);
    std::vector<Vector> shuffled_predictions, shuffled_targets;
    std::vector<std::size_t> order{7, 3, 11, 0, 9, 4, 2, 10, 1, 8, 5, 6};
    for (std::size_t idx : order) {
        shuffled_predictions.push_back(predictions[idx]);
        shuffled_targets.push_back(targets[idx]);
    }
    CHECK(mse_cost(shuffled_predictions, shuffled_targets) ==
          doctest::Approx(value).epsilon(1e-12));
    CHECK(value >= 0.0);
}

TEST_CASE("mse_cost rejects shape problems") {
    CHECK_THROWS_AS(mse_cost({}, {}), EmptyBatch);
    CHECK_THROWS_AS(mse_cost({{1.0}}, {{1.0}, {2.0}}), ShapeMismatch);
    CHECK_THROWS_AS(mse_cost({{1.0, 2.0}}, {{1.0}}), ShapeMismatch);
}
