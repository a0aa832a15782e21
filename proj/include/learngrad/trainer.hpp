#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "learngrad/dataset.hpp"
#include "learngrad/network.hpp"
#include "learngrad/saliency.hpp"

namespace learngrad {

// the unit at which saliency normalization happens before the per-epoch mean
enum class Granularity { PerEpoch, PerBatch, PerExample };

std::string granularity_to_string(Granularity g);
Granularity parse_granularity(const std::string& text);

struct TrainConfig {
    std::size_t epochs = 40;
    std::size_t batch_size = 16;
    double learning_rate = 0.1;
    std::uint64_t seed = 1;
    Granularity saliency_granularity = Granularity::PerEpoch;
    std::vector<LayerSpec> architecture;
};

struct RunReport {
    TrainConfig config;
    double test_fraction = 0.2;  // recorded by the CLI so the artifact replays
    double initial_train_loss = 0.0;
    std::vector<EpochSnapshot> snapshots;
    double final_train_loss = 0.0;
    double final_test_accuracy = 0.0;
    std::size_t update_count = 0;
    bool valid = true;  // false when training aborted on a non-finite loss
    FeatureRanking final_ranking;
    Network net;
};

// seeded shuffle of all row indices, chunked; the last chunk may be short
std::vector<std::vector<std::size_t>> make_batches(const Dataset& train, std::size_t batch_size,
                                                   std::uint64_t epoch_seed);

// mini-batch SGD; expects standardized inputs; one combined backward pass per
// example feeds both the parameter update and the input attribution
RunReport train(const Dataset& train_data, const Dataset& test_data, const TrainConfig& config);

std::pair<double, double> evaluate(const Network& net, const Dataset& test);

}  // namespace learngrad
