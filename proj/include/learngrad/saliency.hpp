#pragma once

#include <string>
#include <utility>
#include <vector>

#include "learngrad/backprop.hpp"
#include "learngrad/network.hpp"

namespace learngrad {

// signed gradient of the per-example cost with respect to each input component
struct RawInputGradient {
    Vector values;
};

// non-negative, sums to 1: the per-feature relevance distribution
struct SaliencyVector {
    Vector relevances;
};

struct EpochSnapshot {
    std::size_t epoch = 0;  // 1-based
    SaliencyVector saliency;
    double train_loss = 0.0;
    double test_accuracy = 0.0;
};

// (feature name, relevance), descending relevance
struct FeatureRanking {
    std::vector<std::pair<std::string, double>> entries;
};

class EpochRecorder {
public:
    const std::vector<EpochSnapshot>& snapshots() const { return snapshots_; }
    void append(EpochSnapshot snapshot);

private:
    std::vector<EpochSnapshot> snapshots_;
};

RawInputGradient input_gradient(const Network& net, const ForwardTrace& trace,
                                const Vector& target);

// same quantity from an already-computed delta stack (one backward pass per
// example serves both the parameter update and the attribution)
RawInputGradient input_gradient_from_deltas(const Network& net,
                                            const std::vector<DeltaVector>& deltas);

// s_k = |raw_k| / sum_i |raw_i|
SaliencyVector to_saliency(const RawInputGradient& raw);

// mean of magnitudes, then normalize; magnitudes first so opposite-sign
// gradients cannot cancel
SaliencyVector aggregate_saliency(const std::vector<RawInputGradient>& raws);

// top-k by relevance; ties broken by ascending original feature index
FeatureRanking rank_features(const SaliencyVector& saliency,
                             const std::vector<std::string>& names, std::size_t k);

void record_epoch(EpochRecorder& recorder, std::size_t epoch, SaliencyVector saliency,
                  double train_loss, double test_accuracy);

}  // namespace learngrad
