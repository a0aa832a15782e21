#include "learngrad/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "learngrad/errors.hpp"

namespace learngrad {

void EpochRecorder::append(EpochSnapshot snapshot) {
    const std::size_t expected = snapshots_.empty() ? 1 : snapshots_.back().epoch + 1;
    if (snapshot.epoch != expected) {
        throw NonMonotonicEpoch("record_epoch: got epoch " + std::to_string(snapshot.epoch) +
                                ", expected " + std::to_string(expected));
    }
    snapshots_.push_back(std::move(snapshot));
}

RawInputGradient input_gradient_from_deltas(const Network& net,
                                            const std::vector<DeltaVector>& deltas) {
    const DenseLayer& first = net.layers.front();
    RawInputGradient raw;
    raw.values.assign(first.input_width(), 0.0);
    for (std::size_t k = 0; k < first.input_width(); ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < first.output_width(); ++j) {
            acc += deltas[0][j] * first.weights(j, k);
        }
        raw.values[k] = acc;
    }
    return raw;
}

RawInputGradient input_gradient(const Network& net, const ForwardTrace& trace,
                                const Vector& target) {
    return input_gradient_from_deltas(net, compute_deltas(net, trace, target));
}

SaliencyVector to_saliency(const RawInputGradient& raw) {
    double total = 0.0;
    for (double v : raw.values) {
        total += std::abs(v);
    }
    if (total == 0.0) {
        throw DegenerateGradient("to_saliency: all gradient components are zero");
    }
    SaliencyVector s;
    s.relevances.reserve(raw.values.size());
    for (double v : raw.values) {
        s.relevances.push_back(std::abs(v) / total);
    }
    return s;
}

SaliencyVector aggregate_saliency(const std::vector<RawInputGradient>& raws) {
    if (raws.empty()) {
        throw EmptyBatch("aggregate_saliency: no gradients");
    }
    const std::size_t width = raws.front().values.size();
    Vector mean(width, 0.0);
    for (std::size_t i = 0; i < raws.size(); ++i) {
        if (raws[i].values.size() != width) {
            throw ShapeMismatch("aggregate_saliency: gradient " + std::to_string(i) + " has length " +
                                std::to_string(raws[i].values.size()) + ", expected " +
                                std::to_string(width));
        }
        for (std::size_t k = 0; k < width; ++k) {
            mean[k] += std::abs(raws[i].values[k]);
        }
    }
    const double inv = 1.0 / static_cast<double>(raws.size());
    for (double& v : mean) {
        v *= inv;
    }
    RawInputGradient averaged{std::move(mean)};
    if (std::accumulate(averaged.values.begin(), averaged.values.end(), 0.0) == 0.0) {
        throw DegenerateGradient("aggregate_saliency: aggregate gradient is zero");
    }
    return to_saliency(averaged);
}

FeatureRanking rank_features(const SaliencyVector& saliency,
                             const std::vector<std::string>& names, std::size_t k) {
    if (names.size() != saliency.relevances.size()) {
        throw LengthMismatch("rank_features: " + std::to_string(names.size()) + " names for " +
                             std::to_string(saliency.relevances.size()) + " relevances");
    }
    if (k > saliency.relevances.size()) {
        throw LengthMismatch("rank_features: k " + std::to_string(k) + " exceeds feature count " +
                             std::to_string(saliency.relevances.size()));
    }
    std::vector<std::size_t> order(saliency.relevances.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return saliency.relevances[a] > saliency.relevances[b];
    });
    FeatureRanking ranking;
    ranking.entries.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        ranking.entries.emplace_back(names[order[i]], saliency.relevances[order[i]]);
    }
    return ranking;
}

void record_epoch(EpochRecorder& recorder, std::size_t epoch, SaliencyVector saliency,
                  double train_loss, double test_accuracy) {
    recorder.append(EpochSnapshot{epoch, std::move(saliency), train_loss, test_accuracy});
}

}  // namespace learngrad
