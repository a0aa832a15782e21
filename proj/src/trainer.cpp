#include "learngrad/trainer.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "learngrad/errors.hpp"
#include "learngrad/rng.hpp"

namespace learngrad {

namespace {

double full_set_loss(const Network& net, const Dataset& data) {
    std::vector<Vector> predictions;
    std::vector<Vector> targets;
    predictions.reserve(data.row_count());
    targets.reserve(data.row_count());
    for (std::size_t r = 0; r < data.row_count(); ++r) {
        predictions.push_back(forward(net, data.rows[r]).output());
        targets.push_back({static_cast<double>(data.labels[r])});
    }
    return mse_cost(predictions, targets);
}

// mean of already-normalized distributions, renormalized to pin the sum at 1
SaliencyVector mean_saliency(const std::vector<SaliencyVector>& units) {
    if (units.empty()) {
        throw DegenerateGradient("epoch produced no usable saliency unit");
    }
    Vector sum(units.front().relevances.size(), 0.0);
    for (const SaliencyVector& unit : units) {
        for (std::size_t k = 0; k < sum.size(); ++k) {
            sum[k] += unit.relevances[k];
        }
    }
    return to_saliency(RawInputGradient{std::move(sum)});
}

}  // namespace

std::string granularity_to_string(Granularity g) {
    switch (g) {
        case Granularity::PerEpoch:
            return "per-epoch";
        case Granularity::PerBatch:
            return "per-batch";
        default:
            return "per-example";
    }
}

Granularity parse_granularity(const std::string& text) {
    if (text == "per-epoch") {
        return Granularity::PerEpoch;
    }
    if (text == "per-batch") {
        return Granularity::PerBatch;
    }
    if (text == "per-example") {
        return Granularity::PerExample;
    }
    throw UsageError("unknown granularity '" + text +
                     "' (expected per-epoch, per-batch or per-example)");
}

std::vector<std::vector<std::size_t>> make_batches(const Dataset& train, std::size_t batch_size,
                                                   std::uint64_t epoch_seed) {
    std::vector<std::size_t> order(train.row_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(epoch_seed);
    shuffle(order, rng);
    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < order.size(); start += batch_size) {
        const std::size_t stop = std::min(start + batch_size, order.size());
        batches.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                             order.begin() + static_cast<std::ptrdiff_t>(stop));
    }
    return batches;
}

RunReport train(const Dataset& train_data, const Dataset& test_data, const TrainConfig& config) {
    if (train_data.row_count() == 0) {
        throw EmptyDataset("train: no training rows");
    }
    if (config.architecture.empty()) {
        throw IncompatibleSpecs("train: empty architecture");
    }
    if (config.architecture.front().input_width != train_data.feature_count()) {
        throw DimensionMismatch("train: architecture expects " +
                                std::to_string(config.architecture.front().input_width) +
                                " inputs, data has " +
                                std::to_string(train_data.feature_count()));
    }
    if (config.architecture.back().output_width != 1) {
        throw UnsupportedHead("train: binary targets need an output width of 1");
    }
    if (config.epochs < 1 || config.batch_size < 1) {
        throw UsageError("train: epochs and batch_size must be at least 1");
    }

    RunReport report;
    report.config = config;
    report.net = build_network(config.architecture, config.seed);
    report.net.feature_names = train_data.feature_names;
    report.initial_train_loss = full_set_loss(report.net, train_data);

    EpochRecorder recorder;
    bool diverged = false;
    for (std::size_t epoch = 1; epoch <= config.epochs && !diverged; ++epoch) {
        const auto batches = make_batches(train_data, config.batch_size, config.seed + epoch);
        std::vector<RawInputGradient> epoch_raws;
        std::vector<SaliencyVector> unit_saliencies;
        double cost_sum = 0.0;

        for (const std::vector<std::size_t>& batch : batches) {
            std::vector<Vector> predictions;
            std::vector<Vector> targets;
            std::vector<GradientSet> gradients;
            std::vector<RawInputGradient> batch_raws;
            predictions.reserve(batch.size());
            targets.reserve(batch.size());
            gradients.reserve(batch.size());
            batch_raws.reserve(batch.size());
            for (std::size_t idx : batch) {
                const Vector target{static_cast<double>(train_data.labels[idx])};
                const ForwardTrace trace = forward(report.net, train_data.rows[idx]);
                const auto deltas = compute_deltas(report.net, trace, target);
                gradients.push_back(gradients_from_deltas(report.net, trace, deltas));
                batch_raws.push_back(input_gradient_from_deltas(report.net, deltas));
                predictions.push_back(trace.output());
                targets.push_back(target);
            }
            const double cost = mse_cost(predictions, targets);  // pre-update outputs
            if (!std::isfinite(cost)) {
                diverged = true;
                break;
            }
            cost_sum += cost;
            apply_update(report.net, accumulate(gradients), config.learning_rate);
            ++report.update_count;

            switch (config.saliency_granularity) {
                case Granularity::PerEpoch:
                    for (RawInputGradient& raw : batch_raws) {
                        epoch_raws.push_back(std::move(raw));
                    }
                    break;
                case Granularity::PerBatch:
                    try {
                        unit_saliencies.push_back(aggregate_saliency(batch_raws));
                    } catch (const DegenerateGradient&) {
                        // all-zero batch: skipped, not counted in the mean
                    }
                    break;
                case Granularity::PerExample:
                    for (const RawInputGradient& raw : batch_raws) {
                        try {
                            unit_saliencies.push_back(to_saliency(raw));
                        } catch (const DegenerateGradient&) {
                        }
                    }
                    break;
            }
        }
        if (diverged) {
            break;
        }

        SaliencyVector epoch_saliency =
            config.saliency_granularity == Granularity::PerEpoch
                ? aggregate_saliency(epoch_raws)
                : mean_saliency(unit_saliencies);
        const double epoch_loss = cost_sum / static_cast<double>(batches.size());
        const auto [accuracy, test_loss] = evaluate(report.net, test_data);
        (void)test_loss;
        record_epoch(recorder, epoch, std::move(epoch_saliency), epoch_loss, accuracy);
    }

    report.snapshots = recorder.snapshots();
    if (diverged) {
        report.valid = false;
        report.final_train_loss = std::numeric_limits<double>::quiet_NaN();
        report.final_test_accuracy = 0.0;
        return report;
    }
    report.final_train_loss = full_set_loss(report.net, train_data);
    report.final_test_accuracy = evaluate(report.net, test_data).first;
    report.final_ranking = rank_features(report.snapshots.back().saliency,
                                         train_data.feature_names, train_data.feature_count());
    return report;
}

std::pair<double, double> evaluate(const Network& net, const Dataset& test) {
    if (test.row_count() == 0) {
        throw EmptyDataset("evaluate: no test rows");
    }
    if (net.output_width() != 1) {
        throw UnsupportedHead("evaluate: output width " + std::to_string(net.output_width()) +
                              ", expected 1");
    }
    std::vector<Vector> predictions;
    std::vector<Vector> targets;
    predictions.reserve(test.row_count());
    targets.reserve(test.row_count());
    std::size_t correct = 0;
    for (std::size_t r = 0; r < test.row_count(); ++r) {
        const Vector output = forward(net, test.rows[r]).output();
        const int predicted = output[0] >= 0.5 ? 1 : 0;
        if (predicted == test.labels[r]) {
            ++correct;
        }
        predictions.push_back(output);
        targets.push_back({static_cast<double>(test.labels[r])});
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(test.row_count());
    return {accuracy, mse_cost(predictions, targets)};
}

}  // namespace learngrad
