#include "learngrad/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <set>

#include "learngrad/dataset.hpp"
#include "learngrad/errors.hpp"
#include "learngrad/report.hpp"
#include "learngrad/trainer.hpp"

namespace learngrad {

namespace {

namespace fs = std::filesystem;

std::size_t parse_positive(const std::string& text, const std::string& what) {
    std::size_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size() || value == 0) {
        throw UsageError(what + ": '" + text + "' is not a positive integer");
    }
    return value;
}

void validate_train_flags(const CliOptions& options) {
    if (options.epochs < 1) {
        throw UsageError("--epochs must be at least 1");
    }
    if (options.batch_size < 1) {
        throw UsageError("--batch-size must be at least 1");
    }
    if (!(options.learning_rate > 0.0)) {
        throw UsageError("--lr must be greater than 0");
    }
    if (!(options.test_fraction > 0.0 && options.test_fraction < 1.0)) {
        throw UsageError("--test-fraction must lie strictly between 0 and 1");
    }
    parse_granularity(options.granularity);
    parse_hidden_widths(options.hidden);
}

std::vector<LayerSpec> make_architecture(std::size_t input_width,
                                         const std::vector<std::size_t>& hidden_widths) {
    std::vector<LayerSpec> specs;
    std::size_t previous = input_width;
    for (std::size_t width : hidden_widths) {
        specs.push_back({previous, width, ActivationKind::ReLU});
        previous = width;
    }
    specs.push_back({previous, 1, ActivationKind::Sigmoid});
    return specs;
}

fs::path prepare_out_dir(const CliOptions& options) {
    fs::path dir(options.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    }
    return dir;
}

std::vector<std::string> report_feature_names(const RunReport& report) {
    if (!report.net.feature_names.empty()) {
        return report.net.feature_names;
    }
    std::vector<std::string> names;
    for (std::size_t k = 1; k <= report.net.input_width(); ++k) {
        names.push_back("feature " + std::to_string(k));
    }
    return names;
}

void print_ranking(const FeatureRanking& ranking, std::size_t limit) {
    char line[160];
    for (std::size_t i = 0; i < std::min(limit, ranking.entries.size()); ++i) {
        std::snprintf(line, sizeof line, "  %2zu. %-25s %.4f", i + 1,
                      ranking.entries[i].first.c_str(), ranking.entries[i].second);
        std::cout << line << "\n";
    }
}

}  // namespace

std::vector<std::size_t> parse_hidden_widths(const std::string& text) {
    std::vector<std::size_t> widths;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string token =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        widths.push_back(parse_positive(token, "--hidden"));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return widths;
}

std::vector<std::size_t> parse_epoch_filter(const std::string& text,
                                            const std::vector<std::size_t>& available) {
    if (text == "all") {
        return available;
    }
    if (text == "odd") {
        std::vector<std::size_t> selected;
        for (std::size_t epoch : available) {
            if (epoch % 2 == 1) {
                selected.push_back(epoch);
            }
        }
        return selected;
    }
    std::set<std::size_t> wanted;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string token =
            comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
        wanted.insert(parse_positive(token, "--epochs-filter"));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    std::vector<std::size_t> selected;
    for (std::size_t epoch : available) {
        if (wanted.count(epoch) != 0) {
            selected.push_back(epoch);
        }
    }
    return selected;
}

int cmd_train(const CliOptions& options) {
    validate_train_flags(options);

    const Dataset data = load_csv(options.data_path);
    auto [train_raw, test_raw] = stratified_split(data, options.test_fraction, options.seed);
    const StandardizationParams params = fit_standardizer(train_raw);
    const Dataset train_set = apply_standardizer(params, train_raw);
    const Dataset test_set = apply_standardizer(params, test_raw);

    TrainConfig config;
    config.epochs = options.epochs;
    config.batch_size = options.batch_size;
    config.learning_rate = options.learning_rate;
    config.seed = options.seed;
    config.saliency_granularity = parse_granularity(options.granularity);
    config.architecture =
        make_architecture(train_set.feature_count(), parse_hidden_widths(options.hidden));

    RunReport report = train(train_set, test_set, config);
    report.test_fraction = options.test_fraction;

    const fs::path out = prepare_out_dir(options);
    save_run_report(report, out / "run_report.json");
    write_text_file(out / "saliency_evolution.csv",
                    saliency_evolution_csv(report.snapshots, train_set.feature_names));
    write_text_file(out / "ranking.csv", ranking_csv(report.final_ranking));
    write_text_file(out / "network.json", network_to_json(report.net).dump(2) + "\n");

    if (!report.valid) {
        std::cerr << "error: training diverged (non-finite loss); partial report written to '"
                  << out.string() << "'\n";
        return 1;
    }

    char summary[96];
    std::snprintf(summary, sizeof summary, "final test accuracy: %.4f",
                  report.final_test_accuracy);
    std::cout << summary << "\n";
    std::cout << "top-5 features:\n";
    print_ranking(report.final_ranking, 5);
    std::cout << "artifacts written to '" << out.string() << "'\n";
    return 0;
}

int cmd_correlate(const CliOptions& options) {
    const Dataset data = load_csv(options.data_path);
    const CorrelationMatrix corr = correlation_matrix(data);

    const fs::path out = prepare_out_dir(options);
    write_text_file(out / "correlation.csv", correlation_csv(corr));
    write_text_file(out / "correlation_heatmap.svg", svg_correlation_heatmap(corr));

    std::size_t best_i = 0, best_j = 1;
    double best = -1.0;
    const std::size_t n = corr.feature_names.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(corr.values(i, j)) > best) {
                best = std::abs(corr.values(i, j));
                best_i = i;
                best_j = j;
            }
        }
    }
    char summary[200];
    std::snprintf(summary, sizeof summary, "strongest pair: %s / %s (r = %.4f)",
                  corr.feature_names[best_i].c_str(), corr.feature_names[best_j].c_str(),
                  corr.values(best_i, best_j));
    std::cout << summary << "\n";
    std::cout << "artifacts written to '" << out.string() << "'\n";
    return 0;
}

int cmd_rank(const CliOptions& options) {
    const RunReport report = load_run_report(options.data_path);
    if (report.final_ranking.entries.empty()) {
        throw Error("report has no feature ranking (aborted run?)");
    }
    std::cout << "feature ranking (" << report.final_ranking.entries.size() << " features):\n";
    print_ranking(report.final_ranking, report.final_ranking.entries.size());
    if (options.out_given) {
        const fs::path out = prepare_out_dir(options);
        write_text_file(out / "ranking.csv", ranking_csv(report.final_ranking));
        std::cout << "ranking written to '" << (out / "ranking.csv").string() << "'\n";
    }
    return 0;
}

int cmd_evolution(const CliOptions& options) {
    const RunReport report = load_run_report(options.data_path);
    if (report.snapshots.empty()) {
        throw Error("report has no epoch snapshots");
    }
    std::vector<std::size_t> available;
    for (const EpochSnapshot& snap : report.snapshots) {
        available.push_back(snap.epoch);
    }
    const std::vector<std::size_t> selected = parse_epoch_filter(options.epochs_filter, available);
    if (selected.empty()) {
        throw Error("no recorded epoch matches --epochs-filter '" + options.epochs_filter + "'");
    }
    std::vector<EpochSnapshot> picked;
    for (const EpochSnapshot& snap : report.snapshots) {
        if (std::find(selected.begin(), selected.end(), snap.epoch) != selected.end()) {
            picked.push_back(snap);
        }
    }

    const fs::path out = prepare_out_dir(options);
    write_text_file(out / "saliency_evolution.svg",
                    svg_evolution_panels(picked, report_feature_names(report)));
    std::cout << "wrote '" << (out / "saliency_evolution.svg").string() << "' ("
              << picked.size() << " panels)\n";
    return 0;
}

}  // namespace learngrad
