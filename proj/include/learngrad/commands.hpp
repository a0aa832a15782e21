#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace learngrad {

struct CliOptions {
    std::string data_path;
    std::string out_dir = ".";
    bool out_given = false;
    std::size_t epochs = 40;
    std::size_t batch_size = 16;
    double learning_rate = 0.1;
    std::uint64_t seed = 1;
    double test_fraction = 0.2;
    std::string granularity = "per-epoch";
    std::string hidden = "3";
    std::string epochs_filter = "odd";
};

// flag-shape helpers, shared with the CLI tests
std::vector<std::size_t> parse_hidden_widths(const std::string& text);
std::vector<std::size_t> parse_epoch_filter(const std::string& text,
                                            const std::vector<std::size_t>& available);

int cmd_train(const CliOptions& options);
int cmd_correlate(const CliOptions& options);
int cmd_rank(const CliOptions& options);
int cmd_evolution(const CliOptions& options);

}  // namespace learngrad
