#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "learngrad/numeric.hpp"

namespace learngrad {

struct Dataset {
    std::vector<Vector> rows;        // one feature vector per example
    std::vector<int> labels;         // 0 or 1, parallel to rows
    std::vector<std::string> feature_names;

    std::size_t row_count() const { return rows.size(); }
    std::size_t feature_count() const { return feature_names.size(); }
};

struct StandardizationParams {
    Vector means;
    Vector std_devs;  // sample (n-1) form, all > 0
};

struct CorrelationMatrix {
    Matrix values;  // symmetric, unit diagonal, entries in [-1, 1]
    std::vector<std::string> feature_names;
};

// comma-separated, header row, final column `target` in {0,1}
Dataset load_csv(const std::filesystem::path& path);

// shortest round-trip formatting, so load_csv(save_csv(d)) == d bitwise
void save_csv(const Dataset& data, const std::filesystem::path& path);

StandardizationParams fit_standardizer(const Dataset& train);

Dataset apply_standardizer(const StandardizationParams& params, const Dataset& data);

// inverse of apply_standardizer
Dataset destandardize(const StandardizationParams& params, const Dataset& data);

// per-class proportional split; test takes floor(rows * fraction + 0.5) rows,
// apportioned to classes by largest remainder
std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed);

CorrelationMatrix correlation_matrix(const Dataset& data);

}  // namespace learngrad
