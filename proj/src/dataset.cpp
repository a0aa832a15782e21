#include "learngrad/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "learngrad/errors.hpp"
#include "learngrad/rng.hpp"

namespace learngrad {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t column) {
    const std::string text = trim(cell);
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end || text.empty()) {
        throw ParseError(row, column, "cannot parse '" + cell + "' as a number");
    }
    return value;
}

void format_double(std::string& out, double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
    out.append(buffer, result.ptr);
}

double zero_variance_floor(double mean) {
    return 1e-12 * std::max(1.0, std::abs(mean));
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw EmptyFile("'" + path.string() + "' has no header row");
    }
    std::vector<std::string> header = split_line(line);
    for (std::string& name : header) {
        name = trim(name);
    }
    if (header.size() < 2 || header.back() != "target") {
        throw MissingTarget("'" + path.string() + "' must end with a `target` column");
    }
    Dataset data;
    data.feature_names.assign(header.begin(), header.end() - 1);
    std::set<std::string> seen;
    for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
        if (!seen.insert(data.feature_names[c]).second) {
            throw ParseError(0, c + 1, "duplicate feature name '" + data.feature_names[c] + "'");
        }
    }
    const std::size_t width = header.size();
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        ++row;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != width) {
            throw ParseError(row, fields.size(), "expected " + std::to_string(width) +
                                                     " fields, got " + std::to_string(fields.size()));
        }
        Vector features(width - 1);
        for (std::size_t c = 0; c + 1 < width; ++c) {
            features[c] = parse_cell(fields[c], row, c + 1);
        }
        const double target = parse_cell(fields[width - 1], row, width);
        if (target != 0.0 && target != 1.0) {
            throw ParseError(row, width, "target must be 0 or 1");
        }
        data.rows.push_back(std::move(features));
        data.labels.push_back(target == 1.0 ? 1 : 0);
    }
    return data;
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::string out;
    for (std::size_t c = 0; c < data.feature_names.size(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += data.feature_names[c];
    }
    out += ",target\n";
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        for (double v : data.rows[r]) {
            format_double(out, v);
            out += ',';
        }
        out += data.labels[r] == 1 ? '1' : '0';
        out += '\n';
    }
    std::ofstream file(path);
    if (!file) {
        throw Error("cannot write '" + path.string() + "'");
    }
    file << out;
}

StandardizationParams fit_standardizer(const Dataset& train) {
    if (train.row_count() < 2) {
        throw EmptyDataset("fit_standardizer: need at least 2 rows, got " +
                           std::to_string(train.row_count()));
    }
    const std::size_t n = train.row_count();
    const std::size_t width = train.feature_count();
    StandardizationParams params;
    params.means.assign(width, 0.0);
    params.std_devs.assign(width, 0.0);
    for (const Vector& row : train.rows) {
        for (std::size_t c = 0; c < width; ++c) {
            params.means[c] += row[c];
        }
    }
    for (double& m : params.means) {
        m /= static_cast<double>(n);
    }
    for (const Vector& row : train.rows) {
        for (std::size_t c = 0; c < width; ++c) {
            const double d = row[c] - params.means[c];
            params.std_devs[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < width; ++c) {
        params.std_devs[c] = std::sqrt(params.std_devs[c] / static_cast<double>(n - 1));
        if (params.std_devs[c] <= zero_variance_floor(params.means[c])) {
            throw ZeroVariance(train.feature_names[c]);
        }
    }
    return params;
}

Dataset apply_standardizer(const StandardizationParams& params, const Dataset& data) {
    if (params.means.size() != data.feature_count()) {
        throw DimensionMismatch("apply_standardizer: params cover " +
                                std::to_string(params.means.size()) + " features, data has " +
                                std::to_string(data.feature_count()));
    }
    Dataset out = data;
    for (Vector& row : out.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] = (row[c] - params.means[c]) / params.std_devs[c];
        }
    }
    return out;
}

Dataset destandardize(const StandardizationParams& params, const Dataset& data) {
    if (params.means.size() != data.feature_count()) {
        throw DimensionMismatch("destandardize: params cover " +
                                std::to_string(params.means.size()) + " features, data has " +
                                std::to_string(data.feature_count()));
    }
    Dataset out = data;
    for (Vector& row : out.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            row[c] = row[c] * params.std_devs[c] + params.means[c];
        }
    }
    return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw DegenerateSplit("test_fraction must lie strictly between 0 and 1");
    }
    std::vector<std::vector<std::size_t>> by_class(2);
    for (std::size_t r = 0; r < data.row_count(); ++r) {
        by_class[static_cast<std::size_t>(data.labels[r])].push_back(r);
    }

    // largest-remainder apportionment of the rounded total test count
    const std::size_t total_test = static_cast<std::size_t>(
        std::floor(static_cast<double>(data.row_count()) * test_fraction + 0.5));
    double quota[2];
    std::size_t take[2];
    std::size_t base_sum = 0;
    for (int c = 0; c < 2; ++c) {
        quota[c] = static_cast<double>(by_class[c].size()) * test_fraction;
        take[c] = static_cast<std::size_t>(std::floor(quota[c]));
        base_sum += take[c];
    }
    std::vector<int> seat_order{0, 1};
    std::sort(seat_order.begin(), seat_order.end(), [&](int a, int b) {
        const double fa = quota[a] - std::floor(quota[a]);
        const double fb = quota[b] - std::floor(quota[b]);
        if (fa != fb) {
            return fa > fb;
        }
        if (by_class[a].size() != by_class[b].size()) {
            return by_class[a].size() > by_class[b].size();
        }
        return a < b;
    });
    for (std::size_t s = 0; s < total_test - base_sum; ++s) {
        ++take[seat_order[s % 2]];
    }

    for (int c = 0; c < 2; ++c) {
        if (by_class[c].empty()) {
            continue;
        }
        if (take[c] == 0 || take[c] >= by_class[c].size()) {
            throw DegenerateSplit("class " + std::to_string(c) + " would have an empty side (" +
                                  std::to_string(take[c]) + " of " +
                                  std::to_string(by_class[c].size()) + " rows in test)");
        }
    }

    Rng rng(seed);
    std::vector<bool> in_test(data.row_count(), false);
    for (int c = 0; c < 2; ++c) {
        shuffle(by_class[c], rng);
        for (std::size_t i = 0; i < take[c]; ++i) {
            in_test[by_class[c][i]] = true;
        }
    }

    Dataset train, test;
    train.feature_names = data.feature_names;
    test.feature_names = data.feature_names;
    for (std::size_t r = 0; r < data.row_count(); ++r) {
        Dataset& side = in_test[r] ? test : train;
        side.rows.push_back(data.rows[r]);
        side.labels.push_back(data.labels[r]);
    }
    return {std::move(train), std::move(test)};
}

CorrelationMatrix correlation_matrix(const Dataset& data) {
    if (data.row_count() < 2) {
        throw EmptyDataset("correlation_matrix: need at least 2 rows, got " +
                           std::to_string(data.row_count()));
    }
    const std::size_t n = data.row_count();
    const std::size_t width = data.feature_count();

    Vector means(width, 0.0);
    for (const Vector& row : data.rows) {
        for (std::size_t c = 0; c < width; ++c) {
            means[c] += row[c];
        }
    }
    for (double& m : means) {
        m /= static_cast<double>(n);
    }

    Matrix centered_products(width, width, 0.0);
    for (const Vector& row : data.rows) {
        for (std::size_t i = 0; i < width; ++i) {
            const double di = row[i] - means[i];
            for (std::size_t j = i; j < width; ++j) {
                centered_products(i, j) += di * (row[j] - means[j]);
            }
        }
    }

    for (std::size_t i = 0; i < width; ++i) {
        const double sd = std::sqrt(centered_products(i, i) / static_cast<double>(n - 1));
        if (sd <= zero_variance_floor(means[i])) {
            throw ZeroVariance(data.feature_names[i]);
        }
    }

    CorrelationMatrix corr;
    corr.feature_names = data.feature_names;
    corr.values = Matrix(width, width, 0.0);
    for (std::size_t i = 0; i < width; ++i) {
        corr.values(i, i) = 1.0;
        for (std::size_t j = i + 1; j < width; ++j) {
            double r = centered_products(i, j) /
                       std::sqrt(centered_products(i, i) * centered_products(j, j));
            r = std::clamp(r, -1.0, 1.0);
            corr.values(i, j) = r;
            corr.values(j, i) = r;
        }
    }
    return corr;
}

}  // namespace learngrad
