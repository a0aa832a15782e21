#include "learngrad/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "learngrad/errors.hpp"

namespace learngrad {

namespace {

using nlohmann::ordered_json;

std::string g10(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

std::string activation_name(ActivationKind kind) {
    return kind == ActivationKind::Sigmoid ? "sigmoid" : "relu";
}

ActivationKind activation_from_name(const std::string& name) {
    if (name == "sigmoid") {
        return ActivationKind::Sigmoid;
    }
    if (name == "relu") {
        return ActivationKind::ReLU;
    }
    throw MalformedReport("unknown activation '" + name + "'");
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    return lines;
}

std::vector<std::string> csv_fields(const std::string& line) {
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

double parse_double(const std::string& text, const std::string& context) {
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw MalformedReport(context + ": cannot parse '" + text + "' as a number");
    }
    return value;
}

std::size_t parse_index(const std::string& text, const std::string& context) {
    std::size_t value = 0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
        throw MalformedReport(context + ": cannot parse '" + text + "' as an integer");
    }
    return value;
}

std::string escape_xml(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
        }
    }
    return out;
}

// diverging blue -> white -> red over [-1, 1]
std::string heat_color(double r) {
    const auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
    double red, green, blue;
    if (r < 0.0) {
        const double t = r + 1.0;  // [-1,0] -> [0,1]
        red = lerp(33, 247, t);
        green = lerp(102, 247, t);
        blue = lerp(172, 247, t);
    } else {
        red = lerp(247, 178, r);
        green = lerp(247, 24, r);
        blue = lerp(247, 43, r);
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "rgb(%d,%d,%d)", static_cast<int>(red),
                  static_cast<int>(green), static_cast<int>(blue));
    return buffer;
}

}  // namespace

ordered_json network_to_json(const Network& net) {
    ordered_json layers = ordered_json::array();
    for (const DenseLayer& layer : net.layers) {
        ordered_json weights = ordered_json::array();
        for (std::size_t j = 0; j < layer.weights.rows; ++j) {
            ordered_json row = ordered_json::array();
            for (std::size_t k = 0; k < layer.weights.cols; ++k) {
                row.push_back(layer.weights(j, k));
            }
            weights.push_back(std::move(row));
        }
        layers.push_back({{"activation", activation_name(layer.activation)},
                          {"weights", std::move(weights)},
                          {"biases", layer.biases}});
    }
    return {{"layers", std::move(layers)}, {"feature_names", net.feature_names}};
}

Network network_from_json(const ordered_json& j) {
    try {
        Network net;
        for (const auto& jl : j.at("layers")) {
            DenseLayer layer;
            layer.activation = activation_from_name(jl.at("activation").get<std::string>());
            const auto& weights = jl.at("weights");
            const std::size_t rows = weights.size();
            if (rows == 0) {
                throw MalformedReport("layer with no weight rows");
            }
            const std::size_t cols = weights.at(0).size();
            layer.weights = Matrix(rows, cols);
            for (std::size_t r = 0; r < rows; ++r) {
                const auto& row = weights.at(r);
                if (row.size() != cols) {
                    throw MalformedReport("ragged weight matrix");
                }
                for (std::size_t c = 0; c < cols; ++c) {
                    layer.weights(r, c) = row.at(c).get<double>();
                }
            }
            layer.biases = jl.at("biases").get<Vector>();
            if (layer.biases.size() != rows) {
                throw MalformedReport("bias length disagrees with weight rows");
            }
            net.layers.push_back(std::move(layer));
        }
        if (net.layers.empty()) {
            throw MalformedReport("network has no layers");
        }
        net.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        for (std::size_t l = 0; l + 1 < net.layers.size(); ++l) {
            if (net.layers[l].output_width() != net.layers[l + 1].input_width()) {
                throw MalformedReport("layer widths do not chain");
            }
        }
        return net;
    } catch (const ordered_json::exception& e) {
        throw MalformedReport(std::string("network json: ") + e.what());
    }
}

ordered_json run_report_to_json(const RunReport& report) {
    ordered_json architecture = ordered_json::array();
    for (const LayerSpec& spec : report.config.architecture) {
        architecture.push_back({{"input_width", spec.input_width},
                                {"output_width", spec.output_width},
                                {"activation", activation_name(spec.activation)}});
    }
    ordered_json snapshots = ordered_json::array();
    for (const EpochSnapshot& snap : report.snapshots) {
        snapshots.push_back({{"epoch", snap.epoch},
                             {"train_loss", snap.train_loss},
                             {"test_accuracy", snap.test_accuracy},
                             {"saliency", snap.saliency.relevances}});
    }
    ordered_json ranking = ordered_json::array();
    for (std::size_t i = 0; i < report.final_ranking.entries.size(); ++i) {
        ranking.push_back({{"rank", i + 1},
                           {"feature", report.final_ranking.entries[i].first},
                           {"relevance", report.final_ranking.entries[i].second}});
    }
    return {{"config",
             {{"epochs", report.config.epochs},
              {"batch_size", report.config.batch_size},
              {"learning_rate", report.config.learning_rate},
              {"seed", report.config.seed},
              {"test_fraction", report.test_fraction},
              {"saliency_granularity", granularity_to_string(report.config.saliency_granularity)},
              {"architecture", std::move(architecture)}}},
            {"initial_train_loss", report.initial_train_loss},
            {"snapshots", std::move(snapshots)},
            {"final_train_loss", report.final_train_loss},
            {"final_test_accuracy", report.final_test_accuracy},
            {"update_count", report.update_count},
            {"valid", report.valid},
            {"final_ranking", std::move(ranking)},
            {"network", network_to_json(report.net)}};
}

RunReport run_report_from_json(const ordered_json& j) {
    try {
        RunReport report;
        const auto& config = j.at("config");
        report.config.epochs = config.at("epochs").get<std::size_t>();
        report.config.batch_size = config.at("batch_size").get<std::size_t>();
        report.config.learning_rate = config.at("learning_rate").get<double>();
        report.config.seed = config.at("seed").get<std::uint64_t>();
        report.test_fraction = config.at("test_fraction").get<double>();
        report.config.saliency_granularity =
            parse_granularity(config.at("saliency_granularity").get<std::string>());
        for (const auto& js : config.at("architecture")) {
            LayerSpec spec;
            spec.input_width = js.at("input_width").get<std::size_t>();
            spec.output_width = js.at("output_width").get<std::size_t>();
            spec.activation = activation_from_name(js.at("activation").get<std::string>());
            report.config.architecture.push_back(spec);
        }
        report.initial_train_loss = j.at("initial_train_loss").get<double>();
        std::size_t previous_epoch = 0;
        for (const auto& js : j.at("snapshots")) {
            EpochSnapshot snap;
            snap.epoch = js.at("epoch").get<std::size_t>();
            snap.train_loss = js.at("train_loss").get<double>();
            snap.test_accuracy = js.at("test_accuracy").get<double>();
            snap.saliency.relevances = js.at("saliency").get<Vector>();
            if (snap.epoch != previous_epoch + 1) {
                throw MalformedReport("snapshot epochs are not consecutive from 1");
            }
            previous_epoch = snap.epoch;
            report.snapshots.push_back(std::move(snap));
        }
        // dump() writes NaN as null; accept it back for aborted runs
        const auto& final_loss = j.at("final_train_loss");
        report.final_train_loss = final_loss.is_null()
                                      ? std::numeric_limits<double>::quiet_NaN()
                                      : final_loss.get<double>();
        report.final_test_accuracy = j.at("final_test_accuracy").get<double>();
        report.update_count = j.at("update_count").get<std::size_t>();
        report.valid = j.at("valid").get<bool>();
        std::size_t expected_rank = 0;
        for (const auto& jr : j.at("final_ranking")) {
            if (jr.at("rank").get<std::size_t>() != ++expected_rank) {
                throw MalformedReport("ranking positions are not consecutive from 1");
            }
            report.final_ranking.entries.emplace_back(jr.at("feature").get<std::string>(),
                                                      jr.at("relevance").get<double>());
        }
        report.net = network_from_json(j.at("network"));
        return report;
    } catch (const ordered_json::exception& e) {
        throw MalformedReport(std::string("run report json: ") + e.what());
    }
}

void save_run_report(const RunReport& report, const std::filesystem::path& path) {
    write_text_file(path, run_report_to_json(report).dump(2) + "\n");
}

RunReport load_run_report(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::exception& e) {
        throw MalformedReport("'" + path.string() + "': " + e.what());
    }
    return run_report_from_json(j);
}

std::string saliency_evolution_csv(const std::vector<EpochSnapshot>& snapshots,
                                   const std::vector<std::string>& names) {
    std::string out = "epoch,feature,relevance\n";
    for (const EpochSnapshot& snap : snapshots) {
        if (snap.saliency.relevances.size() != names.size()) {
            throw LengthMismatch("saliency_evolution_csv: snapshot width " +
                                 std::to_string(snap.saliency.relevances.size()) + " vs " +
                                 std::to_string(names.size()) + " names");
        }
        for (std::size_t k = 0; k < names.size(); ++k) {
            out += std::to_string(snap.epoch);
            out += ',';
            out += names[k];
            out += ',';
            out += g10(snap.saliency.relevances[k]);
            out += '\n';
        }
    }
    return out;
}

std::string ranking_csv(const FeatureRanking& ranking) {
    std::string out = "rank,feature,relevance\n";
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += ranking.entries[i].first;
        out += ',';
        out += g10(ranking.entries[i].second);
        out += '\n';
    }
    return out;
}

std::string correlation_csv(const CorrelationMatrix& corr) {
    std::string out = "feature";
    for (const std::string& name : corr.feature_names) {
        out += ',';
        out += name;
    }
    out += '\n';
    for (std::size_t i = 0; i < corr.feature_names.size(); ++i) {
        out += corr.feature_names[i];
        for (std::size_t j = 0; j < corr.feature_names.size(); ++j) {
            out += ',';
            out += g10(corr.values(i, j));
        }
        out += '\n';
    }
    return out;
}

std::vector<EvolutionRow> read_saliency_evolution_csv(const std::string& text) {
    const auto lines = csv_lines(text);
    if (lines.empty() || lines[0] != "epoch,feature,relevance") {
        throw MalformedReport("saliency evolution csv: bad or missing header");
    }
    std::vector<EvolutionRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv_fields(lines[i]);
        if (fields.size() != 3) {
            throw MalformedReport("saliency evolution csv: line " + std::to_string(i + 1) +
                                  " has " + std::to_string(fields.size()) + " fields");
        }
        rows.push_back({parse_index(fields[0], "epoch"), fields[1],
                        parse_double(fields[2], "relevance")});
    }
    return rows;
}

FeatureRanking read_ranking_csv(const std::string& text) {
    const auto lines = csv_lines(text);
    if (lines.empty() || lines[0] != "rank,feature,relevance") {
        throw MalformedReport("ranking csv: bad or missing header");
    }
    FeatureRanking ranking;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = csv_fields(lines[i]);
        if (fields.size() != 3 || parse_index(fields[0], "rank") != i) {
            throw MalformedReport("ranking csv: bad line " + std::to_string(i + 1));
        }
        ranking.entries.emplace_back(fields[1], parse_double(fields[2], "relevance"));
    }
    return ranking;
}

CorrelationMatrix read_correlation_csv(const std::string& text) {
    const auto lines = csv_lines(text);
    if (lines.empty()) {
        throw MalformedReport("correlation csv: empty");
    }
    auto header = csv_fields(lines[0]);
    if (header.size() < 2 || header[0] != "feature") {
        throw MalformedReport("correlation csv: bad header");
    }
    CorrelationMatrix corr;
    corr.feature_names.assign(header.begin() + 1, header.end());
    const std::size_t width = corr.feature_names.size();
    if (lines.size() != width + 1) {
        throw MalformedReport("correlation csv: expected " + std::to_string(width) +
                              " data rows, got " + std::to_string(lines.size() - 1));
    }
    corr.values = Matrix(width, width);
    for (std::size_t i = 0; i < width; ++i) {
        const auto fields = csv_fields(lines[i + 1]);
        if (fields.size() != width + 1 || fields[0] != corr.feature_names[i]) {
            throw MalformedReport("correlation csv: bad row " + std::to_string(i + 1));
        }
        for (std::size_t j = 0; j < width; ++j) {
            corr.values(i, j) = parse_double(fields[j + 1], "correlation");
        }
    }
    return corr;
}

std::string svg_correlation_heatmap(const CorrelationMatrix& corr) {
    const std::size_t n = corr.feature_names.size();
    const int cell = 20;
    const int margin_left = 170;
    const int margin_top = 170;
    const int grid = static_cast<int>(n) * cell;
    const int legend_width = 70;
    const int width = margin_left + grid + legend_width + 20;
    const int height = margin_top + grid + 20;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const int x = margin_left + static_cast<int>(j) * cell;
            const int y = margin_top + static_cast<int>(i) * cell;
            svg += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
                   "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
                   "\" fill=\"" + heat_color(corr.values(i, j)) + "\"><title>" +
                   escape_xml(corr.feature_names[i]) + " / " + escape_xml(corr.feature_names[j]) +
                   ": " + g10(corr.values(i, j)) + "</title></rect>\n";
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const int y = margin_top + static_cast<int>(i) * cell + cell / 2 + 4;
        svg += "<text x=\"" + std::to_string(margin_left - 6) + "\" y=\"" + std::to_string(y) +
               "\" font-size=\"10\" text-anchor=\"end\">" + escape_xml(corr.feature_names[i]) +
               "</text>\n";
        const int x = margin_left + static_cast<int>(i) * cell + cell / 2 + 4;
        svg += "<text x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(margin_top - 6) +
               "\" font-size=\"10\" text-anchor=\"start\" transform=\"rotate(-60 " +
               std::to_string(x) + " " + std::to_string(margin_top - 6) + ")\">" +
               escape_xml(corr.feature_names[i]) + "</text>\n";
    }

    // colorbar, +1 at the top
    const int bar_x = margin_left + grid + 24;
    const int bar_steps = 40;
    const double bar_height = static_cast<double>(grid);
    for (int s = 0; s < bar_steps; ++s) {
        const double r = 1.0 - 2.0 * (s + 0.5) / bar_steps;
        char y_text[24];
        std::snprintf(y_text, sizeof y_text, "%.2f",
                      margin_top + bar_height * s / bar_steps);
        char h_text[24];
        std::snprintf(h_text, sizeof h_text, "%.2f", bar_height / bar_steps + 0.5);
        svg += std::string("<rect x=\"") + std::to_string(bar_x) + "\" y=\"" + y_text +
               "\" width=\"14\" height=\"" + h_text + "\" fill=\"" + heat_color(r) + "\"/>\n";
    }
    for (const auto& [value, offset] : {std::pair{1.0, 0.0}, {0.0, 0.5}, {-1.0, 1.0}}) {
        char y_text[24];
        std::snprintf(y_text, sizeof y_text, "%.1f", margin_top + bar_height * offset + 4.0);
        char label[8];
        std::snprintf(label, sizeof label, "%+.0f", value);
        svg += std::string("<text x=\"") + std::to_string(bar_x + 18) + "\" y=\"" + y_text +
               "\" font-size=\"10\">" + label + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

std::string svg_evolution_panels(const std::vector<EpochSnapshot>& selected,
                                 const std::vector<std::string>& names) {
    if (selected.empty()) {
        throw EmptyBatch("svg_evolution_panels: no epochs selected");
    }
    const std::size_t n = names.size();
    double max_relevance = 0.0;
    for (const EpochSnapshot& snap : selected) {
        if (snap.saliency.relevances.size() != n) {
            throw LengthMismatch("svg_evolution_panels: snapshot width " +
                                 std::to_string(snap.saliency.relevances.size()) + " vs " +
                                 std::to_string(n) + " names");
        }
        for (double v : snap.saliency.relevances) {
            max_relevance = std::max(max_relevance, v);
        }
    }
    if (max_relevance == 0.0) {
        max_relevance = 1.0;
    }

    const int panel_width = 330;
    const int panel_height = 150;
    const int panel_pad = 14;
    const int plot_left = 44;
    const int plot_top = 24;
    const int plot_bottom = 20;
    const int plot_width = panel_width - plot_left - 10;
    const int plot_height = panel_height - plot_top - plot_bottom;
    const int columns = std::min<std::size_t>(4, selected.size());
    const int rows = static_cast<int>((selected.size() + columns - 1) / columns);

    const int legend_columns = 3;
    const int legend_rows = static_cast<int>((n + legend_columns - 1) / legend_columns);
    const int legend_top = rows * (panel_height + panel_pad) + 20;
    const int width = columns * (panel_width + panel_pad) + panel_pad;
    const int height = legend_top + legend_rows * 14 + 24;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double bar_step = static_cast<double>(plot_width) / static_cast<double>(n);
    for (std::size_t p = 0; p < selected.size(); ++p) {
        const EpochSnapshot& snap = selected[p];
        const int panel_x = panel_pad + static_cast<int>(p % columns) * (panel_width + panel_pad);
        const int panel_y = panel_pad + static_cast<int>(p / columns) * (panel_height + panel_pad);
        const int origin_x = panel_x + plot_left;
        const int origin_y = panel_y + plot_top + plot_height;

        svg += "<text x=\"" + std::to_string(panel_x + plot_left) + "\" y=\"" +
               std::to_string(panel_y + 14) + "\" font-size=\"12\" font-weight=\"bold\">epoch " +
               std::to_string(snap.epoch) + "</text>\n";
        // axes
        svg += "<line x1=\"" + std::to_string(origin_x) + "\" y1=\"" +
               std::to_string(panel_y + plot_top) + "\" x2=\"" + std::to_string(origin_x) +
               "\" y2=\"" + std::to_string(origin_y) + "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + std::to_string(origin_x) + "\" y1=\"" + std::to_string(origin_y) +
               "\" x2=\"" + std::to_string(origin_x + plot_width) + "\" y2=\"" +
               std::to_string(origin_y) + "\" stroke=\"black\"/>\n";
        char max_label[24];
        std::snprintf(max_label, sizeof max_label, "%.3f", max_relevance);
        svg += std::string("<text x=\"") + std::to_string(origin_x - 4) + "\" y=\"" +
               std::to_string(panel_y + plot_top + 8) +
               "\" font-size=\"9\" text-anchor=\"end\">" + max_label + "</text>\n";
        svg += std::string("<text x=\"") + std::to_string(origin_x - 4) + "\" y=\"" +
               std::to_string(origin_y) + "\" font-size=\"9\" text-anchor=\"end\">0</text>\n";

        for (std::size_t k = 0; k < n; ++k) {
            const double value = snap.saliency.relevances[k];
            const double bar_height = plot_height * value / max_relevance;
            char x_text[24], y_text[24], w_text[24], h_text[24];
            std::snprintf(x_text, sizeof x_text, "%.2f", origin_x + bar_step * k + 1.0);
            std::snprintf(y_text, sizeof y_text, "%.2f", origin_y - bar_height);
            std::snprintf(w_text, sizeof w_text, "%.2f", bar_step - 2.0);
            std::snprintf(h_text, sizeof h_text, "%.2f", bar_height);
            svg += std::string("<rect x=\"") + x_text + "\" y=\"" + y_text + "\" width=\"" +
                   w_text + "\" height=\"" + h_text + "\" fill=\"rgb(70,120,180)\"><title>" +
                   escape_xml(names[k]) + ": " + g10(value) + "</title></rect>\n";
        }
        for (std::size_t k = 0; k < n; k += 5) {
            char x_text[24];
            std::snprintf(x_text, sizeof x_text, "%.2f", origin_x + bar_step * k + bar_step / 2.0);
            svg += std::string("<text x=\"") + x_text + "\" y=\"" + std::to_string(origin_y + 12) +
                   "\" font-size=\"8\" text-anchor=\"middle\">" + std::to_string(k + 1) +
                   "</text>\n";
        }
    }

    svg += "<text x=\"" + std::to_string(panel_pad) + "\" y=\"" + std::to_string(legend_top - 4) +
           "\" font-size=\"11\" font-weight=\"bold\">features by index</text>\n";
    const int legend_column_width = (width - 2 * panel_pad) / legend_columns;
    for (std::size_t k = 0; k < n; ++k) {
        const int col = static_cast<int>(k) / legend_rows;
        const int row = static_cast<int>(k) % legend_rows;
        svg += "<text x=\"" + std::to_string(panel_pad + col * legend_column_width) + "\" y=\"" +
               std::to_string(legend_top + row * 14 + 10) + "\" font-size=\"10\">" +
               std::to_string(k + 1) + ". " + escape_xml(names[k]) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot write '" + path.string() + "'");
    }
    file << content;
    if (!file) {
        throw Error("write failed for '" + path.string() + "'");
    }
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return buffer.str();
}

}  // namespace learngrad
