#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "learngrad/dataset.hpp"
#include "learngrad/network.hpp"
#include "learngrad/saliency.hpp"
#include "learngrad/trainer.hpp"

namespace learngrad {

// {"layers":[{"activation","weights","biases"}],"feature_names"} — field order fixed
nlohmann::ordered_json network_to_json(const Network& net);
Network network_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json run_report_to_json(const RunReport& report);
RunReport run_report_from_json(const nlohmann::ordered_json& j);

void save_run_report(const RunReport& report, const std::filesystem::path& path);
RunReport load_run_report(const std::filesystem::path& path);

// relevances carry 10 significant digits in every CSV below
std::string saliency_evolution_csv(const std::vector<EpochSnapshot>& snapshots,
                                   const std::vector<std::string>& names);
std::string ranking_csv(const FeatureRanking& ranking);
std::string correlation_csv(const CorrelationMatrix& corr);

struct EvolutionRow {
    std::size_t epoch;
    std::string feature;
    double relevance;
};
std::vector<EvolutionRow> read_saliency_evolution_csv(const std::string& text);
FeatureRanking read_ranking_csv(const std::string& text);
CorrelationMatrix read_correlation_csv(const std::string& text);

std::string svg_correlation_heatmap(const CorrelationMatrix& corr);

// one bar panel per snapshot, shared y-scale, feature legend at the bottom
std::string svg_evolution_panels(const std::vector<EpochSnapshot>& selected,
                                 const std::vector<std::string>& names);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace learngrad
