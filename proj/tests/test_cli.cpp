#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "learngrad/report.hpp"
#include "support/oracles.hpp"

using namespace learngrad;
namespace fs = std::filesystem;

namespace {

const std::string kData = (fs::path(LEARNGRAD_DATA_DIR) / "wdbc.csv").string();

struct CommandResult {
    int exit_code;
    std::string output;  // stdout and stderr combined
};

CommandResult run_cli(const std::string& args) {
    static const fs::path log_dir = oracles::make_temp_dir("learngrad_cli_logs");
    static int counter = 0;
    const fs::path log = log_dir / ("log_" + std::to_string(counter++) + ".txt");
    const std::string command =
        "'" + std::string(LEARNGRAD_CLI_PATH) + "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), oracles::slurp(log)};
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("train writes all four artifacts and a summary") {
    const fs::path out = oracles::make_temp_dir("learngrad_train");
    const auto result = run_cli("train --data '" + kData + "' --out '" + out.string() + "'");
    CHECK(result.exit_code == 0);
    CHECK(contains(result.output, "final test accuracy: 0."));
    CHECK(contains(result.output, "top-5 features:"));
    CHECK(contains(result.output, "artifacts written to"));

    const RunReport report = load_run_report(out / "run_report.json");
    CHECK(report.valid);
    CHECK(report.snapshots.size() == 40);
    CHECK(report.final_ranking.entries.size() == 30);
    CHECK(report.config.batch_size == 16);
    CHECK(report.config.learning_rate == 0.1);
    CHECK(report.config.seed == 1);

    const auto rows = read_saliency_evolution_csv(oracles::slurp(out / "saliency_evolution.csv"));
    CHECK(rows.size() == 40 * 30);
    const FeatureRanking ranking = read_ranking_csv(oracles::slurp(out / "ranking.csv"));
    CHECK(ranking.entries.size() == 30);
    CHECK(ranking.entries.front().first == report.final_ranking.entries.front().first);

    const Network net = network_from_json(
        nlohmann::ordered_json::parse(oracles::slurp(out / "network.json")));
    CHECK(net.input_width() == 30);
    CHECK(net.output_width() == 1);
}

TEST_CASE("train with one epoch emits exactly one saliency row per feature") {
    const fs::path out = oracles::make_temp_dir("learngrad_train1");
    const auto result =
        run_cli("train --data '" + kData + "' --out '" + out.string() + "' --epochs 1");
    CHECK(result.exit_code == 0);
    const auto rows = read_saliency_evolution_csv(oracles::slurp(out / "saliency_evolution.csv"));
    CHECK(rows.size() == 30);
}

TEST_CASE("identical train invocations produce byte-identical reports") {
    const fs::path out_a = oracles::make_temp_dir("learngrad_det_a");
    const fs::path out_b = oracles::make_temp_dir("learngrad_det_b");
    const std::string flags = " --epochs 5 --seed 9";
    CHECK(run_cli("train --data '" + kData + "' --out '" + out_a.string() + "'" + flags)
              .exit_code == 0);
    CHECK(run_cli("train --data '" + kData + "' --out '" + out_b.string() + "'" + flags)
              .exit_code == 0);
    CHECK(oracles::slurp(out_a / "run_report.json") == oracles::slurp(out_b / "run_report.json"));
    CHECK(oracles::slurp(out_a / "saliency_evolution.csv") ==
          oracles::slurp(out_b / "saliency_evolution.csv"));
    CHECK(oracles::slurp(out_a / "network.json") == oracles::slurp(out_b / "network.json"));
}

TEST_CASE("train accepts granularity and hidden-layer overrides") {
    const fs::path out = oracles::make_temp_dir("learngrad_gran");
    const auto result = run_cli("train --data '" + kData + "' --out '" + out.string() +
                                "' --epochs 2 --granularity per-batch --hidden 4,2");
    CHECK(result.exit_code == 0);
    const RunReport report = load_run_report(out / "run_report.json");
    CHECK(report.config.saliency_granularity == Granularity::PerBatch);
    REQUIRE(report.net.layers.size() == 3);
    CHECK(report.net.layers[0].output_width() == 4);
    CHECK(report.net.layers[1].output_width() == 2);
}

TEST_CASE("correlate writes matrix artifacts and names the strongest pair") {
    const fs::path out = oracles::make_temp_dir("learngrad_corr");
    const auto result = run_cli("correlate --data '" + kData + "' --out '" + out.string() + "'");
    CHECK(result.exit_code == 0);
    CHECK(contains(result.output, "strongest pair: mean radius / mean perimeter"));

    const CorrelationMatrix corr = read_correlation_csv(oracles::slurp(out / "correlation.csv"));
    REQUIRE(corr.feature_names.size() == 30);
    for (std::size_t i = 0; i < 30; ++i) {
        CHECK(corr.values(i, i) == 1.0);
        for (std::size_t j = 0; j < 30; ++j) {
            CHECK(corr.values(i, j) == corr.values(j, i));
        }
    }
    CHECK(oracles::xml_well_formed(oracles::slurp(out / "correlation_heatmap.svg")));
}

TEST_CASE("rank prints the stored ranking and can export it") {
    const fs::path train_out = oracles::make_temp_dir("learngrad_rank_src");
    REQUIRE(run_cli("train --data '" + kData + "' --out '" + train_out.string() + "' --epochs 3")
                .exit_code == 0);
    const std::string report_path = (train_out / "run_report.json").string();

    const auto shown = run_cli("rank --data '" + report_path + "'");
    CHECK(shown.exit_code == 0);
    CHECK(contains(shown.output, "feature ranking (30 features):"));

    const fs::path rank_out = oracles::make_temp_dir("learngrad_rank_out");
    const auto exported =
        run_cli("rank --data '" + report_path + "' --out '" + rank_out.string() + "'");
    CHECK(exported.exit_code == 0);
    CHECK(oracles::slurp(rank_out / "ranking.csv") == oracles::slurp(train_out / "ranking.csv"));
}

TEST_CASE("evolution renders the selected epochs") {
    const fs::path train_out = oracles::make_temp_dir("learngrad_evo_src");
    REQUIRE(run_cli("train --data '" + kData + "' --out '" + train_out.string() + "' --epochs 6")
                .exit_code == 0);
    const std::string report_path = (train_out / "run_report.json").string();
    const fs::path out = oracles::make_temp_dir("learngrad_evo_out");

    const auto odd = run_cli("evolution --data '" + report_path + "' --out '" + out.string() + "'");
    CHECK(odd.exit_code == 0);
    CHECK(contains(odd.output, "(3 panels)"));

    const auto all = run_cli("evolution --data '" + report_path + "' --out '" + out.string() +
                             "' --epochs-filter all");
    CHECK(all.exit_code == 0);
    CHECK(contains(all.output, "(6 panels)"));

    const auto picked = run_cli("evolution --data '" + report_path + "' --out '" + out.string() +
                                "' --epochs-filter 2,4");
    CHECK(picked.exit_code == 0);
    CHECK(contains(picked.output, "(2 panels)"));
    CHECK(oracles::xml_well_formed(oracles::slurp(out / "saliency_evolution.svg")));

    const auto unmatched = run_cli("evolution --data '" + report_path + "' --out '" +
                                   out.string() + "' --epochs-filter 12");
    CHECK(unmatched.exit_code == 1);
}

TEST_CASE("usage problems exit with code 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("launder --data x").exit_code == 2);
    CHECK(run_cli("train").exit_code == 2);
    CHECK(run_cli("train --data '" + kData + "' --bogus-flag").exit_code == 2);
    CHECK(run_cli("train --data '" + kData + "' --lr 0").exit_code == 2);
    CHECK(run_cli("train --data '" + kData + "' --epochs 0").exit_code == 2);
    CHECK(run_cli("train --data '" + kData + "' --test-fraction 1.0").exit_code == 2);
    CHECK(run_cli("train --data '" + kData + "' --granularity sideways").exit_code == 2);
    CHECK(run_cli("train --data '" + kData + "' --hidden 3,,2").exit_code == 2);

    const fs::path train_out = oracles::make_temp_dir("learngrad_usage");
    REQUIRE(run_cli("train --data '" + kData + "' --out '" + train_out.string() + "' --epochs 1")
                .exit_code == 0);
    CHECK(run_cli("evolution --data '" + (train_out / "run_report.json").string() +
                  "' --epochs-filter a,b")
              .exit_code == 2);
}

TEST_CASE("runtime failures exit with code 1") {
    CHECK(run_cli("train --data /definitely/not/here.csv").exit_code == 1);
    CHECK(run_cli("rank --data /definitely/not/here.json").exit_code == 1);
    CHECK(run_cli("correlate --data /definitely/not/here.csv").exit_code == 1);
}

TEST_CASE("help exits cleanly") {
    const auto top = run_cli("--help");
    CHECK(top.exit_code == 0);
    CHECK(contains(top.output, "train"));
    CHECK(contains(top.output, "correlate"));
    CHECK(run_cli("train --help").exit_code == 0);
}
