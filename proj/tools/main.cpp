#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "learngrad/commands.hpp"
#include "learngrad/errors.hpp"

namespace {

void add_data_flag(CLI::App* cmd, learngrad::CliOptions& options, const std::string& help) {
    cmd->add_option("--data", options.data_path, help)->required();
}

void add_out_flag(CLI::App* cmd, learngrad::CliOptions& options) {
    cmd->add_option("--out", options.out_dir, "output directory (created if missing)");
}

}  // namespace

int main(int argc, char** argv) {
    learngrad::CliOptions options;

    CLI::App app{"train small dense networks and attribute their predictions to input features"};
    app.require_subcommand(1);

    CLI::App* train = app.add_subcommand("train", "train on a CSV and write report artifacts");
    add_data_flag(train, options, "input CSV (feature columns plus a final `target` column)");
    add_out_flag(train, options);
    train->add_option("--epochs", options.epochs, "training epochs");
    train->add_option("--batch-size", options.batch_size, "mini-batch size");
    train->add_option("--lr", options.learning_rate, "SGD learning rate");
    train->add_option("--seed", options.seed, "seed for split, initialization and shuffles");
    train->add_option("--test-fraction", options.test_fraction, "held-out fraction per class");
    train->add_option("--granularity", options.granularity,
                      "saliency normalization unit: per-epoch, per-batch or per-example");
    train->add_option("--hidden", options.hidden, "hidden layer widths, e.g. 3 or 8,4");

    CLI::App* correlate =
        app.add_subcommand("correlate", "feature correlation matrix: CSV plus heatmap");
    add_data_flag(correlate, options, "input CSV (feature columns plus a final `target` column)");
    add_out_flag(correlate, options);

    CLI::App* rank = app.add_subcommand("rank", "print the feature ranking stored in a report");
    add_data_flag(rank, options, "run_report.json from a previous train invocation");
    add_out_flag(rank, options);

    CLI::App* evolution =
        app.add_subcommand("evolution", "per-epoch saliency bar panels from a report");
    add_data_flag(evolution, options, "run_report.json from a previous train invocation");
    add_out_flag(evolution, options);
    evolution->add_option("--epochs-filter", options.epochs_filter,
                          "odd, all, or a comma-separated epoch list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the diagnostic
        return 2;
    }
    options.out_given = app.get_subcommands().front()->count("--out") > 0;

    try {
        if (app.got_subcommand(train)) {
            return learngrad::cmd_train(options);
        }
        if (app.got_subcommand(correlate)) {
            return learngrad::cmd_correlate(options);
        }
        if (app.got_subcommand(rank)) {
            return learngrad::cmd_rank(options);
        }
        return learngrad::cmd_evolution(options);
    } catch (const learngrad::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const learngrad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
