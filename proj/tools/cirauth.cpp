// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses
//
// Command-line front end: dataset generation, training, authentication,
// end-to-end experiments and config-driven sweeps.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cirauth/dataset_io.hpp"
#include "cirauth/experiment.hpp"

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

// Every flag funnels through the same key=value channel the config file
// uses, so precedence (flag over file) and validation live in one place.
void add_config_flags(CLI::App* cmd, Overrides& overrides, std::string& config_path) {
    cmd->add_option("--config", config_path, "plain key=value config file");
    static const std::vector<std::pair<std::string, std::string>> flags = {
        {"--scenario", "scenario"},
        {"--model", "model"},
        {"--feature-mode", "feature_mode"},
        {"--seed", "seed"},
        {"--train-seed", "train_seed"},
        {"--alice-node", "alice_node"},
        {"--samples-per-node", "samples_per_node"},
        {"--train-per-node", "train_per_node"},
        {"--test-per-node", "test_per_node"},
        {"--cir-dim", "cir_dim"},
        {"--eve-interval", "eve_interval"},
        {"--width-h", "h"},
        {"--width-z", "z"},
        {"--double-peak-m", "double_peak_m"},
        {"--double-peak-s", "double_peak_s"},
        {"--kl2-weight", "kl2_weight"},
        {"--kl3-weight", "kl3_weight"},
        {"--kl-mode", "kl_mode"},
        {"--learning-rate", "learning_rate"},
        {"--momentum", "momentum"},
        {"--epochs", "epochs"},
        {"--batch-size", "batch_size"},
        {"--alpha", "alpha"},
        {"--f-alice", "f_alice"},
        {"--f-eve", "f_eve"},
        {"--threshold-points", "threshold_points"},
        {"--out", "out"},
        {"--seed-list", "seed_list"},
        {"--eve-interval-list", "eve_interval_list"},
        {"--hz-list", "hz_list"},
        {"--model-list", "model_list"},
    };
    for (const auto& [flag, key] : flags) {
        const std::string k = key;
        cmd->add_option_function<std::string>(
            flag, [&overrides, k](const std::string& v) { overrides.emplace_back(k, v); });
    }
}

void write_effective_config(const cirauth::ExperimentConfig& cfg, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / "config_effective.txt");
    cfg.echo(out);
}

int run(int argc, char** argv) {
    CLI::App app{"physical-layer authentication toolkit for channel impulse responses"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string config_path;
    std::string data_path;
    std::string model_path;

    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset file");
    add_config_flags(gen, overrides, config_path);

    CLI::App* train = app.add_subcommand("train", "train a model on a dataset");
    add_config_flags(train, overrides, config_path);
    train->add_option("--data", data_path, "dataset file (.cir or .csv)")->required();

    CLI::App* auth = app.add_subcommand("auth", "authenticate with a trained checkpoint");
    add_config_flags(auth, overrides, config_path);
    auth->add_option("--data", data_path, "dataset file (.cir or .csv)")->required();
    auth->add_option("--model-file", model_path, "trained checkpoint")->required();

    CLI::App* experiment = app.add_subcommand("experiment", "generate/load, train and evaluate");
    add_config_flags(experiment, overrides, config_path);

    CLI::App* sweep = app.add_subcommand("sweep", "expand list axes into parallel runs");
    add_config_flags(sweep, overrides, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (gen->parsed()) {
        cirauth::ExperimentConfig cfg = cirauth::parse_config(config_path, overrides);
        const cirauth::Dataset dataset = cirauth::make_dataset(cfg);
        std::filesystem::path out(cfg.out_dir);
        if (!out.has_extension()) {
            std::filesystem::create_directories(out);
            out /= "dataset.cir";
        } else if (out.has_parent_path()) {
            std::filesystem::create_directories(out.parent_path());
        }
        cirauth::save_dataset(dataset, out.string());
        std::cout << "wrote " << out.string() << " (" << dataset.records.size() << " records)\n";
        return 0;
    }

    if (train->parsed()) {
        overrides.emplace_back("scenario", "file:" + data_path);
        cirauth::ExperimentConfig cfg = cirauth::parse_config(config_path, overrides);
        cfg.validate_for_run();
        const cirauth::Dataset dataset = cirauth::load_dataset_auto(data_path);
        cirauth::AnyModel model;
        const cirauth::AuthReport report =
            cirauth::run_protocol(dataset, cfg.protocol_config(), &model);
        write_effective_config(cfg, cfg.out_dir);
        const std::filesystem::path out(cfg.out_dir);
        cirauth::save_model(model, (out / "model.hvae").string());
        cirauth::write_loss_history_csv(report.loss_history, (out / "loss_history.csv").string());
        std::cout << "wrote " << (out / "model.hvae").string() << "\n";
        return 0;
    }

    if (auth->parsed()) {
        overrides.emplace_back("scenario", "file:" + data_path);
        cirauth::ExperimentConfig cfg = cirauth::parse_config(config_path, overrides);
        const cirauth::Dataset dataset = cirauth::load_dataset_auto(data_path);
        const cirauth::AnyModel model = cirauth::load_model(model_path);
        const cirauth::AuthReport report =
            cirauth::run_protocol_with_model(dataset, cfg.protocol_config(), model);
        write_effective_config(cfg, cfg.out_dir);
        const std::filesystem::path out(cfg.out_dir);
        cirauth::write_report_csv(report, dataset, (out / "report.csv").string());
        cirauth::write_per_node_csv(report, (out / "per_node_f1.csv").string());
        cirauth::write_summary_csv(cfg, report, (out / "summary.csv").string());
        std::cout << "average F1 " << report.average_f1 << " over " << report.per_node.size()
                  << " spoofing nodes\n";
        return 0;
    }

    if (experiment->parsed()) {
        cirauth::ExperimentConfig cfg = cirauth::parse_config(config_path, overrides);
        const cirauth::ExperimentResult result = cirauth::run_experiment(cfg);
        std::cout << cirauth::model_kind_name(result.report.kind) << " average F1 "
                  << result.report.average_f1 << " over " << result.report.per_node.size()
                  << " spoofing nodes\n";
        return 0;
    }

    cirauth::ExperimentConfig cfg = cirauth::parse_config(config_path, overrides);
    const cirauth::SweepResult result = cirauth::run_sweep(cfg);
    std::cout << "swept " << result.rows.size() << " runs, summary in " << cfg.out_dir
              << "/sweep_summary.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const cirauth::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cirauth::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const cirauth::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
