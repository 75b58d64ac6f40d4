// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "cirauth/dataset_io.hpp"

namespace cirauth {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << content;
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace

void write_loss_history_csv(const std::vector<EpochLoss>& history, const std::string& path) {
    std::string csv = "epoch,total,l1,l2,l3\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        csv += std::to_string(i + 1) + "," + fmt(history[i].total) + "," + fmt(history[i].l1) +
               "," + fmt(history[i].l2) + "," + fmt(history[i].l3) + "\n";
    }
    write_text(path, csv);
}

void write_per_node_csv(const AuthReport& report, const std::string& path) {
    std::string csv = "node_id,distance_to_alice,f1,tl,fa,fl,ta\n";
    for (const auto& node : report.per_node) {
        csv += std::to_string(node.node_id) + "," + fmt(node.distance_to_alice) + "," +
               (node.f1_score ? fmt(*node.f1_score) : "undefined") + "," +
               std::to_string(node.cm.tl) + "," + std::to_string(node.cm.fa) + "," +
               std::to_string(node.cm.fl) + "," + std::to_string(node.cm.ta) + "\n";
    }
    write_text(path, csv);
}

void write_summary_csv(const ExperimentConfig& config, const AuthReport& report,
                       const std::string& path) {
    std::string csv = "model,seed,scenario,eve_interval,h,z,average_f1,p_ca,p_noa,f1,undefined_nodes\n";
    csv += std::string(model_kind_name(report.kind)) + "," + std::to_string(config.seed) + "," +
           config.scenario + "," + std::to_string(config.eve_interval) + "," +
           std::to_string(config.h) + "," + std::to_string(config.z) + "," +
           fmt(report.average_f1) + "," +
           (report.precision ? fmt(*report.precision) : "undefined") + "," +
           (report.recall ? fmt(*report.recall) : "undefined") + "," +
           (report.f1_score ? fmt(*report.f1_score) : "undefined") + "," +
           std::to_string(report.undefined_nodes) + "\n";
    write_text(path, csv);
}

void write_threshold_curve_csv(const AuthReport& report, const std::string& path) {
    std::string csv = "threshold,f1\n";
    for (const auto& [threshold, value] : report.threshold_curve) {
        csv += fmt(threshold) + "," + fmt(value) + "\n";
    }
    write_text(path, csv);
}

Dataset make_dataset(const ExperimentConfig& config, std::size_t threads) {
    if (config.scenario == "static") {
        return gen_static_dataset(config.seed, config.samples_per_node, config.cir_dim, threads,
                                  config.alice_node);
    }
    if (config.scenario == "mobile") {
        return gen_mobile_dataset(config.seed, config.samples_per_node, config.eve_interval,
                                  config.cir_dim, threads);
    }
    return load_dataset_auto(config.scenario.substr(5));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate_for_run();
    const Dataset dataset = make_dataset(config);
    return run_experiment(config, dataset, true);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                                bool write_artifacts) {
    config.validate_for_run();
    ProtocolConfig protocol = config.protocol_config();
    const bool generated = config.scenario.rfind("file:", 0) != 0;

    namespace fs = std::filesystem;
    if (write_artifacts) fs::create_directories(config.out_dir);

    AnyModel trained;
    AuthReport report = run_protocol(dataset, protocol, &trained);

    if (write_artifacts) {
        const fs::path out(config.out_dir);
        {
            std::ostringstream echo;
            config.echo(echo);
            write_text((out / "config_effective.txt").string(), echo.str());
        }
        if (generated) save_dataset(dataset, (out / "dataset.cir").string());
        save_model(trained, (out / "model.hvae").string());
        write_loss_history_csv(report.loss_history, (out / "loss_history.csv").string());
        write_per_node_csv(report, (out / "per_node_f1.csv").string());
        write_report_csv(report, dataset, (out / "report.csv").string());
        write_summary_csv(config, report, (out / "summary.csv").string());
        if (config.model == ModelKind::TbAe) {
            write_threshold_curve_csv(report, (out / "threshold_sweep.csv").string());
        }
    }
    return {config, report};
}

std::size_t sweep_thread_cap() {
    if (const char* env = std::getenv("CIR_AUTH_THREADS")) {
        const auto value = std::strtoul(env, nullptr, 10);
        if (value >= 1) return value;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();
    std::vector<ModelKind> models =
        config.model_list.empty() ? std::vector<ModelKind>{config.model} : config.model_list;
    std::vector<std::uint64_t> seeds =
        config.seed_list.empty() ? std::vector<std::uint64_t>{config.seed} : config.seed_list;
    std::vector<std::uint32_t> intervals = config.eve_interval_list.empty()
                                               ? std::vector<std::uint32_t>{config.eve_interval}
                                               : config.eve_interval_list;
    std::vector<std::pair<std::size_t, std::size_t>> sizes =
        config.hz_list.empty()
            ? std::vector<std::pair<std::size_t, std::size_t>>{{config.h, config.z}}
            : config.hz_list;

    struct Run {
        ExperimentConfig cfg;
        std::string name;
    };
    std::vector<Run> runs;
    for (const auto& model : models) {
        for (const auto seed : seeds) {
            for (const auto interval : intervals) {
                for (const auto& [hh, zz] : sizes) {
                    ExperimentConfig cfg = config;
                    cfg.model = model;
                    cfg.seed = seed;
                    cfg.eve_interval = interval;
                    cfg.h = hh;
                    cfg.z = zz;
                    cfg.model_list.clear();
                    cfg.seed_list.clear();
                    cfg.eve_interval_list.clear();
                    cfg.hz_list.clear();
                    std::string name = std::string(model_kind_name(model)) + "_seed" +
                                       std::to_string(seed) + "_int" + std::to_string(interval) +
                                       "_h" + std::to_string(hh) + "_z" + std::to_string(zz);
                    cfg.out_dir = (std::filesystem::path(config.out_dir) / name).string();
                    runs.push_back({std::move(cfg), std::move(name)});
                }
            }
        }
    }

    SweepResult result;
    result.rows.resize(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            const ExperimentResult res = run_experiment(runs[i].cfg);
            result.rows[i] = {runs[i].cfg.model,          runs[i].cfg.seed, runs[i].cfg.eve_interval,
                              runs[i].cfg.h,              runs[i].cfg.z,
                              res.report.average_f1};
        }
    };
    const std::size_t threads = std::min(sweep_thread_cap(), runs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    std::string csv = "model,seed,eve_interval,h,z,average_f1\n";
    for (const auto& row : result.rows) {
        csv += std::string(model_kind_name(row.model)) + "," + std::to_string(row.seed) + "," +
               std::to_string(row.eve_interval) + "," + std::to_string(row.h) + "," +
               std::to_string(row.z) + "," + fmt(row.average_f1) + "\n";
    }
    write_text((fs::path(config.out_dir) / "sweep_summary.csv").string(), csv);

    // Interval response averaged over seeds, one row per (model, interval, h, z).
    if (!config.eve_interval_list.empty()) {
        std::string interval_csv = "model,eve_interval,h,z,mean_average_f1\n";
        for (const auto& model : models) {
            for (const auto interval : intervals) {
                for (const auto& [hh, zz] : sizes) {
                    double sum = 0.0;
                    std::size_t count = 0;
                    for (const auto& row : result.rows) {
                        if (row.model == model && row.eve_interval == interval && row.h == hh &&
                            row.z == zz) {
                            sum += row.average_f1;
                            ++count;
                        }
                    }
                    if (count == 0) continue;
                    interval_csv += std::string(model_kind_name(model)) + "," +
                                    std::to_string(interval) + "," + std::to_string(hh) + "," +
                                    std::to_string(zz) + "," +
                                    fmt(sum / static_cast<double>(count)) + "\n";
                }
            }
        }
        write_text((fs::path(config.out_dir) / "interval_sweep.csv").string(), interval_csv);
    }
    return result;
}

}  // namespace cirauth
