// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <string>
#include <vector>

#include "cirauth/config.hpp"

namespace cirauth {

Dataset make_dataset(const ExperimentConfig& config, std::size_t threads = 1);

struct ExperimentResult {
    ExperimentConfig config;
    AuthReport report;
};

/// End-to-end run: dataset (generated or loaded), training, authentication,
/// artifacts under config.out_dir (effective config, dataset, checkpoint,
/// loss history, per-node F1, verdicts, summary, and for tb_ae the threshold
/// response curve).
ExperimentResult run_experiment(const ExperimentConfig& config);

/// As run_experiment, with a pre-built dataset (saves regeneration in sweeps);
/// pass write_artifacts = false to keep everything in memory.
ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                                bool write_artifacts);

struct SweepRow {
    ModelKind model;
    std::uint64_t seed = 0;
    std::uint32_t eve_interval = 0;
    std::size_t h = 0;
    std::size_t z = 0;
    double average_f1 = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Expands the config's list axes (models x seeds x intervals x h:z) into
/// independent runs. Runs execute in parallel up to the CIR_AUTH_THREADS cap
/// (hardware concurrency when unset); outputs are deterministic regardless of
/// the thread count.
SweepResult run_sweep(const ExperimentConfig& config);

/// Thread cap from CIR_AUTH_THREADS, falling back to the hardware count.
std::size_t sweep_thread_cap();

// Schema-stable artifact writers shared by the experiment runner and the CLI.
void write_loss_history_csv(const std::vector<EpochLoss>& history, const std::string& path);
void write_per_node_csv(const AuthReport& report, const std::string& path);
void write_summary_csv(const ExperimentConfig& config, const AuthReport& report,
                       const std::string& path);
void write_threshold_curve_csv(const AuthReport& report, const std::string& path);

}  // namespace cirauth
