// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cirauth/channel.hpp"
#include "cirauth/metrics.hpp"
#include "cirauth/model_io.hpp"
#include "cirauth/normalize.hpp"

namespace cirauth {

/// Protocol variants: the hierarchical model plus three baselines. TF-* use
/// the rank-based cut; TB-AE sweeps a threshold per batch and keeps the best.
enum class ModelKind : std::uint8_t { TfHvae = 0, TfAe = 1, TbAe = 2, TfVae = 3 };

const char* model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

struct AuthConfig {
    double alpha = 0.5;  // expected fraction of legitimate traffic
    bool alpha_from_rates = false;
    double f_alice = 1.0;  // legitimate emission rate
    double f_eve = 1.0;    // spoofing rate
    std::size_t threshold_points = 200;

    double effective_alpha() const;
    void validate() const;
};

struct AuthVerdict {
    std::size_t record_index = 0;  // position in the dataset's record list
    double score = 0.0;
    bool legitimate = false;  // decision
    bool ground_truth_alice = false;
};

ConfusionMatrix confusion(const std::vector<AuthVerdict>& verdicts);

/// Number of verdicts the rank rule marks legitimate: round-half-up of
/// alpha * q, clamped to [0, q].
std::size_t legitimate_count(double alpha, std::size_t q);

/// Rank rule: ascending stable sort by (score, record_index); the smallest
/// legitimate_count(alpha, q) scores are authenticated, the rest flagged.
/// Input order is preserved in the result.
std::vector<AuthVerdict> authenticate_batch(std::vector<AuthVerdict> scored, double alpha);

/// Threshold rule: score < threshold authenticates.
std::vector<AuthVerdict> threshold_authenticate(std::vector<AuthVerdict> scored,
                                                double threshold);

/// Squared Euclidean distance between the unit-2 embeddings of one probe
/// column and the reference column.
double channel_difference(const HvaeModel& model, const Matrix& reference, const Matrix& probe);

/// Sample split and model sizing for an end-to-end protocol run. The
/// baseline widths reuse the hierarchical config's h and z.
struct ProtocolConfig {
    ModelKind kind = ModelKind::TfHvae;
    FeatureMode feature_mode = FeatureMode::Magnitude;
    std::size_t train_per_node = 30;
    std::size_t test_per_node = 10;
    HvaeConfig hvae;
    AuthConfig auth;
};

struct NodeResult {
    std::uint32_t node_id = 0;
    double distance_to_alice = 0.0;
    ConfusionMatrix cm;
    Rate f1_score;
};

struct AuthReport {
    ModelKind kind = ModelKind::TfHvae;
    std::vector<AuthVerdict> verdicts;
    std::vector<NodeResult> per_node;  // one entry per evaluated spoofing node
    ConfusionMatrix overall;
    Rate precision;  // p_ca
    Rate recall;     // p_noa
    Rate f1_score;
    double average_f1 = 0.0;  // mean of the defined per-node values
    std::size_t undefined_nodes = 0;
    std::size_t train_records_used = 0;
    std::vector<EpochLoss> loss_history;
    // TB-AE only: (threshold, f1) over the combined test set.
    std::vector<std::pair<double, double>> threshold_curve;
};

/// Full protocol: split per node, fit normalization on the training part,
/// train the chosen model, authenticate every held-out batch against the
/// trusted reference, and aggregate metrics. When trained_out is non-null it
/// receives the trained network.
AuthReport run_protocol(const Dataset& dataset, const ProtocolConfig& config,
                        AnyModel* trained_out = nullptr);

/// Authentication phases only, with an already trained model. Normalization
/// stats are re-fitted on the dataset's training split, so the dataset and
/// split must match the ones used for training.
AuthReport run_protocol_with_model(const Dataset& dataset, const ProtocolConfig& config,
                                   const AnyModel& trained);

/// One row per test record plus a commented summary block.
void write_report_csv(const AuthReport& report, const Dataset& dataset, const std::string& path);

}  // namespace cirauth
