// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/auth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

namespace cirauth {

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::TfHvae: return "tf_hvae";
        case ModelKind::TfAe: return "tf_ae";
        case ModelKind::TbAe: return "tb_ae";
        case ModelKind::TfVae: return "tf_vae";
    }
    return "?";
}

ModelKind parse_model_kind(const std::string& name) {
    if (name == "tf_hvae") return ModelKind::TfHvae;
    if (name == "tf_ae") return ModelKind::TfAe;
    if (name == "tb_ae") return ModelKind::TbAe;
    if (name == "tf_vae") return ModelKind::TfVae;
    throw ConfigError("unknown model kind '" + name + "' (want tf_hvae|tf_ae|tb_ae|tf_vae)");
}

double AuthConfig::effective_alpha() const {
    if (alpha_from_rates) return f_alice / (f_alice + f_eve);
    return alpha;
}

void AuthConfig::validate() const {
    if (alpha_from_rates) {
        if (!(f_alice > 0.0) || !(f_eve > 0.0)) {
            throw ConfigError("signal rates must be > 0");
        }
    } else if (!(alpha > 0.0) || alpha > 1.0) {
        throw ConfigError("alpha must be in (0, 1]");
    }
    if (threshold_points < 2) throw ConfigError("threshold_points must be >= 2");
}

ConfusionMatrix confusion(const std::vector<AuthVerdict>& verdicts) {
    ConfusionMatrix cm;
    for (const auto& v : verdicts) cm.add(v.legitimate, v.ground_truth_alice);
    return cm;
}

std::size_t legitimate_count(double alpha, std::size_t q) {
    const double raw = std::floor(alpha * static_cast<double>(q) + 0.5);
    if (raw <= 0.0) return 0;
    return std::min(q, static_cast<std::size_t>(raw));
}

std::vector<AuthVerdict> authenticate_batch(std::vector<AuthVerdict> scored, double alpha) {
    const std::size_t q = scored.size();
    std::vector<std::size_t> order(q);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scored[a].score != scored[b].score) return scored[a].score < scored[b].score;
        return scored[a].record_index < scored[b].record_index;
    });
    const std::size_t accepted = legitimate_count(alpha, q);
    for (std::size_t rank = 0; rank < q; ++rank) {
        scored[order[rank]].legitimate = rank < accepted;
    }
    return scored;
}

std::vector<AuthVerdict> threshold_authenticate(std::vector<AuthVerdict> scored,
                                                double threshold) {
    for (auto& v : scored) v.legitimate = v.score < threshold;
    return scored;
}

double channel_difference(const HvaeModel& model, const Matrix& reference, const Matrix& probe) {
    const Matrix a = encode_z2(model, reference);
    const Matrix b = encode_z2(model, probe);
    return squared_distance(a, b);
}

namespace {

struct Group {
    std::uint32_t node = 0;
    bool is_alice = false;
    std::vector<std::size_t> idx;  // in record order
    std::uint32_t time_min = 0;
    std::uint32_t time_max = 0;
};

std::vector<Group> build_groups(const Dataset& dataset) {
    std::vector<Group> groups;
    std::map<std::pair<std::uint32_t, bool>, std::size_t> lookup;
    for (std::size_t i = 0; i < dataset.records.size(); ++i) {
        const auto& rec = dataset.records[i];
        const auto key = std::make_pair(rec.node_id, rec.is_alice);
        auto it = lookup.find(key);
        if (it == lookup.end()) {
            lookup.emplace(key, groups.size());
            groups.push_back({rec.node_id, rec.is_alice, {i}, rec.time_index, rec.time_index});
        } else {
            Group& g = groups[it->second];
            g.idx.push_back(i);
            g.time_min = std::min(g.time_min, rec.time_index);
            g.time_max = std::max(g.time_max, rec.time_index);
        }
    }
    return groups;
}

Matrix gather(const Matrix& all, const std::vector<std::size_t>& cols) {
    Matrix out(all.rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t r = 0; r < all.rows; ++r) out(r, c) = all(r, cols[c]);
    }
    return out;
}

double column_squared_distance(const Matrix& m, std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double d = m(r, a) - m(r, b);
        acc += d * d;
    }
    return acc;
}

struct Batch {
    std::uint32_t spoof_node = 0;
    double distance_to_alice = 0.0;
    std::size_t reference_record = 0;  // dataset index of the pilot
    std::vector<std::size_t> test_records;
    std::vector<bool> truth;
};

AnyModel train_model(ModelKind kind, const HvaeConfig& base, const Matrix& train_matrix,
                     std::size_t reference_col, std::vector<EpochLoss>& history) {
    HvaeConfig cfg = base;
    cfg.input_dim = train_matrix.rows;
    switch (kind) {
        case ModelKind::TfHvae: {
            HvaeModel model = make_hvae(cfg);
            history = train_hvae(model, train_matrix, reference_col);
            return model;
        }
        case ModelKind::TfAe:
        case ModelKind::TbAe: {
            // Flat baselines: every hidden layer is as wide as the code.
            PlainAe model = make_plain_ae(cfg.input_dim, cfg.z, cfg.z, cfg.train);
            history = train_plain_ae(model, train_matrix);
            return model;
        }
        case ModelKind::TfVae: {
            PlainVae model = make_plain_vae(cfg.input_dim, cfg.z, cfg.z, cfg.train,
                                            cfg.kl2_weight);
            history = train_plain_vae(model, train_matrix);
            return model;
        }
    }
    throw ConfigError("unknown model kind");
}

Matrix embed_all(const AnyModel& model, const Matrix& normalized) {
    if (const auto* hvae = std::get_if<HvaeModel>(&model)) {
        return encode_z2(*hvae, normalized);
    }
    if (const auto* ae = std::get_if<PlainAe>(&model)) {
        return encode_ae(*ae, normalized);
    }
    return encode_vae_mu(std::get<PlainVae>(model), normalized);
}

// One threshold for the whole run, picked where the mean per-batch F1 over
// the sweep grid peaks. The grid spans the pooled score range.
double sweep_threshold(const std::vector<std::vector<AuthVerdict>>& scored_batches,
                       std::size_t points,
                       std::vector<std::pair<double, double>>* curve) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& batch : scored_batches) {
        for (const auto& v : batch) {
            lo = std::min(lo, v.score);
            hi = std::max(hi, v.score);
        }
    }
    const double span = hi - lo;
    const double step = span > 0.0 ? span / static_cast<double>(points - 1) : 1.0;
    double best_value = -1.0;
    double best_threshold = lo;
    for (std::size_t i = 0; i < points; ++i) {
        // Offset by one step so the all-legitimate cut is reachable.
        const double threshold = lo + step * static_cast<double>(i + 1);
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& batch : scored_batches) {
            const auto verdicts = threshold_authenticate(batch, threshold);
            const Rate score = f1(confusion(verdicts));
            if (score) {
                sum += *score;
                ++count;
            }
        }
        const double value = count > 0 ? sum / static_cast<double>(count) : 0.0;
        if (curve != nullptr) curve->emplace_back(threshold, value);
        if (value > best_value) {
            best_value = value;
            best_threshold = threshold;
        }
    }
    return best_threshold;
}

}  // namespace

namespace {

AuthReport run_protocol_impl(const Dataset& dataset, const ProtocolConfig& config,
                             const AnyModel* pretrained, AnyModel* trained_out);

}  // namespace

AuthReport run_protocol(const Dataset& dataset, const ProtocolConfig& config,
                        AnyModel* trained_out) {
    return run_protocol_impl(dataset, config, nullptr, trained_out);
}

AuthReport run_protocol_with_model(const Dataset& dataset, const ProtocolConfig& config,
                                   const AnyModel& trained) {
    return run_protocol_impl(dataset, config, &trained, nullptr);
}

namespace {

AuthReport run_protocol_impl(const Dataset& dataset, const ProtocolConfig& config,
                             const AnyModel* pretrained, AnyModel* trained_out) {
    config.auth.validate();
    if (dataset.records.empty()) throw DomainError("run_protocol: dataset has no records");

    const auto groups = build_groups(dataset);
    bool has_alice = false;
    for (const auto& g : groups) has_alice |= g.is_alice;
    if (!has_alice) throw DomainError("run_protocol: no legitimate records in dataset");

    // Position visited by both roles means the spoofer retraced the
    // legitimate walk; those revisits are authentication traffic, not
    // training data.
    auto has_alice_twin = [&](std::uint32_t node) {
        return std::any_of(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.node == node && g.is_alice; });
    };

    std::vector<std::size_t> train_records;
    std::vector<std::size_t> test_of_group(groups.size(), 0);  // first test offset
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const Group& g = groups[gi];
        const bool trains = g.is_alice || !has_alice_twin(g.node);
        const std::size_t n_train = trains ? std::min(config.train_per_node, g.idx.size()) : 0;
        test_of_group[gi] = n_train;
        for (std::size_t i = 0; i < n_train; ++i) train_records.push_back(g.idx[i]);
    }
    if (train_records.empty()) throw DomainError("run_protocol: empty training split");

    auto test_slice = [&](std::size_t gi) {
        const Group& g = groups[gi];
        std::vector<std::size_t> out;
        const std::size_t begin = test_of_group[gi];
        const std::size_t end = std::min(g.idx.size(), begin + config.test_per_node);
        for (std::size_t i = begin; i < end; ++i) out.push_back(g.idx[i]);
        return out;
    };

    // Features and normalization stats come from the training split only.
    const Matrix features = extract_features(dataset.records, config.feature_mode);
    const NormStats stats = normalize_fit(gather(features, train_records));
    const Matrix normalized = normalize_apply(features, stats);

    // The trusted pilot: first training record of the first legitimate group.
    std::size_t global_reference = 0;
    {
        bool found = false;
        for (std::size_t gi = 0; gi < groups.size() && !found; ++gi) {
            if (groups[gi].is_alice && test_of_group[gi] > 0) {
                global_reference = groups[gi].idx.front();
                found = true;
            }
        }
        if (!found) throw DomainError("run_protocol: no trusted pilot record available");
    }

    AuthReport report;
    report.kind = config.kind;
    report.train_records_used = train_records.size();

    AnyModel model;
    if (pretrained == nullptr) {
        std::size_t reference_col = 0;
        for (std::size_t i = 0; i < train_records.size(); ++i) {
            if (train_records[i] == global_reference) reference_col = i;
        }
        model = train_model(config.kind, config.hvae, gather(normalized, train_records),
                            reference_col, report.loss_history);
    } else {
        if (model_input_dim(*pretrained) != normalized.rows) {
            throw ShapeError("run_protocol: trained model expects input dim " +
                             std::to_string(model_input_dim(*pretrained)) + ", features have " +
                             std::to_string(normalized.rows));
        }
        model = *pretrained;
    }
    if (trained_out != nullptr) *trained_out = model;

    const Matrix embeddings = embed_all(model, normalized);

    // Assemble authentication batches: one per spoofing position.
    std::vector<Batch> batches;
    bool any_mobile = false;
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        if (!groups[gi].is_alice && has_alice_twin(groups[gi].node)) any_mobile = true;
    }
    if (!any_mobile) {
        // Fixed transmitter layout: every spoofing node against the global pilot.
        std::size_t alice_group = groups.size();
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (groups[gi].is_alice) alice_group = gi;
        }
        const auto alice_test = test_slice(alice_group);
        if (alice_test.empty()) throw DomainError("run_protocol: empty legitimate test split");
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            if (groups[gi].is_alice) continue;
            Batch b;
            b.spoof_node = groups[gi].node;
            b.distance_to_alice =
                dataset.geometry.distance_between(groups[gi].node, dataset.geometry.alice_node_index);
            b.reference_record = global_reference;
            for (std::size_t idx : alice_test) {
                b.test_records.push_back(idx);
                b.truth.push_back(true);
            }
            const auto spoof_test = test_slice(gi);
            if (spoof_test.empty()) continue;
            for (std::size_t idx : spoof_test) {
                b.test_records.push_back(idx);
                b.truth.push_back(false);
            }
            batches.push_back(std::move(b));
        }
    } else {
        // Walking transmitter: pair each spoofer visit with the legitimate
        // visit that shares its time window; the pilot is re-taken at each
        // position.
        for (std::size_t gi = 0; gi < groups.size(); ++gi) {
            const Group& g = groups[gi];
            if (g.is_alice || !has_alice_twin(g.node)) continue;
            std::size_t paired = groups.size();
            for (std::size_t aj = 0; aj < groups.size(); ++aj) {
                const Group& a = groups[aj];
                if (!a.is_alice) continue;
                if (g.time_min >= a.time_min && g.time_min <= a.time_max) paired = aj;
            }
            if (paired == groups.size()) continue;  // spoofer active outside the walk
            Batch b;
            b.spoof_node = g.node;
            b.distance_to_alice = dataset.geometry.distance_between(g.node, groups[paired].node);
            b.reference_record = groups[paired].idx.front();
            const auto alice_test = test_slice(paired);
            const auto spoof_test = test_slice(gi);
            if (alice_test.empty() || spoof_test.empty()) continue;
            for (std::size_t idx : alice_test) {
                b.test_records.push_back(idx);
                b.truth.push_back(true);
            }
            for (std::size_t idx : spoof_test) {
                b.test_records.push_back(idx);
                b.truth.push_back(false);
            }
            batches.push_back(std::move(b));
        }
    }
    if (batches.empty()) throw DomainError("run_protocol: empty test split");

    // Score every batch against its pilot, straight from the embedding space.
    std::vector<std::vector<AuthVerdict>> scored_batches;
    scored_batches.reserve(batches.size());
    for (const auto& batch : batches) {
        std::vector<AuthVerdict> scored(batch.test_records.size());
        for (std::size_t i = 0; i < batch.test_records.size(); ++i) {
            scored[i].record_index = batch.test_records[i];
            scored[i].ground_truth_alice = batch.truth[i];
            scored[i].score = column_squared_distance(embeddings, batch.test_records[i],
                                                      batch.reference_record);
        }
        scored_batches.push_back(std::move(scored));
    }

    const double alpha = config.auth.effective_alpha();
    double chosen_threshold = 0.0;
    if (config.kind == ModelKind::TbAe) {
        chosen_threshold = sweep_threshold(scored_batches, config.auth.threshold_points,
                                           &report.threshold_curve);
    }

    double f1_sum = 0.0;
    std::size_t f1_count = 0;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
        std::vector<AuthVerdict> verdicts =
            config.kind == ModelKind::TbAe
                ? threshold_authenticate(std::move(scored_batches[bi]), chosen_threshold)
                : authenticate_batch(std::move(scored_batches[bi]), alpha);

        NodeResult node;
        node.node_id = batches[bi].spoof_node;
        node.distance_to_alice = batches[bi].distance_to_alice;
        node.cm = confusion(verdicts);
        node.f1_score = f1(node.cm);
        if (node.f1_score) {
            f1_sum += *node.f1_score;
            ++f1_count;
        } else {
            ++report.undefined_nodes;
        }
        report.per_node.push_back(node);
        report.overall = report.overall + node.cm;
        report.verdicts.insert(report.verdicts.end(), verdicts.begin(), verdicts.end());
    }

    report.precision = p_ca(report.overall);
    report.recall = p_noa(report.overall);
    report.f1_score = f1(report.overall);
    report.average_f1 = f1_count > 0 ? f1_sum / static_cast<double>(f1_count) : 0.0;
    return report;
}

}  // namespace

void write_report_csv(const AuthReport& report, const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path + ": cannot open for writing");
    char buf[64];
    auto fmt = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    out << "node_id,score,decision,ground_truth\n";
    for (const auto& v : report.verdicts) {
        out << dataset.records[v.record_index].node_id << "," << fmt(v.score) << ","
            << (v.legitimate ? "legitimate" : "attack") << ","
            << (v.ground_truth_alice ? "alice" : "eve") << "\n";
    }
    out << "# summary\n";
    out << "# model," << model_kind_name(report.kind) << "\n";
    out << "# tl," << report.overall.tl << "\n";
    out << "# fa," << report.overall.fa << "\n";
    out << "# fl," << report.overall.fl << "\n";
    out << "# ta," << report.overall.ta << "\n";
    out << "# p_ca," << (report.precision ? fmt(*report.precision) : "undefined") << "\n";
    out << "# p_noa," << (report.recall ? fmt(*report.recall) : "undefined") << "\n";
    out << "# f1," << (report.f1_score ? fmt(*report.f1_score) : "undefined") << "\n";
    out << "# average_f1," << fmt(report.average_f1) << "\n";
    if (!out) throw IoError(path + ": write failed");
}

}  // namespace cirauth
