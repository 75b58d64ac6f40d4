// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace cirauth {

namespace {

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    }
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

std::vector<std::string> split(const std::string& value, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

FeatureMode parse_feature_mode(const std::string& value) {
    if (value == "magnitude") return FeatureMode::Magnitude;
    if (value == "reim") return FeatureMode::ReIm;
    throw ConfigError("feature_mode: want magnitude|reim, got '" + value + "'");
}

KlMode parse_kl_mode(const std::string& value) {
    if (value == "bound") return KlMode::Bound;
    if (value == "exact") return KlMode::Exact;
    throw ConfigError("kl_mode: want bound|exact, got '" + value + "'");
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    if (key == "scenario") {
        scenario = value;
    } else if (key == "model") {
        model = parse_model_kind(value);
    } else if (key == "feature_mode") {
        feature_mode = parse_feature_mode(value);
    } else if (key == "seed") {
        seed = to_u64(key, value);
    } else if (key == "train_seed") {
        train_seed = to_u64(key, value);
    } else if (key == "alice_node") {
        alice_node = static_cast<std::uint32_t>(to_u64(key, value));
    } else if (key == "samples_per_node") {
        samples_per_node = to_u64(key, value);
    } else if (key == "train_per_node") {
        train_per_node = to_u64(key, value);
    } else if (key == "test_per_node") {
        test_per_node = to_u64(key, value);
    } else if (key == "cir_dim") {
        cir_dim = static_cast<std::uint32_t>(to_u64(key, value));
    } else if (key == "eve_interval") {
        eve_interval = static_cast<std::uint32_t>(to_u64(key, value));
    } else if (key == "h") {
        h = to_u64(key, value);
    } else if (key == "z") {
        z = to_u64(key, value);
    } else if (key == "double_peak_m") {
        double_peak_m = to_double(key, value);
    } else if (key == "double_peak_s") {
        double_peak_s = to_double(key, value);
    } else if (key == "prior_weight") {
        prior_weight = to_double(key, value);
    } else if (key == "kl2_weight") {
        kl2_weight = to_double(key, value);
    } else if (key == "kl3_weight") {
        kl3_weight = to_double(key, value);
    } else if (key == "kl_mode") {
        kl_mode = parse_kl_mode(value);
    } else if (key == "learning_rate") {
        learning_rate = to_double(key, value);
    } else if (key == "momentum") {
        momentum = to_double(key, value);
    } else if (key == "epochs") {
        epochs = to_u64(key, value);
    } else if (key == "batch_size") {
        batch_size = to_u64(key, value);
    } else if (key == "alpha") {
        alpha = to_double(key, value);
        alpha_from_rates = false;
    } else if (key == "f_alice") {
        f_alice = to_double(key, value);
        alpha_from_rates = true;
    } else if (key == "f_eve") {
        f_eve = to_double(key, value);
        alpha_from_rates = true;
    } else if (key == "threshold_points") {
        threshold_points = to_u64(key, value);
    } else if (key == "out") {
        out_dir = value;
    } else if (key == "seed_list") {
        seed_list.clear();
        for (const auto& item : split(value, ',')) seed_list.push_back(to_u64(key, item));
    } else if (key == "eve_interval_list") {
        eve_interval_list.clear();
        for (const auto& item : split(value, ',')) {
            eve_interval_list.push_back(static_cast<std::uint32_t>(to_u64(key, item)));
        }
    } else if (key == "hz_list") {
        hz_list.clear();
        for (const auto& item : split(value, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 2) {
                throw ConfigError("hz_list: want h:z pairs, got '" + item + "'");
            }
            hz_list.emplace_back(to_u64(key, parts[0]), to_u64(key, parts[1]));
        }
    } else if (key == "model_list") {
        model_list.clear();
        for (const auto& item : split(value, ',')) model_list.push_back(parse_model_kind(item));
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void ExperimentConfig::validate() const {
    if (scenario != "static" && scenario != "mobile" && scenario.rfind("file:", 0) != 0) {
        throw ConfigError("scenario: want static|mobile|file:<path>, got '" + scenario + "'");
    }
    if (test_per_node < 1) throw ConfigError("test_per_node must be >= 1");
    protocol_config().auth.validate();
}

void ExperimentConfig::validate_for_run() const {
    validate();
    if (train_per_node + 1 > samples_per_node && scenario.rfind("file:", 0) != 0) {
        throw ConfigError("train_per_node must leave at least one test sample per node");
    }
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
}

HvaeConfig ExperimentConfig::hvae_config(std::size_t input_dim) const {
    HvaeConfig cfg;
    cfg.input_dim = input_dim;
    cfg.h = h;
    cfg.z = z;
    cfg.double_peak_m = double_peak_m;
    cfg.double_peak_s = double_peak_s;
    cfg.prior_weight = prior_weight;
    cfg.kl2_weight = kl2_weight;
    cfg.kl3_weight = kl3_weight;
    cfg.kl_mode = kl_mode;
    cfg.train.learning_rate = learning_rate;
    cfg.train.momentum = momentum;
    cfg.train.epochs = epochs;
    cfg.train.batch_size = batch_size;
    cfg.train.seed = train_seed != 0 ? train_seed : seed;
    return cfg;
}

ProtocolConfig ExperimentConfig::protocol_config() const {
    ProtocolConfig cfg;
    cfg.kind = model;
    cfg.feature_mode = feature_mode;
    cfg.train_per_node = train_per_node;
    cfg.test_per_node = test_per_node;
    const std::size_t features = feature_mode == FeatureMode::Magnitude ? cir_dim : 2 * cir_dim;
    cfg.hvae = hvae_config(features);
    cfg.auth.alpha = alpha;
    cfg.auth.alpha_from_rates = alpha_from_rates;
    cfg.auth.f_alice = f_alice;
    cfg.auth.f_eve = f_eve;
    cfg.auth.threshold_points = threshold_points;
    return cfg;
}

void ExperimentConfig::echo(std::ostream& out) const {
    out << "scenario=" << scenario << "\n";
    out << "model=" << model_kind_name(model) << "\n";
    out << "feature_mode=" << feature_mode_name(feature_mode) << "\n";
    out << "seed=" << seed << "\n";
    if (train_seed != 0) out << "train_seed=" << train_seed << "\n";
    out << "alice_node=" << alice_node << "\n";
    out << "samples_per_node=" << samples_per_node << "\n";
    out << "train_per_node=" << train_per_node << "\n";
    out << "test_per_node=" << test_per_node << "\n";
    out << "cir_dim=" << cir_dim << "\n";
    out << "eve_interval=" << eve_interval << "\n";
    out << "h=" << h << "\n";
    out << "z=" << z << "\n";
    out << "double_peak_m=" << double_peak_m << "\n";
    out << "double_peak_s=" << double_peak_s << "\n";
    out << "prior_weight=" << prior_weight << "\n";
    out << "kl2_weight=" << kl2_weight << "\n";
    out << "kl3_weight=" << kl3_weight << "\n";
    out << "kl_mode=" << kl_mode_name(kl_mode) << "\n";
    out << "learning_rate=" << learning_rate << "\n";
    out << "momentum=" << momentum << "\n";
    out << "epochs=" << epochs << "\n";
    out << "batch_size=" << batch_size << "\n";
    if (alpha_from_rates) {
        out << "f_alice=" << f_alice << "\n";
        out << "f_eve=" << f_eve << "\n";
    } else {
        out << "alpha=" << alpha << "\n";
    }
    out << "threshold_points=" << threshold_points << "\n";
    out << "out=" << out_dir << "\n";
    auto join_u64 = [&out](const char* key, const auto& list) {
        if (list.empty()) return;
        out << key << "=";
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i > 0) out << ",";
            out << list[i];
        }
        out << "\n";
    };
    join_u64("seed_list", seed_list);
    join_u64("eve_interval_list", eve_interval_list);
    if (!hz_list.empty()) {
        out << "hz_list=";
        for (std::size_t i = 0; i < hz_list.size(); ++i) {
            if (i > 0) out << ",";
            out << hz_list[i].first << ":" << hz_list[i].second;
        }
        out << "\n";
    }
    if (!model_list.empty()) {
        out << "model_list=";
        for (std::size_t i = 0; i < model_list.size(); ++i) {
            if (i > 0) out << ",";
            out << model_kind_name(model_list[i]);
        }
        out << "\n";
    }
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    ExperimentConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        cfg.apply(key, value);
    }
    return cfg;
}

ExperimentConfig parse_config(const std::string& file_or_empty,
                              const std::vector<std::pair<std::string, std::string>>& overrides) {
    ExperimentConfig cfg =
        file_or_empty.empty() ? ExperimentConfig{} : parse_config_file(file_or_empty);
    for (const auto& [key, value] : overrides) cfg.apply(key, value);
    cfg.validate();
    return cfg;
}

}  // namespace cirauth
