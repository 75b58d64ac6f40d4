// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/channel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "cirauth/errors.hpp"

namespace cirauth {

namespace {

constexpr double kSpeedOfLight = 299792458.0;
constexpr std::size_t kFieldFeatures = 64;
constexpr std::uint64_t kFieldStream = 0xF1E1DULL;
constexpr std::uint64_t kNodeStreamBase = 0x0DE5ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

void ScenarioParams::validate() const {
    if (!(carrier_frequency_hz > 0.0)) throw ConfigError("carrier_frequency must be > 0");
    if (num_taps < 1) throw ConfigError("num_taps must be >= 1");
    if (cir_dim < num_taps) throw ConfigError("cir_dim must be >= num_taps");
    if (temporal_correlation < 0.0 || temporal_correlation > 1.0) {
        throw ConfigError("temporal_correlation must be in [0, 1]");
    }
    if (fluctuation_share < 0.0 || fluctuation_share > 1.0) {
        throw ConfigError("fluctuation_share must be in [0, 1]");
    }
    if (!(rms_delay_spread_s > 0.0)) throw ConfigError("rms_delay_spread must be > 0");
    if (!(correlation_length_m > 0.0)) throw ConfigError("correlation_length must be > 0");
    if (tx_gain_jitter_db < 0.0) throw ConfigError("tx_gain_jitter_db must be >= 0");
    if (burst_probability < 0.0 || burst_probability > 1.0) {
        throw ConfigError("burst_probability must be in [0, 1]");
    }
    if (burst_factor < 1.0) throw ConfigError("burst_factor must be >= 1");
    if (noise_floor < 0.0) throw ConfigError("noise_floor must be >= 0");
}

double ScenarioParams::half_wavelength_m() const {
    return kSpeedOfLight / (2.0 * carrier_frequency_hz);
}

double ScenarioParams::k_factor_linear() const {
    return std::pow(10.0, std::min(k_factor_db, 60.0) / 10.0);
}

double NodeGeometry::distance_to_bob(std::uint32_t node) const {
    const auto& p = node_positions.at(node);
    return std::hypot(p[0] - bob_position[0], p[1] - bob_position[1]);
}

double NodeGeometry::distance_between(std::uint32_t a, std::uint32_t b) const {
    const auto& pa = node_positions.at(a);
    const auto& pb = node_positions.at(b);
    return std::hypot(pa[0] - pb[0], pa[1] - pb[1]);
}

void NodeGeometry::validate(const ScenarioParams& scenario) const {
    if (node_positions.empty()) throw ConfigError("geometry has no nodes");
    if (alice_node_index >= node_positions.size()) {
        throw ConfigError("alice_node_index out of range");
    }
    const double min_sep = scenario.half_wavelength_m();
    for (std::size_t i = 0; i < node_positions.size(); ++i) {
        if (distance_to_bob(static_cast<std::uint32_t>(i)) <= min_sep) {
            throw ConfigError("node " + std::to_string(i) + " is within half a wavelength of the receiver");
        }
        for (std::size_t j = i + 1; j < node_positions.size(); ++j) {
            if (distance_between(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)) <= min_sep) {
                throw ConfigError("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                  " are within half a wavelength of each other");
            }
        }
    }
}

bool operator==(const CirRecord& a, const CirRecord& b) {
    return a.node_id == b.node_id && a.time_index == b.time_index && a.is_alice == b.is_alice &&
           a.cir == b.cir;
}

bool operator==(const Dataset& a, const Dataset& b) {
    const auto& sa = a.scenario;
    const auto& sb = b.scenario;
    const bool scenario_eq =
        sa.carrier_frequency_hz == sb.carrier_frequency_hz && sa.k_factor_db == sb.k_factor_db &&
        sa.path_loss_exponent == sb.path_loss_exponent &&
        sa.rms_delay_spread_s == sb.rms_delay_spread_s && sa.mean_delay_s == sb.mean_delay_s &&
        sa.num_taps == sb.num_taps && sa.cir_dim == sb.cir_dim &&
        sa.temporal_correlation == sb.temporal_correlation && sa.noise_floor == sb.noise_floor &&
        sa.fluctuation_share == sb.fluctuation_share &&
        sa.correlation_length_m == sb.correlation_length_m &&
        sa.tx_gain_jitter_db == sb.tx_gain_jitter_db &&
        sa.burst_probability == sb.burst_probability && sa.burst_factor == sb.burst_factor &&
        sa.field_kernel == sb.field_kernel;
    return scenario_eq && a.geometry.node_positions == b.geometry.node_positions &&
           a.geometry.bob_position == b.geometry.bob_position &&
           a.geometry.alice_node_index == b.geometry.alice_node_index && a.seed == b.seed &&
           a.records == b.records;
}

FieldBasis::FieldBasis(const ScenarioParams& scenario, std::uint64_t dataset_seed) {
    Rng rng = Rng::stream(dataset_seed, kFieldStream);
    const double inv_len = 1.0 / scenario.correlation_length_m;
    features_.resize(scenario.num_taps);
    for (auto& bank : features_) {
        bank.resize(kFieldFeatures);
        for (auto& f : bank) {
            if (scenario.field_kernel == FieldKernel::Smooth) {
                // Normal wavevectors: squared-exponential correlation.
                f.kx = rng.normal() * inv_len;
                f.ky = rng.normal() * inv_len;
            } else {
                // Cauchy wavevectors: exponential correlation, which keeps
                // decorrelating at sub-metre as well as tens-of-metre scales.
                double denom = std::abs(rng.normal());
                while (denom < 1e-9) denom = std::abs(rng.normal());
                f.kx = rng.normal() / denom * inv_len;
                f.ky = rng.normal() / denom * inv_len;
            }
            f.phase = rng.uniform(0.0, kTwoPi);
        }
    }
}

std::complex<double> FieldBasis::value(std::uint32_t tap, const std::array<double, 2>& p) const {
    const auto& bank = features_.at(tap);
    double re = 0.0;
    double im = 0.0;
    for (const auto& f : bank) {
        const double arg = f.kx * p[0] + f.ky * p[1] + f.phase;
        re += std::cos(arg);
        im += std::sin(arg);
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(bank.size()));
    return {re * norm, im * norm};
}

NodeChannel::NodeChannel(const ScenarioParams& scenario, const NodeGeometry& geometry,
                         const FieldBasis& basis, std::uint32_t node, std::uint64_t dataset_seed,
                         std::uint64_t stream_salt)
    : scenario_(scenario),
      basis_(basis),
      bob_(geometry.bob_position),
      rng_(Rng::stream(dataset_seed, kNodeStreamBase + node + stream_salt)),
      node_(node) {
    if (node >= geometry.node_count()) {
        throw ConfigError("node index " + std::to_string(node) + " out of range");
    }

    // Tap 0 is the LOS component; the diffuse profile fills the taps behind
    // it, decaying by four time constants across the profile so its RMS
    // spread tracks the configured value whatever num_taps is.
    los_tap_ = 0;
    const double k_lin = scenario.k_factor_linear();
    const double p_dif = 1.0 / (1.0 + k_lin);
    const std::uint32_t diffuse_taps = scenario.num_taps - 1;
    profile_.resize(diffuse_taps);
    fixed_.resize(diffuse_taps);
    fluct_std_.resize(diffuse_taps);
    state_.resize(diffuse_taps);
    if (diffuse_taps > 0) {
        double total = 0.0;
        const double span = diffuse_taps > 1 ? static_cast<double>(diffuse_taps - 1) : 1.0;
        for (std::uint32_t t = 0; t < diffuse_taps; ++t) {
            profile_[t] = std::exp(-4.0 * static_cast<double>(t) / span);
            total += profile_[t];
        }
        for (std::uint32_t t = 0; t < diffuse_taps; ++t) {
            profile_[t] = p_dif * profile_[t] / total;
            fluct_std_[t] = std::sqrt(profile_[t] * scenario.fluctuation_share);
        }
    }
    set_position(geometry.node_positions[node]);
}

void NodeChannel::set_position(const std::array<double, 2>& position) {
    if (position_set_ && position == position_) return;
    position_ = position;
    position_set_ = true;
    const double dist = std::hypot(position[0] - bob_[0], position[1] - bob_[1]);
    amplitude_ = std::pow(dist, -scenario_.path_loss_exponent / 2.0);

    const double k_lin = scenario_.k_factor_linear();
    const double p_los = k_lin / (1.0 + k_lin);
    const double p_dif = 1.0 / (1.0 + k_lin);

    // Constant-modulus LOS gain; its phase follows the spatial field.
    const std::complex<double> f0 = basis_.value(0, position);
    const double f0_abs = std::abs(f0);
    los_gain_ = std::sqrt(p_los) * (f0_abs > 0.0 ? f0 / f0_abs : std::complex<double>(1.0, 0.0));

    // Position-determined diffuse part, rescaled so its total power is
    // exactly (1 - fluctuation_share) * p_dif.
    double fixed_power = 0.0;
    for (std::size_t t = 0; t < fixed_.size(); ++t) {
        fixed_[t] = basis_.value(static_cast<std::uint32_t>(t + 1), position) *
                    std::sqrt(profile_[t] * (1.0 - scenario_.fluctuation_share));
        fixed_power += std::norm(fixed_[t]);
    }
    const double target = p_dif * (1.0 - scenario_.fluctuation_share);
    if (fixed_power > 0.0 && target > 0.0) {
        const double rescale = std::sqrt(target / fixed_power);
        for (auto& g : fixed_) g *= rescale;
    }
}

CirRecord NodeChannel::sample_at(std::uint32_t time_index, bool is_alice,
                                 const std::array<double, 2>& position) {
    set_position(position);
    return sample(time_index, is_alice);
}

CirRecord NodeChannel::sample(std::uint32_t time_index, bool is_alice) {
    if (started_ && time_index <= clock_) {
        throw DomainError("NodeChannel: time indices must be strictly increasing");
    }
    const double rho = scenario_.temporal_correlation;
    if (!started_) {
        for (std::size_t t = 0; t < state_.size(); ++t) {
            const double c = fluct_std_[t] * std::sqrt(0.5);
            state_[t] = {c * rng_.normal(), c * rng_.normal()};
        }
        started_ = true;
    } else {
        const auto gap = static_cast<double>(time_index - clock_);
        const double decay = std::pow(rho, gap);
        const double refresh = std::sqrt(std::max(0.0, 1.0 - decay * decay));
        for (std::size_t t = 0; t < state_.size(); ++t) {
            const double c = fluct_std_[t] * std::sqrt(0.5) * refresh;
            state_[t] = decay * state_[t] +
                        std::complex<double>(c * rng_.normal(), c * rng_.normal());
        }
    }
    clock_ = time_index;

    double gain = amplitude_;
    if (scenario_.tx_gain_jitter_db > 0.0) {
        gain *= std::pow(10.0, scenario_.tx_gain_jitter_db * rng_.normal() / 20.0);
    }

    CirRecord rec;
    rec.node_id = node_;
    rec.time_index = time_index;
    rec.is_alice = is_alice;
    rec.cir.assign(scenario_.cir_dim, {0.0, 0.0});
    rec.cir[los_tap_] = gain * los_gain_;
    for (std::size_t t = 0; t < state_.size(); ++t) {
        rec.cir[los_tap_ + 1 + t] = gain * (fixed_[t] + state_[t]);
    }
    if (scenario_.noise_floor > 0.0) {
        double power = scenario_.noise_floor;
        if (scenario_.burst_probability > 0.0 && rng_.uniform() < scenario_.burst_probability) {
            power *= scenario_.burst_factor;
        }
        const double c = std::sqrt(power * 0.5);
        for (auto& v : rec.cir) {
            v += std::complex<double>(c * rng_.normal(), c * rng_.normal());
        }
    }
    return rec;
}

CirRecord cir_for_position(const ScenarioParams& scenario, const NodeGeometry& geometry,
                           std::uint32_t node, std::uint32_t time_index,
                           std::uint64_t dataset_seed) {
    FieldBasis basis(scenario, dataset_seed);
    NodeChannel channel(scenario, geometry, basis, node, dataset_seed);
    return channel.sample(time_index, node == geometry.alice_node_index);
}

ScenarioParams static_scenario(std::uint32_t cir_dim) {
    ScenarioParams p;
    p.carrier_frequency_hz = 5.4e9;
    p.k_factor_db = 12.2;
    p.path_loss_exponent = 1.9;
    p.rms_delay_spread_s = 6.1e-9;
    p.mean_delay_s = 24.4e-9;
    p.num_taps = cir_dim;
    p.cir_dim = cir_dim;
    p.temporal_correlation = 0.95;
    p.noise_floor = 1e-12;
    p.fluctuation_share = 0.005;
    p.correlation_length_m = 0.7;
    return p;
}

ScenarioParams mobile_scenario(std::uint32_t cir_dim) {
    ScenarioParams p;
    p.carrier_frequency_hz = 5.4e9;
    p.k_factor_db = 4.7;
    p.path_loss_exponent = 3.6;
    p.rms_delay_spread_s = 177.4e-9;
    p.mean_delay_s = 644.4e-9;
    p.num_taps = cir_dim;
    p.cir_dim = cir_dim;
    p.temporal_correlation = 0.7;
    p.noise_floor = 3e-6;
    p.fluctuation_share = 0.25;
    p.correlation_length_m = 40.0;
    p.tx_gain_jitter_db = 2.0;
    p.field_kernel = FieldKernel::Rough;
    return p;
}

NodeGeometry static_grid_geometry() {
    // 9 columns x 5 rows around (0, 11.5); adjacent column gaps use the
    // 0.5 m, 1 m and 2 m spacings, rows are 1 m apart.
    const double col_x[9] = {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0};
    const double row_y[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
    NodeGeometry g;
    g.bob_position = {0.0, 0.0};
    g.node_positions.reserve(45);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 9; ++c) {
            g.node_positions.push_back({col_x[c], 11.5 + row_y[r]});
        }
    }
    g.alice_node_index = 22;  // centre of the grid, (0, 11.5)
    return g;
}

NodeGeometry mobile_loop_geometry() {
    const std::size_t nodes = 32;
    const double spacing = 2.0;
    const double radius = static_cast<double>(nodes) * spacing / kTwoPi;
    NodeGeometry g;
    g.bob_position = {274.17, 151.64};
    const double cx = g.bob_position[0] + 4.0;
    const double cy = g.bob_position[1];
    g.node_positions.reserve(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(nodes);
        g.node_positions.push_back({cx + radius * std::cos(a), cy + radius * std::sin(a)});
    }
    g.alice_node_index = 0;  // starting node of the walk
    return g;
}

namespace {

struct PlannedSample {
    std::uint32_t time_index;
    bool is_alice;
    std::array<double, 2> position;
};

struct NodePlan {
    std::uint32_t node;
    std::uint64_t stream_salt = 0;
    // Strictly increasing time order.
    std::vector<PlannedSample> samples;
};

std::vector<CirRecord> generate_node(const ScenarioParams& scenario, const NodeGeometry& geometry,
                                     const FieldBasis& basis, const NodePlan& plan,
                                     std::uint64_t seed) {
    NodeChannel channel(scenario, geometry, basis, plan.node, seed, plan.stream_salt);
    std::vector<CirRecord> out;
    out.reserve(plan.samples.size());
    for (const auto& sample : plan.samples) {
        out.push_back(channel.sample_at(sample.time_index, sample.is_alice, sample.position));
    }
    return out;
}

std::vector<std::vector<CirRecord>> generate_all(const ScenarioParams& scenario,
                                                 const NodeGeometry& geometry,
                                                 const std::vector<NodePlan>& plans,
                                                 std::uint64_t seed, std::size_t threads) {
    FieldBasis basis(scenario, seed);
    std::vector<std::vector<CirRecord>> blocks(plans.size());
    if (threads <= 1 || plans.size() <= 1) {
        for (std::size_t i = 0; i < plans.size(); ++i) {
            blocks[i] = generate_node(scenario, geometry, basis, plans[i], seed);
        }
        return blocks;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= plans.size()) return;
            blocks[i] = generate_node(scenario, geometry, basis, plans[i], seed);
        }
    };
    std::vector<std::thread> pool;
    const std::size_t n = std::min(threads, plans.size());
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return blocks;
}

}  // namespace

Dataset gen_static_dataset(std::uint64_t seed, std::size_t samples_per_node,
                           std::uint32_t cir_dim, std::size_t threads,
                           std::uint32_t alice_node) {
    if (samples_per_node < 1) throw ConfigError("samples_per_node must be >= 1");
    Dataset d;
    d.seed = seed;
    d.scenario = static_scenario(cir_dim);
    d.scenario.validate();
    d.geometry = static_grid_geometry();
    if (alice_node >= d.geometry.node_count()) {
        throw ConfigError("alice_node out of range for the static layout");
    }
    d.geometry.alice_node_index = alice_node;
    d.geometry.validate(d.scenario);

    std::vector<NodePlan> plans(d.geometry.node_count());
    for (std::uint32_t n = 0; n < d.geometry.node_count(); ++n) {
        plans[n].node = n;
        plans[n].samples.reserve(samples_per_node);
        const bool is_alice = n == d.geometry.alice_node_index;
        for (std::uint32_t t = 0; t < samples_per_node; ++t) {
            plans[n].samples.push_back({t, is_alice, d.geometry.node_positions[n]});
        }
    }
    auto blocks = generate_all(d.scenario, d.geometry, plans, seed, threads);
    d.records.reserve(samples_per_node * d.geometry.node_count());
    for (auto& block : blocks) {
        for (auto& rec : block) d.records.push_back(std::move(rec));
    }
    return d;
}

Dataset gen_mobile_dataset(std::uint64_t seed, std::size_t samples_per_node,
                           std::uint32_t eve_interval, std::uint32_t cir_dim,
                           std::size_t threads) {
    if (samples_per_node < 1) throw ConfigError("samples_per_node must be >= 1");
    if (eve_interval < 1) throw ConfigError("eve_interval must be >= 1");
    Dataset d;
    d.seed = seed;
    d.scenario = mobile_scenario(cir_dim);
    d.scenario.validate();
    d.geometry = mobile_loop_geometry();
    d.geometry.validate(d.scenario);
    const auto nodes = static_cast<std::uint32_t>(d.geometry.node_count());
    if (eve_interval >= nodes) throw ConfigError("eve_interval must be below the node count");

    // Walk segment k covers times [k * spn, (k + 1) * spn). The legitimate
    // transmitter works through node k during segment k in a stop-and-go
    // walk: each sample steps a little further along the loop, covering a
    // quarter of the node spacing per visit. The spoofer retraces the same
    // path eve_interval nodes behind, with its own fluctuation process.
    const auto spn = static_cast<std::uint32_t>(samples_per_node);
    const double visit_drift = 0.5;
    auto walk_position = [&](std::uint32_t segment, std::uint32_t t) {
        const auto& from = d.geometry.node_positions[segment];
        const auto& to = d.geometry.node_positions[(segment + 1) % nodes];
        const double frac = visit_drift * static_cast<double>(t) / static_cast<double>(spn);
        return std::array<double, 2>{from[0] + frac * (to[0] - from[0]),
                                     from[1] + frac * (to[1] - from[1])};
    };

    std::vector<NodePlan> plans;
    plans.reserve(2 * nodes);
    for (std::uint32_t n = 0; n < nodes; ++n) {
        NodePlan plan;
        plan.node = n;
        for (std::uint32_t t = 0; t < spn; ++t) {
            plan.samples.push_back({n * spn + t, true, walk_position(n, t)});
        }
        plans.push_back(std::move(plan));
    }
    const std::uint64_t eve_salt = 0x40000000ULL;
    for (std::uint32_t k = eve_interval; k < nodes; ++k) {
        NodePlan plan;
        plan.node = k - eve_interval;
        plan.stream_salt = eve_salt;
        for (std::uint32_t t = 0; t < spn; ++t) {
            plan.samples.push_back({k * spn + t, false, walk_position(k - eve_interval, t)});
        }
        plans.push_back(std::move(plan));
    }
    auto blocks = generate_all(d.scenario, d.geometry, plans, seed, threads);

    // Records grouped per (node, role): all legitimate visits first, then the
    // spoofer visits in walk order.
    for (auto& block : blocks) {
        for (auto& rec : block) d.records.push_back(std::move(rec));
    }
    return d;
}

}  // namespace cirauth
