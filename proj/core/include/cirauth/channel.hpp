// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "cirauth/rng.hpp"

namespace cirauth {

/// Spatial correlation family of the position-determined structure.
enum class FieldKernel : std::uint8_t {
    Smooth = 0,  // exp(-d^2 / (2 L^2)): differentiable small-scale structure
    Rough = 1,   // exp(-d / L): keeps decorrelating at every scale
};

/// Statistical description of one measurement environment.
struct ScenarioParams {
    double carrier_frequency_hz = 5.4e9;
    double k_factor_db = 12.2;        // LOS to diffuse power ratio
    double path_loss_exponent = 1.9;  // power decays as distance^-exponent
    double rms_delay_spread_s = 6.1e-9;
    double mean_delay_s = 24.4e-9;
    std::uint32_t num_taps = 16;  // LOS tap plus exponentially decaying diffuse taps
    std::uint32_t cir_dim = 128;
    double temporal_correlation = 0.95;  // lag-1 coefficient of the tap fluctuations
    double noise_floor = 1e-10;          // per-entry complex noise power

    // Simulator texture: how much diffuse power fluctuates in time vs. being
    // position-determined, over what spatial scale the position-determined
    // structure decorrelates, and how much the per-record transmit gain
    // wanders.
    double fluctuation_share = 0.25;
    double correlation_length_m = 0.7;
    double tx_gain_jitter_db = 0.0;
    // Interference bursts: per-record chance of a noise-power spike.
    double burst_probability = 0.0;
    double burst_factor = 1.0;
    FieldKernel field_kernel = FieldKernel::Smooth;

    void validate() const;
    double half_wavelength_m() const;
    double k_factor_linear() const;  // capped at 60 dB
};

struct NodeGeometry {
    std::vector<std::array<double, 2>> node_positions;
    std::array<double, 2> bob_position{0.0, 0.0};
    std::uint32_t alice_node_index = 0;

    std::size_t node_count() const { return node_positions.size(); }
    double distance_to_bob(std::uint32_t node) const;
    double distance_between(std::uint32_t a, std::uint32_t b) const;

    /// Enforces the half-wavelength separation between every pair of
    /// transmitters and between each transmitter and the receiver.
    void validate(const ScenarioParams& scenario) const;
};

/// One received channel impulse response with its ground-truth label. The
/// label feeds evaluation and the trusted reference-selection step only.
struct CirRecord {
    std::uint32_t node_id = 0;
    std::uint32_t time_index = 0;
    bool is_alice = false;
    std::vector<std::complex<double>> cir;
};

struct Dataset {
    ScenarioParams scenario;
    NodeGeometry geometry;
    std::vector<CirRecord> records;
    std::uint64_t seed = 0;
};

bool operator==(const CirRecord& a, const CirRecord& b);
bool operator==(const Dataset& a, const Dataset& b);

/// Plane-wave expansion shared by all nodes; evaluating it at a position
/// yields tap gains whose spatial correlation decays as a Gaussian kernel
/// with the configured correlation length. One feature bank per tap.
class FieldBasis {
public:
    FieldBasis(const ScenarioParams& scenario, std::uint64_t dataset_seed);

    /// Mean-zero, unit-power complex field value for `tap` at position p.
    std::complex<double> value(std::uint32_t tap, const std::array<double, 2>& p) const;

private:
    struct Feature {
        double kx, ky, phase;
    };
    std::vector<std::vector<Feature>> features_;  // [tap][j]
};

/// Generator for one transmitter visit: a position-determined part (LOS tap
/// plus diffuse profile, re-evaluated when the position moves) and an AR(1)
/// fluctuation that advances with the sample clock. Streams are derived per
/// (node, stream_salt), so generation across visits can run in parallel with
/// sequential-identical results.
class NodeChannel {
public:
    NodeChannel(const ScenarioParams& scenario, const NodeGeometry& geometry,
                const FieldBasis& basis, std::uint32_t node, std::uint64_t dataset_seed,
                std::uint64_t stream_salt = 0);

    /// Draws the CIR at `time_index` from the node's registered position;
    /// calls must use strictly increasing time indices. The AR(1) state
    /// bridges gaps between sample times.
    CirRecord sample(std::uint32_t time_index, bool is_alice);

    /// As sample(), from an explicit position (walking transmitters).
    CirRecord sample_at(std::uint32_t time_index, bool is_alice,
                        const std::array<double, 2>& position);

    std::uint32_t los_tap() const { return los_tap_; }

private:
    void set_position(const std::array<double, 2>& position);

    const ScenarioParams& scenario_;
    const FieldBasis& basis_;
    std::array<double, 2> bob_;
    Rng rng_;
    std::uint32_t node_;
    std::uint32_t los_tap_ = 0;
    std::array<double, 2> position_{0.0, 0.0};
    bool position_set_ = false;
    double amplitude_ = 1.0;  // path loss, amplitude domain
    std::complex<double> los_gain_;
    std::vector<std::complex<double>> fixed_;  // diffuse taps, position-determined
    std::vector<double> profile_;              // diffuse tap power profile (sums to 1)
    std::vector<double> fluct_std_;            // per-tap stationary std (complex power)
    std::vector<std::complex<double>> state_;  // AR(1) fluctuation state
    bool started_ = false;
    std::uint32_t clock_ = 0;
};

/// One-off draw for a single (node, time) pair; successive calls on one
/// NodeChannel are the way to obtain temporally correlated sequences.
CirRecord cir_for_position(const ScenarioParams& scenario, const NodeGeometry& geometry,
                           std::uint32_t node, std::uint32_t time_index,
                           std::uint64_t dataset_seed);

ScenarioParams static_scenario(std::uint32_t cir_dim = 128);
ScenarioParams mobile_scenario(std::uint32_t cir_dim = 128);

/// 45-node grid with 0.5/1/2 m column spacings, receiver at the origin and
/// the reference transmitter at index 22 = (0, 11.5).
NodeGeometry static_grid_geometry();

/// 32-node loop, 2 m spacing, receiver inside the loop.
NodeGeometry mobile_loop_geometry();

/// Static scenario: every node transmits samples_per_node CIRs from a fixed
/// position; alice_node picks the legitimate transmitter (default: the grid
/// centre).
Dataset gen_static_dataset(std::uint64_t seed, std::size_t samples_per_node,
                           std::uint32_t cir_dim = 128, std::size_t threads = 1,
                           std::uint32_t alice_node = 22);

/// Mobile scenario: the legitimate transmitter walks the loop; the spoofer
/// follows the same path eve_interval nodes behind, so for each position k of
/// the walk (k >= eve_interval) the spoofer transmits from node k - eve_interval.
Dataset gen_mobile_dataset(std::uint64_t seed, std::size_t samples_per_node,
                           std::uint32_t eve_interval, std::uint32_t cir_dim = 128,
                           std::size_t threads = 1);

}  // namespace cirauth
