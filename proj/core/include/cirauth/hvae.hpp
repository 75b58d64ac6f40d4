// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstdint>
#include <vector>

#include "cirauth/kl.hpp"
#include "cirauth/mlp.hpp"

namespace cirauth {

/// Which divergence drives the double-peak latent unit.
enum class KlMode : std::uint8_t { Bound = 0, Exact = 1 };

const char* kl_mode_name(KlMode mode);

struct HvaeConfig {
    std::size_t input_dim = 128;
    std::size_t h = 64;  // width of the compression stage
    std::size_t z = 32;  // width of each latent unit
    double double_peak_m = 1.0;     // peak offset of the two-peak prior
    double double_peak_s = 1.0;     // peak width of the two-peak prior
    double prior_weight = 0.5;      // mixture weight; the closed forms assume 1/2
    double kl2_weight = 1.0;
    double kl3_weight = 1.0;
    KlMode kl_mode = KlMode::Bound;
    TrainConfig train;

    void validate() const;
};

/// Latent unit: two linear heads emitting the Gaussian parameters plus a
/// tanh decoder back to the hidden space.
struct VaeUnit {
    DenseLayer mu_head;      // h -> z, identity
    DenseLayer logvar_head;  // h -> z, identity
    DenseLayer dec;          // z -> h, tanh
};

/// Compression encoder/decoder around two latent units. Every input-to-output
/// path crosses exactly 8 dense layers: 3 (encoder) + 1 (head) + 1 (unit
/// decoder) + 3 (decoder).
struct HvaeModel {
    HvaeConfig config;
    Mlp enc;  // input_dim -> h -> h -> h, relu
    Mlp dec;  // h -> h -> h -> input_dim, relu with identity output
    VaeUnit unit1;  // standard-normal prior, carries reconstruction detail
    VaeUnit unit2;  // double-peak prior, carries the authentication embedding

    std::size_t path_layer_count() const { return enc.layers.size() + 2 + dec.layers.size(); }
};

HvaeModel make_hvae(const HvaeConfig& config);

/// Per-sample noise for the reparameterized draws, z x batch each.
struct HvaeNoise {
    Matrix eps1;
    Matrix eps2;
};

HvaeNoise draw_hvae_noise(const HvaeConfig& config, std::size_t batch, Rng& rng);

/// z = mu + eps * sigma, elementwise.
Matrix reparameterize(const LatentGaussian& g, const Matrix& eps);

struct UnitTrace {
    LayerCache mu_cache;
    LayerCache logvar_cache;
    Matrix logvar;      // clamped to [-10, 10] before exponentiation
    Matrix clamp_mask;  // 1 where the raw head output was inside the clamp
    Matrix sigma;
    Matrix eps;
    Matrix z;
    LayerCache dec_cache;

    LatentGaussian gaussian() const { return {mu_cache.out, sigma}; }
};

struct HvaeTrace {
    MlpTrace enc;
    UnitTrace unit1;
    UnitTrace unit2;
    Matrix hidden_hat;  // unit1 decode + unit2 decode
    MlpTrace dec;

    const Matrix& hidden() const { return enc.caches.back().out; }
    const Matrix& reconstruction() const { return dec.caches.back().out; }
};

/// Forward pass over a batch (input_dim x batch). Passing nullptr for noise
/// runs the deterministic path (z = mu), which is what authentication uses.
HvaeTrace forward_hvae(const HvaeModel& model, const Matrix& x, const HvaeNoise* noise);

/// Mean over the batch of the squared reconstruction error.
double loss_ae(const Matrix& x, const Matrix& x_hat);

/// Hidden-space reconstruction (unit-variance Gaussian likelihood, constants
/// dropped) plus the weighted standard-normal divergence of unit 1.
double loss_z1(const HvaeTrace& trace, double kl2_weight);

/// Weighted double-peak divergence of unit 2, bound or exact per config.
double loss_z2(const HvaeTrace& trace, const HvaeConfig& config);

struct LossBreakdown {
    double total = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
};

LossBreakdown total_loss(const HvaeTrace& trace, const Matrix& x, const HvaeConfig& config);

struct HvaeGrads {
    MlpGrads enc;
    MlpGrads dec;
    LayerGrads mu1, logvar1, dec1;
    LayerGrads mu2, logvar2, dec2;
};

/// Analytic gradients of the total loss for the whole stack; the
/// reparameterized samples carry the latent-head gradients.
void hvae_backward(const HvaeModel& model, const HvaeTrace& trace, const Matrix& x,
                   HvaeGrads& grads);

void hvae_momentum_step(HvaeModel& model, const HvaeGrads& grads);

struct EpochLoss {
    double total = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double l3 = 0.0;
};

/// Mini-batch gradient descent with momentum over the summed objective.
/// `reference_column` marks the trusted pilot sample inside `samples`; it
/// trains like any other sample. Aborts with NumericError on non-finite loss.
std::vector<EpochLoss> train_hvae(HvaeModel& model, const Matrix& samples,
                                  std::size_t reference_column);

/// Deterministic embedding used for authentication: the unit-2 posterior mean.
Matrix encode_z2(const HvaeModel& model, const Matrix& x);

}  // namespace cirauth
