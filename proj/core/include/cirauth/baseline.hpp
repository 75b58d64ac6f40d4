// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include "cirauth/hvae.hpp"
#include "cirauth/mlp.hpp"

namespace cirauth {

/// Plain auto-encoder baseline. Scores compare hidden codes.
struct PlainAe {
    std::size_t input_dim = 0;
    std::size_t h = 64;
    std::size_t code = 32;
    TrainConfig train;
    Mlp enc;  // input_dim -> h -> h -> code, relu
    Mlp dec;  // code -> h -> h -> input_dim, relu with identity output
};

PlainAe make_plain_ae(std::size_t input_dim, std::size_t h, std::size_t code,
                      const TrainConfig& train);

/// Reconstruction-only training; returns the per-epoch mean loss.
std::vector<EpochLoss> train_plain_ae(PlainAe& model, const Matrix& samples);

Matrix encode_ae(const PlainAe& model, const Matrix& x);

/// Single-unit variational baseline with the standard-normal prior: the
/// Gaussian heads sit on top of the full encoder, mirroring the hierarchical
/// model's layout. Scores compare posterior means.
struct PlainVae {
    std::size_t input_dim = 0;
    std::size_t h = 64;
    std::size_t z = 32;
    double kl_weight = 1.0;
    TrainConfig train;
    Mlp enc;  // input_dim -> h -> h -> h, relu
    DenseLayer mu_head;
    DenseLayer logvar_head;
    Mlp dec;  // z -> h -> h -> input_dim, relu with identity output
};

PlainVae make_plain_vae(std::size_t input_dim, std::size_t h, std::size_t z,
                        const TrainConfig& train, double kl_weight = 1.0);

std::vector<EpochLoss> train_plain_vae(PlainVae& model, const Matrix& samples);

Matrix encode_vae_mu(const PlainVae& model, const Matrix& x);

}  // namespace cirauth
