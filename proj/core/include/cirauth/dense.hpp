// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstdint>
#include <string>

#include "cirauth/matrix.hpp"
#include "cirauth/rng.hpp"

namespace cirauth {

enum class Activation : std::uint8_t { Sigmoid = 0, Tanh = 1, Relu = 2, Identity = 3 };

const char* activation_name(Activation a);

/// Elementwise activation.
Matrix activation_apply(Activation kind, const Matrix& z);

/// Elementwise activation derivative, evaluated at the pre-activation z.
/// The ReLU derivative at exactly 0 is defined as 0.
Matrix activation_derivative(Activation kind, const Matrix& z);

/// Shared optimizer settings for every trainable model in this library.
struct TrainConfig {
    double learning_rate = 1e-3;
    double momentum = 0.9;  // coefficient of the gradient accumulator, in [0, 1)
    std::size_t epochs = 1;
    std::size_t batch_size = 32;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One fully connected layer: out = activation(W * in + b), with momentum
/// accumulators for the gradient-averaging update rule.
struct DenseLayer {
    Matrix weights;  // out x in
    Matrix bias;     // out x 1
    Activation activation = Activation::Identity;
    Matrix weight_momentum;
    Matrix bias_momentum;
    std::string name;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

/// Fan-scaled uniform weight init on +-sqrt(6/(fan_in+fan_out)); zero bias and
/// momentum.
DenseLayer make_dense(std::size_t out_dim, std::size_t in_dim, Activation act, Rng& rng,
                      std::string name = {});

struct LayerCache {
    Matrix pre;  // W * in + b
    Matrix out;  // activation(pre)
};

/// Forward pass over a batch (input is in_dim x batch). Returns both the
/// pre-activation and the output; the backward pass needs the former.
LayerCache dense_forward(const DenseLayer& layer, const Matrix& input);

struct LayerGrads {
    Matrix dw;
    Matrix db;
};

/// Backward pass for one layer. `upstream` is the gradient of the
/// batch-summed loss w.r.t. this layer's output; the returned parameter
/// gradients carry the 1/zeta batch average while the returned input gradient
/// stays un-averaged so layers compose.
LayerGrads dense_backward(const DenseLayer& layer, const Matrix& input, const Matrix& pre,
                          const Matrix& upstream, std::size_t zeta, Matrix* input_grad);

/// Momentum accumulation followed by the parameter update:
/// acc <- momentum * acc + (1 - momentum) * grad;  param <- param - lr * acc.
void momentum_step(DenseLayer& layer, const LayerGrads& grads, const TrainConfig& config);

}  // namespace cirauth
