// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/dense.hpp"

#include <cmath>

namespace cirauth {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Identity: return "identity";
    }
    return "?";
}

Matrix activation_apply(Activation kind, const Matrix& z) {
    Matrix out = z;
    switch (kind) {
        case Activation::Sigmoid:
            for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
            break;
        case Activation::Tanh:
            for (double& v : out.data) v = std::tanh(v);
            break;
        case Activation::Relu:
            for (double& v : out.data) v = v > 0.0 ? v : 0.0;
            break;
        case Activation::Identity:
            break;
    }
    return out;
}

Matrix activation_derivative(Activation kind, const Matrix& z) {
    Matrix out = z;
    switch (kind) {
        case Activation::Sigmoid:
            for (double& v : out.data) {
                const double s = 1.0 / (1.0 + std::exp(-v));
                v = s * (1.0 - s);
            }
            break;
        case Activation::Tanh:
            for (double& v : out.data) {
                const double t = std::tanh(v);
                v = 1.0 - t * t;
            }
            break;
        case Activation::Relu:
            for (double& v : out.data) v = v > 0.0 ? 1.0 : 0.0;
            break;
        case Activation::Identity:
            for (double& v : out.data) v = 1.0;
            break;
    }
    return out;
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (momentum < 0.0 || momentum >= 1.0) throw ConfigError("momentum must be in [0, 1)");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
}

DenseLayer make_dense(std::size_t out_dim, std::size_t in_dim, Activation act, Rng& rng,
                      std::string name) {
    DenseLayer layer;
    layer.name = std::move(name);
    layer.activation = act;
    layer.weights = Matrix(out_dim, in_dim);
    const double bound = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (double& w : layer.weights.data) w = rng.uniform(-bound, bound);
    layer.bias = Matrix(out_dim, 1);
    layer.weight_momentum = Matrix(out_dim, in_dim);
    layer.bias_momentum = Matrix(out_dim, 1);
    return layer;
}

LayerCache dense_forward(const DenseLayer& layer, const Matrix& input) {
    if (input.rows != layer.in_dim()) {
        throw ShapeError("dense_forward(" + layer.name + "): input has " +
                         std::to_string(input.rows) + " rows, layer expects " +
                         std::to_string(layer.in_dim()));
    }
    LayerCache cache;
    cache.pre = multiply(layer.weights, input);
    add_column_broadcast(cache.pre, layer.bias);
    cache.out = activation_apply(layer.activation, cache.pre);
    return cache;
}

LayerGrads dense_backward(const DenseLayer& layer, const Matrix& input, const Matrix& pre,
                          const Matrix& upstream, std::size_t zeta, Matrix* input_grad) {
    require_same_shape(upstream, pre, "dense_backward: upstream vs pre-activation");
    if (input.rows != layer.in_dim() || input.cols != pre.cols) {
        throw ShapeError("dense_backward(" + layer.name + "): cached input shape mismatch");
    }
    const Matrix delta = hadamard(upstream, activation_derivative(layer.activation, pre));
    const double inv_zeta = 1.0 / static_cast<double>(zeta);
    LayerGrads grads;
    grads.dw = multiply_bt(delta, input);
    scale_in_place(grads.dw, inv_zeta);
    grads.db = row_sums(delta);
    scale_in_place(grads.db, inv_zeta);
    if (input_grad != nullptr) *input_grad = multiply_at(layer.weights, delta);
    return grads;
}

void momentum_step(DenseLayer& layer, const LayerGrads& grads, const TrainConfig& config) {
    require_same_shape(grads.dw, layer.weights, "momentum_step: dw");
    require_same_shape(grads.db, layer.bias, "momentum_step: db");
    const double keep = config.momentum;
    const double take = 1.0 - keep;
    for (std::size_t i = 0; i < layer.weights.data.size(); ++i) {
        layer.weight_momentum.data[i] = keep * layer.weight_momentum.data[i] + take * grads.dw.data[i];
        layer.weights.data[i] -= config.learning_rate * layer.weight_momentum.data[i];
    }
    for (std::size_t i = 0; i < layer.bias.data.size(); ++i) {
        layer.bias_momentum.data[i] = keep * layer.bias_momentum.data[i] + take * grads.db.data[i];
        layer.bias.data[i] -= config.learning_rate * layer.bias_momentum.data[i];
    }
}

}  // namespace cirauth
