// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/mlp.hpp"

namespace cirauth {

MlpTrace mlp_forward(const Mlp& net, const Matrix& input) {
    MlpTrace trace;
    trace.inputs.reserve(net.layers.size());
    trace.caches.reserve(net.layers.size());
    const Matrix* current = &input;
    for (const DenseLayer& layer : net.layers) {
        trace.inputs.push_back(*current);
        trace.caches.push_back(dense_forward(layer, *current));
        current = &trace.caches.back().out;
    }
    return trace;
}

Matrix mlp_apply(const Mlp& net, const Matrix& input) {
    Matrix current = input;
    for (const DenseLayer& layer : net.layers) {
        current = dense_forward(layer, current).out;
    }
    return current;
}

Matrix mlp_backward(const Mlp& net, const MlpTrace& trace, const Matrix& upstream,
                    std::size_t zeta, MlpGrads& grads) {
    grads.layers.resize(net.layers.size());
    Matrix flowing = upstream;
    for (std::size_t l = net.layers.size(); l-- > 0;) {
        Matrix input_grad;
        grads.layers[l] = dense_backward(net.layers[l], trace.inputs[l], trace.caches[l].pre,
                                         flowing, zeta, &input_grad);
        flowing = std::move(input_grad);
    }
    return flowing;
}

void mlp_momentum_step(Mlp& net, const MlpGrads& grads, const TrainConfig& config) {
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        momentum_step(net.layers[l], grads.layers[l], config);
    }
}

}  // namespace cirauth
