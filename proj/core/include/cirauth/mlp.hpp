// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <vector>

#include "cirauth/dense.hpp"

namespace cirauth {

/// A plain stack of dense layers.
struct Mlp {
    std::vector<DenseLayer> layers;

    std::size_t in_dim() const { return layers.front().in_dim(); }
    std::size_t out_dim() const { return layers.back().out_dim(); }
};

struct MlpTrace {
    // inputs[l] is what layer l consumed; caches[l] its pre-activation/output.
    std::vector<Matrix> inputs;
    std::vector<LayerCache> caches;

    const Matrix& output() const { return caches.back().out; }
};

struct MlpGrads {
    std::vector<LayerGrads> layers;
};

MlpTrace mlp_forward(const Mlp& net, const Matrix& input);

/// Inference-only forward (no caches kept).
Matrix mlp_apply(const Mlp& net, const Matrix& input);

/// Backpropagates `upstream` (gradient of the batch-summed loss w.r.t. the
/// stack output) and returns the gradient w.r.t. the stack input.
Matrix mlp_backward(const Mlp& net, const MlpTrace& trace, const Matrix& upstream,
                    std::size_t zeta, MlpGrads& grads);

void mlp_momentum_step(Mlp& net, const MlpGrads& grads, const TrainConfig& config);

}  // namespace cirauth
