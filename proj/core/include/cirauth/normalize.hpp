// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstdint>
#include <vector>

#include "cirauth/channel.hpp"
#include "cirauth/matrix.hpp"

namespace cirauth {

/// How a complex CIR becomes a real feature vector.
enum class FeatureMode : std::uint8_t {
    Magnitude = 0,  // |x_i|, dimension D
    ReIm = 1,       // [Re; Im], dimension 2D
};

const char* feature_mode_name(FeatureMode mode);

/// One column per record, features down the rows.
Matrix extract_features(const std::vector<CirRecord>& records, FeatureMode mode);

/// Per-dimension standardization statistics fitted on a training set.
struct NormStats {
    Matrix mean;   // F x 1
    Matrix scale;  // F x 1; 1.0 on flagged dimensions
    std::vector<std::uint32_t> zero_variance_dims;

    bool any_zero_variance() const { return !zero_variance_dims.empty(); }
};

/// Fits mean and standard deviation per feature dimension. Dimensions with
/// zero variance get scale 1 (mean-centering only) and are flagged.
NormStats normalize_fit(const Matrix& train);

/// (x - mean) / scale, column-wise.
Matrix normalize_apply(const Matrix& x, const NormStats& stats);

struct Normalized {
    Matrix samples;
    NormStats stats;
};

/// Fit on `train` and return the standardized training matrix with the stats,
/// so held-out data can reuse them.
Normalized normalize(const Matrix& train);

}  // namespace cirauth
