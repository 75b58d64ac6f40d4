// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/normalize.hpp"

#include <cmath>

#include "cirauth/errors.hpp"

namespace cirauth {

const char* feature_mode_name(FeatureMode mode) {
    return mode == FeatureMode::Magnitude ? "magnitude" : "reim";
}

Matrix extract_features(const std::vector<CirRecord>& records, FeatureMode mode) {
    if (records.empty()) throw DomainError("extract_features: empty record set");
    const std::size_t dim = records.front().cir.size();
    const std::size_t feat = mode == FeatureMode::Magnitude ? dim : 2 * dim;
    Matrix out(feat, records.size());
    for (std::size_t c = 0; c < records.size(); ++c) {
        const auto& cir = records[c].cir;
        if (cir.size() != dim) throw ShapeError("extract_features: inconsistent CIR lengths");
        if (mode == FeatureMode::Magnitude) {
            for (std::size_t i = 0; i < dim; ++i) out(i, c) = std::abs(cir[i]);
        } else {
            for (std::size_t i = 0; i < dim; ++i) {
                out(i, c) = cir[i].real();
                out(dim + i, c) = cir[i].imag();
            }
        }
    }
    return out;
}

NormStats normalize_fit(const Matrix& train) {
    if (train.cols == 0) throw DomainError("normalize_fit: empty training set");
    NormStats stats;
    stats.mean = Matrix(train.rows, 1);
    stats.scale = Matrix(train.rows, 1);
    const double inv_n = 1.0 / static_cast<double>(train.cols);
    for (std::size_t i = 0; i < train.rows; ++i) {
        const double* row = train.data.data() + i * train.cols;
        double mean = 0.0;
        for (std::size_t j = 0; j < train.cols; ++j) mean += row[j];
        mean *= inv_n;
        double var = 0.0;
        for (std::size_t j = 0; j < train.cols; ++j) {
            const double d = row[j] - mean;
            var += d * d;
        }
        var *= inv_n;
        stats.mean(i, 0) = mean;
        if (var > 0.0) {
            stats.scale(i, 0) = std::sqrt(var);
        } else {
            stats.scale(i, 0) = 1.0;
            stats.zero_variance_dims.push_back(static_cast<std::uint32_t>(i));
        }
    }
    return stats;
}

Matrix normalize_apply(const Matrix& x, const NormStats& stats) {
    if (x.rows != stats.mean.rows) {
        throw ShapeError("normalize_apply: feature dimension mismatch");
    }
    Matrix out = x;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double mean = stats.mean(i, 0);
        const double inv = 1.0 / stats.scale(i, 0);
        double* row = out.data.data() + i * out.cols;
        for (std::size_t j = 0; j < out.cols; ++j) row[j] = (row[j] - mean) * inv;
    }
    return out;
}

Normalized normalize(const Matrix& train) {
    Normalized result;
    result.stats = normalize_fit(train);
    result.samples = normalize_apply(train, result.stats);
    return result;
}

}  // namespace cirauth
