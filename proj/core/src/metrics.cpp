// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/metrics.hpp"

#include "cirauth/errors.hpp"

namespace cirauth {

void ConfusionMatrix::add(bool predicted_legitimate, bool actually_legitimate) {
    if (actually_legitimate) {
        predicted_legitimate ? ++tl : ++fa;
    } else {
        predicted_legitimate ? ++fl : ++ta;
    }
}

ConfusionMatrix operator+(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return {a.tl + b.tl, a.fa + b.fa, a.fl + b.fl, a.ta + b.ta};
}

bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return a.tl == b.tl && a.fa == b.fa && a.fl == b.fl && a.ta == b.ta;
}

Rate p_ca(const ConfusionMatrix& cm) {
    const std::uint64_t denom = cm.tl + cm.fl;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(cm.tl) / static_cast<double>(denom);
}

Rate p_noa(const ConfusionMatrix& cm) {
    const std::uint64_t denom = cm.tl + cm.fa;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(cm.tl) / static_cast<double>(denom);
}

Rate f_beta(const ConfusionMatrix& cm, double beta) {
    if (!(beta > 0.0)) throw DomainError("f_beta: beta must be > 0");
    const Rate ca = p_ca(cm);
    const Rate noa = p_noa(cm);
    if (!ca || !noa) return std::nullopt;
    const double b2 = beta * beta;
    const double denom = b2 * *ca + *noa;
    if (denom == 0.0) return std::nullopt;
    return (b2 + 1.0) * *ca * *noa / denom;
}

Rate f1(const ConfusionMatrix& cm) { return f_beta(cm, 1.0); }

}  // namespace cirauth
