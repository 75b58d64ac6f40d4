// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstdint>
#include <optional>

namespace cirauth {

/// Authentication result against a ratio-undefined case: 0/0 yields an empty
/// optional, never a silent zero. Spoofer-only batches make this reachable.
using Rate = std::optional<double>;

struct ConfusionMatrix {
    std::uint64_t tl = 0;  // legitimate signal authenticated as legitimate
    std::uint64_t fa = 0;  // legitimate signal flagged as attack
    std::uint64_t fl = 0;  // spoofed signal authenticated as legitimate
    std::uint64_t ta = 0;  // spoofed signal flagged as attack

    void add(bool predicted_legitimate, bool actually_legitimate);
    std::uint64_t total() const { return tl + fa + fl + ta; }
};

ConfusionMatrix operator+(const ConfusionMatrix& a, const ConfusionMatrix& b);
bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b);

/// Correct authentication rate (precision): TL / (TL + FL).
Rate p_ca(const ConfusionMatrix& cm);

/// Non-omission authentication rate (recall): TL / (TL + FA).
Rate p_noa(const ConfusionMatrix& cm);

/// (beta^2 + 1) * p_ca * p_noa / (beta^2 * p_ca + p_noa); undefined components
/// propagate, as does a zero denominator.
Rate f_beta(const ConfusionMatrix& cm, double beta);

/// Harmonic mean of p_ca and p_noa.
Rate f1(const ConfusionMatrix& cm);

}  // namespace cirauth
