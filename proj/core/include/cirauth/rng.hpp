// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <cstdint>

namespace cirauth {

// Self-contained xoshiro256++ generator. The standard <random> distributions
// are implementation-defined, which would break the bit-identical-output
// guarantees of datasets and checkpoints across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1).
    double uniform();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller (one spare cached per pair).
    double normal();

    /// Derive an independent stream, e.g. one per simulated node.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

private:
    std::uint64_t state_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 step, used for seeding and stream derivation.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace cirauth
