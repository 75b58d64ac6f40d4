// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <string>
#include <variant>

#include "cirauth/baseline.hpp"
#include "cirauth/hvae.hpp"

namespace cirauth {

using AnyModel = std::variant<HvaeModel, PlainAe, PlainVae>;

std::size_t model_input_dim(const AnyModel& model);

// Checkpoint container, little-endian:
//   magic "HVAE" | version u16 | network kind u8 | config block |
//   layer count u32 | per layer: rows u32, cols u32, activation u8,
//   weights f64..., bias f64...
// Weights round-trip bit-exactly. Momentum accumulators are transient
// training state and are not stored; a loaded model is inference-ready.
void save_model(const AnyModel& model, const std::string& path);
AnyModel load_model(const std::string& path);

}  // namespace cirauth
