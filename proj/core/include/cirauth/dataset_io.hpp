// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include <string>

#include "cirauth/channel.hpp"

namespace cirauth {

// Dataset container, little-endian throughout:
//   magic "CIR1" | version u16 | scenario block | geometry block | seed u64 |
//   record count u64 | records | crc32 u32
// The CRC covers everything between the magic and the checksum. Records are
//   node_id u32 | time_index u32 | is_alice u8 | cir_dim x (re f64, im f64).
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

/// Import externally supplied CIRs. Expected header:
///   node_id,time_index,is_alice,re_0,im_0,...
/// Geometry is unknown for imported data, so nodes are placed on a synthetic
/// 1 m line; scenario parameters fall back to the static defaults with the
/// imported dimension.
Dataset import_dataset_csv(const std::string& path);

/// Binary for *.cir, CSV import for *.csv.
Dataset load_dataset_auto(const std::string& path);

}  // namespace cirauth
