// Copyright 2026 The streamPCQ Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace streampcq::gpcc {

// Size of the type + length header preceding every payload.
inline constexpr std::size_t kTlvHeaderBytes = 5;

// One type-length-value record: unit_type u(8), payload_length u(32)
// big-endian, then payload_length bytes.
struct TlvUnit {
  std::uint8_t unit_type = 0;
  std::vector<std::uint8_t> payload;
  // Byte offset of the unit's header within the stream.
  std::size_t stream_offset = 0;

  std::uint32_t payload_length() const noexcept {
    return static_cast<std::uint32_t>(payload.size());
  }
};

// Splits a stream into units. Throws EmptyStream for zero bytes and
// TruncatedUnit (with the unit's offset) when a header or payload is cut short.
std::vector<TlvUnit> read_tlv_units(std::span<const std::uint8_t> stream);

// Inverse of read_tlv_units.
std::vector<std::uint8_t> write_tlv_units(std::span<const TlvUnit> units);
void append_tlv_unit(std::vector<std::uint8_t>& out, std::uint8_t unit_type,
                     std::span<const std::uint8_t> payload);

enum class UnitRole {
  kSps,
  kGps,
  kAps,
  kGeometryData,
  kAttributeData,
  kOther,
};

std::string_view unit_role_name(UnitRole role);
// Accepts the names produced by unit_role_name; throws InvalidProfile otherwise.
UnitRole parse_unit_role(std::string_view name);

// unit_type -> role; types absent from the map are treated as kOther.
using UnitTypeMap = std::map<std::uint8_t, UnitRole>;

UnitRole role_of(const UnitTypeMap& type_map, std::uint8_t unit_type);

struct UnitTally {
  std::size_t count = 0;
  std::uint64_t payload_bytes = 0;
};

struct StreamSummary {
  std::map<std::uint8_t, UnitTally> units_by_type;
  std::map<UnitRole, UnitTally> units_by_role;
  std::uint64_t attribute_payload_bits = 0;
  std::uint64_t geometry_payload_bits = 0;
};

StreamSummary summarize_stream(std::span<const TlvUnit> units,
                               const UnitTypeMap& type_map);

}  // namespace streampcq::gpcc
