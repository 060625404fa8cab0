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

#include "streampcq/tlv.hpp"

#include <string>

#include "streampcq/error.hpp"

namespace streampcq::gpcc {

std::vector<TlvUnit> read_tlv_units(std::span<const std::uint8_t> stream) {
  if (stream.empty()) throw Error(ErrorCode::kEmptyStream, "stream has no bytes");

  std::vector<TlvUnit> units;
  std::size_t pos = 0;
  while (pos < stream.size()) {
    const std::size_t start = pos;
    if (stream.size() - pos < kTlvHeaderBytes) {
      throw Error(ErrorCode::kTruncatedUnit,
                  "stream ends inside a unit header at offset " + std::to_string(start),
                  start);
    }
    TlvUnit unit;
    unit.unit_type = stream[pos];
    const std::uint32_t length = (std::uint32_t{stream[pos + 1]} << 24) |
                                 (std::uint32_t{stream[pos + 2]} << 16) |
                                 (std::uint32_t{stream[pos + 3]} << 8) |
                                 std::uint32_t{stream[pos + 4]};
    pos += kTlvHeaderBytes;
    if (stream.size() - pos < length) {
      throw Error(ErrorCode::kTruncatedUnit,
                  "unit at offset " + std::to_string(start) + " declares " +
                      std::to_string(length) + " payload bytes, " +
                      std::to_string(stream.size() - pos) + " remain",
                  start);
    }
    unit.payload.assign(stream.begin() + pos, stream.begin() + pos + length);
    unit.stream_offset = start;
    pos += length;
    units.push_back(std::move(unit));
  }
  return units;
}

void append_tlv_unit(std::vector<std::uint8_t>& out, std::uint8_t unit_type,
                     std::span<const std::uint8_t> payload) {
  const auto length = static_cast<std::uint32_t>(payload.size());
  out.push_back(unit_type);
  out.push_back(static_cast<std::uint8_t>(length >> 24));
  out.push_back(static_cast<std::uint8_t>(length >> 16));
  out.push_back(static_cast<std::uint8_t>(length >> 8));
  out.push_back(static_cast<std::uint8_t>(length));
  out.insert(out.end(), payload.begin(), payload.end());
}

std::vector<std::uint8_t> write_tlv_units(std::span<const TlvUnit> units) {
  std::vector<std::uint8_t> out;
  for (const auto& unit : units) append_tlv_unit(out, unit.unit_type, unit.payload);
  return out;
}

std::string_view unit_role_name(UnitRole role) {
  switch (role) {
    case UnitRole::kSps: return "sps";
    case UnitRole::kGps: return "gps";
    case UnitRole::kAps: return "aps";
    case UnitRole::kGeometryData: return "geometry_data";
    case UnitRole::kAttributeData: return "attribute_data";
    case UnitRole::kOther: return "other";
  }
  return "other";
}

UnitRole parse_unit_role(std::string_view name) {
  for (auto role : {UnitRole::kSps, UnitRole::kGps, UnitRole::kAps,
                    UnitRole::kGeometryData, UnitRole::kAttributeData,
                    UnitRole::kOther}) {
    if (unit_role_name(role) == name) return role;
  }
  throw Error(ErrorCode::kInvalidProfile, "unknown unit role '" + std::string(name) + "'");
}

UnitRole role_of(const UnitTypeMap& type_map, std::uint8_t unit_type) {
  const auto it = type_map.find(unit_type);
  return it == type_map.end() ? UnitRole::kOther : it->second;
}

StreamSummary summarize_stream(std::span<const TlvUnit> units,
                               const UnitTypeMap& type_map) {
  StreamSummary summary;
  for (const auto& unit : units) {
    auto& by_type = summary.units_by_type[unit.unit_type];
    ++by_type.count;
    by_type.payload_bytes += unit.payload_length();

    const UnitRole role = role_of(type_map, unit.unit_type);
    auto& by_role = summary.units_by_role[role];
    ++by_role.count;
    by_role.payload_bytes += unit.payload_length();

    if (role == UnitRole::kAttributeData) {
      summary.attribute_payload_bits += 8 * std::uint64_t{unit.payload_length()};
    } else if (role == UnitRole::kGeometryData) {
      summary.geometry_payload_bits += 8 * std::uint64_t{unit.payload_length()};
    }
  }
  return summary;
}

}  // namespace streampcq::gpcc
