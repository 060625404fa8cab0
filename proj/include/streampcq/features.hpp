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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "streampcq/syntax_profile.hpp"
#include "streampcq/tlv.hpp"

namespace streampcq {

enum class FeatureProvenance { kParsedFromBitstream, kSidecar };

// The three bitstream features the quality model consumes. tqp and tnsl are
// integers in encoder output but stay real-valued so the same type serves
// sensitivity sweeps.
struct FeatureVector {
  double tqp = 0.0;
  double tbpp = 0.0;   // attribute payload bits per point
  double tnsl = 0.0;
  std::uint64_t point_count = 0;
  std::optional<std::uint64_t> attribute_bits;
  FeatureProvenance provenance = FeatureProvenance::kSidecar;
  std::string content_id;
};

// Throws MissingField when tbpp or tqp is not positive or tnsl is negative.
void validate(const FeatureVector& features);

// Where the TBPP denominator comes from. Both carry the source cloud's
// point count; the distinction is kept for provenance.
struct PointCountSource {
  enum class Kind { kSidecar, kExplicit };
  Kind kind = Kind::kExplicit;
  std::int64_t count = 0;

  static PointCountSource sidecar(std::int64_t n) { return {Kind::kSidecar, n}; }
  static PointCountSource explicit_count(std::int64_t n) { return {Kind::kExplicit, n}; }
};

// tqp and tnsl from the profile's target fields, tbpp as attribute data
// unit bits over the supplied point count. Throws NonPositivePointCount,
// MissingParameterSet, or any framing/syntax error.
FeatureVector extract_features(std::span<const std::uint8_t> stream,
                               const gpcc::SyntaxDescriptorProfile& profile,
                               PointCountSource point_count);

// Sidecar document (JSON): tqp, tnsl, and tbpp or (attribute_bits,
// point_count); optional content_id. When both tbpp forms are present they
// must agree within 1e-9 relative.
FeatureVector load_sidecar(std::string_view document);
std::string sidecar_to_json(const FeatureVector& features);

std::string_view provenance_name(FeatureProvenance provenance);

}  // namespace streampcq
