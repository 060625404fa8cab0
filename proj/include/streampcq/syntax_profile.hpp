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

// Descriptor tables that say where header syntax elements live inside a
// unit payload. The parser walks a table instead of hard-coding one encoder
// release, so syntax drift between releases is a data change.
//
// Profile document (JSON):
//
//   {
//     "profile_name": "tmc13-v23",
//     "unit_types": { "0": "sps", "1": "gps", "3": "aps", ... },
//     "assumptions": { "sps.entropy_continuation_enabled_flag": 0 },
//     "syntax": [
//       { "unit": "aps", "fields": [
//           { "name": "aps_attr_parameter_set_id", "coding": "u", "bits": 4 },
//           { "name": "init_qp_minus4", "coding": "ue" },
//           { "name": "x", "coding": "ue", "when": "some_flag && !other" },
//           { "name": "y", "coding": "u", "bits": "x + 1", "repeat": "x" } ] } ],
//     "tqp_field":  { "field": "aps.init_qp_minus4", "offset": 4 },
//     "tnsl_field": { "field": "geometry_data.trisoup_node_size_log2_minus2",
//                     "offset": 2 }
//   }
//
// Codings: "u" fixed-width unsigned, "ue"/"se" exp-Golomb, "flag" one bit,
// "sn" fixed-width sign-magnitude. Expressions ("when", "bits", "repeat")
// support integers, identifiers, ! - + * == != < <= > >= && || and
// parentheses. A bare identifier names an earlier field of the same unit; a
// qualified one ("gps.flag") names a field of a unit listed earlier in
// "syntax", falling back to "assumptions". Fields that were not present
// evaluate to 0, matching the usual inferred-value rule.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "streampcq/tlv.hpp"

namespace streampcq::gpcc {

class SyntaxExpression {
 public:
  struct Node;
  using Lookup = std::function<std::int64_t(const std::string&)>;

  static SyntaxExpression parse(std::string_view text);
  static SyntaxExpression constant(std::int64_t value);

  std::int64_t evaluate(const Lookup& lookup) const;
  std::vector<std::string> identifiers() const;
  const std::string& text() const noexcept { return text_; }
  bool is_constant() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

enum class FieldCoding {
  kFixedUnsigned,
  kUnsignedExpGolomb,
  kSignedExpGolomb,
  kFlag,
  kSignMagnitude,
};

std::string_view field_coding_name(FieldCoding coding);

struct FieldDescriptor {
  std::string name;
  FieldCoding coding = FieldCoding::kUnsignedExpGolomb;
  std::optional<SyntaxExpression> bit_width;  // fixed-width codings only
  std::optional<SyntaxExpression> presence_condition;
  // Repeated fields keep the last decoded value.
  std::optional<SyntaxExpression> repeat;
};

struct UnitSyntax {
  UnitRole role = UnitRole::kOther;
  std::vector<FieldDescriptor> fields;
};

// A "role.field" reference plus the constant added after decoding (e.g. +4
// for an init_qp_minus4 element).
struct FieldRef {
  UnitRole role = UnitRole::kOther;
  std::string field;
  std::int64_t offset = 0;
};

struct SyntaxDescriptorProfile {
  std::string profile_name;
  UnitTypeMap type_map;
  std::map<std::string, std::int64_t> assumptions;
  std::vector<UnitSyntax> syntax;
  FieldRef tqp_field;
  FieldRef tnsl_field;

  const UnitSyntax* syntax_for(UnitRole role) const;
};

using FieldMap = std::map<std::string, std::int64_t>;
// Fields decoded from units seen earlier in the stream, keyed by role.
using SyntaxContext = std::map<UnitRole, FieldMap>;

// Parses and validates a profile document. Throws InvalidProfile.
SyntaxDescriptorProfile parse_profile(std::string_view json_text);
std::string profile_to_json(const SyntaxDescriptorProfile& profile);

// Profiles compiled into the library, by name.
std::vector<std::string> builtin_profile_names();
// Throws ConfigError for unknown names.
const SyntaxDescriptorProfile& builtin_profile(std::string_view name);

// Decodes the descriptor list targeting this unit's role. Throws
// ProfileMismatch when no descriptor targets the unit, BitstreamExhausted or
// MalformedExpGolomb on bad payloads, and MissingParameterSet when a
// qualified reference has neither a parsed unit nor an assumption.
FieldMap extract_syntax_fields(const TlvUnit& unit,
                               const SyntaxDescriptorProfile& profile,
                               const SyntaxContext& context = {});

// Encodes field values for one role following the profile; absent values are
// written as 0. The payload is padded to a byte boundary. Used to build
// fixtures and round-trip checks.
std::vector<std::uint8_t> write_syntax_fields(UnitRole role, const FieldMap& values,
                                              const SyntaxDescriptorProfile& profile,
                                              const SyntaxContext& context = {});

}  // namespace streampcq::gpcc
