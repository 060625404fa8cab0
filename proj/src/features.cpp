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

#include "streampcq/features.hpp"

#include <cmath>

#include <json.hpp>

#include "streampcq/error.hpp"

namespace streampcq {

using nlohmann::json;

void validate(const FeatureVector& f) {
  if (!std::isfinite(f.tqp) || f.tqp <= 0) {
    throw Error(ErrorCode::kMissingField, "tqp must be positive, got " + std::to_string(f.tqp));
  }
  if (!std::isfinite(f.tbpp) || f.tbpp <= 0) {
    throw Error(ErrorCode::kMissingField, "tbpp must be positive, got " + std::to_string(f.tbpp));
  }
  if (!std::isfinite(f.tnsl) || f.tnsl < 0) {
    throw Error(ErrorCode::kMissingField, "tnsl must be non-negative, got " + std::to_string(f.tnsl));
  }
}

std::string_view provenance_name(FeatureProvenance provenance) {
  return provenance == FeatureProvenance::kParsedFromBitstream ? "parsed-from-bitstream"
                                                               : "sidecar";
}

FeatureVector extract_features(std::span<const std::uint8_t> stream,
                               const gpcc::SyntaxDescriptorProfile& profile,
                               PointCountSource point_count) {
  if (point_count.count <= 0) {
    throw Error(ErrorCode::kNonPositivePointCount,
                "point count must be positive, got " + std::to_string(point_count.count));
  }

  const auto units = gpcc::read_tlv_units(stream);
  const auto summary = gpcc::summarize_stream(units, profile.type_map);

  std::optional<std::int64_t> tqp;
  std::optional<std::int64_t> tnsl;
  gpcc::SyntaxContext context;
  for (const auto& unit : units) {
    if (tqp && tnsl) break;
    const auto role = gpcc::role_of(profile.type_map, unit.unit_type);
    if (profile.syntax_for(role) == nullptr) continue;
    auto fields = gpcc::extract_syntax_fields(unit, profile, context);

    auto take = [&](const gpcc::FieldRef& ref, std::optional<std::int64_t>& slot) {
      if (slot || ref.role != role) return;
      const auto it = fields.find(ref.field);
      if (it != fields.end()) slot = it->second + ref.offset;
    };
    take(profile.tqp_field, tqp);
    take(profile.tnsl_field, tnsl);
    context[role] = std::move(fields);
  }

  auto missing = [&](const gpcc::FieldRef& ref) {
    return Error(ErrorCode::kMissingParameterSet,
                 "no " + std::string(gpcc::unit_role_name(ref.role)) + " unit carries '" +
                     ref.field + "'");
  };
  if (!tqp) throw missing(profile.tqp_field);
  if (!tnsl) throw missing(profile.tnsl_field);

  FeatureVector f;
  f.tqp = static_cast<double>(*tqp);
  f.tnsl = static_cast<double>(*tnsl);
  f.point_count = static_cast<std::uint64_t>(point_count.count);
  f.attribute_bits = summary.attribute_payload_bits;
  f.tbpp = static_cast<double>(summary.attribute_payload_bits) /
           static_cast<double>(point_count.count);
  f.provenance = FeatureProvenance::kParsedFromBitstream;
  return f;
}

FeatureVector load_sidecar(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("sidecar is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "sidecar must be a JSON object");

  auto number = [&](const char* key) -> std::optional<double> {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    if (!doc.at(key).is_number()) {
      throw Error(ErrorCode::kParseError, std::string("sidecar field '") + key + "' is not a number");
    }
    return doc.at(key).get<double>();
  };

  FeatureVector f;
  f.provenance = FeatureProvenance::kSidecar;
  const auto tqp = number("tqp");
  const auto tnsl = number("tnsl");
  const auto tbpp = number("tbpp");
  const auto bits = number("attribute_bits");
  const auto count = number("point_count");
  if (!tqp) throw Error(ErrorCode::kMissingField, "tqp");
  if (!tnsl) throw Error(ErrorCode::kMissingField, "tnsl");

  f.tqp = *tqp;
  f.tnsl = *tnsl;
  if (count) {
    if (*count <= 0) throw Error(ErrorCode::kNonPositivePointCount, "point_count must be positive");
    f.point_count = static_cast<std::uint64_t>(*count);
  }
  if (bits) f.attribute_bits = static_cast<std::uint64_t>(*bits);

  if (bits && count) {
    const double derived = *bits / *count;
    if (tbpp && std::abs(*tbpp - derived) > 1e-9 * std::abs(derived)) {
      throw Error(ErrorCode::kInconsistentTbpp,
                  "tbpp " + std::to_string(*tbpp) + " disagrees with attribute_bits/point_count " +
                      std::to_string(derived));
    }
    f.tbpp = tbpp ? *tbpp : derived;
  } else if (tbpp) {
    f.tbpp = *tbpp;
  } else {
    throw Error(ErrorCode::kMissingField, "tbpp");
  }

  if (doc.contains("content_id") && doc.at("content_id").is_string()) {
    f.content_id = doc.at("content_id").get<std::string>();
  }
  validate(f);
  return f;
}

std::string sidecar_to_json(const FeatureVector& f) {
  json doc;
  if (!f.content_id.empty()) doc["content_id"] = f.content_id;
  doc["tqp"] = f.tqp;
  doc["tbpp"] = f.tbpp;
  doc["tnsl"] = f.tnsl;
  if (f.point_count > 0) doc["point_count"] = f.point_count;
  if (f.attribute_bits) doc["attribute_bits"] = *f.attribute_bits;
  doc["provenance"] = provenance_name(f.provenance);
  return doc.dump(2);
}

}  // namespace streampcq
