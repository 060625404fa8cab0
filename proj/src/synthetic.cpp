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

#include "streampcq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "streampcq/error.hpp"
#include "streampcq/tlv.hpp"

namespace streampcq {

namespace {

double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

std::uint8_t type_for(const gpcc::SyntaxDescriptorProfile& profile, gpcc::UnitRole role) {
  for (const auto& [type, r] : profile.type_map) {
    if (r == role) return type;
  }
  throw Error(ErrorCode::kConfigError, fmt::format("profile '{}' maps no unit type to {}",
                                                   profile.profile_name, gpcc::unit_role_name(role)));
}

}  // namespace

double standard_normal(std::mt19937_64& engine) {
  double u1 = unit_uniform(engine);
  while (u1 == 0.0) u1 = unit_uniform(engine);
  const double u2 = unit_uniform(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Dataset synthetic_dataset(const ModelParams& generating, const SyntheticDatasetSpec& spec) {
  if (spec.contents < 1) throw Error(ErrorCode::kConfigError, "synthetic dataset needs a content");
  std::mt19937_64 engine(spec.seed);
  Dataset out;
  for (std::size_t c = 0; c < spec.contents; ++c) {
    const double frac = spec.contents > 1 ? static_cast<double>(c) / static_cast<double>(spec.contents - 1) : 0.0;
    const double tc = spec.tc_min + frac * (spec.tc_max - spec.tc_min);
    const std::string id = fmt::format("content_{:02}", c);
    for (double tqp : spec.tqps) {
      const double slope = slope_of_tqp(tqp, generating);
      if (slope == 0.0) throw Error(ErrorCode::kConfigError, fmt::format("TC slope vanishes at TQP {}", tqp));
      const double tbpp = (tc - intercept_of_tqp(tqp, generating)) / slope;
      for (double tnsl : spec.tnsls) {
        DatasetRecord r;
        r.content_id = id;
        r.features.content_id = id;
        r.features.tqp = tqp;
        r.features.tbpp = tbpp;
        r.features.tnsl = tnsl;
        r.mos = predict(r.features, generating).mos_est;
        if (spec.mos_noise_sigma > 0.0) r.mos += spec.mos_noise_sigma * standard_normal(engine);
        r.tc_ref = tc;
        if (spec.tc_noise_sigma > 0.0) *r.tc_ref += spec.tc_noise_sigma * standard_normal(engine);
        out.records.push_back(std::move(r));
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> synthetic_stream(const SyntheticStreamSpec& spec,
                                           const gpcc::SyntaxDescriptorProfile& profile) {
  using gpcc::UnitRole;
  std::mt19937_64 engine(spec.seed);
  auto noise = [&](std::size_t n) {
    std::vector<std::uint8_t> bytes(n);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(engine() >> 56);
    return bytes;
  };

  gpcc::SyntaxContext context;
  std::vector<std::uint8_t> stream;
  // Writes the unit header and records what a reader will see in context.
  auto header_unit = [&](UnitRole role, const gpcc::FieldMap& values, std::vector<std::uint8_t> body) {
    auto payload = gpcc::write_syntax_fields(role, values, profile, context);
    gpcc::TlvUnit unit{type_for(profile, role), payload, 0};
    context[role] = gpcc::extract_syntax_fields(unit, profile, context);
    payload.insert(payload.end(), body.begin(), body.end());
    gpcc::append_tlv_unit(stream, unit.unit_type, payload);
  };

  header_unit(UnitRole::kSps, {{"main_profile_compatibility_flag", 1}, {"level", 0}}, {});
  header_unit(UnitRole::kGps,
              {{"geom_unique_points_flag", 1}, {"neighbour_avail_boundary_log2_minus1", 7},
               {"gps_extension_flag", 1}, {"trisoup_enabled_flag", 1}},
              {});
  header_unit(UnitRole::kAps, {{"attr_encoding", 2}, {"init_qp_minus4", spec.tqp - 4}}, {});

  const auto trisoup = profile.tnsl_field.role == UnitRole::kGeometryData;
  gpcc::FieldMap gdu{{"tree_depth_minus1", 5}, {"trisoup_sampling_value_minus1", 0}};
  if (trisoup) gdu[profile.tnsl_field.field] = spec.tnsl - profile.tnsl_field.offset;
  header_unit(UnitRole::kGeometryData, gdu, noise(spec.geometry_bytes));

  // Attribute payload bytes split over the requested unit count.
  const auto units = static_cast<std::size_t>(std::max(1, spec.attribute_units));
  const auto attr_type = type_for(profile, UnitRole::kAttributeData);
  for (std::size_t u = 0; u < units; ++u) {
    const std::size_t share = spec.attribute_bytes / units + (u < spec.attribute_bytes % units ? 1 : 0);
    gpcc::append_tlv_unit(stream, attr_type, noise(share));
  }
  return stream;
}

RatingMatrix synthetic_ratings(const std::vector<double>& true_mos, const SyntheticPanelSpec& spec) {
  std::mt19937_64 engine(spec.seed);
  RatingMatrix m;
  for (std::size_t i = 0; i < true_mos.size(); ++i) m.stimuli.push_back(fmt::format("stim_{:03}", i));
  for (std::size_t o = 0; o < spec.observers; ++o) m.observers.push_back(fmt::format("obs_{:02}", o));
  const std::size_t honest = spec.observers - std::min(spec.adversaries, spec.observers);
  m.scores.resize(true_mos.size());
  for (std::size_t i = 0; i < true_mos.size(); ++i) {
    for (std::size_t o = 0; o < spec.observers; ++o) {
      const double x = std::clamp(true_mos[i] + spec.noise_sigma * standard_normal(engine), 0.0, 100.0);
      m.scores[i].push_back(o < honest ? x : 100.0 - x);
    }
  }
  return m;
}

PointCloud synthetic_cloud(std::size_t points, double luma_sigma, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  PointCloud cloud;
  for (std::size_t i = 0; i < points; ++i) {
    cloud.positions.push_back({unit_uniform(engine), unit_uniform(engine), unit_uniform(engine)});
    const double luma = 128.0 + luma_sigma * standard_normal(engine);
    cloud.colors.push_back({luma, luma, luma});
  }
  return cloud;
}

}  // namespace streampcq
