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

// Seeded synthetic data: labelled datasets drawn from a known model, and
// TLV streams whose parameter sets carry a chosen (TQP, tNSL).

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "streampcq/dataset.hpp"
#include "streampcq/quality_model.hpp"
#include "streampcq/reference_tc.hpp"
#include "streampcq/subjective.hpp"
#include "streampcq/syntax_profile.hpp"

namespace streampcq {

inline constexpr std::uint64_t kSyntheticSeed = 7;

// Box-Muller on 53-bit uniforms from the engine, so draws replay across
// standard libraries.
double standard_normal(std::mt19937_64& engine);

struct SyntheticDatasetSpec {
  std::size_t contents = 20;
  std::vector<double> tqps{28, 34, 40, 46, 51};
  std::vector<double> tnsls{3, 4, 5, 6};
  // Content texture complexities are spread evenly over [tc_min, tc_max].
  double tc_min = 6.0;
  double tc_max = 36.0;
  double mos_noise_sigma = 0.0;
  double tc_noise_sigma = 0.0;
  std::uint64_t seed = kSyntheticSeed;
};

// Each content has a fixed TC; its TBPP at a TQP inverts the TC line, and
// its MOS is the generating model's prediction plus optional noise.
Dataset synthetic_dataset(const ModelParams& generating, const SyntheticDatasetSpec& spec = {});

struct SyntheticStreamSpec {
  int tqp = 40;
  int tnsl = 3;
  std::size_t geometry_bytes = 256;
  std::size_t attribute_bytes = 1024;  // total attribute unit payload
  int attribute_units = 1;
  std::uint64_t seed = kSyntheticSeed;
};

// sps, gps, aps, geometry_data and attribute_data units laid out as the
// profile describes; payload bodies are seeded noise.
std::vector<std::uint8_t> synthetic_stream(const SyntheticStreamSpec& spec,
                                           const gpcc::SyntaxDescriptorProfile& profile);

struct SyntheticPanelSpec {
  std::size_t observers = 30;
  std::size_t adversaries = 0;  // score 100 - x instead of x
  double noise_sigma = 8.0;
  std::uint64_t seed = kSyntheticSeed;
};

// Honest observers score true_mos + N(0, noise_sigma^2), clipped to
// [0, 100]; adversaries (the last observers) mirror the honest score.
RatingMatrix synthetic_ratings(const std::vector<double>& true_mos, const SyntheticPanelSpec& spec = {});

// Uniform positions in a unit cube; grey colors whose luma is
// 128 + N(0, luma_sigma^2).
PointCloud synthetic_cloud(std::size_t points, double luma_sigma, std::uint64_t seed = kSyntheticSeed);

}  // namespace streampcq
