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

// Closed-form streamPCQ-TL quality model.
//
//   TC      = s(TQP) * TBPP + i(TQP)
//   s(TQP)  = a1 * TQP^2 + a2 * TQP + a3
//   i(TQP)  = b1 * TQP + b2
//   MOS_T   = (alpha * TC + beta) * TQP + b
//   D_G     = l1 / (1 + exp(tNSL + l2)) + l3
//   MOS_est = MOS_T * D_G
//
// All functions are pure; ModelParams may be shared across threads.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "streampcq/features.hpp"

namespace streampcq {

struct FeatureRange {
  double min = 0.0;
  double max = 0.0;
  bool contains(double v) const { return v >= min && v <= max; }
};

struct ModelParams {
  double b = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;

  // Fit provenance. Free-form string entries plus the feature ranges seen in
  // training, used to flag extrapolation.
  std::map<std::string, std::string> metadata;
  std::optional<FeatureRange> tqp_range;
  std::optional<FeatureRange> tnsl_range;

  // Throws InvalidParams when any coefficient is not finite.
  void validate() const;
};

// The published WPC6.0 fit, embedded from params/default.json.
const ModelParams& default_params();

ModelParams params_from_json(std::string_view document);
std::string params_to_json(const ModelParams& params);

struct Prediction {
  double mos_est = 0.0;
  double mos_texture = 0.0;
  double attenuation = 0.0;
  double tc_est = 0.0;
  // Set when a feature lies outside the params' training ranges. The model
  // still evaluates.
  bool out_of_training_range = false;
};

double slope_of_tqp(double tqp, const ModelParams& p);
double intercept_of_tqp(double tqp, const ModelParams& p);
double estimate_tc(double tqp, double tbpp, const ModelParams& p);
double texture_mos(double tc, double tqp, const ModelParams& p);
double geometry_attenuation(double tnsl, const ModelParams& p);

Prediction predict(const FeatureVector& features, const ModelParams& p);

// MOS at a setting over MOS at the minimum TQP. Throws DivisionByZeroMos.
double nmos(double mos_at, double mos_at_tqp_min);

// Optional output clamp to the subjective scale; off by default everywhere.
inline constexpr double kMosScaleMin = 1.0;
inline constexpr double kMosScaleMax = 100.0;
double clamp_mos(double mos);

}  // namespace streampcq
