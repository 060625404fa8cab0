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

// Model calibration from a labelled dataset. The pipeline is staged:
//
//   1. texture complexity: per-TQP lines tc_ref ~ tbpp, then a quadratic
//      slope and linear intercept over TQP;
//   2. texture MOS: per-content lines mos ~ tqp at the finest geometry,
//      then the content slopes regressed on per-content TC;
//   3. geometry attenuation: mos / mos_texture averaged per tNSL, fitted by
//      a logistic curve.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "streampcq/dataset.hpp"
#include "streampcq/quality_model.hpp"

namespace streampcq {

struct TqpGroupFit {
  double tqp = 0.0;
  std::size_t records = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  double plcc_tc_tbpp = 0.0;  // NaN when either column is constant
};

struct TcModelFit {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double slope_rss = 0.0;      // quadratic over per-group slopes
  double intercept_rss = 0.0;  // line over per-group intercepts
  std::vector<TqpGroupFit> groups;
};

// Throws MissingReferenceTc when a group has fewer than two records with
// tc_ref, DegenerateDesign with fewer than three TQP groups.
TcModelFit fit_tc_model(const Dataset& dataset);

struct ContentTextureFit {
  std::string content_id;
  double tc = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  std::size_t records = 0;
};

struct TextureFit {
  double alpha = 0.0;
  double beta = 0.0;
  double b = 0.0;
  double rss = 0.0;  // line over (tc, slope) pairs
  double stratum_tnsl = 0.0;
  std::vector<ContentTextureFit> contents;
};

// Where a content's TC comes from during the texture stage.
enum class TextureTcSource {
  kEstimated,  // mean estimate_tc over the content's stratum records
  kReference,  // mean tc_ref over the content's records
};

// How the intercept b is set.
enum class InterceptMode {
  kContentMean,     // mean of per-content mos ~ tqp intercepts
  kMinDistortionMos // mean MOS at (minimal tNSL, minimal TQP)
};

// Fits on records at the dataset's minimal tNSL. tc_params supplies the
// TC coefficients for kEstimated. Throws TooFewTqpLevels, TooFewContents,
// DegenerateDesign (all contents share one TC), MissingReferenceTc.
TextureFit fit_texture_model(const Dataset& dataset, const ModelParams& tc_params,
                             TextureTcSource tc_source = TextureTcSource::kEstimated,
                             InterceptMode intercept = InterceptMode::kContentMean);

struct AttenuationSample {
  double tnsl = 0.0;
  double attenuation = 0.0;
  std::size_t records = 0;
};

struct AttenuationFit {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double rss = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Grid over l2 in [-15, 5] with l1, l3 solved linearly, refined by damped
// Gauss-Newton. Throws DegenerateDesign with fewer than three distinct
// tNSL values. A fit that does not converge is returned with
// converged=false.
AttenuationFit fit_geometry_attenuation(std::span<const AttenuationSample> samples);

// Ratio mos / mos_texture per record, averaged per tNSL.
std::vector<AttenuationSample> attenuation_samples(const Dataset& dataset, const ModelParams& params);

enum class TcModelMode {
  kAuto,     // fit when any record carries tc_ref, else inherit
  kFit,
  kInherit,  // keep a1..b2 from CalibrationOptions::base
};

struct CalibrationOptions {
  TcModelMode tc_model = TcModelMode::kAuto;
  TextureTcSource texture_tc = TextureTcSource::kEstimated;
  InterceptMode intercept = InterceptMode::kContentMean;
  ModelParams base = default_params();
};

struct FitDiagnostics {
  std::string tc_model_source;  // "fitted" or "inherited"
  std::optional<TcModelFit> tc_model;
  TextureFit texture;
  std::vector<AttenuationSample> attenuation_samples;
  AttenuationFit attenuation;
  std::vector<std::string> warnings;
};

struct CalibrationResult {
  ModelParams params;
  FitDiagnostics diagnostics;
};

// Records are processed in (content, tqp, tnsl) order, so the result does
// not depend on input order.
CalibrationResult calibrate_full(const Dataset& dataset, const CalibrationOptions& options = {});

std::string diagnostics_to_json(const FitDiagnostics& diagnostics);

using Calibrator = std::function<ModelParams(const Dataset&)>;
Calibrator default_calibrator(CalibrationOptions options = {});

std::string_view texture_tc_source_name(TextureTcSource source);
std::string_view intercept_mode_name(InterceptMode mode);

}  // namespace streampcq
