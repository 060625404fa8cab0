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

#include "streampcq/quality_model.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "builtin_resources.hpp"
#include "streampcq/error.hpp"

namespace streampcq {

using nlohmann::json;

namespace {

struct NamedCoefficient {
  const char* name;
  double ModelParams::*member;
};

constexpr NamedCoefficient kCoefficients[] = {
    {"b", &ModelParams::b},   {"alpha", &ModelParams::alpha}, {"beta", &ModelParams::beta},
    {"a1", &ModelParams::a1}, {"a2", &ModelParams::a2},       {"a3", &ModelParams::a3},
    {"b1", &ModelParams::b1}, {"b2", &ModelParams::b2},       {"l1", &ModelParams::l1},
    {"l2", &ModelParams::l2}, {"l3", &ModelParams::l3},
};

std::optional<FeatureRange> range_from_json(const json& meta, const char* key) {
  if (!meta.contains(key)) return std::nullopt;
  const auto& r = meta.at(key);
  if (!r.is_array() || r.size() != 2) {
    throw Error(ErrorCode::kInvalidParams, std::string("metadata.") + key + " must be [min, max]");
  }
  return FeatureRange{r[0].get<double>(), r[1].get<double>()};
}

}  // namespace

void ModelParams::validate() const {
  for (const auto& c : kCoefficients) {
    if (!std::isfinite(this->*c.member)) {
      throw Error(ErrorCode::kInvalidParams, std::string("parameter ") + c.name + " is not finite");
    }
  }
}

ModelParams params_from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidParams, std::string("params are not valid JSON: ") + e.what());
  }
  ModelParams p;
  for (const auto& c : kCoefficients) {
    if (!doc.contains(c.name) || !doc.at(c.name).is_number()) {
      throw Error(ErrorCode::kInvalidParams, std::string("params missing numeric '") + c.name + "'");
    }
    p.*c.member = doc.at(c.name).get<double>();
  }
  if (doc.contains("metadata")) {
    const auto& meta = doc.at("metadata");
    for (const auto& [key, value] : meta.items()) {
      if (value.is_string()) p.metadata[key] = value.get<std::string>();
    }
    p.tqp_range = range_from_json(meta, "tqp_range");
    p.tnsl_range = range_from_json(meta, "tnsl_range");
  }
  p.validate();
  return p;
}

std::string params_to_json(const ModelParams& p) {
  json doc = json::object();
  for (const auto& c : kCoefficients) doc[c.name] = p.*c.member;
  json meta = json::object();
  for (const auto& [key, value] : p.metadata) meta[key] = value;
  if (p.tqp_range) meta["tqp_range"] = {p.tqp_range->min, p.tqp_range->max};
  if (p.tnsl_range) meta["tnsl_range"] = {p.tnsl_range->min, p.tnsl_range->max};
  doc["metadata"] = meta;
  return doc.dump(2);
}

const ModelParams& default_params() {
  static const ModelParams params = params_from_json(detail::builtin_default_params());
  return params;
}

double slope_of_tqp(double tqp, const ModelParams& p) {
  return p.a1 * tqp * tqp + p.a2 * tqp + p.a3;
}

double intercept_of_tqp(double tqp, const ModelParams& p) { return p.b1 * tqp + p.b2; }

double estimate_tc(double tqp, double tbpp, const ModelParams& p) {
  return slope_of_tqp(tqp, p) * tbpp + intercept_of_tqp(tqp, p);
}

double texture_mos(double tc, double tqp, const ModelParams& p) {
  return (p.alpha * tc + p.beta) * tqp + p.b;
}

double geometry_attenuation(double tnsl, const ModelParams& p) {
  return p.l1 / (1.0 + std::exp(tnsl + p.l2)) + p.l3;
}

Prediction predict(const FeatureVector& f, const ModelParams& p) {
  Prediction out;
  out.tc_est = estimate_tc(f.tqp, f.tbpp, p);
  out.mos_texture = texture_mos(out.tc_est, f.tqp, p);
  out.attenuation = geometry_attenuation(f.tnsl, p);
  out.mos_est = out.mos_texture * out.attenuation;
  out.out_of_training_range = (p.tqp_range && !p.tqp_range->contains(f.tqp)) ||
                              (p.tnsl_range && !p.tnsl_range->contains(f.tnsl));
  return out;
}

double nmos(double mos_at, double mos_at_tqp_min) {
  if (mos_at_tqp_min == 0.0) {
    throw Error(ErrorCode::kDivisionByZeroMos, "MOS at the minimum TQP is zero");
  }
  return mos_at / mos_at_tqp_min;
}

double clamp_mos(double mos) { return std::clamp(mos, kMosScaleMin, kMosScaleMax); }

}  // namespace streampcq
