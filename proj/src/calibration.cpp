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

#include "streampcq/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include <fmt/format.h>
#include <json.hpp>

#include "streampcq/error.hpp"
#include "streampcq/least_squares.hpp"
#include "streampcq/metrics.hpp"

namespace streampcq {

namespace {

// Records in (content, tqp, tnsl) order: every accumulation below walks
// this order, which makes the fit independent of the input order.
std::vector<const DatasetRecord*> canonical_order(const Dataset& dataset) {
  std::vector<const DatasetRecord*> out;
  out.reserve(dataset.records.size());
  for (const auto& r : dataset.records) out.push_back(&r);
  std::sort(out.begin(), out.end(), [](const DatasetRecord* a, const DatasetRecord* b) {
    return std::tie(a->content_id, a->features.tqp, a->features.tnsl) <
           std::tie(b->content_id, b->features.tqp, b->features.tnsl);
  });
  return out;
}

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Re-throws a least-squares error with the stage that raised it.
template <typename Fn>
auto in_stage(std::string_view stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", stage, e.what()));
  }
}

double logistic(double tnsl, double l2) { return 1.0 / (1.0 + std::exp(tnsl + l2)); }

}  // namespace

std::string_view texture_tc_source_name(TextureTcSource source) {
  return source == TextureTcSource::kEstimated ? "estimated" : "reference";
}

std::string_view intercept_mode_name(InterceptMode mode) {
  return mode == InterceptMode::kContentMean ? "content-mean" : "min-distortion-mos";
}

//============================================================================
// Texture complexity

TcModelFit fit_tc_model(const Dataset& dataset) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> groups;
  std::map<double, std::size_t> seen;
  for (const auto* r : canonical_order(dataset)) {
    ++seen[r->features.tqp];
    if (!r->tc_ref) continue;
    groups[r->features.tqp].first.push_back(r->features.tbpp);
    groups[r->features.tqp].second.push_back(*r->tc_ref);
  }
  for (const auto& [tqp, count] : seen) {
    if (groups[tqp].first.size() < 2) {
      throw Error(ErrorCode::kMissingReferenceTc,
                  fmt::format("TQP {} has {} records with tc_ref, need 2", tqp, groups[tqp].first.size()));
    }
  }
  if (groups.size() < 3) {
    throw Error(ErrorCode::kDegenerateDesign,
                fmt::format("TC model needs three TQP groups, got {}", groups.size()));
  }

  TcModelFit fit;
  std::vector<double> tqps;
  std::vector<double> slopes;
  std::vector<double> intercepts;
  for (const auto& [tqp, xy] : groups) {
    const auto& [tbpp, tc] = xy;
    const LinearFit line = in_stage(fmt::format("TC line at TQP {}", tqp),
                                    [&] { return fit_linear(tbpp, tc); });
    TqpGroupFit g;
    g.tqp = tqp;
    g.records = tbpp.size();
    g.slope = line.slope;
    g.intercept = line.intercept;
    g.rss = line.rss;
    try {
      g.plcc_tc_tbpp = plcc(tc, tbpp);
    } catch (const Error&) {
      g.plcc_tc_tbpp = std::numeric_limits<double>::quiet_NaN();
    }
    fit.groups.push_back(g);
    tqps.push_back(tqp);
    slopes.push_back(line.slope);
    intercepts.push_back(line.intercept);
  }
  const QuadraticFit s = in_stage("TC slope", [&] { return fit_quadratic(tqps, slopes); });
  const LinearFit i = in_stage("TC intercept", [&] { return fit_linear(tqps, intercepts); });
  fit.a1 = s.a1;
  fit.a2 = s.a2;
  fit.a3 = s.a3;
  fit.slope_rss = s.rss;
  fit.b1 = i.slope;
  fit.b2 = i.intercept;
  fit.intercept_rss = i.rss;
  return fit;
}

//============================================================================
// Texture MOS

TextureFit fit_texture_model(const Dataset& dataset, const ModelParams& tc_params,
                             TextureTcSource tc_source, InterceptMode intercept) {
  const auto records = canonical_order(dataset);
  if (records.empty()) throw Error(ErrorCode::kTooFewContents, "dataset is empty");
  double stratum = std::numeric_limits<double>::infinity();
  for (const auto* r : records) stratum = std::min(stratum, r->features.tnsl);

  struct Content {
    std::vector<double> tqp, mos, tc_est, tc_ref;
  };
  std::map<std::string, Content> contents;
  for (const auto* r : records) {
    auto& c = contents[r->content_id];
    if (r->tc_ref) c.tc_ref.push_back(*r->tc_ref);
    if (r->features.tnsl != stratum) continue;
    c.tqp.push_back(r->features.tqp);
    c.mos.push_back(r->mos);
    c.tc_est.push_back(estimate_tc(r->features.tqp, r->features.tbpp, tc_params));
  }
  if (contents.size() < 2) {
    throw Error(ErrorCode::kTooFewContents,
                fmt::format("texture model needs two contents, got {}", contents.size()));
  }

  TextureFit fit;
  fit.stratum_tnsl = stratum;
  std::vector<double> tcs;
  std::vector<double> slopes;
  std::vector<double> intercepts;
  double min_tqp = std::numeric_limits<double>::infinity();
  for (const auto& [id, c] : contents) {
    const std::set<double> levels(c.tqp.begin(), c.tqp.end());
    if (levels.size() < 2) {
      throw Error(ErrorCode::kTooFewTqpLevels,
                  fmt::format("content '{}' has {} TQP level(s) at tNSL {}", id, levels.size(), stratum));
    }
    min_tqp = std::min(min_tqp, *levels.begin());
    ContentTextureFit cf;
    cf.content_id = id;
    cf.records = c.tqp.size();
    if (tc_source == TextureTcSource::kReference) {
      if (c.tc_ref.empty()) {
        throw Error(ErrorCode::kMissingReferenceTc, fmt::format("content '{}' has no tc_ref", id));
      }
      cf.tc = mean(c.tc_ref);
    } else {
      cf.tc = mean(c.tc_est);
    }
    const LinearFit line = fit_linear(c.tqp, c.mos);
    cf.slope = line.slope;
    cf.intercept = line.intercept;
    cf.rss = line.rss;
    fit.contents.push_back(cf);
    tcs.push_back(cf.tc);
    slopes.push_back(cf.slope);
    intercepts.push_back(cf.intercept);
  }

  const LinearFit ab = in_stage("slope vs TC", [&] { return fit_linear(tcs, slopes); });
  fit.alpha = ab.slope;
  fit.beta = ab.intercept;
  fit.rss = ab.rss;

  if (intercept == InterceptMode::kContentMean) {
    fit.b = mean(intercepts);
  } else {
    std::vector<double> anchor;
    for (const auto* r : records) {
      if (r->features.tnsl == stratum && r->features.tqp == min_tqp) anchor.push_back(r->mos);
    }
    fit.b = mean(anchor);
  }
  return fit;
}

//============================================================================
// Geometry attenuation

std::vector<AttenuationSample> attenuation_samples(const Dataset& dataset, const ModelParams& params) {
  std::map<double, std::vector<double>> ratios;
  for (const auto* r : canonical_order(dataset)) {
    const double tc = estimate_tc(r->features.tqp, r->features.tbpp, params);
    const double mos_t = texture_mos(tc, r->features.tqp, params);
    if (std::abs(mos_t) < 1e-9) continue;
    ratios[r->features.tnsl].push_back(r->mos / mos_t);
  }
  std::vector<AttenuationSample> out;
  for (const auto& [tnsl, v] : ratios) out.push_back({tnsl, mean(v), v.size()});
  return out;
}

AttenuationFit fit_geometry_attenuation(std::span<const AttenuationSample> samples) {
  std::set<double> distinct;
  for (const auto& s : samples) distinct.insert(s.tnsl);
  if (distinct.size() < 3) {
    throw Error(ErrorCode::kDegenerateDesign,
                fmt::format("attenuation fit needs three tNSL levels, got {}", distinct.size()));
  }
  std::vector<double> ys;
  for (const auto& s : samples) ys.push_back(s.attenuation);

  // Coarse grid: for fixed l2 the curve is linear in (l1, l3).
  AttenuationFit best;
  best.rss = std::numeric_limits<double>::infinity();
  std::vector<double> fs(samples.size());
  for (int step = 0; step <= 400; ++step) {
    const double l2 = -15.0 + 0.05 * step;
    for (std::size_t i = 0; i < samples.size(); ++i) fs[i] = logistic(samples[i].tnsl, l2);
    LinearFit line;
    try {
      line = fit_linear(fs, ys);
    } catch (const Error&) {
      continue;  // the logistic saturated to one value over the samples
    }
    if (line.rss < best.rss) {
      best.l1 = line.slope;
      best.l2 = l2;
      best.l3 = line.intercept;
      best.rss = line.rss;
    }
  }
  if (!std::isfinite(best.rss)) {
    throw Error(ErrorCode::kDegenerateDesign, "no grid point gives a usable attenuation design");
  }

  NonlinearProblem problem;
  problem.num_residuals = samples.size();
  problem.num_params = 3;
  problem.evaluate = [&](std::span<const double> p, std::span<double> r, std::span<double> j) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double f = logistic(samples[i].tnsl, p[1]);
      r[i] = p[0] * f + p[2] - ys[i];
      j[3 * i + 0] = f;
      j[3 * i + 1] = -p[0] * f * (1.0 - f);
      j[3 * i + 2] = 1.0;
    }
  };
  const auto refined = damped_gauss_newton(problem, {best.l1, best.l2, best.l3});
  best.iterations = refined.iterations;
  best.converged = refined.converged;
  if (refined.rss <= best.rss && std::isfinite(refined.rss)) {
    best.l1 = refined.params[0];
    best.l2 = refined.params[1];
    best.l3 = refined.params[2];
    best.rss = refined.rss;
  }
  return best;
}

//============================================================================
// Full pipeline

CalibrationResult calibrate_full(const Dataset& dataset, const CalibrationOptions& options) {
  dataset.validate();
  const auto contents = dataset.content_ids();
  if (contents.size() < 2) {
    throw Error(ErrorCode::kTooFewContents,
                fmt::format("calibration needs two contents, got {}", contents.size()));
  }

  CalibrationResult result;
  ModelParams& p = result.params;
  FitDiagnostics& diag = result.diagnostics;
  p = options.base;
  p.metadata.clear();

  bool has_tc_ref = false;
  for (const auto& r : dataset.records) has_tc_ref = has_tc_ref || r.tc_ref.has_value();
  const bool fit_tc = options.tc_model == TcModelMode::kFit ||
                      (options.tc_model == TcModelMode::kAuto && has_tc_ref);
  if (fit_tc) {
    diag.tc_model = fit_tc_model(dataset);
    p.a1 = diag.tc_model->a1;
    p.a2 = diag.tc_model->a2;
    p.a3 = diag.tc_model->a3;
    p.b1 = diag.tc_model->b1;
    p.b2 = diag.tc_model->b2;
    diag.tc_model_source = "fitted";
  } else {
    diag.tc_model_source = "inherited";
    diag.warnings.push_back("no tc_ref in dataset; TC coefficients kept from the base parameters");
  }

  diag.texture = fit_texture_model(dataset, p, options.texture_tc, options.intercept);
  p.alpha = diag.texture.alpha;
  p.beta = diag.texture.beta;
  p.b = diag.texture.b;

  diag.attenuation_samples = attenuation_samples(dataset, p);
  diag.attenuation = fit_geometry_attenuation(diag.attenuation_samples);
  if (!diag.attenuation.converged) {
    diag.warnings.push_back(fmt::format("attenuation fit stopped after {} iterations without converging",
                                        diag.attenuation.iterations));
  }
  p.l1 = diag.attenuation.l1;
  p.l2 = diag.attenuation.l2;
  p.l3 = diag.attenuation.l3;
  p.validate();

  const auto tqps = dataset.tqp_levels();
  const auto tnsls = dataset.tnsl_levels();
  p.tqp_range = FeatureRange{*tqps.begin(), *tqps.rbegin()};
  p.tnsl_range = FeatureRange{*tnsls.begin(), *tnsls.rbegin()};
  p.metadata["source"] = "calibrate_full";
  p.metadata["contents"] = fmt::format("{}", fmt::join(contents, ";"));
  p.metadata["records"] = std::to_string(dataset.records.size());
  p.metadata["tc_model"] = diag.tc_model_source;
  p.metadata["texture_tc"] = std::string(texture_tc_source_name(options.texture_tc));
  p.metadata["intercept"] = std::string(intercept_mode_name(options.intercept));
  p.metadata["texture_stratum_tnsl"] = fmt::format("{}", diag.texture.stratum_tnsl);
  return result;
}

std::string diagnostics_to_json(const FitDiagnostics& d) {
  using nlohmann::json;
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json doc;
  doc["tc_model_source"] = d.tc_model_source;
  if (d.tc_model) {
    json groups = json::array();
    for (const auto& g : d.tc_model->groups) {
      groups.push_back({{"tqp", g.tqp},
                        {"records", g.records},
                        {"slope", g.slope},
                        {"intercept", g.intercept},
                        {"rss", g.rss},
                        {"plcc_tc_tbpp", finite_or_null(g.plcc_tc_tbpp)}});
    }
    doc["tc_model"] = {{"slope_rss", d.tc_model->slope_rss},
                       {"intercept_rss", d.tc_model->intercept_rss},
                       {"groups", groups}};
  }
  json contents = json::array();
  for (const auto& c : d.texture.contents) {
    contents.push_back({{"content_id", c.content_id},
                        {"tc", c.tc},
                        {"slope", c.slope},
                        {"intercept", c.intercept},
                        {"rss", c.rss},
                        {"records", c.records}});
  }
  doc["texture"] = {{"stratum_tnsl", d.texture.stratum_tnsl},
                    {"rss", d.texture.rss},
                    {"contents", contents}};
  json samples = json::array();
  for (const auto& s : d.attenuation_samples) {
    samples.push_back({{"tnsl", s.tnsl}, {"attenuation", s.attenuation}, {"records", s.records}});
  }
  doc["attenuation"] = {{"rss", d.attenuation.rss},
                        {"iterations", d.attenuation.iterations},
                        {"converged", d.attenuation.converged},
                        {"samples", samples}};
  doc["warnings"] = d.warnings;
  return doc.dump(2);
}

Calibrator default_calibrator(CalibrationOptions options) {
  return [options = std::move(options)](const Dataset& d) { return calibrate_full(d, options).params; };
}

}  // namespace streampcq
