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

#include "streampcq/significance.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "streampcq/error.hpp"
#include "streampcq/fdist.hpp"
#include "streampcq/io.hpp"
#include "streampcq/nonlinear_map.hpp"

namespace streampcq {

double sample_variance(std::span<const double> v) {
  if (v.size() < 2) throw Error(ErrorCode::kTooFewSamples, "variance needs two values");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

Verdict ftest_variance_ratio(std::span<const double> a, std::span<const double> b, double confidence) {
  if (a.size() < kMinSignificanceSamples || b.size() < kMinSignificanceSamples) {
    throw Error(ErrorCode::kTooFewSamples,
                fmt::format("F test needs more than 30 residuals per model, got {} and {}", a.size(), b.size()));
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::kConfigError, fmt::format("confidence {} out of (0, 1)", confidence));
  }
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  if (va == vb) return Verdict::kIndistinguishable;
  if (va == 0.0) return Verdict::kFirstBetter;
  if (vb == 0.0) return Verdict::kSecondBetter;

  const double d1 = static_cast<double>(a.size() - 1);
  const double d2 = static_cast<double>(b.size() - 1);
  const double ratio = va / vb;
  const double tail = 0.5 * (1.0 - confidence);
  if (ratio < f_quantile(tail, d1, d2)) return Verdict::kFirstBetter;
  if (ratio > f_quantile(1.0 - tail, d1, d2)) return Verdict::kSecondBetter;
  return Verdict::kIndistinguishable;
}

SignificanceMatrix significance_matrix(std::span<const ModelResiduals> models, double confidence) {
  SignificanceMatrix m;
  m.confidence = confidence;
  const std::size_t k = models.size();
  for (const auto& model : models) {
    if (model.residuals.size() != models.front().residuals.size()) {
      throw Error(ErrorCode::kMismatchedStimuli,
                  fmt::format("model '{}' has {} residuals, '{}' has {}", model.model_id, model.residuals.size(),
                              models.front().model_id, models.front().residuals.size()));
    }
    m.model_ids.push_back(model.model_id);
  }
  m.cells.assign(k, std::vector<char>(k, 'G'));
  // Each unordered pair is tested once and mirrored.
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const Verdict v = ftest_variance_ratio(models[i].residuals, models[j].residuals, confidence);
      if (v == Verdict::kFirstBetter) {
        m.cells[i][j] = 'B';
        m.cells[j][i] = 'W';
      } else if (v == Verdict::kSecondBetter) {
        m.cells[i][j] = 'W';
        m.cells[j][i] = 'B';
      }
    }
  }
  return m;
}

std::vector<ModelScore> load_model_scores_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const int c_s = table.column("stimulus_id");
  const int c_m = table.column("model_id");
  const int c_x = table.column("score");
  if (c_s < 0 || c_m < 0 || c_x < 0) {
    throw Error(ErrorCode::kParseError, "score CSV needs columns stimulus_id, model_id, score");
  }
  std::vector<ModelScore> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out.push_back({row[c_s], row[c_m], parse_double_field(row[c_x], "score", i + 1)});
  }
  return out;
}

std::vector<ModelResiduals> mapped_residuals(std::span<const ModelScore> scores, const MosTable& mos,
                                             std::vector<std::string>* warnings) {
  std::map<std::string, double> truth;
  for (const auto& r : mos.rows) truth[r.stimulus_id] = r.mos;

  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, double>> by_model;
  for (const auto& s : scores) {
    if (!by_model.count(s.model_id)) order.push_back(s.model_id);
    if (!truth.count(s.stimulus_id)) {
      throw Error(ErrorCode::kMismatchedStimuli,
                  fmt::format("model '{}' scores unknown stimulus '{}'", s.model_id, s.stimulus_id));
    }
    if (!by_model[s.model_id].emplace(s.stimulus_id, s.score).second) {
      throw Error(ErrorCode::kDuplicateRecord,
                  fmt::format("model '{}' scores stimulus '{}' twice", s.model_id, s.stimulus_id));
    }
  }

  std::vector<ModelResiduals> out;
  for (const auto& id : order) {
    const auto& per_stimulus = by_model[id];
    if (per_stimulus.size() != truth.size()) {
      throw Error(ErrorCode::kMismatchedStimuli,
                  fmt::format("model '{}' scores {} of {} stimuli", id, per_stimulus.size(), truth.size()));
    }
    std::vector<double> objective;
    std::vector<double> subjective;
    for (const auto& [stimulus, value] : truth) {
      objective.push_back(per_stimulus.at(stimulus));
      subjective.push_back(value);
    }
    auto mapped = nonlinear_map(objective, subjective);
    if (warnings && !mapped.warning.empty()) warnings->push_back(id + ": " + mapped.warning);
    out.push_back({id, std::move(mapped.residuals)});
  }
  return out;
}

std::string significance_to_csv(const SignificanceMatrix& m) {
  std::string out = "model_id";
  for (const auto& id : m.model_ids) out += "," + csv_escape(id);
  out += "\n";
  for (std::size_t i = 0; i < m.model_ids.size(); ++i) {
    out += csv_escape(m.model_ids[i]);
    for (char c : m.cells[i]) out += fmt::format(",{}", c);
    out += "\n";
  }
  return out;
}

std::string render_significance_grid(const SignificanceMatrix& m) {
  std::size_t width = 0;
  for (const auto& id : m.model_ids) width = std::max(width, id.size());
  std::string out = fmt::format("{:<{}}", "", width);
  for (std::size_t j = 0; j < m.model_ids.size(); ++j) out += fmt::format(" {:>3}", j + 1);
  out += "\n";
  for (std::size_t i = 0; i < m.model_ids.size(); ++i) {
    out += fmt::format("{:<{}}", m.model_ids[i], width);
    for (char c : m.cells[i]) out += fmt::format(" {:>3}", c);
    out += fmt::format("   ({})\n", i + 1);
  }
  out += fmt::format("B: row model better, W: column model better, G: indistinguishable ({}% confidence)\n",
                     m.confidence * 100.0);
  return out;
}

}  // namespace streampcq
