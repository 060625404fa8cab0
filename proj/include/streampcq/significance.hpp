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

// Pairwise variance-ratio significance of model residuals.

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streampcq/subjective.hpp"

namespace streampcq {

enum class Verdict { kFirstBetter, kSecondBetter, kIndistinguishable };

inline constexpr std::size_t kMinSignificanceSamples = 31;

// Two-sided F test on the sample variances of two residual vectors with
// (n_a - 1, n_b - 1) degrees of freedom. The smaller variance wins when the
// ratio leaves the central confidence interval. Throws TooFewSamples when
// either vector has 30 entries or fewer.
Verdict ftest_variance_ratio(std::span<const double> residuals_a, std::span<const double> residuals_b,
                             double confidence = 0.95);

double sample_variance(std::span<const double> v);

struct ModelResiduals {
  std::string model_id;
  std::vector<double> residuals;
};

// cells[i][j]: 'B' row model better, 'W' column model better, 'G'
// indistinguishable. Always antisymmetric with a 'G' diagonal.
struct SignificanceMatrix {
  std::vector<std::string> model_ids;
  std::vector<std::vector<char>> cells;
  double confidence = 0.95;
};

// Throws MismatchedStimuli when residual vectors differ in length.
SignificanceMatrix significance_matrix(std::span<const ModelResiduals> models, double confidence = 0.95);

struct ModelScore {
  std::string stimulus_id;
  std::string model_id;
  double score = 0.0;
};

// Columns stimulus_id, model_id, score.
std::vector<ModelScore> load_model_scores_csv(std::string_view text);

// Maps each model's scores onto MOS with nonlinear_map and returns the
// mapped residuals, models in first-appearance order. Every model must
// score exactly the stimuli of the MOS table (MismatchedStimuli).
std::vector<ModelResiduals> mapped_residuals(std::span<const ModelScore> scores, const MosTable& mos,
                                             std::vector<std::string>* warnings = nullptr);

std::string significance_to_csv(const SignificanceMatrix& matrix);
std::string render_significance_grid(const SignificanceMatrix& matrix);

}  // namespace streampcq
