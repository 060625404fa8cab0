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

// Evaluation protocols: leave-one-content-out cross-validation, repeated
// random content splits and the texture/geometry ablation.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "streampcq/calibration.hpp"
#include "streampcq/dataset.hpp"
#include "streampcq/metrics.hpp"

namespace streampcq {

struct EvalRow {
  std::string group;  // content id, trial index or ablation variant
  MetricTriple metrics;
  std::size_t records = 0;
  bool failed = false;
  std::string error;
};

struct EvalReport {
  std::string protocol;
  std::vector<EvalRow> rows;
  // Mean and sample standard deviation over the rows that did not fail.
  MetricTriple mean;
  MetricTriple std;
  std::size_t succeeded = 0;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> warnings;

  void aggregate();
};

// Content-level split: the training side is calibrated, the test side is
// scored.
struct ContentSplit {
  std::set<std::string> train;
  std::set<std::string> test;
};

// Scores a fitted model on a dataset (raw, unmapped predictions).
MetricTriple score_model(const Dataset& test, const ModelParams& params);

std::vector<ContentSplit> loocv_splits(const Dataset& dataset);

// Throws TooFewContents below two contents. Fold failures are recorded on
// their row and excluded from the aggregates.
EvalReport loocv(const Dataset& dataset, const Calibrator& calibrator);

inline constexpr std::uint64_t kDefaultSeed = 20240607;

// Seeded 64-bit Mersenne Twister (std::mt19937_64); a content shuffle is a
// Fisher-Yates pass over the sorted content ids using uniform_below, and
// the first round(train_fraction * k) ids train. Splits for all trials come
// from one generator, in trial order.
std::uint64_t uniform_below(std::uint64_t bound, std::mt19937_64& engine);
std::vector<ContentSplit> random_splits(const Dataset& dataset, int n_trials, double train_fraction,
                                        std::uint64_t seed);

// Throws EmptyTestSet when train_fraction leaves no test contents.
EvalReport random_trials(const Dataset& dataset, const Calibrator& calibrator, int n_trials = 1000,
                         double train_fraction = 0.5, std::uint64_t seed = kDefaultSeed);

// Rows: texture-only (mos_texture), geometry-only (b * D_G) and the full
// model, all fitted on train_contents and scored on the other contents.
EvalReport ablation(const Dataset& dataset, const Calibrator& calibrator,
                    const std::set<std::string>& train_contents);

// Table layout: one row per group, then Mean and Standard deviation rows.
std::string report_to_csv(const EvalReport& report, bool with_aggregates = true);
std::string render_report_text(const EvalReport& report, bool with_aggregates = true);

// Runs fn(0..n-1) on a small worker pool; fn writes to its own slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace streampcq
