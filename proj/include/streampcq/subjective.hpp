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

// Raw subjective ratings to MOS: standardization, BT.500 observer
// screening, rescaling to the 1..100 scale and per-stimulus statistics.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace streampcq {

struct RatingMatrix {
  std::vector<std::string> stimuli;
  std::vector<std::string> observers;
  // scores[stimulus][observer]; nullopt where the observer skipped it.
  std::vector<std::vector<std::optional<double>>> scores;

  std::size_t stimulus_count() const { return stimuli.size(); }
  std::size_t observer_count() const { return observers.size(); }
};

enum class ZscoreAxis { kPerObserver, kPerStimulus };

std::string_view zscore_axis_name(ZscoreAxis axis);
ZscoreAxis parse_zscore_axis(std::string_view name);  // throws ConfigError

// (x - mean) / sample std along the axis. Throws ZeroVariance naming the
// observer or stimulus with fewer than two scores or no spread.
RatingMatrix zscore(const RatingMatrix& matrix, ZscoreAxis axis = ZscoreAxis::kPerObserver);

struct ScreeningResult {
  RatingMatrix retained;
  std::vector<std::string> rejected;
};

// ITU-R BT.500 Annex 2 screening. Throws TooFewObservers below three.
ScreeningResult screen_observers(const RatingMatrix& matrix);

// Global affine map of the smallest score to lo and the largest to hi.
// Throws DegenerateRange when all scores are equal.
RatingMatrix rescale_to_range(const RatingMatrix& matrix, double lo = 1.0, double hi = 100.0);

struct MosRow {
  std::string stimulus_id;
  double mos = 0.0;
  double std = 0.0;
  std::size_t n = 0;
  bool single_observer = false;  // std is 0 by convention
};

struct MosTable {
  std::vector<MosRow> rows;
};

// Per-stimulus mean and sample std. Throws EmptyStimulus.
MosTable compute_mos(const RatingMatrix& matrix);

struct SubjectiveOptions {
  ZscoreAxis axis = ZscoreAxis::kPerObserver;
  bool screen = true;
  double lo = 1.0;
  double hi = 100.0;
};

struct SubjectiveResult {
  MosTable mos;
  std::vector<std::string> rejected;
};

// zscore -> screen -> rescale -> compute_mos.
SubjectiveResult process_ratings(const RatingMatrix& matrix, const SubjectiveOptions& options = {});

// Columns stimulus_id, observer_id, score. Ids keep first-appearance order.
RatingMatrix load_ratings_csv(std::string_view text);
std::string ratings_to_csv(const RatingMatrix& matrix);

// Columns stimulus_id, mos, std, n.
std::string mos_table_to_csv(const MosTable& table);
MosTable load_mos_csv(std::string_view text);

}  // namespace streampcq
