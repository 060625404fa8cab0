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

#pragma once

#include <span>
#include <vector>

namespace streampcq {

// The three agreement criteria between predicted and subjective scores.
struct MetricTriple {
  double plcc = 0.0;
  double srcc = 0.0;
  double rmse = 0.0;
};

// Pearson correlation. Throws LengthMismatch, TooFewSamples (n < 2) and
// ZeroVariance when either argument is constant.
double plcc(std::span<const double> xs, std::span<const double> ys);

// 1-based ranks; tied values share the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> xs);

// Spearman correlation: Pearson correlation of average ranks.
double srcc(std::span<const double> xs, std::span<const double> ys);

// Root mean squared difference. Throws LengthMismatch or TooFewSamples
// (empty input).
double rmse(std::span<const double> predicted, std::span<const double> observed);

MetricTriple evaluate_triple(std::span<const double> predicted, std::span<const double> observed);

}  // namespace streampcq
