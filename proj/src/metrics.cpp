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

#include "streampcq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "streampcq/error.hpp"

namespace streampcq {

namespace {

void check_pair(std::span<const double> a, std::span<const double> b, std::size_t min_n) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, fmt::format("{} vs {} values", a.size(), b.size()));
  }
  if (a.size() < min_n) {
    throw Error(ErrorCode::kTooFewSamples, fmt::format("need at least {} values, got {}", min_n, a.size()));
  }
}

}  // namespace

double plcc(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, 2);
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::kZeroVariance, "correlation of a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && xs[order[j]] == xs[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double srcc(std::span<const double> xs, std::span<const double> ys) {
  check_pair(xs, ys, 2);
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return plcc(rx, ry);
}

double rmse(std::span<const double> predicted, std::span<const double> observed) {
  check_pair(predicted, observed, 1);
  double ss = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - observed[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(predicted.size()));
}

MetricTriple evaluate_triple(std::span<const double> predicted, std::span<const double> observed) {
  return {plcc(predicted, observed), srcc(predicted, observed), rmse(predicted, observed)};
}

}  // namespace streampcq
