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

#include "streampcq/nonlinear_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "streampcq/error.hpp"
#include "streampcq/least_squares.hpp"

namespace streampcq {

namespace {

// 1 / (1 + e^z) without overflow warnings for large |z|.
double logistic_tail(double z) { return 1.0 / (1.0 + std::exp(std::clamp(z, -700.0, 700.0))); }

}  // namespace

double LogisticMapping::operator()(double x) const {
  return b1 * (0.5 - logistic_tail(b2 * (x - b3))) + b4 * x + b5;
}

MappingResult nonlinear_map(std::span<const double> objective, std::span<const double> mos) {
  if (objective.size() != mos.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                fmt::format("{} objective scores vs {} MOS values", objective.size(), mos.size()));
  }
  const std::size_t n = objective.size();
  if (n < 5) throw Error(ErrorCode::kTooFewSamples, fmt::format("mapping needs 5 points, got {}", n));

  NonlinearProblem problem;
  problem.num_residuals = n;
  problem.num_params = 5;
  problem.evaluate = [&](std::span<const double> p, std::span<double> r, std::span<double> j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = objective[i];
      const double g = logistic_tail(p[1] * (x - p[2]));
      const double dg = g * (1.0 - g);
      r[i] = p[0] * (0.5 - g) + p[3] * x + p[4] - mos[i];
      double* row = &j[5 * i];
      row[0] = 0.5 - g;
      row[1] = p[0] * dg * (x - p[2]);
      row[2] = -p[0] * dg * p[1];
      row[3] = x;
      row[4] = 1.0;
    }
  };

  const auto [xmin, xmax] = std::minmax_element(objective.begin(), objective.end());
  const auto [ymin, ymax] = std::minmax_element(mos.begin(), mos.end());
  const double xmean = std::accumulate(objective.begin(), objective.end(), 0.0) / static_cast<double>(n);
  const double ymean = std::accumulate(mos.begin(), mos.end(), 0.0) / static_cast<double>(n);
  const double xspan = *xmax - *xmin > 0.0 ? *xmax - *xmin : 1.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) sxy += (objective[i] - xmean) * (mos[i] - ymean);
  const double sign = sxy < 0.0 ? -1.0 : 1.0;

  MappingResult best;
  best.rss = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& p, double rss, int iterations, bool converged) {
    if (!std::isfinite(rss) || rss >= best.rss) return;
    best.mapping = {p[0], p[1], p[2], p[3], p[4]};
    best.rss = rss;
    best.iterations = iterations;
    best.converged = converged;
  };

  std::vector<std::vector<double>> starts;
  try {
    // The linear member of the family is a closed-form candidate in its own right.
    const LinearFit line = fit_linear(objective, mos);
    starts.push_back({0.0, 4.0 / xspan, xmean, line.slope, line.intercept});
    consider(starts.back(), line.rss, 0, true);
  } catch (const Error&) {
    // constant objective: only the logistic starts remain
  }
  for (double steepness : {1.0, 4.0, 16.0}) {
    starts.push_back({sign * (*ymax - *ymin), steepness / xspan, xmean, 0.0, ymean});
  }
  for (const auto& start : starts) {
    const auto fit = damped_gauss_newton(problem, start, {.max_iterations = 500});
    consider(fit.params, fit.rss, fit.iterations, fit.converged);
  }

  if (!std::isfinite(best.rss)) {
    best.mapping = LogisticMapping{};
    best.converged = false;
    best.warning = "nonlinear mapping failed; identity mapping used";
  } else if (!best.converged) {
    best.warning = fmt::format("nonlinear mapping stopped after {} iterations before converging",
                               best.iterations);
  }
  best.mapped.resize(n);
  best.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    best.mapped[i] = best.mapping(objective[i]);
    best.residuals[i] = best.mapped[i] - mos[i];
    rss += best.residuals[i] * best.residuals[i];
  }
  best.rss = rss;
  return best;
}

}  // namespace streampcq
