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
#include <string>
#include <vector>

namespace streampcq {

// f(x) = b1 (1/2 - 1 / (1 + exp(b2 (x - b3)))) + b4 x + b5, the usual
// monotone logistic-plus-linear map from objective scores to MOS.
struct LogisticMapping {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 1.0;
  double b5 = 0.0;

  double operator()(double x) const;
};

struct MappingResult {
  LogisticMapping mapping;
  std::vector<double> mapped;
  std::vector<double> residuals;  // mapped - mos
  double rss = 0.0;
  int iterations = 0;
  bool converged = true;
  std::string warning;  // set when the fit failed and the identity was used
};

// Multi-start damped Gauss-Newton fit. Throws LengthMismatch and
// TooFewSamples (fewer than 5 points). When no start converges the identity
// map is returned with a warning.
MappingResult nonlinear_map(std::span<const double> objective, std::span<const double> mos);

}  // namespace streampcq
