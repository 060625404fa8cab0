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

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace streampcq {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
};

struct QuadraticFit {
  double a1 = 0.0;  // x^2
  double a2 = 0.0;  // x
  double a3 = 0.0;  // 1
  double rss = 0.0;
};

// Ordinary least squares y = slope * x + intercept. Needs at least two
// distinct xs; throws DegenerateDesign otherwise, LengthMismatch on size
// mismatch.
LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys);

// Least squares y = a1 x^2 + a2 x + a3 via the normal equations of the
// Vandermonde design (solved on centred, scaled abscissae). Needs at least
// three distinct xs.
QuadraticFit fit_quadratic(std::span<const double> xs, std::span<const double> ys);

// Residuals r(p) and their row-major Jacobian dr/dp.
struct NonlinearProblem {
  std::size_t num_residuals = 0;
  std::size_t num_params = 0;
  std::function<void(std::span<const double> params, std::span<double> residuals,
                     std::span<double> jacobian)>
      evaluate;
};

struct DampedGaussNewtonOptions {
  int max_iterations = 200;
  double relative_rss_tolerance = 1e-10;
  double initial_damping = 1e-3;
};

struct DampedGaussNewtonResult {
  std::vector<double> params;
  double rss = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt: steps solve (J'J + lambda * diag(J'J)) d = -J'r;
// accepted steps shrink lambda, rejected ones grow it. Stops when an
// accepted step changes the RSS by less than the relative tolerance, when
// no step can improve it any more, or at max_iterations (converged=false).
DampedGaussNewtonResult damped_gauss_newton(const NonlinearProblem& problem,
                                            std::vector<double> initial,
                                            const DampedGaussNewtonOptions& options = {});

}  // namespace streampcq
