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

#include "streampcq/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/Dense>

#include "streampcq/error.hpp"

namespace streampcq {

namespace {

void check_sizes(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(xs.size()) + " xs vs " +
                                                std::to_string(ys.size()) + " ys");
  }
}

std::size_t distinct_count(std::span<const double> xs) {
  return std::set<double>(xs.begin(), xs.end()).size();
}

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

LinearFit fit_linear(std::span<const double> xs, std::span<const double> ys) {
  check_sizes(xs, ys);
  if (distinct_count(xs) < 2) {
    throw Error(ErrorCode::kDegenerateDesign, "linear fit needs two distinct x values");
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    fit.rss += r * r;
  }
  return fit;
}

QuadraticFit fit_quadratic(std::span<const double> xs, std::span<const double> ys) {
  check_sizes(xs, ys);
  if (distinct_count(xs) < 3) {
    throw Error(ErrorCode::kDegenerateDesign, "quadratic fit needs three distinct x values");
  }
  // u = (x - m) / s keeps the normal matrix well conditioned.
  const double m = mean_of(xs);
  double s = 0.0;
  for (double x : xs) s = std::max(s, std::abs(x - m));

  Eigen::Matrix3d normal = Eigen::Matrix3d::Zero();
  Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = (xs[i] - m) / s;
    const Eigen::Vector3d row(u * u, u, 1.0);
    normal += row * row.transpose();
    rhs += row * ys[i];
  }
  const Eigen::Vector3d c = normal.ldlt().solve(rhs);

  // c0 u^2 + c1 u + c2 with u = (x - m)/s, expanded in powers of x.
  QuadraticFit fit;
  fit.a1 = c[0] / (s * s);
  fit.a2 = c[1] / s - 2.0 * c[0] * m / (s * s);
  fit.a3 = c[0] * m * m / (s * s) - c[1] * m / s + c[2];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double u = (xs[i] - m) / s;
    const double r = ys[i] - (c[0] * u * u + c[1] * u + c[2]);
    fit.rss += r * r;
  }
  return fit;
}

DampedGaussNewtonResult damped_gauss_newton(const NonlinearProblem& problem,
                                            std::vector<double> initial,
                                            const DampedGaussNewtonOptions& options) {
  const auto m = static_cast<Eigen::Index>(problem.num_residuals);
  const auto n = static_cast<Eigen::Index>(problem.num_params);
  if (initial.size() != problem.num_params) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(initial.size()) + " initial values for " +
                                                std::to_string(problem.num_params) + " parameters");
  }
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Eigen::VectorXd params = Eigen::Map<const Eigen::VectorXd>(initial.data(), n);
  Eigen::VectorXd residuals(m);
  RowMajor jacobian(m, n);
  auto evaluate = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, RowMajor& j) {
    problem.evaluate({p.data(), static_cast<std::size_t>(n)},
                     {r.data(), static_cast<std::size_t>(m)},
                     {j.data(), static_cast<std::size_t>(m * n)});
  };

  evaluate(params, residuals, jacobian);
  double rss = residuals.squaredNorm();
  double damping = options.initial_damping;

  DampedGaussNewtonResult result;
  Eigen::VectorXd trial_residuals(m);
  RowMajor trial_jacobian(m, n);
  while (result.iterations < options.max_iterations) {
    if (rss == 0.0) {
      result.converged = true;
      break;
    }
    ++result.iterations;
    const Eigen::MatrixXd normal = jacobian.transpose() * jacobian;
    const Eigen::VectorXd gradient = jacobian.transpose() * residuals;
    Eigen::MatrixXd damped = normal;
    const double floor = 1e-12 * std::max(1.0, normal.diagonal().maxCoeff());
    for (Eigen::Index k = 0; k < n; ++k) {
      damped(k, k) += damping * std::max(normal(k, k), floor);
    }
    const Eigen::VectorXd step = damped.ldlt().solve(-gradient);
    const Eigen::VectorXd trial = params + step;

    bool accepted = false;
    if (step.allFinite()) {
      evaluate(trial, trial_residuals, trial_jacobian);
      const double trial_rss = trial_residuals.squaredNorm();
      if (std::isfinite(trial_rss) && trial_rss < rss) {
        const double change = (rss - trial_rss) / rss;
        params = trial;
        residuals = trial_residuals;
        jacobian = trial_jacobian;
        rss = trial_rss;
        damping = std::max(damping / 10.0, 1e-15);
        accepted = true;
        if (change < options.relative_rss_tolerance) {
          result.converged = true;
          break;
        }
      }
    }
    if (!accepted) {
      damping *= 10.0;
      // No step along any damped direction lowers the RSS: a minimum to
      // working precision.
      if (damping > 1e16) {
        result.converged = true;
        break;
      }
    }
  }

  result.params.assign(params.data(), params.data() + n);
  result.rss = rss;
  return result;
}

}  // namespace streampcq
