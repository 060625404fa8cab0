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

namespace streampcq {

// Regularized incomplete beta I_x(a, b), by Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// Inverse of I_x(a, b) in x, by bisection.
double inverse_regularized_incomplete_beta(double a, double b, double p);

// F distribution with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);
double f_quantile(double p, double d1, double d2);

}  // namespace streampcq
