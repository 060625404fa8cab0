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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "streampcq/quality_model.hpp"
#include "test_support.hpp"

using namespace streampcq;
using streampcq::testing::error_code_of;

namespace {

constexpr double kTqps[] = {28, 34, 40, 46, 51};

FeatureVector features(double tqp, double tbpp, double tnsl) {
  FeatureVector f;
  f.tqp = tqp;
  f.tbpp = tbpp;
  f.tnsl = tnsl;
  return f;
}

}  // namespace

TEST_SUITE("quality model") {
  const ModelParams& p = default_params();

  TEST_CASE("shipped parameters") {
    CHECK(p.b == 90.3036);
    CHECK(p.alpha == 0.0189);
    CHECK(p.beta == -0.5006);
    CHECK(p.a1 == 0.2442);
    CHECK(p.a2 == -15.3958);
    CHECK(p.a3 == 247.4869);
    CHECK(p.b1 == 0.1311);
    CHECK(p.b2 == -4.1114);
    CHECK(p.l1 == 19.2911);
    CHECK(p.l2 == -8.8925);
    CHECK(p.l3 == -18.1897);
    REQUIRE(p.tqp_range.has_value());
    CHECK(p.tqp_range->min == 28);
    CHECK(p.tnsl_range->max == 6);
  }

  TEST_CASE("closed-form values") {
    CHECK(slope_of_tqp(40, p) == doctest::Approx(22.3749).epsilon(1e-12));
    CHECK(intercept_of_tqp(40, p) == doctest::Approx(1.1326).epsilon(1e-12));
    CHECK(std::abs(estimate_tc(40, 0.5, p) - 12.32005) < 1e-9);
    CHECK(std::abs(texture_mos(12.32005, 40, p) - 79.5935578) < 1e-9);
    CHECK(std::abs(geometry_attenuation(3, p) - 1.0483018088478033) < 1e-12);
    CHECK(std::abs(geometry_attenuation(4, p) - 0.9577435778905219) < 1e-12);
    CHECK(std::abs(geometry_attenuation(5, p) - 0.7158349152332555) < 1e-12);
    CHECK(std::abs(geometry_attenuation(6, p) - 0.08812411948879273) < 1e-12);

    const auto at3 = predict(features(40, 0.5, 3), p);
    CHECK(std::abs(at3.mos_est - 83.4380706143722) < 1e-9);
    CHECK(std::abs(at3.tc_est - 12.32005) < 1e-9);
    const auto at6 = predict(features(40, 0.5, 6), p);
    CHECK(std::abs(at6.mos_est - 7.014112198105332) < 1e-9);
  }

  TEST_CASE("slope and intercept at the five TQPs") {
    const double s[] = {7.8573, 6.3249, 22.3749, 56.0073, 97.4653};
    const double i[] = {-0.4406, 0.346, 1.1326, 1.9192, 2.5747};
    for (int k = 0; k < 5; ++k) {
      CHECK(std::abs(slope_of_tqp(kTqps[k], p) - s[k]) < 1e-9);
      CHECK(std::abs(intercept_of_tqp(kTqps[k], p) - i[k]) < 1e-9);
    }
  }

  TEST_CASE("degenerate parameter settings") {
    ModelParams q = p;
    q.a1 = q.a2 = 0.0;
    CHECK(slope_of_tqp(17, q) == q.a3);
    CHECK(slope_of_tqp(0, p) == p.a3);
    CHECK(intercept_of_tqp(0, p) == p.b2);
    q.b1 = 0.0;
    CHECK(intercept_of_tqp(33, q) == q.b2);
    CHECK(estimate_tc(40, 0.0, p) == intercept_of_tqp(40, p));
    CHECK(texture_mos(12.0, 0.0, p) == p.b);
    q.alpha = 0.0;
    CHECK(texture_mos(99.0, 30.0, q) == q.beta * 30.0 + q.b);
    q.l1 = 0.0;
    CHECK(geometry_attenuation(4.5, q) == q.l3);
    q.l3 = 1.0;
    const auto pr = predict(features(34, 0.8, 5), q);
    CHECK(pr.mos_est == pr.mos_texture);
  }

  TEST_CASE("prediction factorizes exactly") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> tqp(0, 63), tbpp(0, 4), tnsl(0, 10);
    for (int i = 0; i < 1000; ++i) {
      const auto f = features(tqp(rng), tbpp(rng), tnsl(rng));
      const double composed =
          texture_mos(estimate_tc(f.tqp, f.tbpp, p), f.tqp, p) * geometry_attenuation(f.tnsl, p);
      REQUIRE(predict(f, p).mos_est == composed);
    }
  }

  TEST_CASE("attenuation decreases when l1 > 0") {
    ModelParams q = p;
    for (double l1 : {p.l1, 0.5, 100.0}) {
      q.l1 = l1;
      double previous = geometry_attenuation(0.0, q);
      for (int k = 1; k <= 200; ++k) {
        const double now = geometry_attenuation(0.1 * k, q);
        REQUIRE(now < previous);
        previous = now;
      }
    }
  }

  TEST_CASE("TC is linear in TBPP") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 3);
    for (double q : kTqps) {
      for (int i = 0; i < 100; ++i) {
        const double x = u(rng), y = u(rng), lambda = u(rng) / 3.0;
        const double lhs = estimate_tc(q, lambda * x + (1 - lambda) * y, p);
        const double rhs = lambda * estimate_tc(q, x, p) + (1 - lambda) * estimate_tc(q, y, p);
        REQUIRE(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
      CHECK(estimate_tc(q, 2.0, p) - estimate_tc(q, 1.0, p) == doctest::Approx(slope_of_tqp(q, p)));
    }
  }

  TEST_CASE("MOS falls with TQP for a fixed content when alpha*TC + beta < 0") {
    for (double tc : {2.0, 10.0, 20.0, 26.0}) {
      REQUIRE(p.alpha * tc + p.beta < 0);
      for (double tnsl : {3.0, 4.0, 5.0}) {
        for (int k = 1; k < 5; ++k) {
          const double hi = texture_mos(tc, kTqps[k - 1], p) * geometry_attenuation(tnsl, p);
          const double lo = texture_mos(tc, kTqps[k], p) * geometry_attenuation(tnsl, p);
          CHECK(lo < hi);
        }
      }
    }
  }

  TEST_CASE("fixed TBPP is not fixed content") {
    // At tbpp = 0.04 the sign condition holds at every TQP, yet the
    // estimated TC rises fast enough between 46 and 51 to lift MOS.
    for (double q : kTqps) CHECK(p.alpha * estimate_tc(q, 0.04, p) + p.beta < 0);
    CHECK(predict(features(51, 0.04, 3), p).mos_est > predict(features(46, 0.04, 3), p).mos_est);
  }

  TEST_CASE("normalized MOS") {
    CHECK(nmos(37.5, 37.5) == 1.0);
    CHECK(nmos(40, 80) == 0.5);
    CHECK(error_code_of([] { nmos(1.0, 0.0); }) == ErrorCode::kDivisionByZeroMos);
  }

  TEST_CASE("training range flag and clamp") {
    CHECK_FALSE(predict(features(40, 0.5, 3), p).out_of_training_range);
    CHECK(predict(features(60, 0.5, 3), p).out_of_training_range);
    CHECK(predict(features(40, 0.5, 8), p).out_of_training_range);
    ModelParams q = p;
    q.tqp_range.reset();
    q.tnsl_range.reset();
    CHECK_FALSE(predict(features(60, 0.5, 8), q).out_of_training_range);
    CHECK(clamp_mos(-3.0) == 1.0);
    CHECK(clamp_mos(140.0) == 100.0);
    CHECK(clamp_mos(55.5) == 55.5);
  }

  TEST_CASE("params documents") {
    const auto back = params_from_json(params_to_json(p));
    CHECK(back.l2 == p.l2);
    CHECK(back.metadata == p.metadata);
    CHECK(back.tqp_range->max == 51);
    CHECK(error_code_of([] { params_from_json(R"({"b": 1})"); }) == ErrorCode::kInvalidParams);
    CHECK(error_code_of([] { params_from_json("not json"); }) == ErrorCode::kInvalidParams);
    ModelParams bad = p;
    bad.alpha = std::numeric_limits<double>::quiet_NaN();
    CHECK(error_code_of([&] { bad.validate(); }) == ErrorCode::kInvalidParams);
  }
}
