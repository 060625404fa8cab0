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

#include <algorithm>
#include <cmath>
#include <random>
#include <mutex>
#include <set>
#include <string>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "streampcq/calibration.hpp"
#include "streampcq/fdist.hpp"
#include "streampcq/metrics.hpp"
#include "streampcq/nonlinear_map.hpp"
#include "streampcq/protocols.hpp"
#include "streampcq/significance.hpp"
#include "streampcq/synthetic.hpp"
#include "test_support.hpp"

using namespace streampcq;
using streampcq::testing::error_code_of;

namespace {

std::vector<double> gaussian(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = sigma * standard_normal(rng);
  return out;
}

double direct_plcc(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

double unit_interval_like(int i) { return double((i * 37) % 120) / 119.0; }

std::string fmt_content(int i) { return (i < 10 ? "content_0" : "content_") + std::to_string(i); }

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("correlation examples") {
    const std::vector<double> x{1, 2, 3, 4, 5}, up{3, 5, 7, 9, 11}, down{-1, -2, -3, -4, -5};
    CHECK(plcc(x, up) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(plcc(x, down) == doctest::Approx(-1.0).epsilon(1e-15));
    const std::vector<double> cubes{1, 8, 27, 64, 125};
    CHECK(srcc(x, cubes) == 1.0);
    const std::vector<double> rev{5, 4, 3, 2, 1};
    CHECK(srcc(x, rev) == -1.0);
  }

  TEST_CASE("random vectors against the textbook formula") {
    const auto x = gaussian(50, 1.0, 1), y = gaussian(50, 2.0, 2);
    CHECK(std::abs(plcc(x, y) - direct_plcc(x, y)) < 1e-12);
  }

  TEST_CASE("ties use average ranks") {
    const std::vector<double> a{1, 1, 2}, b{1, 2, 3};
    CHECK(average_ranks(a) == std::vector<double>{1.5, 1.5, 3});
    CHECK(std::abs(srcc(a, b) - 0.8660254037844387) < 1e-12);
    const std::vector<double> c{3, 1, 4, 1, 5, 9, 2, 6}, d{2, 7, 1, 8, 2, 8, 1, 8};
    CHECK(std::abs(srcc(c, d) - 0.19885368120992467) < 1e-12);
  }

  TEST_CASE("rmse") {
    const std::vector<double> zero{0, 0}, v{3, 4};
    CHECK(rmse(v, v) == 0.0);
    CHECK(std::abs(rmse(zero, v) - 3.5355339059327378) < 1e-12);
    const auto a = gaussian(40, 3.0, 5), b = gaussian(40, 3.0, 6);
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
    CHECK(std::abs(rmse(a, b) - std::sqrt(ss / 40.0)) < 1e-12);
  }

  TEST_CASE("invariances") {
    const auto x = gaussian(60, 1.0, 8), y = gaussian(60, 1.0, 9);
    std::vector<double> affine, negated, expo;
    for (double v : x) {
      affine.push_back(3.5 * v - 2.0);
      negated.push_back(-2.0 * v);
      expo.push_back(std::exp(v));
    }
    CHECK(std::abs(plcc(affine, y) - plcc(x, y)) < 1e-12);
    CHECK(std::abs(plcc(negated, y) + plcc(x, y)) < 1e-12);
    CHECK(srcc(expo, y) == doctest::Approx(srcc(x, y)).epsilon(1e-14));
  }

  TEST_CASE("metric errors") {
    const std::vector<double> flat{2, 2, 2}, x{1, 2, 3}, shorter{1, 2}, one{1};
    CHECK(error_code_of([&] { plcc(flat, x); }) == ErrorCode::kZeroVariance);
    CHECK(error_code_of([&] { srcc(x, flat); }) == ErrorCode::kZeroVariance);
    CHECK(error_code_of([&] { plcc(x, shorter); }) == ErrorCode::kLengthMismatch);
    CHECK(error_code_of([&] { plcc(one, one); }) == ErrorCode::kTooFewSamples);
    CHECK(error_code_of([&] { rmse(x, shorter); }) == ErrorCode::kLengthMismatch);
    CHECK(error_code_of([] { rmse({}, {}); }) == ErrorCode::kTooFewSamples);
  }
}

TEST_SUITE("F distribution") {
  TEST_CASE("incomplete beta against reference values") {
    CHECK(std::abs(regularized_incomplete_beta(2.5, 3.5, 0.3) - 0.29675298929566646) < 1e-12);
    CHECK(std::abs(regularized_incomplete_beta(50, 50, 0.5) - 0.5) < 1e-12);
    CHECK(std::abs(regularized_incomplete_beta(0.5, 0.5, 0.9) - 0.7951672353008665) < 1e-12);
    CHECK(regularized_incomplete_beta(3, 4, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(3, 4, 1.0) == 1.0);
  }

  TEST_CASE("incomplete beta against Boost") {
    for (double a : {0.5, 1.0, 2.5, 15.0, 49.5, 200.0}) {
      for (double b : {0.5, 3.0, 24.5, 99.0}) {
        for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
          const double expected = boost::math::ibeta(a, b, x);
          const double got = regularized_incomplete_beta(a, b, x);
          REQUIRE(std::abs(got - expected) <= 1e-10 * std::max(expected, 1e-300) + 1e-300);
        }
      }
    }
  }

  TEST_CASE("quantiles") {
    CHECK(std::abs(f_quantile(0.025, 99, 99) - 0.6728416631266818) < 1e-9);
    CHECK(std::abs(f_quantile(0.975, 99, 99) - 1.4862337676192938) < 1e-9);
    CHECK(std::abs(f_quantile(0.975, 30, 50) - 1.8659402182574087) < 1e-9);
    CHECK(std::abs(f_cdf(2.0, 5, 10) - 0.8358050491002613) < 1e-12);
    for (double d : {1.0, 4.0, 30.0, 399.0}) CHECK(f_cdf(1.0, d, d) == doctest::Approx(0.5).epsilon(1e-12));
    for (double p : {0.01, 0.3, 0.9}) {
      const boost::math::fisher_f dist(12.0, 40.0);
      CHECK(f_quantile(p, 12, 40) == doctest::Approx(boost::math::quantile(dist, p)).epsilon(1e-9));
    }
  }
}

TEST_SUITE("nonlinear mapping") {
  TEST_CASE("identity and affine inputs") {
    std::vector<double> mos;
    for (int i = 0; i < 40; ++i) mos.push_back(5.0 + 2.2 * i);
    const auto same = nonlinear_map(mos, mos);
    CHECK(same.rss < 1e-8);
    CHECK(same.warning.empty());
    std::vector<double> affine;
    for (double m : mos) affine.push_back(0.02 * m - 1.0);
    const auto fit = nonlinear_map(affine, mos);
    for (std::size_t i = 0; i < mos.size(); ++i) CHECK(std::abs(fit.mapped[i] - mos[i]) < 1e-6);
    CHECK(fit.residuals[3] == fit.mapped[3] - mos[3]);
  }

  TEST_CASE("logistic distortion is undone") {
    std::mt19937_64 rng(13);
    std::vector<double> mos, objective;
    for (int i = 0; i < 120; ++i) {
      const double m = 1.0 + 99.0 * unit_interval_like(i);
      mos.push_back(m);
      objective.push_back(1.0 / (1.0 + std::exp(-(m - 50.0) / 8.0)) + 0.01 * standard_normal(rng));
    }
    const auto fit = nonlinear_map(objective, mos);
    CHECK(plcc(fit.mapped, mos) >= plcc(objective, mos));
  }

  TEST_CASE("too few points") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(error_code_of([&] { nonlinear_map(x, x); }) == ErrorCode::kTooFewSamples);
  }
}

TEST_SUITE("significance") {
  TEST_CASE("variance ratio test") {
    const auto a = gaussian(100, 1.0, 21), b = gaussian(100, 5.0, 22);
    CHECK(ftest_variance_ratio(a, a) == Verdict::kIndistinguishable);
    CHECK(ftest_variance_ratio(a, b) == Verdict::kFirstBetter);
    CHECK(ftest_variance_ratio(b, a) == Verdict::kSecondBetter);
    const double ratio = sample_variance(a) / sample_variance(b);
    CHECK(ratio < 0.6728416631266818);
    const auto c = gaussian(100, 1.05, 23);
    CHECK(ftest_variance_ratio(a, c) == Verdict::kIndistinguishable);
  }

  TEST_CASE("sample size floor") {
    const auto a = gaussian(30, 1.0, 1), b = gaussian(31, 1.0, 2);
    CHECK(error_code_of([&] { ftest_variance_ratio(a, b); }) == ErrorCode::kTooFewSamples);
    CHECK_NOTHROW(ftest_variance_ratio(b, b));
  }

  TEST_CASE("matrices") {
    const auto base = gaussian(400, 2.0, 31);
    auto noisy = base;
    const auto extra = gaussian(400, 6.0, 32);
    for (std::size_t i = 0; i < noisy.size(); ++i) noisy[i] += extra[i];
    const std::vector<ModelResiduals> two{{"A", base}, {"B", noisy}};
    const auto m = significance_matrix(two);
    CHECK(m.cells[0][1] == 'B');
    CHECK(m.cells[1][0] == 'W');

    const std::vector<ModelResiduals> one{{"A", base}};
    CHECK(significance_matrix(one).cells == std::vector<std::vector<char>>{{'G'}});

    const std::vector<ModelResiduals> three{{"A", base}, {"B", base}, {"C", base}};
    for (const auto& row : significance_matrix(three).cells) {
      for (char c : row) CHECK(c == 'G');
    }

    std::vector<ModelResiduals> many;
    for (int k = 0; k < 6; ++k) many.push_back({"m" + std::to_string(k), gaussian(80, 1.0 + 0.4 * k, 40 + k)});
    const auto big = significance_matrix(many);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(big.cells[i][i] == 'G');
      for (std::size_t j = 0; j < 6; ++j) {
        const char a = big.cells[i][j], b = big.cells[j][i];
        CHECK(((a == 'G' && b == 'G') || (a == 'B' && b == 'W') || (a == 'W' && b == 'B')));
      }
    }

    const std::vector<ModelResiduals> ragged{{"A", base}, {"B", gaussian(399, 1.0, 3)}};
    CHECK(error_code_of([&] { significance_matrix(ragged); }) == ErrorCode::kMismatchedStimuli);
    CHECK(significance_to_csv(m).find("A,G,B") != std::string::npos);
    CHECK(render_significance_grid(m).find('W') != std::string::npos);
  }

  TEST_CASE("scores are mapped before the test") {
    std::vector<double> truth;
    for (int i = 0; i < 60; ++i) truth.push_back(1.0 + 1.6 * i);
    MosTable table;
    std::vector<ModelScore> scores;
    const auto noise = gaussian(60, 3.0, 77);
    for (int i = 0; i < 60; ++i) {
      const std::string id = "s" + std::to_string(i);
      table.rows.push_back({id, truth[i], 1.0, 20, false});
      scores.push_back({id, "good", 0.5 * truth[i] + 0.3 * noise[i]});
      scores.push_back({id, "poor", truth[i] + 8.0 * noise[i]});
    }
    const auto residuals = mapped_residuals(scores, table);
    REQUIRE(residuals.size() == 2);
    CHECK(residuals[0].model_id == "good");
    CHECK(sample_variance(residuals[0].residuals) < sample_variance(residuals[1].residuals));
    const auto matrix = significance_matrix(residuals);
    CHECK(matrix.cells[0][1] == 'B');

    const auto loaded = load_model_scores_csv("stimulus_id,model_id,score\ns0,x,1.5\ns1,x,2\n");
    CHECK(loaded.size() == 2);
    CHECK(loaded[1].score == 2.0);
  }
}

TEST_SUITE("protocols") {
  const ModelParams& p = default_params();

  TEST_CASE("leave-one-content-out on noiseless data") {
    const auto d = synthetic_dataset(p);
    const auto report = loocv(d, default_calibrator());
    CHECK(report.rows.size() == 20);
    CHECK(report.succeeded == 20);
    for (const auto& row : report.rows) CHECK(row.metrics.rmse < 1e-6);
  }

  TEST_CASE("folds never see their own content") {
    const auto d = synthetic_dataset(p);
    for (const auto& split : loocv_splits(d)) {
      CHECK(split.test.size() == 1);
      CHECK(split.train.count(*split.test.begin()) == 0);
      CHECK(split.train.size() == 19);
    }
    const auto subset = d.with_contents({"content_00", "content_01", "content_02"});
    std::mutex lock;
    std::vector<std::vector<std::string>> seen;
    Calibrator spy = [&](const Dataset& train) {
      {
        std::lock_guard guard(lock);
        seen.push_back(train.content_ids());
      }
      return calibrate_full(train).params;
    };
    const auto report = loocv(subset, spy);
    REQUIRE(seen.size() == 3);
    for (const auto& row : report.rows) {
      std::size_t holding = 0;
      for (const auto& ids : seen) holding += std::count(ids.begin(), ids.end(), row.group);
      CHECK(holding == 2);  // present in every fold but its own
    }
    CHECK(report.rows.size() == 3);
    CHECK(error_code_of([&] { loocv(d.with_contents({"content_04"}), default_calibrator()); }) ==
          ErrorCode::kTooFewContents);
  }

  TEST_CASE("random trials are reproducible") {
    SyntheticDatasetSpec spec;
    spec.mos_noise_sigma = 2.0;
    const auto d = synthetic_dataset(p, spec);
    const auto a = random_trials(d, default_calibrator(), 40, 0.5, 99);
    const auto b = random_trials(d, default_calibrator(), 40, 0.5, 99);
    CHECK(report_to_csv(a) == report_to_csv(b));
    const auto splits = random_splits(d, 5, 0.5, 99);
    for (const auto& s : splits) {
      CHECK(s.train.size() == 10);
      CHECK(s.test.size() == 10);
    }
    CHECK(random_splits(d, 5, 0.5, 100)[0].train != splits[0].train);
  }

  TEST_CASE("random trials concentrate near one on low-noise data") {
    SyntheticDatasetSpec spec;
    spec.mos_noise_sigma = 2.0;
    const auto report = random_trials(synthetic_dataset(p, spec), default_calibrator(), 100);
    std::vector<double> plccs;
    for (const auto& row : report.rows) plccs.push_back(row.metrics.plcc);
    std::sort(plccs.begin(), plccs.end());
    CHECK(plccs[plccs.size() / 20] > 0.95);
  }

  TEST_CASE("random split arguments") {
    const auto d = synthetic_dataset(p);
    CHECK(error_code_of([&] { random_splits(d, 3, 1.0, 1); }) == ErrorCode::kEmptyTestSet);
    CHECK(error_code_of([&] { random_splits(d, 3, 0.01, 1); }) == ErrorCode::kTooFewContents);
    CHECK(error_code_of([&] { random_splits(d, 0, 0.5, 1); }) == ErrorCode::kConfigError);
    CHECK(error_code_of([&] { random_splits(d, 3, 0.0, 1); }) == ErrorCode::kConfigError);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) CHECK(uniform_below(7, rng) < 7);
  }

  TEST_CASE("ablation without geometry loss") {
    ModelParams flat = p;
    flat.l1 = 0.0;
    flat.l3 = 1.0;
    SyntheticDatasetSpec spec;
    spec.mos_noise_sigma = 1.0;
    const auto d = synthetic_dataset(flat, spec);
    std::set<std::string> train;
    for (int i = 0; i < 20; i += 2) train.insert(fmt_content(i));
    const auto report = ablation(d, default_calibrator(), train);
    REQUIRE(report.rows.size() == 3);
    const auto& texture = report.rows[0].metrics;
    const auto& full = report.rows[2].metrics;
    CHECK(std::abs(texture.plcc - full.plcc) < 1e-3);
    CHECK(std::abs(texture.rmse - full.rmse) < 0.1);
    CHECK(error_code_of([&] { ablation(d, default_calibrator(), {"content_00"}); }) ==
          ErrorCode::kTooFewContents);
  }

  TEST_CASE("ablation separates the two factors") {
    SyntheticDatasetSpec spec;
    spec.mos_noise_sigma = 1.0;
    const auto d = synthetic_dataset(p, spec);
    std::set<std::string> train;
    for (int i = 0; i < 20; i += 2) train.insert(fmt_content(i));
    const auto report = ablation(d, default_calibrator(), train);
    CHECK(report.rows[2].metrics.plcc > report.rows[0].metrics.plcc);
    CHECK(report.rows[2].metrics.plcc > report.rows[1].metrics.plcc);
    CHECK(report.metadata.at("test_contents").find("content_01") != std::string::npos);
  }

  TEST_CASE("report layout") {
    EvalReport report;
    report.protocol = "loocv";
    report.rows.push_back({"a", {0.9, 0.8, 5.0}, 20, false, ""});
    report.rows.push_back({"b", {0.7, 0.6, 7.0}, 20, false, ""});
    report.rows.push_back({"c", {}, 20, true, "zero variance"});
    report.aggregate();
    CHECK(report.succeeded == 2);
    CHECK(report.mean.plcc == doctest::Approx(0.8));
    CHECK(report.std.rmse == doctest::Approx(std::sqrt(2.0)));
    const auto csv = report_to_csv(report);
    CHECK(csv.rfind("group,plcc,srcc,rmse,records,status\n", 0) == 0);
    CHECK(csv.find("c,,,,20,failed") != std::string::npos);
    CHECK(csv.find("Mean,") != std::string::npos);
    CHECK(csv.find("Standard deviation,") != std::string::npos);
  }
}
