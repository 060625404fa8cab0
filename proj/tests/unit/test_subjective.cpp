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
#include <optional>
#include <random>
#include <string>

#include "streampcq/subjective.hpp"
#include "streampcq/synthetic.hpp"
#include "test_support.hpp"

using namespace streampcq;
using streampcq::testing::error_code_of;

namespace {

RatingMatrix from_rows(const std::vector<std::vector<double>>& rows) {
  RatingMatrix m;
  for (std::size_t s = 0; s < rows.size(); ++s) m.stimuli.push_back("s" + std::to_string(s));
  for (std::size_t o = 0; o < rows.front().size(); ++o) m.observers.push_back("o" + std::to_string(o));
  for (const auto& row : rows) {
    m.scores.emplace_back(row.begin(), row.end());
  }
  return m;
}

std::vector<double> spread_mos(std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(10.0 + 80.0 * double(i) / double(n - 1));
  return out;
}

// Plain restatement of the BT.500 rule, for one observer.
bool oracle_rejects(const RatingMatrix& m, std::size_t observer) {
  std::size_t p = 0, q = 0;
  for (const auto& row : m.scores) {
    std::vector<double> xs;
    for (const auto& x : row) xs.push_back(*x);
    const double n = double(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x / n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
      m2 += std::pow(x - mean, 2) / n;
      m4 += std::pow(x - mean, 4) / n;
    }
    const double sd = std::sqrt(m2 * n / (n - 1));
    const double kurt = m4 / (m2 * m2);
    const double band = (kurt >= 2 && kurt <= 4 ? 2.0 : std::sqrt(20.0)) * sd;
    const double x = *row[observer];
    p += x > mean + band;
    q += x < mean - band;
  }
  const double pq = double(p + q);
  return pq / double(m.scores.size()) > 0.05 && std::abs(double(p) - double(q)) / pq < 0.3;
}

}  // namespace

TEST_SUITE("subjective") {
  TEST_CASE("z-score per observer") {
    const auto z = zscore(from_rows({{40, 10}, {60, 30}, {50, 20}}));
    CHECK(z.scores[0][0].value() == doctest::Approx(-1.0));
    CHECK(z.scores[1][0].value() == doctest::Approx(1.0));
    CHECK(z.scores[2][0].value() == 0.0);
    CHECK(z.scores[2][1].value() == 0.0);

    const auto two = zscore(from_rows({{40}, {60}}));
    CHECK(two.scores[0][0].value() == doctest::Approx(-0.7071067811865475).epsilon(1e-12));
    CHECK(two.scores[1][0].value() == doctest::Approx(0.7071067811865475).epsilon(1e-12));
  }

  TEST_CASE("z-score per stimulus and missing entries") {
    auto m = from_rows({{40, 60, 50}, {10, 30, 20}});
    m.scores[1][2].reset();
    const auto z = zscore(m, ZscoreAxis::kPerStimulus);
    CHECK(z.scores[0][2].value() == 0.0);
    CHECK_FALSE(z.scores[1][2].has_value());
    CHECK(z.scores[1][0].value() == doctest::Approx(-0.7071067811865475));
  }

  TEST_CASE("z-score errors") {
    CHECK(error_code_of([] { zscore(from_rows({{50, 10}, {50, 20}})); }) == ErrorCode::kZeroVariance);
    CHECK(parse_zscore_axis("stimulus") == ZscoreAxis::kPerStimulus);
    CHECK(zscore_axis_name(ZscoreAxis::kPerObserver) == "observer");
    CHECK(error_code_of([] { parse_zscore_axis("rows"); }) == ErrorCode::kConfigError);
  }

  TEST_CASE("adversary is rejected") {
    SyntheticPanelSpec spec;
    spec.observers = 30;
    spec.adversaries = 1;
    const auto ratings = synthetic_ratings(spread_mos(40), spec);
    const auto result = screen_observers(ratings);
    REQUIRE(result.rejected.size() >= 1);
    CHECK(std::find(result.rejected.begin(), result.rejected.end(), "obs_29") != result.rejected.end());
    for (std::size_t o = 0; o < ratings.observer_count(); ++o) {
      const bool rejected = std::find(result.rejected.begin(), result.rejected.end(),
                                      ratings.observers[o]) != result.rejected.end();
      CHECK(rejected == oracle_rejects(ratings, o));
    }
    CHECK(result.retained.observer_count() + result.rejected.size() == 30);
  }

  TEST_CASE("identical observers survive screening") {
    const auto m = from_rows({{30, 30, 30, 30}, {70, 70, 70, 70}, {55, 55, 55, 55}});
    const auto result = screen_observers(m);
    CHECK(result.rejected.empty());
    CHECK(result.retained.observer_count() == 4);
  }

  TEST_CASE("an observer at the per-stimulus mean is kept") {
    SyntheticPanelSpec spec;
    spec.observers = 12;
    auto m = synthetic_ratings(spread_mos(25), spec);
    // The mean of the others is also the mean of the full row.
    for (auto& row : m.scores) {
      double sum = 0.0;
      for (std::size_t o = 1; o < row.size(); ++o) sum += *row[o];
      row[0] = sum / double(row.size() - 1);
    }
    const auto result = screen_observers(m);
    CHECK(std::find(result.rejected.begin(), result.rejected.end(), "obs_00") == result.rejected.end());
  }

  TEST_CASE("screening needs three observers") {
    CHECK(error_code_of([] { screen_observers(from_rows({{1, 2}, {3, 4}})); }) ==
          ErrorCode::kTooFewObservers);
  }

  TEST_CASE("rescaling") {
    const auto r = rescale_to_range(from_rows({{-2}, {0}, {2}}));
    CHECK(r.scores[0][0].value() == 1.0);
    CHECK(r.scores[1][0].value() == doctest::Approx(50.5));
    CHECK(r.scores[2][0].value() == 100.0);
    CHECK(error_code_of([] { rescale_to_range(from_rows({{3, 3}, {3, 3}})); }) ==
          ErrorCode::kDegenerateRange);

    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> rows(30, std::vector<double>(1));
    for (auto& row : rows) row[0] = g(rng);
    const auto before = from_rows(rows);
    const auto after = rescale_to_range(before);
    for (std::size_t a = 0; a < 30; ++a) {
      for (std::size_t b = 0; b < 30; ++b) {
        CHECK((*before.scores[a][0] < *before.scores[b][0]) == (*after.scores[a][0] < *after.scores[b][0]));
      }
    }
  }

  TEST_CASE("MOS and standard deviation") {
    auto m = from_rows({{50, 70}, {20, 40}});
    m.scores[1][1].reset();
    const auto table = compute_mos(m);
    CHECK(table.rows[0].mos == 60.0);
    CHECK(table.rows[0].std == doctest::Approx(14.142135623730951).epsilon(1e-12));
    CHECK(table.rows[0].n == 2);
    CHECK(table.rows[1].single_observer);
    CHECK(table.rows[1].std == 0.0);
    m.scores[1][0].reset();
    CHECK(error_code_of([&] { compute_mos(m); }) == ErrorCode::kEmptyStimulus);
  }

  TEST_CASE("MOS is invariant to observer order") {
    SyntheticPanelSpec spec;
    const auto m = synthetic_ratings(spread_mos(15), spec);
    auto shuffled = m;
    std::vector<std::size_t> perm(m.observer_count());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 rng(4);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t s = 0; s < m.stimulus_count(); ++s) {
      for (std::size_t o = 0; o < perm.size(); ++o) shuffled.scores[s][o] = m.scores[s][perm[o]];
    }
    const auto a = compute_mos(m), b = compute_mos(shuffled);
    for (std::size_t s = 0; s < a.rows.size(); ++s) {
      CHECK(a.rows[s].mos == b.rows[s].mos);
      CHECK(a.rows[s].std == b.rows[s].std);
    }
  }

  TEST_CASE("panel mean tracks the generating MOS") {
    SyntheticPanelSpec spec;
    spec.noise_sigma = 8.0;
    const auto truth = spread_mos(60);
    const auto table = compute_mos(synthetic_ratings(truth, spec));
    const double bound = 2.0 * spec.noise_sigma / std::sqrt(double(spec.observers));
    std::size_t inside = 0;
    for (std::size_t s = 0; s < truth.size(); ++s) {
      inside += std::abs(table.rows[s].mos - truth[s]) <= bound;
    }
    // About 95 % by construction.
    CHECK(double(inside) / double(truth.size()) >= 0.9);
  }

  TEST_CASE("pipeline keeps each observer's ordering") {
    SyntheticPanelSpec spec;
    spec.observers = 5;
    const auto m = synthetic_ratings(spread_mos(20), spec);
    SubjectiveOptions options;
    options.screen = false;
    const auto z = rescale_to_range(zscore(m));
    for (std::size_t o = 0; o < 5; ++o) {
      for (std::size_t a = 0; a < 20; ++a) {
        for (std::size_t b = 0; b < 20; ++b) {
          REQUIRE((*m.scores[a][o] < *m.scores[b][o]) == (*z.scores[a][o] < *z.scores[b][o]));
        }
      }
    }
    const auto result = process_ratings(m, options);
    CHECK(result.rejected.empty());
    CHECK(result.mos.rows.size() == 20);
    for (const auto& row : result.mos.rows) {
      CHECK(row.mos >= 1.0);
      CHECK(row.mos <= 100.0);
    }
  }

  TEST_CASE("CSV formats") {
    SyntheticPanelSpec spec;
    spec.observers = 4;
    auto m = synthetic_ratings(spread_mos(6), spec);
    m.scores[2][1].reset();
    const auto back = load_ratings_csv(ratings_to_csv(m));
    CHECK(back.stimuli == m.stimuli);
    CHECK(back.observers == m.observers);
    CHECK_FALSE(back.scores[2][1].has_value());
    CHECK(back.scores[3][3] == m.scores[3][3]);

    const auto table = compute_mos(m);
    const auto text = mos_table_to_csv(table);
    CHECK(text.rfind("stimulus_id,mos,std,n\n", 0) == 0);
    const auto loaded = load_mos_csv(text);
    REQUIRE(loaded.rows.size() == table.rows.size());
    CHECK(loaded.rows[2].n == 3);
    CHECK(loaded.rows[0].mos == table.rows[0].mos);

    CHECK(error_code_of([] {
            load_ratings_csv("stimulus_id,observer_id,score\na,o1,50\na,o1,60\n");
          }) == ErrorCode::kDuplicateRecord);
    CHECK(error_code_of([] { load_ratings_csv("stimulus,score\na,1\n"); }) == ErrorCode::kParseError);
  }
}
