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

#include "streampcq/subjective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "streampcq/error.hpp"
#include "streampcq/io.hpp"

namespace streampcq {

namespace {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double sample_std = 0.0;
  double kurtosis = 0.0;  // m4 / m2^2
};

Moments moments_of(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(m.n);
  double m2 = 0.0;
  double m4 = 0.0;
  for (double x : v) {
    const double d = (x - m.mean) * (x - m.mean);
    m2 += d;
    m4 += d * d;
  }
  if (m.n > 1) m.sample_std = std::sqrt(m2 / static_cast<double>(m.n - 1));
  m2 /= static_cast<double>(m.n);
  m4 /= static_cast<double>(m.n);
  m.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
  return m;
}

std::vector<double> stimulus_scores(const RatingMatrix& m, std::size_t s) {
  std::vector<double> out;
  for (const auto& x : m.scores[s]) {
    if (x) out.push_back(*x);
  }
  return out;
}

std::vector<double> observer_scores(const RatingMatrix& m, std::size_t o) {
  std::vector<double> out;
  for (const auto& row : m.scores) {
    if (row[o]) out.push_back(*row[o]);
  }
  return out;
}

}  // namespace

std::string_view zscore_axis_name(ZscoreAxis axis) {
  return axis == ZscoreAxis::kPerObserver ? "observer" : "stimulus";
}

ZscoreAxis parse_zscore_axis(std::string_view name) {
  if (name == "observer") return ZscoreAxis::kPerObserver;
  if (name == "stimulus") return ZscoreAxis::kPerStimulus;
  throw Error(ErrorCode::kConfigError, fmt::format("unknown z-score axis '{}' (observer|stimulus)", name));
}

RatingMatrix zscore(const RatingMatrix& matrix, ZscoreAxis axis) {
  RatingMatrix out = matrix;
  if (axis == ZscoreAxis::kPerObserver) {
    for (std::size_t o = 0; o < matrix.observer_count(); ++o) {
      const Moments m = moments_of(observer_scores(matrix, o));
      if (m.n < 2 || m.sample_std == 0.0) {
        throw Error(ErrorCode::kZeroVariance,
                    fmt::format("observer '{}' has {} score(s) with no spread", matrix.observers[o], m.n));
      }
      for (auto& row : out.scores) {
        if (row[o]) row[o] = (*row[o] - m.mean) / m.sample_std;
      }
    }
  } else {
    for (std::size_t s = 0; s < matrix.stimulus_count(); ++s) {
      const Moments m = moments_of(stimulus_scores(matrix, s));
      if (m.n < 2 || m.sample_std == 0.0) {
        throw Error(ErrorCode::kZeroVariance,
                    fmt::format("stimulus '{}' has {} score(s) with no spread", matrix.stimuli[s], m.n));
      }
      for (auto& x : out.scores[s]) {
        if (x) x = (*x - m.mean) / m.sample_std;
      }
    }
  }
  return out;
}

ScreeningResult screen_observers(const RatingMatrix& matrix) {
  if (matrix.observer_count() < 3) {
    throw Error(ErrorCode::kTooFewObservers,
                fmt::format("screening needs three observers, got {}", matrix.observer_count()));
  }
  const std::size_t n_obs = matrix.observer_count();
  std::vector<std::size_t> p(n_obs, 0);
  std::vector<std::size_t> q(n_obs, 0);
  std::vector<std::size_t> rated(n_obs, 0);
  for (std::size_t s = 0; s < matrix.stimulus_count(); ++s) {
    const Moments m = moments_of(stimulus_scores(matrix, s));
    const bool normal = m.kurtosis >= 2.0 && m.kurtosis <= 4.0;
    const double band = (normal ? 2.0 : std::sqrt(20.0)) * m.sample_std;
    for (std::size_t o = 0; o < n_obs; ++o) {
      const auto& x = matrix.scores[s][o];
      if (!x) continue;
      ++rated[o];
      if (*x > m.mean + band) ++p[o];
      if (*x < m.mean - band) ++q[o];
    }
  }

  ScreeningResult result;
  std::vector<std::size_t> keep;
  for (std::size_t o = 0; o < n_obs; ++o) {
    const double pq = static_cast<double>(p[o] + q[o]);
    const bool reject = rated[o] > 0 && pq / static_cast<double>(rated[o]) > 0.05 &&
                        std::abs(static_cast<double>(p[o]) - static_cast<double>(q[o])) / pq < 0.3;
    if (reject) {
      result.rejected.push_back(matrix.observers[o]);
    } else {
      keep.push_back(o);
    }
  }
  RatingMatrix& r = result.retained;
  r.stimuli = matrix.stimuli;
  for (auto o : keep) r.observers.push_back(matrix.observers[o]);
  r.scores.resize(matrix.stimulus_count());
  for (std::size_t s = 0; s < matrix.stimulus_count(); ++s) {
    for (auto o : keep) r.scores[s].push_back(matrix.scores[s][o]);
  }
  return result;
}

RatingMatrix rescale_to_range(const RatingMatrix& matrix, double lo, double hi) {
  double mn = std::numeric_limits<double>::infinity();
  double mx = -mn;
  for (const auto& row : matrix.scores) {
    for (const auto& x : row) {
      if (!x) continue;
      mn = std::min(mn, *x);
      mx = std::max(mx, *x);
    }
  }
  if (!(mx > mn)) throw Error(ErrorCode::kDegenerateRange, "all scores are equal; nothing to rescale");
  RatingMatrix out = matrix;
  const double scale = (hi - lo) / (mx - mn);
  for (auto& row : out.scores) {
    for (auto& x : row) {
      if (!x) continue;
      // Exact endpoints, whatever the rounding of the affine map.
      x = *x == mn ? lo : *x == mx ? hi : lo + (*x - mn) * scale;
    }
  }
  return out;
}

MosTable compute_mos(const RatingMatrix& matrix) {
  MosTable table;
  for (std::size_t s = 0; s < matrix.stimulus_count(); ++s) {
    auto v = stimulus_scores(matrix, s);
    if (v.empty()) {
      throw Error(ErrorCode::kEmptyStimulus, fmt::format("stimulus '{}' has no retained scores", matrix.stimuli[s]));
    }
    // Sorted accumulation keeps the result independent of observer order.
    std::sort(v.begin(), v.end());
    const Moments m = moments_of(v);
    table.rows.push_back({matrix.stimuli[s], m.mean, m.sample_std, m.n, m.n == 1});
  }
  return table;
}

SubjectiveResult process_ratings(const RatingMatrix& matrix, const SubjectiveOptions& options) {
  RatingMatrix work = zscore(matrix, options.axis);
  SubjectiveResult result;
  if (options.screen) {
    auto screened = screen_observers(work);
    work = std::move(screened.retained);
    result.rejected = std::move(screened.rejected);
  }
  work = rescale_to_range(work, options.lo, options.hi);
  result.mos = compute_mos(work);
  return result;
}

RatingMatrix load_ratings_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const int c_s = table.column("stimulus_id");
  const int c_o = table.column("observer_id");
  const int c_x = table.column("score");
  if (c_s < 0 || c_o < 0 || c_x < 0) {
    throw Error(ErrorCode::kParseError, "ratings CSV needs columns stimulus_id, observer_id, score");
  }
  RatingMatrix m;
  std::map<std::string, std::size_t> s_index;
  std::map<std::string, std::size_t> o_index;
  struct Entry {
    std::size_t s, o;
    double x;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    auto [si, s_new] = s_index.emplace(row[c_s], m.stimuli.size());
    if (s_new) m.stimuli.push_back(row[c_s]);
    auto [oi, o_new] = o_index.emplace(row[c_o], m.observers.size());
    if (o_new) m.observers.push_back(row[c_o]);
    entries.push_back({si->second, oi->second, parse_double_field(row[c_x], "score", i + 1)});
  }
  m.scores.assign(m.stimuli.size(), std::vector<std::optional<double>>(m.observers.size()));
  for (const auto& e : entries) {
    auto& cell = m.scores[e.s][e.o];
    if (cell) {
      throw Error(ErrorCode::kDuplicateRecord,
                  fmt::format("observer '{}' rated stimulus '{}' twice", m.observers[e.o], m.stimuli[e.s]));
    }
    cell = e.x;
  }
  return m;
}

std::string ratings_to_csv(const RatingMatrix& m) {
  std::string out = "stimulus_id,observer_id,score\n";
  for (std::size_t s = 0; s < m.stimulus_count(); ++s) {
    for (std::size_t o = 0; o < m.observer_count(); ++o) {
      if (m.scores[s][o]) {
        out += fmt::format("{},{},{}\n", csv_escape(m.stimuli[s]), csv_escape(m.observers[o]), *m.scores[s][o]);
      }
    }
  }
  return out;
}

std::string mos_table_to_csv(const MosTable& table) {
  std::string out = "stimulus_id,mos,std,n\n";
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{}\n", csv_escape(r.stimulus_id), r.mos, r.std, r.n);
  }
  return out;
}

MosTable load_mos_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const int c_s = table.column("stimulus_id");
  const int c_m = table.column("mos");
  if (c_s < 0 || c_m < 0) throw Error(ErrorCode::kParseError, "MOS CSV needs columns stimulus_id, mos");
  const int c_sd = table.column("std");
  const int c_n = table.column("n");
  MosTable out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    MosRow r;
    r.stimulus_id = row[c_s];
    r.mos = parse_double_field(row[c_m], "mos", i + 1);
    if (c_sd >= 0 && !row[c_sd].empty()) r.std = parse_double_field(row[c_sd], "std", i + 1);
    if (c_n >= 0 && !row[c_n].empty()) r.n = static_cast<std::size_t>(parse_double_field(row[c_n], "n", i + 1));
    r.single_observer = r.n == 1;
    out.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace streampcq
