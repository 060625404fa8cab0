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

#include "streampcq/protocols.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "streampcq/error.hpp"
#include "streampcq/io.hpp"

namespace streampcq {

namespace {

void check_no_leakage(const Dataset& train, const ContentSplit& split) {
  for (const auto& r : train.records) {
    if (split.test.count(r.content_id)) {
      throw std::logic_error("training fold contains held-out content '" + r.content_id + "'");
    }
  }
}

// Calibrates on the split's training side and scores the test side.
EvalRow run_split(const Dataset& dataset, const ContentSplit& split, const Calibrator& calibrator,
                  std::string group) {
  EvalRow row;
  row.group = std::move(group);
  const Dataset train = dataset.with_contents(split.train);
  check_no_leakage(train, split);
  const Dataset test = dataset.with_contents(split.test);
  row.records = test.records.size();
  try {
    row.metrics = score_model(test, calibrator(train));
  } catch (const Error& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

void collect_failures(EvalReport& report) {
  for (const auto& row : report.rows) {
    if (row.failed) report.warnings.push_back(fmt::format("{} failed: {}", row.group, row.error));
  }
}

std::string number(double v) { return std::isfinite(v) ? fmt::format("{}", v) : std::string("nan"); }

}  // namespace

void EvalReport::aggregate() {
  std::vector<const MetricTriple*> ok;
  for (const auto& row : rows) {
    if (!row.failed) ok.push_back(&row.metrics);
  }
  succeeded = ok.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (ok.empty()) {
    mean = MetricTriple{nan, nan, nan};
    std = mean;
    return;
  }
  const auto n = static_cast<double>(ok.size());
  auto stats = [&](double MetricTriple::*field, double& m, double& s) {
    m = 0.0;
    for (const auto* t : ok) m += t->*field;
    m /= n;
    double ss = 0.0;
    for (const auto* t : ok) ss += (t->*field - m) * (t->*field - m);
    s = ok.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  };
  stats(&MetricTriple::plcc, mean.plcc, std.plcc);
  stats(&MetricTriple::srcc, mean.srcc, std.srcc);
  stats(&MetricTriple::rmse, mean.rmse, std.rmse);
}

MetricTriple score_model(const Dataset& test, const ModelParams& params) {
  std::vector<double> predicted;
  std::vector<double> observed;
  predicted.reserve(test.records.size());
  observed.reserve(test.records.size());
  for (const auto& r : test.records) {
    predicted.push_back(predict(r.features, params).mos_est);
    observed.push_back(r.mos);
  }
  return evaluate_triple(predicted, observed);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

//============================================================================
// Leave one content out

std::vector<ContentSplit> loocv_splits(const Dataset& dataset) {
  const auto ids = dataset.content_ids();
  std::vector<ContentSplit> splits;
  for (const auto& held_out : ids) {
    ContentSplit s;
    s.test.insert(held_out);
    for (const auto& id : ids) {
      if (id != held_out) s.train.insert(id);
    }
    splits.push_back(std::move(s));
  }
  return splits;
}

EvalReport loocv(const Dataset& dataset, const Calibrator& calibrator) {
  const auto ids = dataset.content_ids();
  if (ids.size() < 2) {
    throw Error(ErrorCode::kTooFewContents, fmt::format("LOOCV needs two contents, got {}", ids.size()));
  }
  const auto splits = loocv_splits(dataset);
  EvalReport report;
  report.protocol = "loocv";
  report.rows.resize(splits.size());
  parallel_for(splits.size(), [&](std::size_t i) {
    report.rows[i] = run_split(dataset, splits[i], calibrator, *splits[i].test.begin());
  });
  report.metadata["folds"] = std::to_string(splits.size());
  report.metadata["grouping"] = "content";
  collect_failures(report);
  report.aggregate();
  return report;
}

//============================================================================
// Random content splits

std::uint64_t uniform_below(std::uint64_t bound, std::mt19937_64& engine) {
  if (bound == 0) throw Error(ErrorCode::kConfigError, "uniform_below needs a positive bound");
  // Reject the low 2^64 mod bound outputs so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine();
    if (r >= threshold) return r % bound;
  }
}

std::vector<ContentSplit> random_splits(const Dataset& dataset, int n_trials, double train_fraction,
                                        std::uint64_t seed) {
  const auto ids = dataset.content_ids();
  if (ids.size() < 2) {
    throw Error(ErrorCode::kTooFewContents, fmt::format("random splits need two contents, got {}", ids.size()));
  }
  if (n_trials < 1) throw Error(ErrorCode::kConfigError, "at least one trial is required");
  if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
    throw Error(ErrorCode::kConfigError, fmt::format("train fraction {} out of (0, 1]", train_fraction));
  }
  const auto k = ids.size();
  const auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(k)));
  if (n_train >= k) {
    throw Error(ErrorCode::kEmptyTestSet,
                fmt::format("train fraction {} leaves no test contents out of {}", train_fraction, k));
  }
  if (n_train == 0) {
    throw Error(ErrorCode::kTooFewContents, fmt::format("train fraction {} selects no training contents", train_fraction));
  }

  std::mt19937_64 engine(seed);
  std::vector<ContentSplit> splits;
  splits.reserve(static_cast<std::size_t>(n_trials));
  for (int t = 0; t < n_trials; ++t) {
    auto order = ids;
    for (std::size_t i = k - 1; i > 0; --i) {
      std::swap(order[i], order[uniform_below(i + 1, engine)]);
    }
    ContentSplit s;
    s.train.insert(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.insert(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    splits.push_back(std::move(s));
  }
  return splits;
}

EvalReport random_trials(const Dataset& dataset, const Calibrator& calibrator, int n_trials,
                         double train_fraction, std::uint64_t seed) {
  const auto splits = random_splits(dataset, n_trials, train_fraction, seed);
  EvalReport report;
  report.protocol = "random";
  report.rows.resize(splits.size());
  parallel_for(splits.size(), [&](std::size_t i) {
    report.rows[i] = run_split(dataset, splits[i], calibrator, fmt::format("trial {}", i + 1));
  });
  report.metadata["seed"] = std::to_string(seed);
  report.metadata["trials"] = std::to_string(n_trials);
  report.metadata["train_fraction"] = fmt::format("{}", train_fraction);
  report.metadata["prng"] = "mt19937_64";
  collect_failures(report);
  report.aggregate();
  return report;
}

//============================================================================
// Ablation

EvalReport ablation(const Dataset& dataset, const Calibrator& calibrator,
                    const std::set<std::string>& train_contents) {
  ContentSplit split;
  for (const auto& id : dataset.content_ids()) {
    (train_contents.count(id) ? split.train : split.test).insert(id);
  }
  if (split.train.size() < 2) {
    throw Error(ErrorCode::kTooFewContents,
                fmt::format("ablation training side has {} content(s) in the dataset", split.train.size()));
  }
  if (split.test.empty()) throw Error(ErrorCode::kEmptyTestSet, "every content is on the training side");

  const Dataset train = dataset.with_contents(split.train);
  check_no_leakage(train, split);
  const Dataset test = dataset.with_contents(split.test);
  const ModelParams params = calibrator(train);

  std::vector<double> observed;
  std::vector<double> texture;
  std::vector<double> geometry;
  std::vector<double> full;
  for (const auto& r : test.records) {
    const Prediction p = predict(r.features, params);
    observed.push_back(r.mos);
    texture.push_back(p.mos_texture);
    geometry.push_back(params.b * p.attenuation);
    full.push_back(p.mos_est);
  }

  EvalReport report;
  report.protocol = "ablation";
  auto add = [&](const char* name, const std::vector<double>& predicted) {
    EvalRow row;
    row.group = name;
    row.records = predicted.size();
    try {
      row.metrics = evaluate_triple(predicted, observed);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  };
  add("texture-only", texture);
  add("geometry-only", geometry);
  add("full", full);
  report.metadata["train_contents"] = fmt::format("{}", fmt::join(split.train, ";"));
  report.metadata["test_contents"] = fmt::format("{}", fmt::join(split.test, ";"));
  collect_failures(report);
  report.aggregate();
  return report;
}

//============================================================================
// Output

std::string report_to_csv(const EvalReport& report, bool with_aggregates) {
  std::string out = "group,plcc,srcc,rmse,records,status\n";
  for (const auto& row : report.rows) {
    if (row.failed) {
      out += fmt::format("{},,,,{},failed\n", csv_escape(row.group), row.records);
    } else {
      out += fmt::format("{},{},{},{},{},ok\n", csv_escape(row.group), number(row.metrics.plcc),
                         number(row.metrics.srcc), number(row.metrics.rmse), row.records);
    }
  }
  if (with_aggregates) {
    out += fmt::format("Mean,{},{},{},{},aggregate\n", number(report.mean.plcc), number(report.mean.srcc),
                       number(report.mean.rmse), report.succeeded);
    out += fmt::format("Standard deviation,{},{},{},{},aggregate\n", number(report.std.plcc),
                       number(report.std.srcc), number(report.std.rmse), report.succeeded);
  }
  return out;
}

std::string render_report_text(const EvalReport& report, bool with_aggregates) {
  std::size_t width = std::string_view("Standard deviation").size();
  for (const auto& row : report.rows) width = std::max(width, row.group.size());
  std::string out = fmt::format("{:<{}}  {:>8}  {:>8}  {:>8}\n", "", width, "PLCC", "SRCC", "RMSE");
  auto line = [&](const std::string& name, const MetricTriple& t) {
    out += fmt::format("{:<{}}  {:>8.4f}  {:>8.4f}  {:>8.4f}\n", name, width, t.plcc, t.srcc, t.rmse);
  };
  for (const auto& row : report.rows) {
    if (row.failed) {
      out += fmt::format("{:<{}}  failed: {}\n", row.group, width, row.error);
    } else {
      line(row.group, row.metrics);
    }
  }
  if (with_aggregates) {
    line("Mean", report.mean);
    line("Standard deviation", report.std);
  }
  return out;
}

}  // namespace streampcq
