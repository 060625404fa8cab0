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

#include "streampcq/dataset.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "streampcq/error.hpp"
#include "streampcq/io.hpp"

namespace streampcq {

std::vector<std::string> Dataset::content_ids() const {
  std::set<std::string> ids;
  for (const auto& r : records) ids.insert(r.content_id);
  return {ids.begin(), ids.end()};
}

std::set<double> Dataset::tqp_levels() const {
  std::set<double> out;
  for (const auto& r : records) out.insert(r.features.tqp);
  return out;
}

std::set<double> Dataset::tnsl_levels() const {
  std::set<double> out;
  for (const auto& r : records) out.insert(r.features.tnsl);
  return out;
}

Dataset Dataset::with_contents(const std::set<std::string>& keep) const {
  Dataset out;
  for (const auto& r : records) {
    if (keep.count(r.content_id)) out.records.push_back(r);
  }
  return out;
}

Dataset Dataset::without_content(std::string_view content_id) const {
  Dataset out;
  for (const auto& r : records) {
    if (r.content_id != content_id) out.records.push_back(r);
  }
  return out;
}

void Dataset::validate() const {
  std::set<std::tuple<std::string, double, double>> seen;
  for (const auto& r : records) {
    if (!std::isfinite(r.mos)) {
      throw Error(ErrorCode::kInputError, "non-finite MOS for content '" + r.content_id + "'");
    }
    if (!seen.emplace(r.content_id, r.features.tqp, r.features.tnsl).second) {
      throw Error(ErrorCode::kDuplicateRecord,
                  fmt::format("content '{}' has two records at tqp {} tnsl {}", r.content_id,
                              r.features.tqp, r.features.tnsl));
    }
  }
}

Dataset load_dataset_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  const char* required[] = {"content_id", "tqp", "tbpp", "tnsl", "mos"};
  for (const char* name : required) {
    if (table.column(name) < 0) {
      throw Error(ErrorCode::kParseError, std::string("dataset CSV lacks column '") + name + "'");
    }
  }
  const int c_id = table.column("content_id");
  const int c_tqp = table.column("tqp");
  const int c_tbpp = table.column("tbpp");
  const int c_tnsl = table.column("tnsl");
  const int c_mos = table.column("mos");
  const int c_tc = table.column("tc_ref");

  Dataset dataset;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::size_t line = i + 1;
    DatasetRecord r;
    r.content_id = row[c_id];
    r.features.content_id = r.content_id;
    r.features.tqp = parse_double_field(row[c_tqp], "tqp", line);
    r.features.tbpp = parse_double_field(row[c_tbpp], "tbpp", line);
    r.features.tnsl = parse_double_field(row[c_tnsl], "tnsl", line);
    r.features.provenance = FeatureProvenance::kSidecar;
    r.mos = parse_double_field(row[c_mos], "mos", line);
    if (c_tc >= 0 && !row[c_tc].empty()) r.tc_ref = parse_double_field(row[c_tc], "tc_ref", line);
    dataset.records.push_back(std::move(r));
  }
  dataset.validate();
  return dataset;
}

std::string dataset_to_csv(const Dataset& dataset) {
  std::string out = "content_id,tqp,tbpp,tnsl,mos,tc_ref\n";
  for (const auto& r : dataset.records) {
    out += fmt::format("{},{},{},{},{},{}\n", csv_escape(r.content_id), r.features.tqp,
                       r.features.tbpp, r.features.tnsl, r.mos,
                       r.tc_ref ? fmt::format("{}", *r.tc_ref) : std::string());
  }
  return out;
}

const std::vector<std::string>& wpc6_training_contents() {
  static const std::vector<std::string> contents = {
      "bag",   "cauliflower", "glasses_case",  "honeydew_melon", "house",
      "mushroom", "pineapple", "ping-pong_bat", "puer_tea",       "tool_box"};
  return contents;
}

}  // namespace streampcq
