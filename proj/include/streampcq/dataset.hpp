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

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "streampcq/features.hpp"

namespace streampcq {

struct DatasetRecord {
  std::string content_id;
  FeatureVector features;
  double mos = 0.0;
  std::optional<double> tc_ref;
};

// Labeled observations, at most one per (content_id, tqp, tnsl).
struct Dataset {
  std::vector<DatasetRecord> records;

  std::vector<std::string> content_ids() const;  // sorted, unique
  std::set<double> tqp_levels() const;
  std::set<double> tnsl_levels() const;

  Dataset with_contents(const std::set<std::string>& keep) const;
  Dataset without_content(std::string_view content_id) const;

  // Throws DuplicateRecord or InputError (non-finite MOS).
  void validate() const;
};

// CSV columns: content_id, tqp, tbpp, tnsl, mos, tc_ref (optional; blank
// cells allowed). Throws ParseError / InputError.
Dataset load_dataset_csv(std::string_view text);
std::string dataset_to_csv(const Dataset& dataset);

// The ten training contents of the published WPC6.0 split.
const std::vector<std::string>& wpc6_training_contents();

}  // namespace streampcq
