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

#include "streampcq/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "streampcq/calibration.hpp"
#include "streampcq/features.hpp"
#include "streampcq/io.hpp"
#include "streampcq/protocols.hpp"
#include "streampcq/quality_model.hpp"
#include "streampcq/reference_tc.hpp"
#include "streampcq/significance.hpp"
#include "streampcq/subjective.hpp"
#include "streampcq/syntax_profile.hpp"

#ifndef STREAMPCQ_VERSION
#define STREAMPCQ_VERSION "0.0.0"
#endif

namespace streampcq::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

ExitCode exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInput:
      return kExitInput;
    case ErrorCategory::kParse:
      return kExitParse;
    case ErrorCategory::kConfig:
      return kExitConfig;
    case ErrorCategory::kNumeric:
      return kExitNumeric;
  }
  return kExitNumeric;
}

const char* tool_version() { return STREAMPCQ_VERSION; }

namespace {

constexpr const char* kDefaultProfile = "tmc13-v23";

struct Settings {
  // shared
  std::string profile = kDefaultProfile;
  std::string params_path;
  std::string out_path;
  std::uint64_t seed = kDefaultSeed;
  std::int64_t point_count = 0;
  // predict
  std::vector<std::string> inputs;
  bool clamp = false;
  // calibrate
  std::string dataset_path;
  std::string diagnostics_path;
  std::string tc_model = "auto";
  std::string texture_tc = "estimated";
  std::string intercept = "content-mean";
  // evaluate
  std::string mode;
  int trials = 1000;
  double train_fraction = 0.5;
  std::vector<std::string> train_contents;
  std::string scores_path;
  std::string mos_path;
  double confidence = 0.95;
  // subjective
  std::string ratings_path;
  std::string axis = "observer";
  bool no_screen = false;
  // tc
  std::string cloud_path;
  int knn = kDefaultTcNeighbours;
  // extract
  std::string bitstream_path;
};

// Sends a document to --out (atomically) or to stdout.
void emit(const Settings& s, std::ostream& out, const std::string& text) {
  if (s.out_path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
  } else {
    write_file_atomic(s.out_path, text.back() == '\n' ? text : text + "\n");
  }
}

const gpcc::SyntaxDescriptorProfile& load_profile(const std::string& name_or_path) {
  static std::map<std::string, gpcc::SyntaxDescriptorProfile> loaded;
  const auto names = gpcc::builtin_profile_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return gpcc::builtin_profile(name_or_path);
  }
  if (!fs::exists(name_or_path)) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("'{}' is neither a built-in profile ({}) nor a file", name_or_path,
                            fmt::join(names, ", ")));
  }
  auto [it, inserted] = loaded.try_emplace(name_or_path);
  if (inserted) it->second = gpcc::parse_profile(read_text_file(name_or_path));
  return it->second;
}

struct LoadedParams {
  ModelParams params;
  std::string source;
};

LoadedParams load_params(const Settings& s) {
  if (s.params_path.empty()) return {default_params(), "builtin:default_params"};
  if (!fs::exists(s.params_path)) {
    throw Error(ErrorCode::kConfigError, fmt::format("params file '{}' does not exist", s.params_path));
  }
  return {params_from_json(read_text_file(s.params_path)), s.params_path};
}

ordered_json provenance(const LoadedParams& p) {
  ordered_json doc;
  doc["tool"] = "streampcq";
  doc["tool_version"] = tool_version();
  doc["params_source"] = p.source;
  if (auto it = p.params.metadata.find("source"); it != p.params.metadata.end()) {
    doc["params_fit"] = it->second;
  }
  return doc;
}

FeatureVector features_from_path(const Settings& s, const fs::path& path) {
  if (path.extension() == ".json") {
    auto f = load_sidecar(read_text_file(path));
    if (f.content_id.empty()) f.content_id = path.stem().string();
    return f;
  }
  if (s.point_count <= 0) {
    throw Error(ErrorCode::kNonPositivePointCount,
                fmt::format("bitstream '{}' needs --point-count", path.string()));
  }
  const auto bytes = read_file_bytes(path);
  auto f = extract_features(bytes, load_profile(s.profile), PointCountSource::explicit_count(s.point_count));
  f.content_id = path.stem().string();
  return f;
}

//============================================================================
// Subcommands

int cmd_extract(const Settings& s, std::ostream& out) {
  const auto bytes = read_file_bytes(s.bitstream_path);
  const auto& profile = load_profile(s.profile);
  auto f = extract_features(bytes, profile, PointCountSource::explicit_count(s.point_count));
  f.content_id = fs::path(s.bitstream_path).stem().string();
  auto doc = ordered_json::parse(sidecar_to_json(f));
  doc["profile"] = profile.profile_name;
  doc["tool_version"] = tool_version();
  emit(s, out, doc.dump(2));
  return kExitSuccess;
}

ordered_json prediction_json(const FeatureVector& f, const Prediction& p, bool clamp) {
  ordered_json doc;
  if (!f.content_id.empty()) doc["input"] = f.content_id;
  doc["tqp"] = f.tqp;
  doc["tbpp"] = f.tbpp;
  doc["tnsl"] = f.tnsl;
  doc["mos_est"] = clamp ? clamp_mos(p.mos_est) : p.mos_est;
  doc["mos_texture"] = p.mos_texture;
  doc["attenuation"] = p.attenuation;
  doc["tc_est"] = p.tc_est;
  doc["out_of_training_range"] = p.out_of_training_range;
  doc["clamped"] = clamp;
  return doc;
}

int cmd_predict(const Settings& s, std::ostream& out, std::ostream& err) {
  const LoadedParams params = load_params(s);
  std::vector<fs::path> paths;
  bool batch = s.inputs.size() > 1;
  for (const auto& input : s.inputs) {
    if (fs::is_directory(input)) {
      batch = true;
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(input)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      paths.insert(paths.end(), found.begin(), found.end());
    } else {
      paths.emplace_back(input);
    }
  }
  if (paths.empty()) throw Error(ErrorCode::kInputError, "no inputs to predict");

  if (!batch) {
    const auto f = features_from_path(s, paths.front());
    const auto p = predict(f, params.params);
    if (p.out_of_training_range) err << "warning: features lie outside the params' training range\n";
    auto doc = prediction_json(f, p, s.clamp);
    doc["provenance"] = provenance(params);
    emit(s, out, doc.dump(2));
    return kExitSuccess;
  }

  std::string csv = "input,tqp,tbpp,tnsl,tc_est,mos_texture,attenuation,mos_est,out_of_training_range\n";
  for (const auto& path : paths) {
    const auto f = features_from_path(s, path);
    const auto p = predict(f, params.params);
    csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", csv_escape(path.filename().string()), f.tqp, f.tbpp,
                       f.tnsl, p.tc_est, p.mos_texture, p.attenuation,
                       s.clamp ? clamp_mos(p.mos_est) : p.mos_est, p.out_of_training_range ? 1 : 0);
  }
  emit(s, out, csv);
  err << fmt::format("predicted {} input(s) with params {} (streampcq {})\n", paths.size(), params.source,
                     tool_version());
  return kExitSuccess;
}

CalibrationOptions calibration_options(const Settings& s) {
  CalibrationOptions o;
  if (s.tc_model == "auto") o.tc_model = TcModelMode::kAuto;
  else if (s.tc_model == "fit") o.tc_model = TcModelMode::kFit;
  else if (s.tc_model == "inherit") o.tc_model = TcModelMode::kInherit;
  else throw Error(ErrorCode::kConfigError, "--tc-model must be auto, fit or inherit");
  if (s.texture_tc == "estimated") o.texture_tc = TextureTcSource::kEstimated;
  else if (s.texture_tc == "reference") o.texture_tc = TextureTcSource::kReference;
  else throw Error(ErrorCode::kConfigError, "--texture-tc must be estimated or reference");
  if (s.intercept == "content-mean") o.intercept = InterceptMode::kContentMean;
  else if (s.intercept == "min-distortion-mos") o.intercept = InterceptMode::kMinDistortionMos;
  else throw Error(ErrorCode::kConfigError, "--intercept must be content-mean or min-distortion-mos");
  if (!s.params_path.empty()) o.base = load_params(s).params;
  return o;
}

int cmd_calibrate(const Settings& s, std::ostream& out, std::ostream& err) {
  const Dataset dataset = load_dataset_csv(read_text_file(s.dataset_path));
  auto result = calibrate_full(dataset, calibration_options(s));
  result.params.metadata["tool_version"] = tool_version();
  result.params.metadata["dataset"] = fs::path(s.dataset_path).filename().string();
  emit(s, out, params_to_json(result.params));
  const std::string diagnostics = diagnostics_to_json(result.diagnostics);
  if (!s.diagnostics_path.empty()) {
    write_file_atomic(s.diagnostics_path, diagnostics + "\n");
  } else if (!s.out_path.empty()) {
    write_file_atomic(s.out_path + ".diagnostics.json", diagnostics + "\n");
  }
  for (const auto& w : result.diagnostics.warnings) err << "warning: " << w << "\n";
  return kExitSuccess;
}

int cmd_evaluate(const Settings& s, std::ostream& out, std::ostream& err) {
  ordered_json meta;
  meta["tool"] = "streampcq";
  meta["tool_version"] = tool_version();
  meta["mode"] = s.mode;

  if (s.mode == "significance") {
    if (s.scores_path.empty() || s.mos_path.empty()) {
      throw Error(ErrorCode::kConfigError, "significance mode needs --scores and --mos");
    }
    const auto scores = load_model_scores_csv(read_text_file(s.scores_path));
    const auto mos = load_mos_csv(read_text_file(s.mos_path));
    std::vector<std::string> warnings;
    const auto residuals = mapped_residuals(scores, mos, &warnings);
    const auto matrix = significance_matrix(residuals, s.confidence);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    emit(s, out, significance_to_csv(matrix));
    err << render_significance_grid(matrix);
    return kExitSuccess;
  }

  if (s.dataset_path.empty()) throw Error(ErrorCode::kConfigError, "--mode " + s.mode + " needs a dataset CSV");
  const Dataset dataset = load_dataset_csv(read_text_file(s.dataset_path));
  const Calibrator calibrator = default_calibrator(calibration_options(s));
  EvalReport report;
  bool aggregates = true;
  if (s.mode == "loocv") {
    report = loocv(dataset, calibrator);
  } else if (s.mode == "random") {
    err << "seed: " << s.seed << "\n";
    report = random_trials(dataset, calibrator, s.trials, s.train_fraction, s.seed);
  } else if (s.mode == "ablation") {
    std::set<std::string> train(s.train_contents.begin(), s.train_contents.end());
    if (train.empty()) train.insert(wpc6_training_contents().begin(), wpc6_training_contents().end());
    report = ablation(dataset, calibrator, train);
    aggregates = false;
  }
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  meta["dataset"] = fs::path(s.dataset_path).filename().string();
  emit(s, out, report_to_csv(report, aggregates));
  if (!s.out_path.empty()) write_file_atomic(s.out_path + ".meta.json", meta.dump(2) + "\n");
  err << render_report_text(report, aggregates);
  return kExitSuccess;
}

int cmd_subjective(const Settings& s, std::ostream& out, std::ostream& err) {
  const RatingMatrix ratings = load_ratings_csv(read_text_file(s.ratings_path));
  SubjectiveOptions options;
  options.axis = parse_zscore_axis(s.axis);
  options.screen = !s.no_screen;
  const auto result = process_ratings(ratings, options);
  for (const auto& id : result.rejected) err << "rejected observer: " << id << "\n";
  for (const auto& row : result.mos.rows) {
    if (row.single_observer) err << "warning: stimulus '" << row.stimulus_id << "' has a single retained score\n";
  }
  emit(s, out, mos_table_to_csv(result.mos));
  return kExitSuccess;
}

int cmd_tc(const Settings& s, std::ostream& out) {
  const auto cloud = read_ply(read_file_bytes(s.cloud_path));
  const double tc = compute_reference_tc(cloud.positions, cloud.colors, s.knn);
  ordered_json doc;
  doc["input"] = fs::path(s.cloud_path).filename().string();
  doc["points"] = cloud.positions.size();
  doc["knn"] = s.knn;
  doc["tc_ref"] = tc;
  doc["tool_version"] = tool_version();
  emit(s, out, doc.dump(2));
  return kExitSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"streamPCQ-TL: bitstream-layer quality model for Trisoup-Lifting G-PCC", "streampcq"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  auto add_out = [&](CLI::App* c) { c->add_option("--out", s.out_path, "Output file (default: stdout)"); };
  auto add_profile = [&](CLI::App* c) {
    c->add_option("--profile", s.profile, "Built-in syntax profile name or profile JSON path")
        ->capture_default_str();
  };
  auto add_calibration = [&](CLI::App* c) {
    c->add_option("--tc-model", s.tc_model, "TC coefficients: auto, fit or inherit")->capture_default_str();
    c->add_option("--texture-tc", s.texture_tc, "Per-content TC: estimated or reference")
        ->capture_default_str();
    c->add_option("--intercept", s.intercept, "Intercept b: content-mean or min-distortion-mos")
        ->capture_default_str();
    c->add_option("--params", s.params_path, "Base params for inherited coefficients");
  };

  auto* extract = app.add_subcommand("extract", "Extract (tqp, tbpp, tnsl) from a TLV bitstream");
  extract->add_option("bitstream", s.bitstream_path, "Bitstream file")->required();
  extract->add_option("--point-count", s.point_count, "Source point count")->required();
  add_profile(extract);
  add_out(extract);

  auto* predict_cmd = app.add_subcommand("predict", "Predict MOS from sidecars, bitstreams or a directory");
  predict_cmd->add_option("inputs", s.inputs, "Sidecar .json, bitstream or directory of sidecars")->required();
  predict_cmd->add_option("--params", s.params_path, "Params JSON (default: built-in defaults)");
  predict_cmd->add_option("--point-count", s.point_count, "Source point count for bitstream inputs");
  predict_cmd->add_flag("--clamp", s.clamp, "Clamp mos_est to [1, 100]");
  add_profile(predict_cmd);
  add_out(predict_cmd);

  auto* calibrate = app.add_subcommand("calibrate", "Fit model params from a dataset CSV");
  calibrate->add_option("dataset", s.dataset_path, "Dataset CSV")->required();
  calibrate->add_option("--diagnostics", s.diagnostics_path, "Diagnostics JSON (default: <out>.diagnostics.json)");
  calibrate->add_option("--seed", s.seed, "Seed (recorded; calibration is deterministic)");
  add_calibration(calibrate);
  add_out(calibrate);

  auto* evaluate = app.add_subcommand("evaluate", "Run an evaluation protocol");
  evaluate->add_option("dataset", s.dataset_path, "Dataset CSV");
  evaluate->add_option("--mode", s.mode, "loocv, random, ablation or significance")
      ->required()
      ->check(CLI::IsMember({"loocv", "random", "ablation", "significance"}));
  evaluate->add_option("--seed", s.seed, "Split seed")->capture_default_str();
  evaluate->add_option("--trials", s.trials, "Random trials")->capture_default_str();
  evaluate->add_option("--train-fraction", s.train_fraction, "Training share of contents")->capture_default_str();
  evaluate->add_option("--train-contents", s.train_contents, "Ablation training contents (default: WPC6.0 split)")
      ->delimiter(',');
  evaluate->add_option("--scores", s.scores_path, "Significance: per-model score CSV");
  evaluate->add_option("--mos", s.mos_path, "Significance: MOS CSV");
  evaluate->add_option("--confidence", s.confidence, "Significance confidence level")->capture_default_str();
  add_calibration(evaluate);
  add_out(evaluate);

  auto* subjective = app.add_subcommand("subjective", "Ratings CSV to MOS CSV");
  subjective->add_option("ratings", s.ratings_path, "Ratings CSV")->required();
  subjective->add_option("--axis", s.axis, "Z-score axis: observer or stimulus")->capture_default_str();
  subjective->add_flag("--no-screen", s.no_screen, "Skip BT.500 observer screening");
  add_out(subjective);

  auto* tc = app.add_subcommand("tc", "Reference texture complexity of a PLY cloud");
  tc->add_option("cloud", s.cloud_path, "PLY file")->required();
  tc->add_option("--knn", s.knn, "Neighbourhood size")->capture_default_str();
  add_out(tc);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*extract) return cmd_extract(s, out);
    if (*predict_cmd) return cmd_predict(s, out, err);
    if (*calibrate) return cmd_calibrate(s, out, err);
    if (*evaluate) return cmd_evaluate(s, out, err);
    if (*subjective) return cmd_subjective(s, out, err);
    if (*tc) return cmd_tc(s, out);
  } catch (const Error& e) {
    err << "error: " << e.what();
    if (e.offset()) err << " (at byte offset " << *e.offset() << ")";
    err << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}

}  // namespace streampcq::cli
