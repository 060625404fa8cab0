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

// Seeded fixture generator: datasets, TLV streams, rating panels and PLY
// clouds for tests, demos and benchmarks.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "streampcq/dataset.hpp"
#include "streampcq/error.hpp"
#include "streampcq/io.hpp"
#include "streampcq/synthetic.hpp"

namespace fs = std::filesystem;
using namespace streampcq;

int main(int argc, char** argv) {
  CLI::App app{"Synthetic fixtures for streampcq", "streampcq-synth"};
  app.require_subcommand(1);
  std::string out;
  std::uint64_t seed = kSyntheticSeed;

  SyntheticDatasetSpec dspec;
  auto* dataset = app.add_subcommand("dataset", "Labelled dataset CSV drawn from the default params");
  dataset->add_option("--contents", dspec.contents)->capture_default_str();
  dataset->add_option("--noise", dspec.mos_noise_sigma, "MOS noise sigma")->capture_default_str();
  dataset->add_option("--tc-noise", dspec.tc_noise_sigma, "tc_ref noise sigma")->capture_default_str();

  SyntheticStreamSpec sspec;
  auto* stream = app.add_subcommand("stream", "TLV bitstream with the given TQP and tNSL");
  stream->add_option("--tqp", sspec.tqp)->capture_default_str();
  stream->add_option("--tnsl", sspec.tnsl)->capture_default_str();
  stream->add_option("--attribute-bytes", sspec.attribute_bytes)->capture_default_str();
  stream->add_option("--attribute-units", sspec.attribute_units)->capture_default_str();

  auto* grid = app.add_subcommand("grid", "Streams for every (TQP, tNSL) pair plus a manifest.csv");
  std::string grid_dir;
  grid->add_option("dir", grid_dir)->required();

  SyntheticPanelSpec pspec;
  std::size_t stimuli = 40;
  auto* ratings = app.add_subcommand("ratings", "Raw ratings CSV from a simulated panel");
  ratings->add_option("--stimuli", stimuli)->capture_default_str();
  ratings->add_option("--observers", pspec.observers)->capture_default_str();
  ratings->add_option("--adversaries", pspec.adversaries)->capture_default_str();

  std::size_t points = 1000;
  double sigma = 10.0;
  auto* cloud = app.add_subcommand("cloud", "ASCII PLY cloud with i.i.d. grey luma");
  cloud->add_option("--points", points)->capture_default_str();
  cloud->add_option("--sigma", sigma)->capture_default_str();

  for (auto* c : {dataset, stream, ratings, cloud}) c->add_option("--out", out)->required();
  for (auto* c : {dataset, stream, grid, ratings, cloud}) c->add_option("--seed", seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*dataset) {
      dspec.seed = seed;
      write_file_atomic(out, dataset_to_csv(synthetic_dataset(default_params(), dspec)));
    } else if (*stream) {
      sspec.seed = seed;
      write_file_atomic(out, synthetic_stream(sspec, gpcc::builtin_profile("tmc13-v23")));
    } else if (*grid) {
      fs::create_directories(grid_dir);
      std::string manifest = "file,tqp,tnsl,point_count\n";
      for (int tqp : {28, 34, 40, 46, 51}) {
        for (int tnsl : {3, 4, 5, 6}) {
          SyntheticStreamSpec g;
          g.tqp = tqp;
          g.tnsl = tnsl;
          g.seed = seed + static_cast<std::uint64_t>(tqp * 10 + tnsl);
          const auto name = fmt::format("tqp{}_tnsl{}.bin", tqp, tnsl);
          write_file_atomic(fs::path(grid_dir) / name, synthetic_stream(g, gpcc::builtin_profile("tmc13-v23")));
          manifest += fmt::format("{},{},{},{}\n", name, tqp, tnsl, 10000);
        }
      }
      write_file_atomic(fs::path(grid_dir) / "manifest.csv", manifest);
    } else if (*ratings) {
      pspec.seed = seed;
      std::vector<double> truth;
      for (std::size_t i = 0; i < stimuli; ++i) {
        truth.push_back(10.0 + 80.0 * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(1, stimuli - 1)));
      }
      write_file_atomic(out, ratings_to_csv(synthetic_ratings(truth, pspec)));
    } else if (*cloud) {
      write_file_atomic(out, write_ascii_ply(synthetic_cloud(points, sigma, seed)));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
