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

// Reference texture complexity of a pristine cloud: the mean, over all
// points, of the sample standard deviation of BT.601 luma within each
// point's k-nearest-neighbour neighbourhood (the point itself included).

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace streampcq {

using Point3 = std::array<double, 3>;
using Rgb = std::array<double, 3>;

struct PointCloud {
  std::vector<Point3> positions;
  std::vector<Rgb> colors;  // 0..255 per channel
};

// PLY with x, y, z, red, green, blue vertex properties, in ascii or
// binary_little_endian format. Throws ParseError.
PointCloud read_ply(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_ascii_ply(const PointCloud& cloud);

double bt601_luma(const Rgb& rgb);

inline constexpr int kDefaultTcNeighbours = 16;

// Throws EmptyCloud, TooFewPoints (fewer than k points), ConfigError (k < 2),
// LengthMismatch (positions vs colors).
double compute_reference_tc(std::span<const Point3> positions, std::span<const Rgb> colors,
                            int k = kDefaultTcNeighbours);

// Static k-d tree over a fixed point set, for k-nearest-neighbour queries.
class KdTree {
 public:
  explicit KdTree(std::span<const Point3> points);

  // Indices of the k points nearest to query, nearest first. Ties break on
  // the lower index.
  std::vector<std::size_t> nearest(const Point3& query, std::size_t k) const;

 private:
  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    int axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end);

  std::span<const Point3> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace streampcq
