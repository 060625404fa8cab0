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

#include "streampcq/reference_tc.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <queue>
#include <sstream>
#include <string>
#include <utility>

#include <fmt/format.h>

#include "streampcq/error.hpp"

namespace streampcq {

//============================================================================
// PLY

namespace {

enum class PlyFormat { kAscii, kBinaryLittleEndian };

struct PlyProperty {
  std::string name;
  std::string type;
  std::size_t size = 0;
};

std::size_t ply_type_size(const std::string& type) {
  if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
  if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
  if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
      type == "float" || type == "float32") {
    return 4;
  }
  if (type == "double" || type == "float64") return 8;
  throw Error(ErrorCode::kParseError, "unsupported PLY property type '" + type + "'");
}

template <typename T>
double load_le(const std::uint8_t* p) {
  T value;
  std::memcpy(&value, p, sizeof(T));
  return static_cast<double>(value);
}

double read_binary_value(const std::string& type, const std::uint8_t* p) {
  if (type == "char" || type == "int8") return load_le<std::int8_t>(p);
  if (type == "uchar" || type == "uint8") return load_le<std::uint8_t>(p);
  if (type == "short" || type == "int16") return load_le<std::int16_t>(p);
  if (type == "ushort" || type == "uint16") return load_le<std::uint16_t>(p);
  if (type == "int" || type == "int32") return load_le<std::int32_t>(p);
  if (type == "uint" || type == "uint32") return load_le<std::uint32_t>(p);
  if (type == "float" || type == "float32") return load_le<float>(p);
  return load_le<double>(p);
}

}  // namespace

PointCloud read_ply(std::span<const std::uint8_t> bytes) {
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  const std::string_view marker = "end_header";
  const auto header_end = text.find(marker);
  if (text.substr(0, 3) != "ply" || header_end == std::string_view::npos) {
    throw Error(ErrorCode::kParseError, "not a PLY file");
  }
  std::size_t body = text.find('\n', header_end);
  if (body == std::string_view::npos) throw Error(ErrorCode::kParseError, "PLY header not terminated");
  ++body;

  std::istringstream header{std::string(text.substr(0, header_end))};
  std::string line;
  PlyFormat format = PlyFormat::kAscii;
  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool seen_element = false;
  std::vector<PlyProperty> props;
  while (std::getline(header, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "format") {
      std::string name;
      ls >> name;
      if (name == "ascii") format = PlyFormat::kAscii;
      else if (name == "binary_little_endian") format = PlyFormat::kBinaryLittleEndian;
      else throw Error(ErrorCode::kParseError, "unsupported PLY format '" + name + "'");
    } else if (keyword == "element") {
      std::string name;
      std::size_t count = 0;
      ls >> name >> count;
      if (!seen_element && name != "vertex") {
        throw Error(ErrorCode::kParseError, "PLY vertex element must come first");
      }
      in_vertex = name == "vertex";
      if (in_vertex) vertex_count = count;
      seen_element = true;
    } else if (keyword == "property" && in_vertex) {
      PlyProperty prop;
      ls >> prop.type;
      if (prop.type == "list") throw Error(ErrorCode::kParseError, "list property on vertex element");
      ls >> prop.name;
      prop.size = ply_type_size(prop.type);
      props.push_back(prop);
    }
  }

  const char* wanted[] = {"x", "y", "z", "red", "green", "blue"};
  int index[6];
  for (int i = 0; i < 6; ++i) {
    const auto it = std::find_if(props.begin(), props.end(),
                                 [&](const PlyProperty& p) { return p.name == wanted[i]; });
    if (it == props.end()) {
      throw Error(ErrorCode::kParseError, std::string("PLY lacks vertex property '") + wanted[i] + "'");
    }
    index[i] = static_cast<int>(it - props.begin());
  }

  PointCloud cloud;
  cloud.positions.reserve(vertex_count);
  cloud.colors.reserve(vertex_count);
  std::vector<double> values(props.size());
  auto emit = [&] {
    cloud.positions.push_back({values[index[0]], values[index[1]], values[index[2]]});
    cloud.colors.push_back({values[index[3]], values[index[4]], values[index[5]]});
  };

  if (format == PlyFormat::kAscii) {
    std::istringstream in{std::string(text.substr(body))};
    for (std::size_t v = 0; v < vertex_count; ++v) {
      for (auto& value : values) {
        if (!(in >> value)) {
          throw Error(ErrorCode::kParseError, fmt::format("PLY vertex {} is truncated", v));
        }
      }
      emit();
    }
  } else {
    std::size_t stride = 0;
    for (const auto& p : props) stride += p.size;
    if (bytes.size() - body < stride * vertex_count) {
      throw Error(ErrorCode::kParseError, "PLY binary body is truncated");
    }
    const std::uint8_t* p = bytes.data() + body;
    for (std::size_t v = 0; v < vertex_count; ++v) {
      for (std::size_t k = 0; k < props.size(); ++k) {
        values[k] = read_binary_value(props[k].type, p);
        p += props[k].size;
      }
      emit();
    }
  }
  return cloud;
}

std::vector<std::uint8_t> write_ascii_ply(const PointCloud& cloud) {
  std::string out = fmt::format(
      "ply\nformat ascii 1.0\nelement vertex {}\n"
      "property double x\nproperty double y\nproperty double z\n"
      "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n",
      cloud.positions.size());
  for (std::size_t i = 0; i < cloud.positions.size(); ++i) {
    const auto& p = cloud.positions[i];
    const auto& c = cloud.colors[i];
    out += fmt::format("{} {} {} {} {} {}\n", p[0], p[1], p[2], static_cast<int>(c[0]),
                       static_cast<int>(c[1]), static_cast<int>(c[2]));
  }
  return {out.begin(), out.end()};
}

//============================================================================
// k-d tree

namespace {
constexpr std::size_t kLeafSize = 16;

double squared_distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}
}  // namespace

KdTree::KdTree(std::span<const Point3> points) : points_(points), order_(points.size()) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!points.empty()) build(0, points.size());
}

std::size_t KdTree::build(std::size_t begin, std::size_t end) {
  const std::size_t id = nodes_.size();
  nodes_.push_back(Node{begin, end});
  if (end - begin <= kLeafSize) return id;

  Point3 lo = points_[order_[begin]];
  Point3 hi = lo;
  for (std::size_t i = begin; i < end; ++i) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], points_[order_[i]][a]);
      hi[a] = std::max(hi[a], points_[order_[i]][a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a) {
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;
  }
  if (hi[axis] == lo[axis]) return id;  // all coincident: keep as a leaf

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     return std::pair(points_[a][axis], a) < std::pair(points_[b][axis], b);
                   });
  const double split = points_[order_[mid]][axis];
  const std::size_t left = build(begin, mid);
  const std::size_t right = build(mid, end);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<std::size_t> KdTree::nearest(const Point3& query, std::size_t k) const {
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> best;  // max-heap on (distance, index)
  if (k == 0 || nodes_.empty()) return {};

  auto visit = [&](auto&& self, std::size_t node_id) -> void {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const Entry e{squared_distance(query, points_[order_[i]]), order_[i]};
        if (best.size() < k) {
          best.push(e);
        } else if (e < best.top()) {
          best.pop();
          best.push(e);
        }
      }
      return;
    }
    const double diff = query[node.axis] - node.split;
    const std::size_t near = diff < 0 ? node.left : node.right;
    const std::size_t far = diff < 0 ? node.right : node.left;
    self(self, near);
    if (best.size() < k || diff * diff <= best.top().first) self(self, far);
  };
  visit(visit, 0);

  std::vector<std::size_t> out(best.size());
  for (std::size_t i = out.size(); i-- > 0;) {
    out[i] = best.top().second;
    best.pop();
  }
  return out;
}

//============================================================================
// Texture complexity

double bt601_luma(const Rgb& rgb) { return 0.299 * rgb[0] + 0.587 * rgb[1] + 0.114 * rgb[2]; }

double compute_reference_tc(std::span<const Point3> positions, std::span<const Rgb> colors,
                            int k) {
  if (positions.size() != colors.size()) {
    throw Error(ErrorCode::kLengthMismatch, "positions and colors differ in length");
  }
  if (positions.empty()) throw Error(ErrorCode::kEmptyCloud, "cloud has no points");
  if (k < 2) throw Error(ErrorCode::kConfigError, "neighbourhood size must be at least 2");
  const auto kk = static_cast<std::size_t>(k);
  if (positions.size() < kk) {
    throw Error(ErrorCode::kTooFewPoints, fmt::format("{} points for k = {}", positions.size(), k));
  }

  std::vector<double> luma(colors.size());
  std::transform(colors.begin(), colors.end(), luma.begin(), bt601_luma);

  const KdTree tree(positions);
  double total = 0.0;
  for (const auto& p : positions) {
    const auto nbrs = tree.nearest(p, kk);
    double mean = 0.0;
    for (auto i : nbrs) mean += luma[i];
    mean /= static_cast<double>(kk);
    double ss = 0.0;
    for (auto i : nbrs) ss += (luma[i] - mean) * (luma[i] - mean);
    total += std::sqrt(ss / static_cast<double>(kk - 1));
  }
  return total / static_cast<double>(positions.size());
}

}  // namespace streampcq
